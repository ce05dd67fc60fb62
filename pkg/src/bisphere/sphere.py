"""Symmetry catalog and exact certificates for the sphere model.

The model lives on the unit sphere s1^2+s2^2+s3^2 = 1 and couples three
reflection parameters mu1, mu2, mu3.  Working in the polynomial gauge,
every symmetry is a first-order Dunkl-type operator dressed with
reflections that maps the canonical quotient basis into itself, so each
one has an exact rational matrix on SphereQuotient(D).

Catalog (abbreviations used in check statements):

    L1, L2, L3   the three first-order symmetries
    C            the degree-zero combination whose square shifts to the
                 Hamiltonian, H = C^2 + C
    Q            C * R1R2R3
    Z = L3*R1R2  separates the standard azimuthal equation
    Y = L1*R2R3  separates the alternative azimuthal equation
    Lsq          L1^2 + L2^2 + L3^2
    P123         product of the three reflections

The symmetries anticommute pairwise into each other plus multiples of Q,
which is the central extension: the structure constants involve the
central element Q rather than scalars alone.

Everything in this module is exact.  A suite check passes only when its
residual matrix is identically zero as a matrix of rationals.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .bases import SphereQuotient
from .laurent import ModelParams, format_rational
from .linop import (
    LinOp,
    annihilator_product,
    anticommutator,
    build_matrix,
    commutator,
    rank_exact,
)
from .operators import (
    Dunkl,
    Op,
    Refl,
    compose,
    mono,
    negate,
    scalar,
    scalar_mul,
    sum_,
    to_text,
)
from .reporting import Recorder

HALF = Fraction(1, 2)


class ParameterCollisionError(ValueError):
    """Eigenvalue labels collide for these parameters; certificate refused."""


def angular(i: int, j: int) -> Op:
    """s_i D_j - s_j D_i, the Dunkl angular momentum combination."""
    e_i = [0, 0, 0]
    e_j = [0, 0, 0]
    e_i[i - 1] = 1
    e_j[j - 1] = 1
    return sum_(
        compose(mono(*e_i), Dunkl(j)),
        negate(compose(mono(*e_j), Dunkl(i))),
    )


def symmetry_expr(name: str, params: ModelParams) -> Op:
    """Self-contained expression tree for each catalog operator.

    Derived operators expand textually in terms of the first-order ones,
    so the printed form of any catalog entry re-parses to the same tree.
    """
    mu1, mu2, mu3 = params.as_tuple()
    if name == "L1":
        return sum_(
            compose(angular(2, 3), Refl(2)),
            scalar_mul(mu2, Refl(3)),
            scalar_mul(mu3, Refl(2)),
            scalar_mul(HALF, compose(Refl(2), Refl(3))),
        )
    if name == "L2":
        return sum_(
            compose(angular(1, 3), Refl(1), Refl(2)),
            scalar_mul(mu1, Refl(3)),
            scalar_mul(mu3, Refl(1)),
            scalar_mul(HALF, compose(Refl(1), Refl(3))),
        )
    if name == "L3":
        return sum_(
            compose(angular(1, 2), Refl(1)),
            scalar_mul(mu1, Refl(2)),
            scalar_mul(mu2, Refl(1)),
            scalar_mul(HALF, compose(Refl(1), Refl(2))),
        )
    if name in ("R1", "R2", "R3"):
        return Refl(int(name[1]))
    if name == "P123":
        return compose(Refl(1), Refl(2), Refl(3))
    if name == "C":
        return sum_(
            negate(compose(symmetry_expr("L1", params), Refl(2), Refl(3))),
            negate(compose(symmetry_expr("L2", params), Refl(1), Refl(3))),
            negate(compose(symmetry_expr("L3", params), Refl(1), Refl(2))),
            scalar_mul(mu1, Refl(1)),
            scalar_mul(mu2, Refl(2)),
            scalar_mul(mu3, Refl(3)),
            scalar(HALF),
        )
    if name == "Q":
        return compose(symmetry_expr("C", params), Refl(1), Refl(2), Refl(3))
    if name == "H":
        c = symmetry_expr("C", params)
        return sum_(compose(c, c), c)
    if name == "Z":
        return compose(symmetry_expr("L3", params), Refl(1), Refl(2))
    if name == "Y":
        return compose(symmetry_expr("L1", params), Refl(2), Refl(3))
    if name == "Lsq":
        parts = [symmetry_expr(n, params) for n in ("L1", "L2", "L3")]
        return sum_(*[compose(p, p) for p in parts])
    raise KeyError(f"unknown catalog operator {name!r}")


def symmetry_text(name: str, params: ModelParams) -> str:
    return to_text(symmetry_expr(name, params))


class SymmetryCatalog:
    """Lazy cache of catalog matrices on SphereQuotient(degree).

    First-order generators are built straight from their expression trees;
    derived entries reuse the generator matrices through exact matrix
    algebra, which is what `symmetry_expr` expands to textually.
    """

    def __init__(self, params: ModelParams, degree: int):
        self.params = params
        self.degree = degree
        self.basis = SphereQuotient(degree)
        self._cache: Dict[str, LinOp] = {}

    def matrix(self, name: str) -> LinOp:
        if name in self._cache:
            return self._cache[name]
        p = self.params
        if name in ("L1", "L2", "L3", "R1", "R2", "R3"):
            m = build_matrix(symmetry_expr(name, p), self.basis, p)
        elif name == "P123":
            m = self.matrix("R1") @ self.matrix("R2") @ self.matrix("R3")
        elif name == "C":
            eye = LinOp.identity(self.basis)
            m = (
                -(self.matrix("L1") @ self.matrix("R2") @ self.matrix("R3"))
                - (self.matrix("L2") @ self.matrix("R1") @ self.matrix("R3"))
                - (self.matrix("L3") @ self.matrix("R1") @ self.matrix("R2"))
                + self.matrix("R1").scaled(p.mu1)
                + self.matrix("R2").scaled(p.mu2)
                + self.matrix("R3").scaled(p.mu3)
                + eye.scaled(HALF)
            )
        elif name == "Q":
            m = self.matrix("C") @ self.matrix("P123")
        elif name == "H":
            c = self.matrix("C")
            m = c @ c + c
        elif name == "Z":
            m = self.matrix("L3") @ self.matrix("R1") @ self.matrix("R2")
        elif name == "Y":
            m = self.matrix("L1") @ self.matrix("R2") @ self.matrix("R3")
        elif name == "Lsq":
            m = sum(
                (self.matrix(n) @ self.matrix(n) for n in ("L2", "L3")),
                self.matrix("L1") @ self.matrix("L1"),
            )
        else:
            raise KeyError(f"unknown catalog operator {name!r}")
        self._cache[name] = m
        return m

    def identity(self) -> LinOp:
        return LinOp.identity(self.basis)


def energy(params: ModelParams, n: int) -> Fraction:
    """(N + sigma)^2 + (N + sigma), the level-N eigenvalue."""
    x = n + params.sigma
    return x * x + x


def require_distinct_levels(params: ModelParams, degree: int):
    if params.sigma > -1:
        return
    # Levels N and M collide exactly when N + M = -2 sigma - 1; report the
    # nearest such pair.
    target = -2 * params.sigma - 1
    n_pair = max(0, round(float(target)))
    pair = (0, int(n_pair))
    raise ParameterCollisionError(
        f"sigma = {format_rational(params.sigma)} <= -1: level map is not "
        f"guaranteed injective (levels near N + M = {format_rational(target)}, "
        f"e.g. pair {pair})"
    )


def invariance_suite(
    params: ModelParams, degree: int, recorder: Optional[Recorder] = None
) -> Tuple[Recorder, SymmetryCatalog]:
    """Exact algebra suite: every defining relation as a zero residual."""
    rec = recorder if recorder is not None else Recorder()
    cat = SymmetryCatalog(params, degree)
    mu = params.as_tuple()
    eye = cat.identity()
    h = cat.matrix("H")
    c = cat.matrix("C")
    q = cat.matrix("Q")
    p123 = cat.matrix("P123")
    ls = [cat.matrix(n) for n in ("L1", "L2", "L3")]
    rs = [cat.matrix(n) for n in ("R1", "R2", "R3")]

    for i, li in enumerate(ls, start=1):
        rec.zero(f"bracket.H.L{i}", f"[H, L{i}] = 0", lambda li=li: commutator(h, li))
    for i, ri in enumerate(rs, start=1):
        rec.zero(f"bracket.H.R{i}", f"[H, R{i}] = 0", lambda ri=ri: commutator(h, ri))

    # The pairwise anticommutators close on the third symmetry plus the
    # central element: {Li, Lj} = Lk - 2 mu_k Q + 2 mu_i mu_j, cyclic.
    cyclic = [(1, 2, 3), (2, 3, 1), (3, 1, 2)]
    for i, j, k in cyclic:
        li, lj, lk = ls[i - 1], ls[j - 1], ls[k - 1]
        mi, mj, mk = mu[i - 1], mu[j - 1], mu[k - 1]
        rec.zero(
            f"extension.L{i}.L{j}",
            f"{{L{i}, L{j}}} - L{k} + 2 mu{k} Q - 2 mu{i} mu{j} = 0",
            lambda li=li, lj=lj, lk=lk, mi=mi, mj=mj, mk=mk: (
                anticommutator(li, lj) - lk + q.scaled(2 * mk) - eye.scaled(2 * mi * mj)
            ),
        )

    for i in (1, 2, 3):
        for j in (1, 2, 3):
            if i == j:
                rec.zero(
                    f"refl.L{i}.R{i}",
                    f"[L{i}, R{i}] = 0",
                    lambda i=i: commutator(ls[i - 1], rs[i - 1]),
                )
                continue
            k = 6 - i - j
            rec.zero(
                f"refl.L{i}.R{j}",
                f"{{L{i}, R{j}}} - R{k} - 2 mu{j} R{j}R{k} - 2 mu{k} = 0",
                lambda i=i, j=j, k=k: (
                    anticommutator(ls[i - 1], rs[j - 1])
                    - rs[k - 1]
                    - (rs[j - 1] @ rs[k - 1]).scaled(2 * mu[j - 1])
                    - eye.scaled(2 * mu[k - 1])
                ),
            )

    for i in (1, 2, 3):
        rec.zero(
            f"refl.C.R{i}",
            f"{{C, R{i}}} + 2 L{i} R1R2R3 + R{i} + 2 mu{i} = 0",
            lambda i=i: (
                anticommutator(c, rs[i - 1])
                + (ls[i - 1] @ p123).scaled(2)
                + rs[i - 1]
                + eye.scaled(2 * mu[i - 1])
            ),
        )
        rec.zero(f"center.C.L{i}", f"[C, L{i}] = 0", lambda i=i: commutator(c, ls[i - 1]))
        rec.zero(f"center.Q.L{i}", f"[Q, L{i}] = 0", lambda i=i: commutator(q, ls[i - 1]))

    rec.zero("center.C.P123", "[C, R1R2R3] = 0", lambda: commutator(c, p123))
    rec.zero("center.Q.H", "[Q, H] = 0", lambda: commutator(q, h))

    shift = mu[0] ** 2 + mu[1] ** 2 + mu[2] ** 2 - Fraction(1, 4)
    rec.zero(
        "casimir.Lsq",
        "L1^2 + L2^2 + L3^2 - C^2 - (mu1^2 + mu2^2 + mu3^2 - 1/4) = 0",
        lambda: cat.matrix("Lsq") - c @ c - eye.scaled(shift),
    )
    rec.zero("casimir.Qsq", "Q^2 - C^2 = 0", lambda: q @ q - c @ c)
    rec.zero("hamiltonian.def", "H - C^2 - C = 0", lambda: h - c @ c - c)
    return rec, cat


def spectrum_certificate(
    params: ModelParams,
    degree: int,
    recorder: Optional[Recorder] = None,
    catalog: Optional[SymmetryCatalog] = None,
) -> Tuple[Recorder, List[Fraction], List[int]]:
    """Exact spectral decomposition of H on SphereQuotient(degree).

    Certifies the annihilating polynomial, every eigenspace dimension by
    rank, the trace, and the parity of each eigenspace.  Returns the
    energies and multiplicities alongside the recorder.
    """
    require_distinct_levels(params, degree)
    rec = recorder if recorder is not None else Recorder()
    cat = catalog if catalog is not None else SymmetryCatalog(params, degree)
    h = cat.matrix("H")
    p123 = cat.matrix("P123")
    eye = cat.identity()
    dim = cat.basis.size
    energies = [energy(params, n) for n in range(degree + 1)]
    multiplicities: List[int] = []

    rec.zero(
        "spectrum.annihilator",
        f"prod_N<= {degree} (H - E_N) = 0",
        lambda: annihilator_product(h, energies),
    )
    for n, e_n in enumerate(energies):
        expected = dim - (2 * n + 1)
        shifted = h - eye.scaled(e_n)
        r = rank_exact(shifted)
        multiplicities.append(dim - r)
        rec.claim(
            f"spectrum.rank.N{n}",
            f"rank(H - E_{n}) = {dim} - {2 * n + 1}",
            lambda r=r, expected=expected: (r == expected, f"rank {r}, expected {expected}"),
        )
    for n in range(degree + 1):
        # Unnormalized spectral projector: the product over the other
        # levels kills everything outside the level-n eigenspace.
        proj = eye
        for m, e_m in enumerate(energies):
            if m != n:
                proj = proj @ (h - eye.scaled(e_m))
        sign = 1 if n % 2 == 0 else -1
        rec.zero(
            f"spectrum.parity.N{n}",
            f"R1R2R3 restricted to level {n} = {'+' if sign > 0 else '-'}1",
            lambda proj=proj, sign=sign: p123 @ proj - proj.scaled(sign),
        )
    rec.claim(
        "spectrum.trace",
        "tr H = sum_N (2N+1) E_N",
        lambda: (
            sum((h.entry(i, i) for i in range(dim)), Fraction(0))
            == sum(((2 * n + 1) * e for n, e in enumerate(energies)), Fraction(0)),
            "exact trace identity",
        ),
    )
    return rec, energies, multiplicities


def _azimuthal_count(degree: int, n: int) -> int:
    """States on SphereQuotient(degree) with azimuthal number n."""
    per_level = 1 if n == 0 else 2
    return (degree - n + 1) * per_level


def separation_certificate(
    which: str,
    params: ModelParams,
    degree: int,
    recorder: Optional[Recorder] = None,
    catalog: Optional[SymmetryCatalog] = None,
) -> Tuple[Recorder, List[Fraction]]:
    """Exact eigenvalue certificate for a separating symmetry.

    which = 'Z' uses L3*R1R2 with offset mu1+mu2 (standard coordinates);
    which = 'Y' uses L1*R2R3 with offset mu2+mu3 (alternative coordinates).
    The shifted operator Z - 1/2 has eigenvalues +-(n + offset); roots of
    the same magnitude are listed once, roots of different labels that
    collide abort the certificate.
    """
    if which == "Z":
        offset = params.mu1 + params.mu2
        opname = "Z"
        source = "L3 R1R2"
    elif which == "Y":
        offset = params.mu2 + params.mu3
        opname = "Y"
        source = "L1 R2R3"
    else:
        raise KeyError(f"separating symmetry must be 'Z' or 'Y', got {which!r}")
    rec = recorder if recorder is not None else Recorder()
    cat = catalog if catalog is not None else SymmetryCatalog(params, degree)
    m = cat.matrix(opname)
    h = cat.matrix("H")
    eye = cat.identity()
    dim = cat.basis.size

    seen: Dict[Fraction, int] = {}
    roots: List[Fraction] = []
    for n in range(degree + 1):
        magnitude = n + offset
        for value in (magnitude, -magnitude):
            if value in seen:
                if seen[value] != n:
                    raise ParameterCollisionError(
                        f"{opname} - 1/2 roots collide: value "
                        f"{format_rational(value)} arises from azimuthal numbers "
                        f"{seen[value]} and {n}"
                    )
                continue  # the +-0 pair collapses to a single root
            seen[value] = n
            roots.append(value)

    shifted = m - eye.scaled(HALF)
    rec.zero(
        f"sep.{opname}.annihilator",
        f"prod_n ({opname} - 1/2 -+ (n + {format_rational(offset)})) = 0",
        lambda: annihilator_product(shifted, roots),
    )
    sq = shifted @ shifted
    total = 0
    for n in range(degree + 1):
        magnitude = n + offset
        expected = _azimuthal_count(degree, n)
        r = rank_exact(sq - eye.scaled(magnitude * magnitude))
        got = dim - r
        total += got
        rec.claim(
            f"sep.{opname}.multiplicity.n{n}",
            f"dim ker(({opname} - 1/2)^2 - ({format_rational(magnitude)})^2) = {expected}",
            lambda got=got, expected=expected: (
                got == expected,
                f"dimension {got}, expected {expected}",
            ),
        )
    rec.claim(
        f"sep.{opname}.complete",
        "eigenspace dimensions exhaust the space",
        lambda: (total == dim, f"sum {total} of {dim}"),
    )
    rec.zero(f"sep.{opname}.bracket.H", f"[{opname}, H] = 0", lambda: commutator(m, h))
    axis = 3 if which == "Z" else 1
    rec.zero(
        f"sep.{opname}.bracket.R{axis}",
        f"[{opname}, R{axis}] = 0 ({opname} = {source})",
        lambda: commutator(m, cat.matrix(f"R{axis}")),
    )
    return rec, roots
