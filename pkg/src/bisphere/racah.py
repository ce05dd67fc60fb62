"""Three coupled reflection oscillators and their intermediate Casimirs.

One oscillator mode per axis: raising/lowering combinations B+- = s_i -+ D_i,
a number-type element (s_i^2 - D_i^2)/2, and the reflection R_i.  Coupling
the three modes through parity-twisted sums gives a total algebra whose
intermediate and total Casimir elements reproduce, on the sphere quotient,
the first-order symmetry catalog; the total Casimir squared recovers the
Hamiltonian.

Two independent realizations are checked against each other:

* differential mode: everything is an expression tree applied column by
  column to polynomials in three variables, giving exact rational
  matrices.  The Casimir-type elements preserve polynomial degree, so
  their matrices are exact on every column even though the ambient basis
  is truncated; elements that raise degree (the squared length) are exact
  on all columns except the top two degrees, and every mixed check is
  restricted accordingly.

* ladder mode: each mode acts on its occupation-number sequence through
  square-root matrix entries; the coupled operators are dense float
  tensors and each relation is checked numerically on the interior
  occupation window where the truncation cannot leak.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import numpy as np

from .bases import FullPoly3, SphereQuotient
from .laurent import ModelParams
from .linop import LinOp, build_matrix, zero_on_columns
from .operators import (
    Dunkl,
    Op,
    Partial,
    Refl,
    compose,
    mono,
    negate,
    scalar_mul,
    sum_,
)
from .reporting import Recorder
from .sphere import SymmetryCatalog, symmetry_expr

HALF = Fraction(1, 2)


def _axis_mono(i: int, power: int = 1) -> Op:
    e = [0, 0, 0]
    e[i - 1] = power
    return mono(*e)


def mode_shift(i: int, direction: int) -> Op:
    """B+ (direction +1) or B- (direction -1) for one mode: s_i -+ D_i."""
    return sum_(_axis_mono(i), scalar_mul(-direction, Dunkl(i)))


def mode_number(i: int) -> Op:
    """(s_i^2 - D_i^2) / 2, the diagonal element of one mode."""
    return sum_(
        scalar_mul(HALF, _axis_mono(i, 2)),
        scalar_mul(-HALF, compose(Dunkl(i), Dunkl(i))),
    )


def mode_casimir(i: int) -> Op:
    """Single-mode Casimir; acts as the scalar -mu_i."""
    return sum_(
        scalar_mul(HALF, compose(mode_shift(i, +1), mode_shift(i, -1), Refl(i))),
        negate(compose(mode_number(i), Refl(i))),
        scalar_mul(HALF, Refl(i)),
    )


def pair_casimir(i: int, j: int) -> Op:
    """Intermediate Casimir of modes i and j coupled in that order."""
    cross = sum_(
        compose(mode_shift(i, -1), mode_shift(j, +1)),
        negate(compose(mode_shift(i, +1), mode_shift(j, -1))),
    )
    return sum_(
        scalar_mul(HALF, compose(cross, Refl(i))),
        compose(mode_casimir(i), Refl(j)),
        compose(mode_casimir(j), Refl(i)),
        scalar_mul(-HALF, compose(Refl(i), Refl(j))),
    )


def total_casimir() -> Op:
    """Casimir of all three modes coupled as (1, 2) then 3."""
    cross = sum_(
        compose(mode_shift(1, -1), mode_shift(3, +1)),
        negate(compose(mode_shift(1, +1), mode_shift(3, -1))),
    )
    return sum_(
        scalar_mul(HALF, compose(cross, Refl(1))),
        negate(compose(mode_casimir(2), Refl(1), Refl(3))),
        compose(pair_casimir(1, 2), Refl(3)),
        compose(pair_casimir(2, 3), Refl(1)),
    )


def omega_expr() -> Op:
    """Total Casimir times the total parity; squares and shifts to H."""
    return compose(total_casimir(), Refl(1), Refl(2), Refl(3))


def assembled_shift(direction: int) -> Op:
    """Coupled raising (+1) / lowering (-1): parity-twisted sum of modes."""
    return sum_(
        compose(mode_shift(1, direction), Refl(2), Refl(3)),
        compose(mode_shift(2, direction), Refl(3)),
        mode_shift(3, direction),
    )


def square_length_expr() -> Op:
    """((B+ + B-)/2)^2 assembled from the coupled shifts.

    The reflective derivative parts cancel in the sum, so this must act as
    plain multiplication by s1^2 + s2^2 + s3^2.
    """
    total = sum_(assembled_shift(+1), assembled_shift(-1))
    return scalar_mul(Fraction(1, 4), compose(total, total))


def length_monomial() -> Op:
    return sum_(mono(2, 0, 0), mono(0, 2, 0), mono(0, 0, 2))


def angular_flow(k: int, params: ModelParams) -> Op:
    """Weight-conjugated rotation generator about axis k.

    s_i d_j - s_j d_i plus the two Laurent counterterms the conjugation by
    the weight produces.  Individually the terms leave polynomials, but
    their squares summed with the weight term below do not, which is why
    the right-hand side below is assembled as one tree and applied before
    any regularity is asserted.
    """
    i, j = {3: (1, 2), 1: (2, 3), 2: (3, 1)}[k]
    mu_i, mu_j = params.mu(i), params.mu(j)
    e_i = [0, 0, 0]
    e_i[i - 1] = 1
    e_j = [0, 0, 0]
    e_j[j - 1] = 1
    ratio_ij = [0, 0, 0]
    ratio_ij[i - 1] = 1
    ratio_ij[j - 1] = -1
    ratio_ji = [0, 0, 0]
    ratio_ji[j - 1] = 1
    ratio_ji[i - 1] = -1
    return sum_(
        compose(mono(*e_i), Partial(j)),
        negate(compose(mono(*e_j), Partial(i))),
        scalar_mul(mu_j, mono(*ratio_ij)),
        scalar_mul(-mu_i, mono(*ratio_ji)),
    )


def casimir_square_rhs(params: ModelParams) -> Op:
    """What Omega^2 + Omega must equal: minus the squared rotation flows
    plus the squared length times the reflective weight term."""
    weight_terms = []
    for i in (1, 2, 3):
        mu_i = params.mu(i)
        inv_sq = [0, 0, 0]
        inv_sq[i - 1] = -2
        weight_terms.append(scalar_mul(mu_i * mu_i, mono(*inv_sq)))
        weight_terms.append(scalar_mul(-mu_i, compose(mono(*inv_sq), Refl(i))))
    flows = [angular_flow(k, params) for k in (1, 2, 3)]
    return sum_(
        *[negate(compose(f, f)) for f in flows],
        compose(length_monomial(), sum_(*weight_terms)),
    )


# --- differential suite -----------------------------------------------------


def differential_suite(
    params: ModelParams,
    degree: int,
    recorder: Optional[Recorder] = None,
    descent_degree: Optional[int] = None,
) -> Tuple[Recorder, Dict[str, int]]:
    """Exact checks of the coupled-oscillator picture on polynomials.

    Degree-preserving elements are certified on the whole padded basis;
    degree-raising ones only on columns of degree <= degree, the padding
    absorbing their overflow.  The sphere descent of the parity-dressed
    Casimir is compared against the symmetry catalog at descent_degree
    (defaults to degree).  Returns the recorder plus the measured signs
    relating the intermediate Casimirs to the first-order symmetries.
    """
    rec = recorder if recorder is not None else Recorder()
    if descent_degree is None:
        descent_degree = degree
    basis = FullPoly3(degree + 2)
    eye = LinOp.identity(basis)
    inner = [j for j, d in enumerate(basis.degrees) if d <= degree]

    for i in (1, 2, 3):
        m = build_matrix(mode_casimir(i), basis, params)
        rec.zero(
            f"mode.casimir.{i}",
            f"single-mode Casimir {i} = -mu{i}",
            lambda m=m, i=i: m + eye.scaled(params.mu(i)),
        )

    signs: Dict[str, int] = {}
    pairs = [("12", pair_casimir(1, 2), "L3"), ("23", pair_casimir(2, 3), "L1")]
    built: Dict[str, LinOp] = {}
    for tag, expr, sym in pairs:
        m = build_matrix(expr, basis, params)
        built[tag] = m
        target = build_matrix(symmetry_expr(sym, params), basis, params)
        if m == target.scaled(-1):
            signs[tag] = -1
        elif m == target:
            signs[tag] = 1
        else:
            signs[tag] = 0
        rec.claim(
            f"pair.casimir.{tag}",
            f"intermediate Casimir ({tag}) = (sign) * first-order symmetry {sym}",
            lambda s=signs[tag]: (
                s != 0,
                f"sign {s:+d}" if s != 0 else "matches neither sign",
            ),
        )

    x2 = build_matrix(square_length_expr(), basis, params)
    length = build_matrix(length_monomial(), basis, params)
    rec.claim(
        "assembled.square",
        "((B+ + B-)/2)^2 = multiplication by s1^2+s2^2+s3^2 on inner columns",
        lambda: (zero_on_columns(x2 - length, inner), "inner columns agree"),
    )

    omega = build_matrix(omega_expr(), basis, params)
    for tag in ("12", "23"):
        rec.claim(
            f"bracket.X2.pair{tag}",
            f"[squared length, intermediate Casimir ({tag})] = 0 on inner columns",
            lambda tag=tag: (
                zero_on_columns(x2 @ built[tag] - built[tag] @ x2, inner),
                "inner columns agree",
            ),
        )
    rec.claim(
        "bracket.X2.omega",
        "[squared length, Omega] = 0 on inner columns",
        lambda: (zero_on_columns(x2 @ omega - omega @ x2, inner), "inner columns agree"),
    )

    rhs = build_matrix(casimir_square_rhs(params), basis, params)
    rec.zero(
        "omega.square",
        "Omega^2 + Omega = weight-conjugated rotation invariant",
        lambda: omega @ omega + omega - rhs,
    )

    quotient = SphereQuotient(descent_degree)
    omega_sphere = build_matrix(omega_expr(), quotient, params)
    h = SymmetryCatalog(params, descent_degree).matrix("H")
    rec.zero(
        "omega.descent",
        "Omega^2 + Omega on the sphere quotient = catalog Hamiltonian",
        lambda: omega_sphere @ omega_sphere + omega_sphere - h,
    )
    return rec, signs


# --- ladder realization -----------------------------------------------------


def ladder_rep(mu: float, size: int) -> Dict[str, np.ndarray]:
    """Single-mode matrices on occupation numbers 0..size-1.

    The shifted factorial sigma_n = n + mu (1 - (-1)^n) fills the
    square-root entries; parameters above -1/2 keep every sigma at
    positive occupation strictly positive.
    """
    n = np.arange(size)
    sigma = n + mu * (1.0 - (-1.0) ** n)
    up = np.zeros((size, size))
    down = np.zeros((size, size))
    for m in range(size - 1):
        root = math.sqrt(sigma[m + 1])
        up[m + 1, m] = root
        down[m, m + 1] = root
    return {
        "raise": up,
        "lower": down,
        "number": np.diag(n + mu + 0.5),
        "parity": np.diag((-1.0) ** n),
    }


class LadderModel:
    """Three coupled ladder modes as dense float matrices."""

    def __init__(self, params: ModelParams, cutoff: int):
        if cutoff < 3:
            raise ValueError("cutoff too small for an interior window")
        self.params = params
        self.cutoff = cutoff
        size = cutoff + 1
        self.size = size
        self.dim = size**3
        reps = [ladder_rep(float(params.mu(i)), size) for i in (1, 2, 3)]
        eye = np.eye(size)

        def embed(i: int, m: np.ndarray) -> np.ndarray:
            factors = [eye, eye, eye]
            factors[i - 1] = m
            return np.kron(np.kron(factors[0], factors[1]), factors[2])

        self.up = [embed(i, reps[i - 1]["raise"]) for i in (1, 2, 3)]
        self.down = [embed(i, reps[i - 1]["lower"]) for i in (1, 2, 3)]
        self.number = [embed(i, reps[i - 1]["number"]) for i in (1, 2, 3)]
        self.parity = [embed(i, reps[i - 1]["parity"]) for i in (1, 2, 3)]

        p2, p3 = self.parity[1], self.parity[2]
        self.total_number = self.number[0] + self.number[1] + self.number[2]
        self.total_up = self.up[0] @ p2 @ p3 + self.up[1] @ p3 + self.up[2]
        self.total_down = self.down[0] @ p2 @ p3 + self.down[1] @ p3 + self.down[2]
        self.total_parity = self.parity[0] @ p2 @ p3

    def window_columns(self, margin: int = 2) -> np.ndarray:
        """Columns whose occupation stays at least margin below the cutoff
        in every mode; relations are exact there despite truncation."""
        top = self.size - margin
        idx = [
            (a * self.size + b) * self.size + c
            for a in range(top)
            for b in range(top)
            for c in range(top)
        ]
        return np.array(idx, dtype=int)

    def mode_casimir(self, i: int) -> np.ndarray:
        p = self.parity[i - 1]
        return self.up[i - 1] @ self.down[i - 1] @ p - self.number[i - 1] @ p + 0.5 * p

    def pair_casimir(self, i: int, j: int) -> np.ndarray:
        pi, pj = self.parity[i - 1], self.parity[j - 1]
        cross = self.down[i - 1] @ self.up[j - 1] - self.up[i - 1] @ self.down[j - 1]
        return (
            cross @ pi
            + self.mode_casimir(i) @ pj
            + self.mode_casimir(j) @ pi
            - 0.5 * pi @ pj
        )

    def total_casimir(self) -> np.ndarray:
        p1, p3 = self.parity[0], self.parity[2]
        cross = self.down[0] @ self.up[2] - self.up[0] @ self.down[2]
        return (
            cross @ p1
            - self.mode_casimir(2) @ p1 @ p3
            + self.pair_casimir(1, 2) @ p3
            + self.pair_casimir(2, 3) @ p1
        )

    def omega(self) -> np.ndarray:
        return self.total_casimir() @ self.total_parity


def _window_residual(m: np.ndarray, cols: np.ndarray) -> float:
    return float(np.max(np.abs(m[:, cols])))


def _commutator_on(a: np.ndarray, b: np.ndarray, cols: np.ndarray) -> np.ndarray:
    # products restricted to the window columns; cuts the dense cost
    return a @ b[:, cols] - b @ a[:, cols]


def _anticommutator_on(a: np.ndarray, b: np.ndarray, cols: np.ndarray) -> np.ndarray:
    return a @ b[:, cols] + b @ a[:, cols]


def ladder_suite(
    params: ModelParams,
    cutoff: int,
    recorder: Optional[Recorder] = None,
    tolerance: float = 1e-12,
) -> Tuple[Recorder, LadderModel]:
    """Float checks of the ladder realization on the interior window."""
    rec = recorder if recorder is not None else Recorder()
    model = LadderModel(params, cutoff)
    cols = model.window_columns()
    eye = np.eye(model.dim)

    def near(cid: str, statement: str, fn):
        rec.near_zero(cid, statement, fn, tolerance)

    near(
        "ladder.bracket.number.raise",
        "[number, raise] = raise (coupled)",
        lambda: float(
            np.max(
                np.abs(
                    _commutator_on(model.total_number, model.total_up, cols)
                    - model.total_up[:, cols]
                )
            )
        ),
    )
    near(
        "ladder.bracket.number.lower",
        "[number, lower] = -lower (coupled)",
        lambda: float(
            np.max(
                np.abs(
                    _commutator_on(model.total_number, model.total_down, cols)
                    + model.total_down[:, cols]
                )
            )
        ),
    )
    near(
        "ladder.anti.raise.lower",
        "{raise, lower} = 2 number (coupled)",
        lambda: float(
            np.max(
                np.abs(
                    _anticommutator_on(model.total_up, model.total_down, cols)
                    - 2.0 * model.total_number[:, cols]
                )
            )
        ),
    )
    near(
        "ladder.anti.raise.parity",
        "{raise, parity} = 0 (coupled)",
        lambda: float(
            np.max(np.abs(_anticommutator_on(model.total_up, model.total_parity, cols)))
        ),
    )
    near(
        "ladder.anti.lower.parity",
        "{lower, parity} = 0 (coupled)",
        lambda: float(
            np.max(
                np.abs(_anticommutator_on(model.total_down, model.total_parity, cols))
            )
        ),
    )
    near(
        "ladder.parity.square",
        "parity^2 = 1 (coupled)",
        lambda: float(
            np.max(
                np.abs(
                    model.total_parity @ model.total_parity[:, cols] - eye[:, cols]
                )
            )
        ),
    )
    for i in (1, 2, 3):
        near(
            f"ladder.mode.casimir.{i}",
            f"mode Casimir {i} = -mu{i}",
            lambda i=i: _window_residual(
                model.mode_casimir(i) + float(params.mu(i)) * eye, cols
            ),
        )
    total = model.total_casimir()
    omega = total @ model.total_parity
    near(
        "ladder.center.number",
        "[total Casimir, number] = 0",
        lambda: float(np.max(np.abs(_commutator_on(total, model.total_number, cols)))),
    )
    near(
        "ladder.center.raise",
        "[total Casimir, raise] = 0",
        lambda: float(np.max(np.abs(_commutator_on(total, model.total_up, cols)))),
    )
    near(
        "ladder.center.lower",
        "[total Casimir, lower] = 0",
        lambda: float(np.max(np.abs(_commutator_on(total, model.total_down, cols)))),
    )
    near(
        "ladder.center.parity",
        "[total Casimir, parity] = 0",
        lambda: float(np.max(np.abs(_commutator_on(total, model.total_parity, cols)))),
    )
    q12 = model.pair_casimir(1, 2)
    near(
        "ladder.pair12.number",
        "[pair Casimir (12), number of modes 1+2] = 0",
        lambda: float(
            np.max(
                np.abs(
                    _commutator_on(q12, model.number[0] + model.number[1], cols)
                )
            )
        ),
    )
    near(
        "ladder.pair12.total",
        "[pair Casimir (12), total Casimir] = 0",
        lambda: float(np.max(np.abs(_commutator_on(q12, total, cols)))),
    )
    near(
        "ladder.omega.total",
        "[Omega, total Casimir] = 0",
        lambda: float(np.max(np.abs(_commutator_on(omega, total, cols)))),
    )
    return rec, model
