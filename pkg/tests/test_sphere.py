"""Certificates for the symmetry catalog on the sphere quotient."""

import random
from fractions import Fraction

import pytest

from bisphere.bases import SphereQuotient
from bisphere.laurent import LaurentPoly3, ModelParams
from bisphere.linop import LinOp, annihilator_product, build_matrix
from bisphere.operators import (
    Compose,
    Dunkl,
    Partial,
    Refl,
    ScalarMul,
    Sum,
    apply_op,
    compose,
    mono,
    scalar_mul,
    sum_,
)
from bisphere.parser import parse
from bisphere.sphere import (
    ParameterCollisionError,
    SymmetryCatalog,
    energy,
    invariance_suite,
    separation_certificate,
    spectrum_certificate,
    symmetry_expr,
    symmetry_text,
)

F = Fraction
STANDARD = ModelParams(mu1=F(1, 3), mu2=F(1, 5), mu3=F(1, 7))
FREE = ModelParams(mu1=F(0), mu2=F(0), mu3=F(0))


def all_pass(recorder):
    failed = [c for c in recorder.checks if c.status != "pass"]
    return not failed, failed


# --- frozen matrix for the simplest nontrivial case -------------------------


def test_l3_matrix_free_case_degree_one():
    # Without reflective coupling, L3 acts on span{1, s3, s2, s1} by a
    # rotation generator dressed with one reflection.  By hand:
    #   L3(1) = 1/2,  L3(s3) = s3/2,  L3(s2) = s1 - s2/2,  L3(s1) = s2 - s1/2.
    basis = SphereQuotient(1)
    assert list(basis.elements) == [(0, 0, 0), (0, 0, 1), (0, 1, 0), (1, 0, 0)]
    m = build_matrix(symmetry_expr("L3", FREE), basis, FREE)
    expected = [
        [F(1, 2), 0, 0, 0],
        [0, F(1, 2), 0, 0],
        [0, 0, F(-1, 2), F(1)],
        [0, 0, F(1), F(-1, 2)],
    ]
    assert m.to_fractions() == expected


def test_energy_values():
    assert energy(FREE, 2) == 6
    assert energy(STANDARD, 0) == F(12496, 11025)


# --- gauge conjugation oracle -----------------------------------------------


def _physical_form(op, params: ModelParams):
    """Conjugate the polynomial-gauge tree by s1^mu1 s2^mu2 s3^mu3.

    For even integer parameters the weight is itself a polynomial and the
    reflective derivative conjugates to d_i - mu_i s_i^-1 R_i, so the
    physical operator is an ordinary differential-reflection tree.
    """
    if isinstance(op, Dunkl):
        i = op.axis
        e = [0, 0, 0]
        e[i - 1] = -1
        return sum_(
            Partial(i),
            scalar_mul(-params.mu(i), compose(mono(*e), Refl(i))),
        )
    if isinstance(op, Compose):
        return compose(*[_physical_form(f, params) for f in op.factors])
    if isinstance(op, Sum):
        return sum_(*[_physical_form(t, params) for t in op.terms])
    if isinstance(op, ScalarMul):
        return scalar_mul(op.coef, _physical_form(op.op, params))
    return op


def _random_poly(rng: random.Random) -> LaurentPoly3:
    p = LaurentPoly3.zero()
    for _ in range(rng.randint(1, 5)):
        expo = (rng.randint(0, 3), rng.randint(0, 3), rng.randint(0, 3))
        coef = F(rng.randint(-6, 6), rng.randint(1, 4))
        p = p + LaurentPoly3.monomial(*expo, coef=coef)
    return p


@pytest.mark.parametrize("mu", [(0, 0, 0), (2, 0, 0), (2, 4, 2)])
@pytest.mark.parametrize("name", ["L1", "L2", "L3", "C"])
def test_gauge_conjugation_oracle(mu, name):
    # With even integer parameters both gauges act on plain polynomials, so
    # the defining conjugation L_phys (w p) = w (L p) with weight
    # w = s1^mu1 s2^mu2 s3^mu3 is checkable exactly.  The two sides go
    # through disjoint code paths: reflective derivatives on the right,
    # ordinary derivatives plus inverse-monomial reflection terms on the left.
    params = ModelParams(mu1=F(mu[0]), mu2=F(mu[1]), mu3=F(mu[2]))
    gauged = symmetry_expr(name, params)
    physical = _physical_form(gauged, params)
    weight = LaurentPoly3.monomial(*mu)
    rng = random.Random(20260822)
    for _ in range(8):
        p = _random_poly(rng)
        left = apply_op(physical, weight * p, params)
        right = weight * apply_op(gauged, p, params)
        assert left == right


# --- invariance suite -------------------------------------------------------


def test_invariance_suite_standard_params():
    rec, _ = invariance_suite(STANDARD, 4)
    ok, failed = all_pass(rec)
    assert ok, failed
    assert len(rec.checks) == 32


def test_invariance_suite_cycled_params():
    rec, _ = invariance_suite(STANDARD.cycled(), 3)
    ok, failed = all_pass(rec)
    assert ok, failed


def test_invariance_suite_free_params():
    rec, _ = invariance_suite(FREE, 3)
    ok, failed = all_pass(rec)
    assert ok, failed


def test_invariance_random_params():
    rng = random.Random(7)
    mus = [F(rng.randint(-2, 12), rng.randint(1, 9)) for _ in range(3)]
    mus = [m if m > F(-1, 2) else -m for m in mus]
    rec, _ = invariance_suite(ModelParams(mu1=mus[0], mu2=mus[1], mu3=mus[2]), 3)
    ok, failed = all_pass(rec)
    assert ok, failed


# --- catalog internals ------------------------------------------------------


def test_catalog_matches_expression_trees():
    # Derived entries are cached matrix products; their printed expression
    # trees must build the identical matrix column by column.
    cat = SymmetryCatalog(STANDARD, 2)
    for name in ("C", "Q", "H", "Z", "Y", "Lsq", "P123"):
        direct = build_matrix(symmetry_expr(name, STANDARD), cat.basis, STANDARD)
        assert direct == cat.matrix(name), name


def test_symmetry_text_reparses():
    for name in ("L1", "L2", "L3", "C", "Q", "H", "Z", "Y", "Lsq"):
        text = symmetry_text(name, STANDARD)
        assert parse(text) == symmetry_expr(name, STANDARD), name


def test_hamiltonian_preserves_parity_sectors():
    cat = SymmetryCatalog(STANDARD, 3)
    h = cat.matrix("H")
    basis = cat.basis
    for i in range(basis.size):
        for j in range(basis.size):
            if basis.sector(i) != basis.sector(j):
                assert h.entry(i, j) == 0


# --- spectrum certificate ---------------------------------------------------


def test_free_spectrum_is_angular():
    cat = SymmetryCatalog(FREE, 3)
    h = cat.matrix("H")
    roots = [F(n * (n + 1)) for n in range(4)]
    assert annihilator_product(h, roots).is_zero()


def test_spectrum_certificate_standard():
    rec, energies, mults = spectrum_certificate(STANDARD, 3)
    ok, failed = all_pass(rec)
    assert ok, failed
    assert mults == [1, 3, 5, 7]
    assert energies[0] == F(12496, 11025)


def test_spectrum_certificate_free():
    rec, energies, mults = spectrum_certificate(FREE, 2)
    ok, failed = all_pass(rec)
    assert ok, failed
    assert energies == [0, 2, 6]
    assert mults == [1, 3, 5]


def test_spectrum_refused_on_level_collision():
    # sigma = -1 makes E_0 = E_1; the certificate must refuse, not report.
    params = ModelParams(mu1=F(-1, 3), mu2=F(-1, 3), mu3=F(-1, 3))
    with pytest.raises(ParameterCollisionError):
        spectrum_certificate(params, 2)


# --- separation certificates ------------------------------------------------


def test_separation_z_standard():
    rec, roots = separation_certificate("Z", STANDARD, 3)
    ok, failed = all_pass(rec)
    assert ok, failed
    offset = STANDARD.mu1 + STANDARD.mu2
    expected = []
    for n in range(4):
        expected += [n + offset, -(n + offset)]
    assert roots == expected


def test_separation_y_standard():
    rec, roots = separation_certificate("Y", STANDARD, 3)
    ok, failed = all_pass(rec)
    assert ok, failed
    assert roots[0] == STANDARD.mu2 + STANDARD.mu3


def test_separation_zero_root_listed_once():
    params = ModelParams(mu1=F(1, 4), mu2=F(-1, 4), mu3=F(1, 7))
    rec, roots = separation_certificate("Z", params, 2)
    ok, failed = all_pass(rec)
    assert ok, failed
    assert roots.count(F(0)) == 1
    assert len(roots) == len(set(roots))


def test_separation_refused_on_root_collision():
    # mu1 = mu2 = -1/4 pairs the n=0 and n=1 labels at the same root.
    params = ModelParams(mu1=F(-1, 4), mu2=F(-1, 4), mu3=F(1, 7))
    with pytest.raises(ParameterCollisionError):
        separation_certificate("Z", params, 2)


def test_separation_rejects_unknown_name():
    with pytest.raises(KeyError):
        separation_certificate("X", STANDARD, 2)
