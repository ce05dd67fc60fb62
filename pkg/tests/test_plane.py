"""Bare rotation flows, the planar ladder, and the contraction identity."""

from fractions import Fraction

import numpy as np
import pytest

from bisphere.bases import SphereQuotient
from bisphere.laurent import ModelParams
from bisphere.linop import build_matrix
from bisphere.plane import (
    PlaneModel,
    contracted_energy,
    contraction_deviation,
    contraction_suite,
    limit_energy,
    plane_suite,
    rotation_flow,
    rotation_suite,
)

STANDARD = ModelParams("1/3", "1/5", "1/7")


def _all_pass(rec):
    failed = [c for c in rec.checks if c.status == "fail"]
    assert not failed, [(c.id, c.residual) for c in failed]


def test_rotation_flow_free_case_is_plain_angular_momentum():
    # at mu = 0 the flows reduce to s_i d_j - s_j d_i; check one column
    basis = SphereQuotient(2)
    m = build_matrix(rotation_flow(3), basis, ModelParams(0, 0, 0))
    col = basis.index[(1, 0, 0)]  # s1 -> s2 under s1 d2 - s2 d1... applied to s1
    got = {
        basis.elements[i]: v
        for i, j, v in m.nonzero_entries(100_000)
        if j == col
    }
    assert got == {(0, 1, 0): Fraction(-1)}


def test_rotation_suite_standard():
    rec, flows = rotation_suite(STANDARD, 4)
    assert len(rec.checks) == 12
    _all_pass(rec)
    assert set(flows) == {1, 2, 3}


def test_rotation_suite_other_params():
    rec, _ = rotation_suite(ModelParams("3/2", "1/2", "5/3"), 3)
    _all_pass(rec)


def test_plane_model_diagonal_energy():
    model = PlaneModel(STANDARD, 5)
    assert model.energy_level(0) == 2 * (1 + Fraction(1, 3) + Fraction(1, 5))
    assert model.energy_level(3) == 2 * (4 + Fraction(1, 3) + Fraction(1, 5))
    diag = np.diag(model.energy)
    assert diag[0] == pytest.approx(float(model.energy_level(0)))


def test_plane_model_rejects_tiny_cutoff():
    with pytest.raises(ValueError):
        PlaneModel(STANDARD, 2)


def test_plane_suite_modest_cutoff():
    rec, model = plane_suite(STANDARD, 8)
    _all_pass(rec)
    assert len(model.window_columns()) == 7**2


def test_contracted_energy_worked_example():
    # mu = (1/3, 1/5), ground level, even parity, radius 10:
    # the finite-radius gap is 184/22500
    gap = contracted_energy(STANDARD, Fraction(10), 0, 0) - limit_energy(
        STANDARD, 0, 0
    )
    assert gap == Fraction(184, 22500)
    assert contraction_deviation(STANDARD, Fraction(10), 0) == gap


def test_contraction_identity_exact_across_radii():
    for radius in (10, 100, 1000):
        for level in range(4):
            for e3 in (0, 1):
                gap = contracted_energy(
                    STANDARD, Fraction(radius), level, e3
                ) - limit_energy(STANDARD, level, e3)
                assert gap == contraction_deviation(STANDARD, Fraction(radius), level)


def test_contraction_deviation_shrinks_like_inverse_square():
    d10 = contraction_deviation(STANDARD, Fraction(10), 2)
    d100 = contraction_deviation(STANDARD, Fraction(100), 2)
    assert d10 == 100 * d100


def test_contraction_suite_counts_and_membership():
    rec = contraction_suite(STANDARD, [10, 100, 1000], 3)
    # 4 levels x 2 parities x 3 radii identities + 8 membership rows
    assert len(rec.checks) == 32
    _all_pass(rec)
    skipped = [c for c in rec.checks if c.status == "skipped"]
    assert [c.id for c in skipped] == ["contraction.limit.N0.e1"]


def test_contraction_membership_matches_plane_diagonal():
    model = PlaneModel(STANDARD, 6)
    for level in (1, 2, 3):
        for e3 in (0, 1):
            lim = limit_energy(STANDARD, level, e3)
            assert lim == model.energy_level(level - e3)
