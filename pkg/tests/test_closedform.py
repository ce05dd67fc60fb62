"""Closed-form eigenfunctions: Jacobi recurrences, quadrature, matching."""

import math
import random
from fractions import Fraction

import numpy as np
import pytest

from bisphere.closedform import (
    QuadratureGrid,
    SphereState,
    admissible_states,
    alternative_angles,
    azimuthal_wave,
    chart,
    cross_family_gram,
    eigenvector_match,
    gram_defect,
    gram_matrix,
    has_negative_weight,
    jacobi_exact,
    jacobi_values,
    polar_wave,
    sphere_wave,
)
from bisphere.laurent import ModelParams

F = Fraction
STANDARD = ModelParams(mu1=F(1, 3), mu2=F(1, 5), mu3=F(1, 7))
FREE = ModelParams(mu1=F(0), mu2=F(0), mu3=F(0))


# --- Jacobi polynomials -----------------------------------------------------


def test_jacobi_legendre_value():
    # alpha = beta = 0 reduces to Legendre: P_2(x) = (3x^2 - 1)/2.
    assert jacobi_exact(2, F(0), F(0), F(1, 3)) == F(-1, 3)


def test_jacobi_degree_one():
    alpha, beta, x = F(3, 7), F(-1, 5), F(2, 9)
    expected = (alpha + 1) + (alpha + beta + 2) * (x - 1) / 2
    assert jacobi_exact(1, alpha, beta, x) == expected


def test_jacobi_value_at_one():
    # P_k(1) = binomial(k + alpha, k) as a rising product.
    rng = random.Random(5)
    for _ in range(20):
        k = rng.randint(0, 7)
        alpha = F(rng.randint(-3, 9), rng.randint(1, 7))
        beta = F(rng.randint(-3, 9), rng.randint(1, 7))
        expected = F(1)
        for i in range(1, k + 1):
            expected *= (alpha + i) / i
        assert jacobi_exact(k, alpha, beta, F(1)) == expected


def test_jacobi_float_matches_exact():
    rng = random.Random(11)
    for _ in range(30):
        k = rng.randint(0, 8)
        alpha = F(rng.randint(-2, 8), rng.randint(1, 6))
        beta = F(rng.randint(-2, 8), rng.randint(1, 6))
        xs = [F(rng.randint(-8, 8), rng.randint(1, 9)) for _ in range(4)]
        exact = [float(jacobi_exact(k, alpha, beta, x)) for x in xs]
        approx = jacobi_values(k, float(alpha), float(beta), np.array([float(x) for x in xs]))
        scale = max(1.0, max(abs(v) for v in exact))
        assert np.max(np.abs(approx - exact)) < 1e-11 * scale


# --- state labels -----------------------------------------------------------


def test_admissible_state_counts():
    for level in range(13):
        states = admissible_states(level)
        assert len(states) == 2 * level + 1
        assert len(set(states)) == len(states)


def test_admissible_state_constraints():
    for level in range(8):
        for s in admissible_states(level):
            assert (s.n - s.e1 - s.e2) % 2 == 0 and s.n - s.e1 - s.e2 >= 0
            assert (level - s.n - s.e3) % 2 == 0 and level - s.n - s.e3 >= 0


def test_state_sector_frames():
    s = SphereState(3, 1, 1, 0, 0)
    assert s.sector("standard") == (1, 0, 0)
    assert s.sector("alternative") == (0, 1, 0)
    with pytest.raises(ValueError):
        s.sector("sideways")


def test_inadmissible_labels_rejected():
    with pytest.raises(ValueError):
        azimuthal_wave(STANDARD, 1, 0, 0, np.array([0.3]))
    with pytest.raises(ValueError):
        polar_wave(STANDARD, 2, 1, 0, np.array([0.3]))


# --- reflection parity at random points -------------------------------------


def test_azimuthal_reflection_parity():
    rng = random.Random(3)
    phi = np.array([rng.uniform(0.05, 2 * math.pi - 0.05) for _ in range(100)])
    for n, e1, e2 in [(0, 0, 0), (1, 1, 0), (1, 0, 1), (2, 0, 0), (2, 1, 1), (4, 0, 0)]:
        base = azimuthal_wave(STANDARD, n, e1, e2, phi)
        # s1 -> -s1 is phi -> pi - phi; s2 -> -s2 is phi -> -phi.
        flip1 = azimuthal_wave(STANDARD, n, e1, e2, math.pi - phi)
        flip2 = azimuthal_wave(STANDARD, n, e1, e2, -phi)
        assert np.allclose(flip1, (-1.0) ** e1 * base, rtol=1e-12, atol=1e-13)
        assert np.allclose(flip2, (-1.0) ** e2 * base, rtol=1e-12, atol=1e-13)


def test_polar_reflection_parity():
    rng = random.Random(4)
    theta = np.array([rng.uniform(0.05, math.pi - 0.05) for _ in range(100)])
    for level, n, e3 in [(0, 0, 0), (1, 0, 1), (1, 1, 0), (3, 1, 0), (4, 2, 0)]:
        base = polar_wave(STANDARD, level, n, e3, theta)
        flip3 = polar_wave(STANDARD, level, n, e3, math.pi - theta)
        assert np.allclose(flip3, (-1.0) ** e3 * base, rtol=1e-12, atol=1e-13)


# --- special values ---------------------------------------------------------


def test_free_ground_state_is_constant():
    state = SphereState(0, 0, 0, 0, 0)
    pts_t = np.array([0.4, 1.1, 2.0, 2.9])
    pts_p = np.array([0.2, 1.7, 3.3, 5.9])
    vals = sphere_wave(FREE, state, pts_t, pts_p)
    assert np.allclose(vals, 1.0 / math.sqrt(4.0 * math.pi), rtol=1e-13)


def test_vanishing_parameter_sum_ground_state_finite():
    # mu1 + mu2 = 0 places the normalization at a Gamma pole unless the
    # leading factor is folded in first.
    params = ModelParams(mu1=F(1, 4), mu2=F(-1, 4), mu3=F(1, 7))
    vals = azimuthal_wave(params, 0, 0, 0, np.array([0.8]))
    assert np.isfinite(vals[0]) and vals[0] > 0


def test_chart_roundtrip_alternative():
    rng = random.Random(9)
    theta = np.array([rng.uniform(0.1, math.pi - 0.1) for _ in range(50)])
    phi = np.array([rng.uniform(0.0, 2 * math.pi) for _ in range(50)])
    s1, s2, s3 = chart(theta, phi)
    alt_t, alt_p = alternative_angles(s1, s2, s3)
    assert np.allclose(np.cos(alt_t), s1, atol=1e-12)
    assert np.allclose(np.sin(alt_t) * np.cos(alt_p), s2, atol=1e-12)
    assert np.allclose(np.sin(alt_t) * np.sin(alt_p), s3, atol=1e-12)


# --- quadrature -------------------------------------------------------------


def test_grid_basic_shape():
    grid = QuadratureGrid(200, 200)
    assert grid.theta.size == 100 and grid.phi.size == 50
    assert np.all(grid.theta > 0) and np.all(grid.theta < math.pi / 2)
    assert np.all(grid.phi > 0) and np.all(grid.phi < math.pi / 2)
    assert np.all(grid.theta_weights > 0) and np.all(grid.phi_weights > 0)
    # 2 * sum(sin theta dtheta) * 4 * sum(dphi) = surface of the sphere
    area = 2.0 * grid.theta_weights.sum() * 4.0 * grid.phi_weights.sum()
    assert abs(area - 4.0 * math.pi) < 1e-12


def test_grid_trig_tables_consistent():
    grid = QuadratureGrid(200, 200, grading=4)
    assert np.allclose(
        grid.cos_theta**2 + grid.sin_theta**2, 1.0, rtol=0, atol=1e-14
    )
    assert np.all(grid.cos_theta > 0) and np.all(grid.sin_theta > 0)


def test_factor_norms_on_base_panel():
    grid = QuadratureGrid.for_params(STANDARD)
    for n, e1, e2 in [(0, 0, 0), (1, 1, 0), (2, 1, 1), (4, 0, 0)]:
        v = azimuthal_wave(STANDARD, n, e1, e2, grid.phi)
        assert abs(4.0 * float(np.sum(grid.phi_weights * v * v)) - 1.0) < 1e-12
    for level, n, e3 in [(0, 0, 0), (1, 1, 0), (3, 1, 0), (4, 4, 0)]:
        v = polar_wave(STANDARD, level, n, e3, grid.theta)
        assert abs(2.0 * float(np.sum(grid.theta_weights * v * v)) - 1.0) < 1e-12


def test_gram_identity_standard():
    gram, states = gram_matrix(STANDARD, 4)
    assert len(states) == 25
    assert gram_defect(gram) < 1e-10


def test_gram_identity_free():
    gram, _ = gram_matrix(FREE, 2)
    assert gram_defect(gram) < 1e-12


def test_gram_cross_parity_exact_zero():
    gram, states = gram_matrix(STANDARD, 4)
    off_parity = 0
    for i, si in enumerate(states):
        for j, sj in enumerate(states):
            if si.sector() != sj.sector():
                assert gram[i, j] == 0.0
                off_parity += 1
    assert off_parity > 0


def test_gram_convergence_trend():
    defects = []
    for nodes in (50, 100, 200):
        gram, _ = gram_matrix(STANDARD, 4, QuadratureGrid(nodes, nodes))
        defects.append(gram_defect(gram))
    assert defects[0] > defects[1] > defects[2]


def test_gram_negative_parameters_flagged_tolerance():
    params = ModelParams(mu1=F(-1, 4), mu2=F(1, 5), mu3=F(-2, 5))
    assert has_negative_weight(params)
    assert not has_negative_weight(STANDARD)
    gram, _ = gram_matrix(params, 4)
    assert gram_defect(gram) < 1e-6


def test_cross_family_gram_orthogonal():
    for level in (1, 2, 3):
        u = cross_family_gram(STANDARD, level)
        defect = np.max(np.abs(u @ u.T - np.eye(u.shape[0])))
        assert defect < 1e-8, (level, defect)


# --- match against exact eigenspaces ----------------------------------------


@pytest.mark.parametrize("level", [0, 1, 2, 3, 4])
def test_eigenvector_match_standard(level):
    residuals = eigenvector_match(STANDARD, level)
    assert len(residuals) == 2 * level + 1
    assert max(residuals.values()) < 1e-9


@pytest.mark.parametrize("level", [1, 2, 3])
def test_eigenvector_match_alternative(level):
    residuals = eigenvector_match(STANDARD, level, frame="alternative")
    assert max(residuals.values()) < 1e-9


def test_eigenvector_match_other_params():
    params = ModelParams(mu1=F(3, 2), mu2=F(1, 2), mu3=F(5, 3))
    residuals = eigenvector_match(params, 3)
    assert max(residuals.values()) < 1e-9
