"""Acceptance gate: one test and one printed pass/fail line per criterion.

Criteria tolerances are pinned here and nowhere else: exact zero for the
algebraic suites, 1e-12 for ladder realizations, 1e-10 for the 200-node
Gram matrix, 1e-9 for the closed-form eigenspace match, wall-clock caps
for the performance criterion.
"""

import random
import time
from fractions import Fraction

from bisphere.laurent import ModelParams
from bisphere.linop import build_matrix
from bisphere.bases import SphereQuotient
from bisphere.closedform import admissible_states, wavefunction_suite
from bisphere.operators import random_operator, to_text
from bisphere.parser import parse
from bisphere.plane import contraction_suite, plane_suite, rotation_suite
from bisphere.racah import differential_suite, ladder_suite
from bisphere.service import random_triples
from bisphere.sphere import (
    invariance_suite,
    separation_certificate,
    spectrum_certificate,
    symmetry_expr,
    symmetry_text,
)

STANDARD = ModelParams("1/3", "1/5", "1/7")
FREE = ModelParams(0, 0, 0)
TIMINGS = {}


def _verdict(number: int, ok: bool, detail: str):
    line = f"CRITERION {number}: {'PASS' if ok else 'FAIL'} - {detail}"
    print(line, flush=True)
    assert ok, line


def _failures(rec):
    return [(c.id, c.residual) for c in rec.checks if c.status == "fail"]


def test_criterion_1_exact_invariance_suite():
    t0 = time.perf_counter()
    failures = []
    for params in [STANDARD] + random_triples(42, 2):
        rec, _ = invariance_suite(params, 6)
        assert len(rec.checks) == 32
        failures += _failures(rec)
    elapsed = time.perf_counter() - t0
    TIMINGS[1] = elapsed
    _verdict(
        1,
        not failures and elapsed < 120.0,
        f"invariance identities exact-zero at 3 parameter sets, degree 6, "
        f"{elapsed:.1f}s (cap 120s); failures: {failures}",
    )


def test_criterion_2_spectrum_certificate():
    t0 = time.perf_counter()
    rec, energies, mults = spectrum_certificate(STANDARD, 6)
    failures = _failures(rec)
    sigma = Fraction(1, 3) + Fraction(1, 5) + Fraction(1, 7)
    expected = [(n + sigma) ** 2 + (n + sigma) for n in range(7)]
    free_rec, free_energies, _ = spectrum_certificate(FREE, 6)
    failures += _failures(free_rec)
    classical = [n * (n + 1) for n in range(7)]
    TIMINGS[2] = time.perf_counter() - t0
    _verdict(
        2,
        not failures
        and energies == expected
        and mults == [2 * n + 1 for n in range(7)]
        and free_energies == classical,
        f"annihilator, ranks 49-(2N+1), parity projectors exact at degree 6; "
        f"classical spectrum N(N+1) at zero coupling; failures: {failures}",
    )


def test_criterion_3_separation_certificates():
    t0 = time.perf_counter()
    rec_z, roots_z = separation_certificate("Z", STANDARD, 6)
    rec_y, roots_y = separation_certificate("Y", STANDARD, 6)
    failures = _failures(rec_z) + _failures(rec_y)
    off_z = Fraction(1, 3) + Fraction(1, 5)
    off_y = Fraction(1, 5) + Fraction(1, 7)
    want_z = sorted(s * (n + off_z) for n in range(7) for s in (1, -1))
    want_y = sorted(s * (n + off_y) for n in range(7) for s in (1, -1))
    TIMINGS[3] = time.perf_counter() - t0
    _verdict(
        3,
        not failures
        and sorted(roots_z) == want_z
        and sorted(roots_y) == want_y,
        f"both separation annihilators exact at degree 6 with root ladders "
        f"+-(n+{off_z}) and +-(n+{off_y}); failures: {failures}",
    )


def test_criterion_4_racah_suite():
    t0 = time.perf_counter()
    rec, signs = differential_suite(STANDARD, 4, descent_degree=6)
    failures = _failures(rec)
    ladder_rec, _ = ladder_suite(STANDARD, 12, tolerance=1e-12)
    failures += _failures(ladder_rec)
    TIMINGS[4] = time.perf_counter() - t0
    _verdict(
        4,
        not failures and set(signs.values()) <= {1, -1},
        f"differential Casimir identities exact on degree-6 polynomials with "
        f"padding 2, descent matches the degree-6 Hamiltonian, signs {signs}; "
        f"ladder relations within 1e-12 at cutoff 12; failures: {failures}",
    )


def test_criterion_5_closed_form_suite():
    t0 = time.perf_counter()
    rec = wavefunction_suite(
        STANDARD, max_level=4, nodes=200, count_levels=12, match_points=50
    )
    failures = _failures(rec)
    counts_ok = all(
        len(admissible_states(level)) == 2 * level + 1 for level in range(13)
    )
    TIMINGS[5] = time.perf_counter() - t0
    _verdict(
        5,
        not failures and counts_ok,
        f"25-state Gram within 1e-10 at 200 nodes, eigenspace match within "
        f"1e-9 at 50 points for N <= 4, state counts 2N+1 for N <= 12; "
        f"failures: {failures}",
    )


def test_criterion_6_contraction_suite():
    t0 = time.perf_counter()
    rec, _ = rotation_suite(STANDARD, 6)
    failures = _failures(rec)
    plane_rec, _ = plane_suite(STANDARD, 14, tolerance=1e-12)
    failures += _failures(plane_rec)
    contraction_rec = contraction_suite(STANDARD, [10, 100, 1000], 3)
    failures += _failures(contraction_rec)
    TIMINGS[6] = time.perf_counter() - t0
    _verdict(
        6,
        not failures,
        f"rotation-flow relations exact at degree 6, plane conservation "
        f"within 1e-12 at cutoff 14, contraction identity exact for "
        f"r in (10,100,1000), N <= 3, both parities; failures: {failures}",
    )


def test_criterion_7_parser_round_trip():
    t0 = time.perf_counter()
    rng = random.Random(20260822)
    bad = 0
    for _ in range(1000):
        op = random_operator(rng)
        if parse(to_text(op)) != op:
            bad += 1

    basis = SphereQuotient(3)
    mismatches = []
    for name in ("L1", "L2", "L3", "C", "Z", "Y"):
        text = symmetry_text(name, STANDARD)
        built = build_matrix(parse(text), basis, STANDARD)
        hand = build_matrix(symmetry_expr(name, STANDARD), basis, STANDARD)
        if built != hand:
            mismatches.append(name)
    TIMINGS[7] = time.perf_counter() - t0
    _verdict(
        7,
        bad == 0 and not mismatches,
        f"1000 random operator trees survive print-and-reparse ({bad} broke); "
        f"printed suite operators rebuild identical matrices "
        f"(mismatches: {mismatches})",
    )


def test_criterion_8_performance():
    missing = [k for k in range(1, 7) if k not in TIMINGS]
    assert not missing, f"criteria {missing} must run before the timing gate"
    total = sum(TIMINGS[k] for k in range(1, 7))
    t0 = time.perf_counter()
    rec, _ = invariance_suite(STANDARD, 10)
    large = time.perf_counter() - t0
    ok = total < 600.0 and large < 300.0 and not _failures(rec)
    _verdict(
        8,
        ok,
        f"criteria 1-6 totalled {total:.1f}s (cap 600s); invariance at "
        f"degree 10 (121-dim) took {large:.1f}s (cap 300s)",
    )
