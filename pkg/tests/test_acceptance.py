"""Acceptance gate: one test and one printed PASS/FAIL line per criterion.

Criteria 1 and 2 pin the two worked golden examples to their closed-form
values. Criteria 3 through 9 run the seeded property suites at full trial
counts against numpy oracles, which makes this file dominate the runtime
of the whole test run (roughly fifteen seconds).

Known red: the second criterion's reference spectrum for the entrywise
product C o P is inconsistent with the example's own factor matrices.
With C[1, 2] = 4 and P[1, 2] = -1/3 the product entry is -4/3, giving
eigenvalues (16 +- sqrt(65))/3 and 16/3; the stated reference values
(16 +- sqrt(113))/3 correspond to a variant with -8/3 in that position.
The criterion is asserted exactly as stated and fails; the companion
check that follows verifies the arithmetically consistent spectrum and
every other claim in the example.
"""

import math

import numpy as np
import pytest

from hadabound.certify import projection_certificate, quantitative_bound
from hadabound.matcore import (
    eigvals_hermitian,
    hadamard,
    is_orthogonal_projection,
    rank_numeric,
)
from hadabound.selftest import run_all
from hadabound.submatrix import kruskal_rank

A = np.array([[2.0, 1.0, 1.0], [1.0, 1.0, 0.0], [1.0, 0.0, 1.0]])
B = np.array([[2.0, 1.0, 1.0], [1.0, 1.0, 1.0], [1.0, 1.0, 1.0]])
C = np.array([[8.0, 7.0, 0.0], [7.0, 8.0, 4.0], [0.0, 4.0, 8.0]])
P = np.array(
    [[2.0, -1.0, -1.0], [-1.0, 2.0, -1.0], [-1.0, -1.0, 2.0]]
) / 3.0


@pytest.fixture(scope="module")
def suites():
    """Full-scale property suite results, computed once for criteria 3-9."""
    return {r.name: r for r in run_all(seed=0, scale=1.0)}


@pytest.fixture
def announce(capsys):
    def _announce(label, ok, detail):
        with capsys.disabled():
            print(f"{label}: {'PASS' if ok else 'FAIL'} - {detail}")

    return _announce


def _spectrum_matches(matrix, expected, atol):
    vals = eigvals_hermitian(matrix)
    return bool(np.max(np.abs(vals - np.sort(expected)[::-1])) <= atol), vals


def test_criterion_01_quantitative_golden_pair(announce):
    rep = quantitative_bound(A, B)
    checks = {
        "mu exact": abs(rep.mu - (3.0 - math.sqrt(5.0)) / 2.0) <= 1e-9,
        "mu rounded": abs(rep.mu - 0.382) <= 1e-3,
        "kappa exact": abs(rep.kappa_eff - (3.0 + 2.0 * math.sqrt(2.0))) <= 1e-9,
        "kappa rounded": abs(rep.kappa_eff - 5.828) <= 1e-3,
        "lambda_min rounded": abs(rep.actual_lambda_min - 0.438) <= 1e-3,
        "bound ratio": abs(rep.quantitative_bound - rep.mu / rep.kappa_eff) <= 1e-9,
        "bound rounded": abs(rep.quantitative_bound - 0.066) <= 1e-3,
        "kruskal ranks": (
            kruskal_rank(A),
            kruskal_rank(B),
            kruskal_rank(np.asarray(hadamard(A, B))),
        ) == (2, 1, 3),
        "ranks": (
            rank_numeric(A),
            rank_numeric(B),
            rank_numeric(hadamard(A, B)),
        ) == (2, 2, 3),
    }
    ok = all(checks.values())
    announce(
        "criterion 1",
        ok,
        f"mu={rep.mu:.12f} kappa={rep.kappa_eff:.12f} "
        f"bound={rep.quantitative_bound:.12f} "
        f"lambda_min={rep.actual_lambda_min:.12f} kruskal=(2,1,3) ranks=(2,2,3)",
    )
    failed = [name for name, good in checks.items() if not good]
    assert ok, f"failed clauses: {failed}"


def test_criterion_02_projection_example_reference_spectrum_as_stated(announce):
    """Asserts the stated reference values unchanged; expected to fail.

    See the module docstring: the stated product spectrum cannot be
    produced by the entrywise product of the stated C and P.
    """
    c_ok, _ = _spectrum_matches(
        C, [8.0 + math.sqrt(65.0), 8.0, 8.0 - math.sqrt(65.0)], 1e-9
    )
    proj_ok, rank = is_orthogonal_projection(P)
    cert = projection_certificate(C, P)
    stated = [
        (16.0 + math.sqrt(113.0)) / 3.0,
        16.0 / 3.0,
        (16.0 - math.sqrt(113.0)) / 3.0,
    ]
    stated_ok, measured = _spectrum_matches(hadamard(C, P), stated, 1e-9)
    ok = (
        c_ok
        and proj_ok
        and rank == 2
        and stated_ok
        and cert.hypothesis_holds
        and cert.conclusion_holds
    )
    announce(
        "criterion 2 (as stated)",
        ok,
        "eig(C) ok, P is a rank-2 projection, certificate ok, but the "
        f"product spectrum is {np.round(measured, 9).tolist()} = "
        "(16 +- sqrt(65))/3 and 16/3, not the stated (16 +- sqrt(113))/3; "
        "the stated values need -8/3 where C o P has 4 * (-1/3) = -4/3 "
        "(see the companion check)",
    )
    assert c_ok and proj_ok and rank == 2
    assert cert.hypothesis_holds and cert.conclusion_holds
    assert stated_ok, (
        "stated product spectrum (16 +- sqrt(113))/3 is inconsistent with "
        f"the stated factors; the entrywise product has spectrum {measured}"
    )


def test_criterion_02_projection_example_consistent_spectrum(announce):
    consistent = [
        (16.0 + math.sqrt(65.0)) / 3.0,
        16.0 / 3.0,
        (16.0 - math.sqrt(65.0)) / 3.0,
    ]
    spec_ok, measured = _spectrum_matches(hadamard(C, P), consistent, 1e-9)
    positive = bool(np.min(measured) > 0.0)
    cert = projection_certificate(C, P)
    ok = spec_ok and positive and cert.hypothesis_holds and cert.conclusion_holds
    announce(
        "criterion 2 (consistent arithmetic)",
        ok,
        f"eig(C o P) = (16 +- sqrt(65))/3 and 16/3, all positive; "
        f"hypothesis and conclusion both hold (mu={cert.mu:.9f}, "
        f"lambda_min={cert.lambda_min_product:.9f})",
    )
    assert ok


def test_criterion_03_entrywise_floor_suite(announce, suites):
    r = suites["quantitative_floor"]
    ok = r.trials == 1000 and r.failures == 0
    announce(
        "criterion 3",
        ok,
        f"{r.trials} random pairs, {r.failures} violations, "
        f"worst lambda_min {r.details['worst_lambda_min']:.3e} >= -1e-8",
    )
    assert ok


def test_criterion_04_shifted_projection_suite(announce, suites):
    r = suites["projection_floor"]
    ok = r.trials == 500 and r.failures == 0
    announce(
        "criterion 4",
        ok,
        f"{r.trials} shifted instances vs random projections, "
        f"{r.failures} violations, worst lambda_min "
        f"{r.details['worst_lambda_min']:.3e} >= -1e-8",
    )
    assert ok


def test_criterion_05_indefinite_shift_suite(announce, suites):
    r = suites["indefinite_shift"]
    fraction = r.details["indefinite_fraction"]
    ok = r.trials == 500 and r.failures == 0 and fraction >= 0.5
    announce(
        "criterion 5",
        ok,
        f"{r.trials} full-fraction shifts, {r.failures} violations, "
        f"indefinite fraction {fraction:.3f} >= 0.5, worst lambda_min "
        f"{r.details['worst_lambda_min']:.3e}",
    )
    assert ok


def test_criterion_06_projection_split_suite(announce, suites):
    r = suites["projection_split"]
    worst = r.details["worst_residual"]
    ok = r.trials == 500 and r.failures == 0 and worst <= 1e-8
    announce(
        "criterion 6",
        ok,
        f"{r.trials} random projections split, {r.failures} violations, "
        f"worst identity residual {worst:.3e} <= 1e-8",
    )
    assert ok


def test_criterion_07_smoothing_suite(announce, suites):
    r = suites["doa"]
    worst_dev = r.details["worst_identity_dev"]
    ok = r.trials == 500 and r.failures == 0 and worst_dev <= 1e-10
    announce(
        "criterion 7",
        ok,
        f"{r.trials} scenarios, {r.failures} violations, smoothing "
        f"factorization deviation {worst_dev:.3e} <= 1e-10, worst bound "
        f"margin {r.details['worst_margin']:.3e}",
    )
    assert ok


def test_criterion_08_factor_model_suite(announce, suites):
    r = suites["cp"]
    ok = r.trials == 300 and r.failures == 0
    announce(
        "criterion 8",
        ok,
        f"{r.trials} scenarios, {r.failures} violations, moment forms "
        f"deviation {r.details['worst_identity_dev']:.3e} <= 1e-10, "
        f"{r.details['applicable']} met the floor condition",
    )
    assert ok


def test_criterion_09_oracle_crosschecks(announce, suites):
    r = suites["oracle_crosscheck"]
    ok = r.trials == 400 and r.failures == 0
    announce(
        "criterion 9",
        ok,
        f"{r.trials} brute-force comparisons (Kruskal rank and submatrix "
        f"minima), {r.failures} disagreements",
    )
    assert ok
