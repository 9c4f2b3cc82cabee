"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s` (or `squarefull verify
--suite all`).  Criterion 2 asserts the constant-2 square-root bound exactly
as stated; exhaustive computation produces counterexamples (first at p = 7,
(a, b) = (0, 3)), so that test fails and reports them rather than hiding
them behind a looser tolerance.  Everything else passes.
"""

import pytest

from squarefull.suites import SUITES, SuiteResult


def _report(res: SuiteResult, label: str, time_limit: float | None = None) -> None:
    print(f"\n{'PASS' if res.ok else 'FAIL'} {label}: {res.checked} checks, {res.elapsed:.1f}s")
    for note in res.notes:
        print(f"    {note}")
    for failure in res.failures[:4]:
        print(f"    counterexample: {failure}")
    if time_limit is not None:
        assert res.elapsed < time_limit, f"{label} exceeded {time_limit}s"
    assert res.ok, f"{label}: {res.failures[:3]}"


def test_criterion_01_full_period_sums():
    _report(SUITES["full-sum"](), "criterion 1 (full-period sums are phi)", time_limit=10.0)


def test_criterion_02_weil_bound():
    _report(
        SUITES["weil"](),
        "criterion 2 (constant-2 square-root bound, exhaustive p <= 300)",
        time_limit=120.0,
    )


def test_criterion_03_prime_power_bounds():
    _report(SUITES["prime-power-bounds"](), "criterion 3 (prime-power bounds)")


def test_criterion_04_reciprocity():
    _report(SUITES["reciprocity"](), "criterion 4 (multiplicative splitting)")


def test_criterion_05_stationary_phase():
    _report(SUITES["stationary"](), "criterion 5 (stationary-phase evaluator)")


def test_criterion_06_constants():
    _report(SUITES["constants"](), "criterion 6 (constants vs zeta, twist invariance)")


def test_criterion_07_mobius_identity():
    _report(SUITES["mobius"](), "criterion 7 (exact Moebius identity)", time_limit=60.0)


def test_criterion_08_oracle_equivalence():
    _report(SUITES["oracles"](), "criterion 8 (counters equal brute-force oracles)")


def test_criterion_09_tiling():
    _report(SUITES["tiling"](), "criterion 9 (exact tiling + fault injection)")


def test_criterion_10_frozen_bounds():
    _report(SUITES["frozen-bounds"](), "criterion 10 (frozen normalized residuals)")


def test_criterion_11_full_box():
    _report(SUITES["full-box"](), "criterion 11 (full boxes hold phi points)")
