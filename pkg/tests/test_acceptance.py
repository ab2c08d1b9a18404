"""Acceptance gate: one test per criterion, each printing a pass/fail line.

Run with ``pytest tests/test_acceptance.py -v -s`` (or ``harmspec suite all``
for the CLI view of the same bundle).
"""

import pytest

from harmspec import suites


def _report(result):
    status = "PASS" if result.passed else "FAIL"
    print(f"ACCEPTANCE {result.cid:>2} {result.name}: {status} "
          f"({result.elapsed:.2f}s) {result.details}")
    assert result.passed, f"criterion {result.cid}: {result.details}"


def test_criterion_01_resolvent_identity_suite():
    res = suites.criterion_1()
    _report(res)
    assert res.details["worst_residual"] <= 1e-10
    assert res.elapsed <= 10.0


def test_criterion_02_limit_equivalence():
    res = suites.criterion_2()
    _report(res)
    assert res.details["disagreements"] == 0
    assert res.details["inconclusive"] == 0
    assert res.details["matrices"] >= 12
    assert res.details["sets"] >= 6
    assert res.elapsed <= 60.0


def test_criterion_03_boundedness_necessity():
    res = suites.criterion_3()
    _report(res)
    assert res.details["member_bounded"] is True
    assert res.details["member_spectral"] is False
    assert res.details["worst_sup_rel_err"] <= 1e-9


def test_criterion_04_range_intersections():
    res = suites.criterion_4()
    _report(res)
    assert res.details["power1_dimension_gap"] == 1


def test_criterion_05_kernel_pairings():
    res = suites.criterion_5()
    _report(res)
    assert res.details["worst_quadratic_err"] <= 1e-10
    assert res.details["worst_pairing_discrepancy"] <= 1e-6
    assert res.elapsed <= 30.0


def test_criterion_06_transform_vs_resolvent():
    res = suites.criterion_6()
    _report(res)


def test_criterion_07_singular_series_example():
    res = suites.criterion_7()
    _report(res)
    assert res.details["stability"] <= 0.20
    assert abs(res.details["exponent"] - 2.0) <= 0.1


def test_criterion_08_wedge_construction():
    res = suites.criterion_8()
    _report(res)
    assert res.details["boundary_vanish"] <= 1e-3
    assert res.details["limit_decision"] == "tends-to-zero"
    assert res.details["mvp_worst"] <= 1e-4
    assert res.details["witness"] >= 1e-2


def test_criterion_09_majorant_summability():
    res = suites.criterion_9()
    _report(res)
    assert res.details["rel_err_pow1"] <= 1e-6
    assert res.details["rel_err_pow2"] <= 1e-6


def test_criterion_10_measure_bands_and_sector():
    res = suites.criterion_10()
    _report(res)
    assert res.details["rejected_delta_at_n"] == 1


def test_criterion_11_geometry():
    res = suites.criterion_11()
    _report(res)
    assert res.details["worst_roundtrip"] <= 1e-12


def test_suite_bundles_cover_all_criteria():
    covered = set()
    for name, cids in suites.SUITES.items():
        if name != "all":
            covered.update(cids)
    assert covered == set(range(1, 12))
    assert set(suites.SUITES["all"]) == set(range(1, 12))
