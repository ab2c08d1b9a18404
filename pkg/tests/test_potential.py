import math

import numpy as np
import pytest

from harmspec import potential as pot


# ----------------------------------------------------------------- majorants

def test_inverse_conventions():
    w = pot.Majorant.constant(5.0)
    assert w.inverse(5.0) == 0.0
    assert w.inverse(4.9) == 2.0
    w = pot.Majorant.power_law(1.0)
    assert w.inverse(20.0) == pytest.approx(0.05)
    assert w.inverse(0.5) == 2.0
    w = pot.Majorant.exp_law(1.0)
    assert w.inverse(math.exp(10.0)) == pytest.approx(0.1)
    assert w.inverse(1.0) == 2.0


def test_inverse_is_nonincreasing_and_consistent():
    ws = [pot.Majorant.constant(3.0), pot.Majorant.power_law(2.0),
          pot.Majorant.exp_law(0.5),
          pot.Majorant.custom([0.1, 0.5, 1.0, 1.5], [40.0, 10.0, 2.0, 1.0])]
    ss = np.geomspace(0.5, 1e6, 40)
    for w in ws:
        inv = [w.inverse(s) for s in ss]
        assert all(a >= b - 1e-15 for a, b in zip(inv, inv[1:]))
        for s, y in zip(ss, inv):
            if 0.0 < y < 2.0:
                # w(w^{-1}(s)) <= s at points where the inverse is interior
                assert w.value(y) <= s * (1 + 1e-9)


def test_majorant_validation():
    with pytest.raises(pot.PotentialError):
        pot.Majorant.constant(0.5)
    with pytest.raises(pot.PotentialError):
        pot.Majorant.custom([0.5, 0.1], [2.0, 1.0])
    with pytest.raises(pot.PotentialError):
        pot.Majorant.custom([0.1, 0.5], [1.0, 2.0])


def test_parse_majorant_literal(tmp_path):
    assert pot.parse_majorant_literal("const:4").kind == "const"
    assert pot.parse_majorant_literal("pow:2").p == 2.0
    t = tmp_path / "w.txt"
    t.write_text("0.1 30\n1.0 5\n1.9 1\n")
    assert pot.parse_majorant_literal(f"custom:{t}").kind == "custom"
    with pytest.raises(pot.PotentialError):
        pot.parse_majorant_literal("pow")


# -------------------------------------------------------------- domar bound

def test_domar_constant_all_terms_vanish():
    chk = pot.domar_check(pot.Majorant.constant(1.0), 1.0)
    assert chk.passed and chk.total == 0.0 and chk.bound == 2.0


def test_domar_pow1_exact_threshold():
    # sum_k (2^k * 20)^{-1} = 1/10 exactly
    chk = pot.domar_check(pot.Majorant.power_law(1.0), 20.0)
    assert chk.passed
    assert chk.total == pytest.approx(0.1, abs=1e-9)
    assert chk.bound == pytest.approx(40.0)


def test_domar_exp_law_divergent():
    chk = pot.domar_check(pot.Majorant.exp_law(1.0), 1.0)
    assert not chk.passed
    assert chk.crossing_index is not None
    # terms 1/(k log 2 + log T) really do cross the budget
    terms = [1.0 / (k * math.log(2.0)) for k in range(1, chk.crossing_index + 2)]
    assert sum(terms[: chk.crossing_index]) <= 2.1  # sanity on the scale


def test_domar_minimal_T_pow1():
    found = pot.domar_minimal_T(pot.Majorant.power_law(1.0))
    assert found.T_star == pytest.approx(20.0, rel=1e-6)
    assert not found.degenerate_zero_sum


def test_domar_minimal_T_pow2_closed_form():
    ref = (10.0 / (1.0 - 2.0 ** -0.5)) ** 2
    found = pot.domar_minimal_T(pot.Majorant.power_law(2.0))
    assert found.T_star == pytest.approx(ref, rel=1e-6)


def test_domar_minimal_T_degenerate_constant():
    found = pot.domar_minimal_T(pot.Majorant.constant(1.0))
    assert found.T_star == pytest.approx(1.0, rel=1e-6)
    assert found.degenerate_zero_sum


def test_domar_minimal_T_failure_value():
    assert pot.domar_minimal_T(pot.Majorant.exp_law(1.0)) is None


def test_domar_pass_monotone_in_T():
    rng = np.random.default_rng(7)
    for _ in range(25):
        w = pot.Majorant.power_law(float(rng.uniform(0.3, 3.0)))
        T1 = float(10.0 ** rng.uniform(0, 5))
        T2 = T1 * float(rng.uniform(1.0, 50.0))
        if pot.domar_check(w, T1).passed:
            assert pot.domar_check(w, T2).passed


def test_domar_invalid_T():
    with pytest.raises(pot.PotentialError):
        pot.domar_check(pot.Majorant.constant(2.0), 0.0)


# -------------------------------------------------------- carleman estimate

def test_canonical_width_shape():
    w = pot.WidthFunction.canonical(3.0)
    assert w.value(1.0) == pytest.approx(math.exp(2.0))   # constant part
    xs = np.geomspace(math.exp(3.0) * 1.01, 1e6, 25)
    vals = np.asarray(w.value(xs))
    assert np.all(vals > 0) and np.all(vals <= xs)


def test_carleman_unit_width():
    cb = pot.carleman_measure_bound(pot.WidthFunction.from_callable(lambda r: r),
                                    1.0, math.e)
    assert cb.value == pytest.approx(8.0 / math.pi * math.exp(-math.pi), rel=1e-9)


def test_carleman_empty_interval():
    cb = pot.carleman_measure_bound(pot.WidthFunction.canonical(10.0), 3.0, 3.0)
    assert cb.value == pytest.approx(8.0 / math.pi)


def test_carleman_band_inequality():
    for n in (2, 3, 4):
        cb = pot.carleman_band_bound(10.0, n)
        assert cb.log_value <= -10.0 * math.exp((n - 1) ** 2)


def test_carleman_monotone_in_endpoints():
    w = pot.WidthFunction.canonical(5.0)
    v1 = pot.carleman_measure_bound(w, 10.0, 100.0)
    v2 = pot.carleman_measure_bound(w, 10.0, 300.0)
    v3 = pot.carleman_measure_bound(w, 30.0, 300.0)
    assert v2.log_value <= v1.log_value      # non-increasing in r2
    assert v3.log_value >= v2.log_value      # non-decreasing in r1
    assert v1.value <= 8.0 / math.pi


def test_carleman_quadrature_stability():
    w = pot.WidthFunction.canonical(7.0)
    a = pot.carleman_measure_bound(w, 2.0, 500.0, rel_tol=1e-9)
    b = pot.carleman_measure_bound(w, 2.0, 500.0, rel_tol=1e-12)
    assert abs(a.integral - b.integral) <= 1e-8 * abs(b.integral)


def test_carleman_needs_positive_width():
    shrinking = pot.WidthFunction.from_callable(lambda r: r - 2.0)
    with pytest.raises(pot.PotentialError):
        pot.carleman_measure_bound(shrinking, 1.0, 3.0)


# ------------------------------------------------------- sector certificate

def test_sector_certified():
    cert = pot.sector_certificate(0.5, 0.003, 50, 6, 10.0 + 0.0j)
    assert cert.certified
    assert cert.total <= 3.0
    assert cert.final_term <= 1.0
    assert sum(t for _, t in cert.middle_terms) <= 1.0
    assert all(ok for *_, ok in cert.omega_checks)


def test_sector_rejects_large_delta():
    with pytest.raises(pot.ParameterError) as info:
        pot.sector_certificate(0.5, 10.0, 50, 6)
    assert info.value.n == 1


def test_sector_single_band_reduces():
    # M = 1: empty middle sum, bound is 1 + the single closing term
    cert = pot.sector_certificate(0.5, 0.003, 50, 1, 10.0 + 0.0j)
    assert cert.middle_terms == ()
    assert cert.total == pytest.approx(1.0 + cert.final_term)


def test_sector_total_nonincreasing_in_N():
    totals = [pot.sector_certificate(0.5, 0.003, N, 6, 10.0 + 0.0j).total
              for N in (40, 50, 60, 80)]
    assert all(a >= b - 1e-12 for a, b in zip(totals, totals[1:]))


def test_sector_geometric_threshold():
    with pytest.raises(pot.PotentialError):
        pot.sector_certificate(0.5, 0.003, 5, 4, 1e6 + 0.0j)
