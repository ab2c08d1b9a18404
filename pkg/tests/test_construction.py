"""Checks for the wedge cut-off construction on the rectangle.

The expensive grid=400 build is shared (cached) with the acceptance suite.
"""

import math

import numpy as np
import pytest

from harmspec import geometry as geo
from harmspec import harmonic as ha
from harmspec.construction import (HalfPlaneConstruction, ParameterRangeError,
                                   ResolutionError,
                                   build_counterexample_halfplane)
from harmspec.suites import shared_construction


@pytest.fixture(scope="module")
def u400():
    return shared_construction()


def test_parameter_validation():
    with pytest.raises(ParameterRangeError):
        HalfPlaneConstruction(1.0, 0.1, 0.5)          # gamma out of range
    with pytest.raises(ParameterRangeError):
        HalfPlaneConstruction(2.0, -0.1, 0.5)
    with pytest.raises(ParameterRangeError):
        HalfPlaneConstruction(1.5, 0.1, 0.3)          # delta <= 2 - gamma
    with pytest.raises(ParameterRangeError):
        HalfPlaneConstruction(2.0, 0.1, 1.0)
    with pytest.raises(ResolutionError):
        HalfPlaneConstruction(2.0, 0.1, 0.5, grid=32)


def test_f0_real_on_positive_axis(u400):
    xs = np.linspace(0.01, 0.99, 23)
    assert np.abs(u400.f0(xs + 0.0j).imag).max() == 0.0


def test_f0_exponential_bound_in_rectangle(u400):
    rng = np.random.default_rng(1)
    x = rng.uniform(1e-3, 0.99, 500)
    y = rng.uniform(1e-3, 0.99, 500)
    z = x + 1j * y
    assert np.all(np.abs(u400.f0(z)) <= np.exp(u400.eps / y) * (1 + 1e-12))


def test_f0_decay_on_wedge_curve(u400):
    # on x = 1.5 y^gamma the modulus decays like exp(-c |z|^{-delta});
    # c = 0.3 is a safe lower constant for these parameters
    ys = np.geomspace(0.01, 0.2, 12)
    z = 1.5 * ys ** u400.gamma + 1j * ys
    logf = np.log(np.abs(u400.f0(z)))
    assert np.all(logf <= -0.3 * np.abs(z) ** (-u400.delta))


def test_f2_piecewise_identities(u400):
    ys = np.linspace(0.05, 0.7, 9)
    below = 0.5 * ys ** u400.gamma + 1j * ys
    above = 2.5 * ys ** u400.gamma + 1j * ys
    above = above[above.real < 1.0]
    assert np.abs(u400.f2(below)).max() == 0.0
    assert np.abs(u400.f2(above) - u400.f0(above)).max() == 0.0
    # the ramp is C^2: values interpolate between 0 and f0
    mid = 1.5 * ys ** u400.gamma + 1j * ys
    ratio = np.abs(u400.f2(mid)) / np.abs(u400.f0(mid))
    assert np.all((ratio > 0.4) & (ratio < 0.6))      # smoothstep at midpoint


def test_dbar_f2_support(u400):
    ys = np.linspace(0.05, 0.5, 7)
    inside = 1.5 * ys ** u400.gamma + 1j * ys
    outside = np.concatenate([0.5 * ys ** u400.gamma + 1j * ys,
                              2.5 * ys ** u400.gamma + 1j * ys])
    assert np.abs(u400.dbar_f2(inside)).min() > 0.0
    assert np.abs(u400.dbar_f2(outside)).max() == 0.0


def test_dbar_f2_matches_finite_differences(u400):
    h = 1e-6
    for z0 in (1.5 * 0.3 ** 2 + 0.3j, 1.4 * 0.5 ** 2 + 0.5j):
        dx = (u400.f2(z0 + h) - u400.f2(z0 - h)) / (2 * h)
        dy = (u400.f2(z0 + 1j * h) - u400.f2(z0 - 1j * h)) / (2 * h)
        fd = (dx + 1j * dy) / 2.0
        exact = u400.dbar_f2(z0)
        assert abs(fd - exact) <= 1e-5 * max(1.0, abs(exact))


def test_cauchy_transform_repairs_dbar(u400):
    # d-bar of f3 equals d-bar of f2 inside the wedge (finite differences)
    z0 = 1.5 * 0.4 ** 2 + 0.4j
    h = 1e-3
    dx = (u400.f3(z0 + h) - u400.f3(z0 - h)) / (2 * h)
    dy = (u400.f3(z0 + 1j * h) - u400.f3(z0 - 1j * h)) / (2 * h)
    fd = (dx + 1j * dy) / 2.0
    exact = u400.dbar_f2(z0)
    assert abs(fd - exact) <= 0.05 * abs(exact)


def test_f3_value_against_adaptive_quadrature(u400):
    # independent oracle: nested adaptive quadrature of the transform in
    # (y, t) wedge coordinates, real and imaginary parts separately
    import scipy.integrate

    z0 = -0.4 + 0.3j      # away from the wedge: smooth integrand
    g = u400.gamma

    def integrand(t, y, take):
        zeta = t * y ** g + 1j * y
        val = complex(u400.dbar_f2(np.array([zeta]))[0]) * y ** g / (z0 - zeta)
        return val.real if take == "re" else val.imag

    y_lo, y_hi = u400.y_floor, 1.25 ** (-1.0 / g)
    t_hi = lambda y: min(1.75, y ** -g)
    re, _ = scipy.integrate.dblquad(integrand, y_lo, y_hi, lambda y: 1.25,
                                    t_hi, args=("re",), epsabs=1e-10)
    im, _ = scipy.integrate.dblquad(integrand, y_lo, y_hi, lambda y: 1.25,
                                    t_hi, args=("im",), epsabs=1e-10)
    oracle = (re + 1j * im) / math.pi
    assert abs(u400.f3(z0) - oracle) <= 1e-6


def test_polygon_kernel_against_brute_force():
    square = [complex(-1, -1), complex(1, -1), complex(1, 1), complex(-1, 1)]
    z0 = 0.3 + 0.2j
    K = HalfPlaneConstruction._quad_kernel(z0, square)
    n = 1200
    xs = np.linspace(-1, 1, n, endpoint=False) + 1.0 / n
    X, Y = np.meshgrid(xs, xs)
    brute = np.sum(1.0 / (z0 - (X + 1j * Y))) * (2.0 / n) ** 2
    assert abs(K - brute) <= 1e-10


def test_u_vanishes_on_bottom_edge(u400):
    xs = np.concatenate([-np.linspace(0.05, 0.95, 15),
                         np.linspace(0.05, 0.95, 15)])
    vals = np.abs(u400(xs + 1e-4j))
    assert vals.max() <= 1e-3


def test_u_limit_along_wedge_region(u400):
    region = geo.HalfPlaneRegion(geo.ApproachFunction.power(u400.gamma), 0.0)
    v = ha.boundary_limit(u400, region, n_points=22, tol=1e-3)
    assert v.decision == "tends-to-zero"


def test_u_is_not_the_zero_function(u400):
    rng = np.random.default_rng(3)
    zz = rng.uniform(0.05, 0.95, 300) + 1j * rng.uniform(0.05, 0.95, 300)
    assert np.abs(u400(zz)).max() >= 1e-2


def test_u_growth_bound(u400):
    rng = np.random.default_rng(9)
    zz = rng.uniform(-0.95, 0.95, 400) + 1j * rng.uniform(2e-3, 0.95, 400)
    ratio = np.abs(u400(zz)) / (1.0 + np.exp(u400.eps / zz.imag))
    assert ratio.max() <= 5.0


def test_mean_value_property_away_from_wedge(u400):
    rng = np.random.default_rng(5)
    worst = 0.0
    count = 0
    while count < 40:
        z = complex(rng.uniform(-0.95, 0.95), rng.uniform(0.05, 0.95))
        rho = 0.5 * min(1.0 - abs(z.real), z.imag, 1.0 - z.imag)
        if rho < 0.02 or u400.wedge_distance(z) < rho + 0.05:
            continue
        worst = max(worst, ha.mean_value_residual(u400, z, rho))
        count += 1
    assert worst <= 1e-6 + u400.mvp_tolerance()


def test_growth_class_of_construction(u400):
    # the envelope fit window is capped below by float range (the comparison
    # function reaches exp(700) near y ~ 1e-4), which biases the fitted
    # exponent above 1; the normalized rate stays within the eps budget
    ys = np.geomspace(1.1e-4, 2e-3, 26)
    prof = ha.envelope(u400, ys, resolution=384)
    cls = ha.classify_growth(prof, window=0.1)
    assert cls.tag == "exp"
    assert 0.9 <= cls.exponent <= 1.45
    rate = np.max(ys * np.log(np.maximum(prof.M_abs, 1.0)))
    assert rate <= u400.eps + 0.02


def test_evaluation_domain_errors(u400):
    with pytest.raises(ha.DomainError):
        u400(1.5 + 0.5j)
    with pytest.raises(ha.DomainError):
        u400(0.0 + 0.0j)


def test_config_roundtrip(u400):
    text = u400.to_config()
    fields = dict(line.split("=") for line in text.strip().splitlines())
    assert float(fields["gamma"]) == u400.gamma
    assert float(fields["eps"]) == u400.eps
    assert float(fields["delta"]) == u400.delta
    assert int(fields["grid"]) == u400.grid
    with pytest.raises(ha.HarmonicError):
        HalfPlaneConstruction.from_config("gamma=2\nbogus=1\n")
    small = build_counterexample_halfplane(2.0, 0.1, 0.5, grid=64)
    again = HalfPlaneConstruction.from_config(small.to_config())
    assert (again.gamma, again.eps, again.delta, again.grid) == \
        (small.gamma, small.eps, small.delta, small.grid)
