import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from harmspec import geometry as geo
from harmspec import opgroup as og
from harmspec.suites import closed_set_suite, membership_matrix_suite


def test_limit_membership_examples():
    G = og.MatrixGenerator(np.diag([1j, 2j]))
    F = og.ClosedRealSet.from_string("[1,1]")
    assert og.limit_membership(G, F, np.array([1.0, 0.0])).member is True
    res = og.limit_membership(G, F, np.array([0.0, 1.0]))
    assert res.member is False
    # the decisive frequency is the excluded height 2
    decisive = [ev for ev in res.evidence if ev.verdict == "diverges"]
    assert any(abs(ev.beta - 2.0) < 1e-12 for ev in decisive)
    assert og.limit_membership(G, F, np.zeros(2)).member is True


def test_bounded_membership_scalar_model():
    G = og.MatrixGenerator(np.array([[0.0]], dtype=complex))
    F = og.ClosedRealSet.from_string("[1,2]")
    x = np.array([1.0], dtype=complex)
    res = og.bounded_membership(G, F, x, rng=np.random.default_rng(0))
    assert res.member is True
    for ev in res.evidence:
        assert abs(ev.sup - 1.0 / abs(ev.beta)) <= 1e-9 / abs(ev.beta)
    # ... while the spectral subspace excludes x: the boundedness test
    # cannot see the point mass at 0 from off-spectrum frequencies
    assert not og.spectral_subspace(G, F).contains_vector(x)


def test_bounded_membership_member_and_zero():
    G = og.MatrixGenerator(np.diag([1j, 2j]))
    F = og.ClosedRealSet.from_string("[1,2]")
    assert og.bounded_membership(G, F, np.array([1.0, 1.0])).member is True
    assert og.bounded_membership(G, F, np.zeros(2)).member is True


def test_limit_equivalence_minisweep():
    mats = membership_matrix_suite()[:4]
    fsets = closed_set_suite()[2:5]
    for mi, G in enumerate(mats):
        for fi, F in enumerate(fsets):
            rng = np.random.default_rng(100 * mi + fi)
            X = og.spectral_subspace(G, F)
            for v in og.membership_suite_vectors(G.n, rng, n_random=4):
                got = og.limit_membership(G, F, v, rng=rng).member
                assert got is X.contains_vector(v)


def test_resolvent_region_transport():
    # decay along the vertical schedule transports to the full approach
    # region with h(t) = t^{a+1}
    cases = [(og.MatrixGenerator(np.diag([1j, 2j])), 1.0),
             (og.MatrixGenerator.from_jordan_spec([(1.0, 2), (-1.0, 1)]), 2.0),
             (og.MatrixGenerator.from_jordan_spec([(0.0, 3)]), 3.0)]
    for G, power in cases:
        x = np.zeros(G.n, dtype=complex)
        x[0] = 1.0
        beta = 4.0          # off the spectrum, so the limit is zero
        h = geo.ApproachFunction.linear(1.0) if power == 1.0 \
            else geo.ApproachFunction.power(power)
        path = geo.approach_path(geo.HalfPlaneRegion(h, beta), 18)
        norms = [np.linalg.norm(og.D_op(G, float(z.imag), float(z.real)) @ x)
                 for z in path]
        assert norms[-1] <= 1e-4
        assert all(b <= a * 1.01 + 1e-15 for a, b in zip(norms, norms[1:]))


def test_triangular_group_examples():
    Z = np.zeros((2, 2), dtype=complex)
    B = np.array([[1.0, 2.0], [0.0, -1.0]], dtype=complex)
    T = og.triangular_group(Z, Z, B, 1.5)
    assert_allclose(T[:2, 2:], 1.5 * B, atol=1e-12)
    assert_allclose(T[:2, :2], np.eye(2), atol=1e-12)

    T = og.triangular_group(np.array([[1j]]), np.array([[-1j]]),
                            np.array([[1.0]]), 2.0)
    assert abs(T[0, 1] - math.sin(2.0)) <= 1e-10


def test_triangular_group_matches_block_exponential():
    rng = np.random.default_rng(6)
    for n in (2, 3):
        H1 = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        H2 = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        A1 = 1j * (H1 + H1.conj().T) / 2
        A2 = 1j * (H2 + H2.conj().T) / 2
        B = rng.standard_normal((n, n))
        t = 0.8
        block = np.block([[A1, B], [np.zeros((n, n)), A2]])
        G = og.MatrixGenerator(block)
        got = og.triangular_group(A1, A2, B, t)
        want = og.group_at(G, t)
        assert np.linalg.norm(got - want) <= 1e-8
        # off-diagonal coupling of bounded groups grows at most linearly
        _, a = og.growth_exponent(G)
        assert a <= 1.05


def test_poisson_identity_examples():
    G = og.MatrixGenerator(np.array([[1.0j]]))
    lhs, rhs = og.poisson_identity_selfadjoint(G, np.array([1.0]), 1.0, 0.0)
    assert abs(lhs - 1.0) <= 1e-12 and abs(rhs - 1.0) <= 1e-12

    G2 = og.MatrixGenerator(np.diag([1j, 3j]))
    x = np.array([1.0, 1.0]) / math.sqrt(2.0)
    lhs, rhs = og.poisson_identity_selfadjoint(G2, x, 0.5, 3.0)
    expect = 2 * 0.5 * (0.5 / (0.25 + 4.0) + 0.5 / 0.25)
    assert abs(lhs - expect) <= 1e-12
    assert abs(rhs - expect) <= 1e-12

    with pytest.raises(og.PreconditionError):
        og.poisson_identity_selfadjoint(
            og.MatrixGenerator(np.array([[0.0, 1.0], [0.0, 0.0]])),
            np.array([1.0, 0.0]), 1.0, 0.0)


def test_poisson_identity_kernel_decay():
    G = og.MatrixGenerator(np.diag([1j, 3j]))
    x = np.array([1.0, 0.0])     # mass at height 1 only
    vals = [og.poisson_identity_selfadjoint(G, x, a, 40.0)[1]
            for a in (0.5, 0.05, 0.005)]
    assert vals[0] > vals[1] > vals[2]
    assert vals[2] <= 1e-4


def test_distribution_pairing_scalar():
    G = og.MatrixGenerator(np.array([[0.0]], dtype=complex))
    pr = og.distribution_pairing(G, og.TestFunction.gaussian(0.0, 1.0), 1.0)
    assert pr.discrepancy <= 1e-8


def test_distribution_pairing_small_alpha():
    G = og.MatrixGenerator(np.array([[1.0j]]))
    pr = og.distribution_pairing(G, og.TestFunction.gaussian(1.0, 1.0), 0.01)
    assert pr.discrepancy <= 1e-6


def test_distribution_pairing_zero_alpha_hermitian():
    rng = np.random.default_rng(9)
    H = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    G = og.MatrixGenerator(1j * (H + H.conj().T) / 2)
    f = og.TestFunction.bump(-1.0, 1.0, order=6)   # even, real
    pr = og.distribution_pairing(G, f, 0.0, t_horizon=250.0)
    P = pr.time_side
    assert pr.frequency_side is None
    assert np.linalg.norm(P - P.conj().T) <= 1e-6 * max(1.0, np.linalg.norm(P))


def test_test_function_transforms():
    f = og.TestFunction.gaussian(0.5, 2.0)
    ts = np.linspace(-3, 3, 7)
    # closed form against direct quadrature
    ss = np.linspace(-20, 21, 40001)
    integrand = f(ss)[None, :] * np.exp(-1j * np.outer(ts, ss))
    direct = np.sum(0.5 * (integrand[:, 1:] + integrand[:, :-1])
                    * np.diff(ss)[None, :], axis=1)
    assert_allclose(f.transform(ts), direct, atol=1e-7)
    g = og.TestFunction.bump(-1.0, 2.0, order=4)
    assert g(0.5) > 0 and g(-1.0) == 0.0 and g(2.0) == 0.0
