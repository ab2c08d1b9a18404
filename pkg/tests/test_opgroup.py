import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from harmspec import opgroup as og
from harmspec.suites import operator_matrix_suite


# ------------------------------------------------------- parsing and types

def test_matrix_text_roundtrip():
    A = np.array([[0.0, 1.0], [0.5j, -1.0 + 2.0j]])
    B = og.parse_matrix_text(og.format_matrix_text(A))
    assert_allclose(A, B)


def test_matrix_text_errors():
    with pytest.raises(og.OpGroupError):
        og.parse_matrix_text("n=2\nre=0 0 0\nim=0 0 0 0\n")
    with pytest.raises(og.OpGroupError):
        og.parse_matrix_text("n=2\nre=0 0 0 0\n")
    with pytest.raises(og.OpGroupError):
        og.parse_matrix_text("garbage")


def test_jordan_literal():
    G = og.MatrixGenerator.from_jordan_spec("jordan:[(0,2),(1.5,1)]")
    assert G.n == 3
    assert_allclose(G.A[0, 1], 1.0)
    assert_allclose(G.A[2, 2], 1.5j)
    with pytest.raises(og.OpGroupError):
        og.MatrixGenerator.from_jordan_spec("jordan:[(0,")


def test_closed_set_parsing():
    F = og.ClosedRealSet.from_string("[-inf,0]u[2,3.5]")
    assert F.contains(-100.0) and F.contains(0.0) and F.contains(2.0)
    assert not F.contains(1.0) and not F.contains(3.6)
    assert str(F) == "[-inf,0]u[2,3.5]"
    assert og.ClosedRealSet.from_string(str(F)).intervals == F.intervals
    assert og.ClosedRealSet.from_string("empty").intervals == ()
    # touching intervals merge
    F2 = og.ClosedRealSet.from_intervals([(0, 1), (1, 2)])
    assert F2.intervals == ((0.0, 2.0),)
    gaps = og.ClosedRealSet.from_string("[0,1]").complement_intervals()
    assert gaps == [(-math.inf, 0.0), (1.0, math.inf)]


def test_closed_set_complement_consistency():
    rng = np.random.default_rng(17)
    F = og.ClosedRealSet.from_string("[-inf,-2]u[0,1]u[4,4]")
    gaps = F.complement_intervals()
    for _ in range(500):
        x = float(rng.uniform(-10, 10))
        in_gap = any(a < x < b for a, b in gaps)
        assert F.contains(x) == (not in_gap)


def test_subspace_basics():
    S = og.Subspace.from_span(np.array([[1.0, 2.0], [0.0, 0.0], [1.0, 2.0]]))
    assert S.dim == 1
    assert S.contains_vector(np.array([3.0, 0.0, 3.0]))
    assert not S.contains_vector(np.array([1.0, 0.0, 0.0]))
    full = og.Subspace.full(3)
    zero = og.Subspace.zero(3)
    assert full.intersect(S).equals(S)
    assert zero.intersect(S).dim == 0
    assert S.equals(og.Subspace.from_span(np.array([[1.0], [0.0], [1.0]])))


# -------------------------------------------------------- spectral calculus

def test_spectral_resolution_suite():
    for G in operator_matrix_suite():
        assert G.spectral.residual <= 1e-10
        total = sum(G.spectral.projections)
        assert_allclose(total, np.eye(G.n), atol=1e-10)
        for N, m in zip(G.spectral.nilpotents, G.spectral.indices):
            assert np.linalg.norm(np.linalg.matrix_power(N, int(m))) <= 1e-9


def test_group_examples():
    G0 = og.MatrixGenerator(np.array([[0.0]], dtype=complex))
    assert_allclose(og.group_at(G0, 7.0), [[1.0]])
    GJ = og.MatrixGenerator.from_jordan_spec([(0.0, 2)])
    t = 2.75
    assert_allclose(og.group_at(GJ, t), [[1.0, t], [0.0, 1.0]], atol=1e-14)
    GD = og.MatrixGenerator(np.diag([1j, -1j]))
    assert_allclose(og.group_at(GD, math.pi), -np.eye(2), atol=1e-12)


def test_group_law():
    rng = np.random.default_rng(8)
    for G in operator_matrix_suite()[:8]:
        for _ in range(4):
            t, s = rng.uniform(-100, 100, 2)
            lhs = og.group_at(G, t) @ og.group_at(G, s)
            rhs = og.group_at(G, t + s)
            assert np.linalg.norm(lhs - rhs) <= 1e-9 * max(
                1.0, np.linalg.norm(rhs))


def test_growth_exponent_examples():
    rng = np.random.default_rng(1)
    H = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    G = og.MatrixGenerator(1j * (H + H.conj().T) / 2)
    M, a = og.growth_exponent(G)
    assert a <= 0.05 and M <= 1.01
    M, a = og.growth_exponent(og.MatrixGenerator.from_jordan_spec([(0.0, 2)]))
    assert 0.95 <= a <= 1.05
    M, a = og.growth_exponent(og.MatrixGenerator.from_jordan_spec([(1.0, 3)]))
    assert 1.9 <= a <= 2.1


def test_growth_exponent_rejects_off_axis():
    G = og.MatrixGenerator(np.array([[1.0]], dtype=complex))
    with pytest.raises(og.ExponentialGrowthError):
        og.growth_exponent(G)


def test_resolvent_examples():
    G0 = og.MatrixGenerator(np.array([[0.0]], dtype=complex))
    assert_allclose(og.resolvent(G0, 2.0), [[0.5]])
    GJ = og.MatrixGenerator.from_jordan_spec([(0.0, 2)])
    lam = 0.7 - 0.2j
    assert_allclose(og.resolvent(GJ, lam),
                    [[1 / lam, 1 / lam ** 2], [0.0, 1 / lam]], atol=1e-13)
    with pytest.raises(og.SingularityError):
        og.resolvent(GJ, 0.0)


def test_resolvent_identity():
    rng = np.random.default_rng(4)
    for G in operator_matrix_suite()[:6]:
        lam = complex(rng.uniform(0.2, 2), rng.uniform(-2, 2))
        mu = complex(-rng.uniform(0.2, 2), rng.uniform(-2, 2))
        R1, R2 = og.resolvent(G, lam), og.resolvent(G, mu)
        resid = np.linalg.norm(R1 - R2 - (mu - lam) * R1 @ R2)
        assert resid <= 1e-10 * max(1.0, np.linalg.norm(R1 @ R2))


def test_resolvent_growth_bound_constant():
    # ||R(lambda)|| * |Re lambda|^{a+1} stays bounded on the grid; the
    # constant is reported, not asserted against any particular value
    G = og.MatrixGenerator.from_jordan_spec([(0.0, 2)])
    _, a = og.growth_exponent(G)
    consts = []
    for re in np.logspace(-3, 0, 12):
        for im in (-2.0, 0.0, 1.0):
            lam = complex(re, im)
            consts.append(np.linalg.norm(og.resolvent(G, lam), 2)
                          * abs(re) ** (a + 1.0))
    assert np.isfinite(max(consts))


def test_carleman_quadrature_examples():
    G0 = og.MatrixGenerator(np.array([[0.0]], dtype=complex))
    ct = og.carleman_quadrature(G0, 1.0)
    assert abs(ct.matrix[0, 0] - 1.0) <= ct.tail_bound + ct.quad_error + 1e-10
    Gi = og.MatrixGenerator(np.array([[1.0j]]))
    ct = og.carleman_quadrature(Gi, 1.0)
    assert abs(ct.matrix[0, 0] - 1.0 / (1.0 - 1.0j)) <= 1e-9
    GJ = og.MatrixGenerator.from_jordan_spec([(0.0, 2)])
    ct = og.carleman_quadrature(GJ, 0.5)
    assert_allclose(ct.matrix, [[2.0, 4.0], [0.0, 2.0]], atol=1e-8)
    with pytest.raises(og.OpGroupError):
        og.carleman_quadrature(G0, -1.0)


def test_d_op_examples():
    G0 = og.MatrixGenerator(np.array([[0.0]], dtype=complex))
    assert_allclose(og.D_op(G0, 0.5, 0.0), [[4.0]], atol=1e-14)
    Gi = og.MatrixGenerator(np.array([[1.0j]]))
    assert_allclose(og.D_op(Gi, 1.0, 0.0), [[1.0]], atol=1e-14)


def test_d_identities_on_grid():
    rng = np.random.default_rng(12)
    H = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
    V = np.eye(6) + 0.2 * rng.standard_normal((6, 6))
    heights = rng.uniform(-3, 3, 6)
    G = og.MatrixGenerator(V @ np.diag(1j * heights) @ np.linalg.inv(V))
    I = np.eye(6)
    for a in np.logspace(-6, 0, 7):
        for b in np.linspace(-10, 10, 9):
            R1 = og.resolvent(G, a + 1j * b)
            R2 = og.resolvent(G, -a + 1j * b)
            D = R1 - R2
            opscale = np.linalg.norm(R1) + np.linalg.norm(R2)
            assert np.linalg.norm(D - og.d_op_factored(G, a, b)) \
                <= 1e-10 * opscale
            lhs = (G.A - 1j * b * I) @ D
            rhs = a * (R1 + R2)
            den = (np.linalg.norm(G.A - 1j * b * I) * opscale
                   + np.linalg.norm(rhs))
            assert np.linalg.norm(lhs - rhs) <= 1e-10 * max(den, 1e-300)


def test_d_apply_grid_matches_d_op():
    G = og.MatrixGenerator.from_jordan_spec([(0.5, 3), (-1.0, 1)])
    rng = np.random.default_rng(3)
    x = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    alphas = np.array([1.0, 0.125, 2.0 ** -9])
    vals = og.d_apply_grid(G, 0.3, x, alphas)
    for a, v in zip(alphas, vals):
        assert_allclose(v, og.D_op(G, float(a), 0.3) @ x, atol=1e-10)


def test_local_spectrum_examples():
    G = og.MatrixGenerator(np.diag([1j, 2j]))
    assert og.local_spectrum(G, np.array([1.0, 0.0])) == (1j,)
    assert og.local_spectrum(G, np.array([1.0, 1.0])) == (1j, 2j)
    assert og.local_spectrum(G, np.zeros(2)) == ()


def test_spectral_subspace_examples():
    G = og.MatrixGenerator(np.diag([1j, 2j]))
    S = og.spectral_subspace(G, og.ClosedRealSet.from_string("[1,1]"))
    assert S.dim == 1 and S.contains_vector(np.array([1.0, 0.0]))
    assert og.spectral_subspace(G, og.ClosedRealSet.empty()).dim == 0
    assert og.spectral_subspace(G, og.ClosedRealSet.reals()).dim == 2


def test_spectral_subspace_invariance():
    G = og.MatrixGenerator.from_jordan_spec([(0.0, 2), (1.0, 1)])
    F = og.ClosedRealSet.from_string("[0,0]")
    X = og.spectral_subspace(G, F)
    AX = G.A @ X.basis
    for col in AX.T:
        assert X.contains_vector(col, tol=1e-8) or np.linalg.norm(col) < 1e-12
    for t in (0.7, -2.0, 13.0):
        moved = og.Subspace.from_span(og.group_at(G, t) @ X.basis)
        assert moved.equals(X, tol=1e-8)


def test_range_power_examples():
    G = og.MatrixGenerator.from_jordan_spec([(0.0, 2)])
    assert og.range_power(G, 0.0, 2).dim == 0
    r1 = og.range_power(G, 0.0, 1)
    assert r1.dim == 1 and r1.contains_vector(np.array([1.0, 0.0]))
    assert og.range_power(G, 5.0, 3).dim == 2


def test_range_stabilization():
    G = og.MatrixGenerator.from_jordan_spec([(1.0, 3), (0.0, 1)])
    dims = [og.ranges_intersection(G, og.ClosedRealSet.empty(), n).dim
            for n in (1, 2, 3, 4)]
    # strictly decreasing until the block index, then constant
    assert dims[0] > dims[1] > dims[2] == dims[3]


def test_ranges_intersection_examples():
    G = og.MatrixGenerator.from_jordan_spec([(0.0, 2)])
    F = og.ClosedRealSet.from_string("[1,1]")
    assert og.ranges_intersection(G, F, 2).dim == 0
    r = og.ranges_intersection(G, F, 1)
    assert r.dim == 1 and r.contains_vector(np.array([1.0, 0.0]))
    allF = og.ClosedRealSet.from_string("[0,1]")
    assert og.ranges_intersection(G, allF, 2).dim == 2
