"""Operations on polynomially bounded matrix groups.

The group exp(tA) is evaluated through the cached root-subspace calculus
(exact nilpotent series), resolvents through direct solves, and the
difference operator D(alpha+i*beta) = R(alpha+i*beta) - R(-alpha+i*beta)
both ways: by resolvent subtraction and by the factored form
2*alpha*[alpha^2 - (A - i*beta)^2]^{-1}.  Membership sweeps use a dyadic
alpha schedule; subspaces come from rank-revealing factorizations.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.optimize
import scipy.special

from .spectral import (ClosedRealSet, ExponentialGrowthError, MatrixGenerator,
                       OpGroupError, PreconditionError, SingularityError,
                       Subspace)

__all__ = [
    "group_at",
    "growth_exponent",
    "resolvent",
    "CarlemanTransform",
    "carleman_quadrature",
    "D_op",
    "d_op_factored",
    "d_apply_grid",
    "local_spectrum",
    "spectral_subspace",
    "beta_test_points",
    "MembershipEvidence",
    "MembershipResult",
    "limit_membership",
    "bounded_membership",
    "range_power",
    "ranges_intersection",
    "triangular_group",
    "TestFunction",
    "PairingResult",
    "distribution_pairing",
    "poisson_identity_selfadjoint",
    "membership_suite_vectors",
    "default_alphas",
]

DEFAULT_ALPHAS = 2.0 ** (-np.arange(41, dtype=float))


def default_alphas() -> np.ndarray:
    return DEFAULT_ALPHAS.copy()


def group_at(G: MatrixGenerator, t: float) -> np.ndarray:
    """exp(tA) via the spectral calculus: sum_j e^{lam_j t} (sum_p t^p N_j^p/p!) P_j."""
    if G.spectral.residual > 1e-9:
        raise OpGroupError(
            f"refusing: spectral reconstruction residual {G.spectral.residual:.3e}")
    n = G.n
    out = np.zeros((n, n), dtype=complex)
    for lam, P, N, idx in zip(G.spectral.eigenvalues, G.spectral.projections,
                              G.spectral.nilpotents, G.spectral.indices):
        term = P.astype(complex).copy()
        Npow = np.eye(n, dtype=complex)
        fact = 1.0
        for p in range(1, int(idx)):
            Npow = Npow @ N
            fact *= p
            term = term + (t ** p / fact) * Npow @ P
        out += np.exp(lam * t) * term
    return out


def _group_on_nodes(G: MatrixGenerator, ts: np.ndarray) -> np.ndarray:
    """exp(tA) for an array of times; shape (len(ts), n, n)."""
    ts = np.asarray(ts, dtype=float)
    n = G.n
    out = np.zeros((ts.size, n, n), dtype=complex)
    for lam, P, N, idx in zip(G.spectral.eigenvalues, G.spectral.projections,
                              G.spectral.nilpotents, G.spectral.indices):
        poly = np.broadcast_to(P, (ts.size, n, n)).astype(complex).copy()
        Npow = np.eye(n, dtype=complex)
        fact = 1.0
        for p in range(1, int(idx)):
            Npow = Npow @ N
            fact *= p
            poly += (ts ** p / fact)[:, None, None] * (Npow @ P)[None, :, :]
        out += np.exp(lam * ts)[:, None, None] * poly
    return out


def growth_exponent(G: MatrixGenerator, t_grid: np.ndarray | None = None):
    """Fit ||exp(tA)|| <= M (1 + |t|^a) on |t| in [1, 1e3]; caches (M, a)."""
    if not G.spectrum_on_imaginary_axis():
        raise ExponentialGrowthError(
            f"spectrum off the imaginary axis: {G.eigenvalues}")
    if t_grid is None:
        t_grid = np.logspace(0.0, 3.0, 25)
    ts = np.concatenate([t_grid, -t_grid])
    norms = np.array([np.linalg.norm(group_at(G, t), 2) for t in ts])
    x = np.log1p(np.abs(ts))
    y = np.log(np.maximum(norms, 1e-300))
    slope = float(np.polyfit(x, y, 1)[0])
    a = max(slope, 0.0)
    with np.errstate(all="ignore"):
        denom = 1.0 + np.abs(ts) ** a
    M = float(np.max(norms / denom))
    M = max(M, np.linalg.norm(group_at(G, 0.0), 2) / 2.0)
    G.set_growth(M, a)
    return M, a


def resolvent(G: MatrixGenerator, lam: complex) -> np.ndarray:
    """(lam I - A)^{-1}."""
    lam = complex(lam)
    gap = np.min(np.abs(G.eigenvalues - lam))
    if gap <= 1e-12 * max(1.0, np.abs(G.eigenvalues).max()):
        raise SingularityError(f"lambda={lam} is (numerically) in the spectrum")
    return np.linalg.solve(lam * np.eye(G.n) - G.A, np.eye(G.n, dtype=complex))


@dataclass(frozen=True)
class CarlemanTransform:
    matrix: np.ndarray
    t_max: float
    tail_bound: float
    quad_error: float


def carleman_quadrature(G: MatrixGenerator, lam: complex,
                        t_max: float | None = None,
                        quad_tol: float = 1e-11) -> CarlemanTransform:
    """One-sided Laplace transform of the group: int_0^inf e^{-lam t} exp(tA) dt,
    truncated at t_max with a certified polynomial-growth tail bound."""
    lam = complex(lam)
    if lam.real <= 0:
        raise OpGroupError("carleman quadrature needs Re(lambda) > 0")
    if G.growth is None:
        growth_exponent(G)
    M, a = G.growth
    r = lam.real

    def tail(T):
        # M * int_T^inf e^{-rt} (1 + t^a) dt
        base = math.exp(-r * T) / r
        poly = scipy.special.gammaincc(a + 1.0, r * T) * scipy.special.gamma(a + 1.0) \
            / r ** (a + 1.0)
        return M * (base + poly)

    if t_max is None:
        t_max = 1.0
        while tail(t_max) > 1e-12 and t_max < 1e5:
            t_max *= 2.0

    freq = max(np.abs(G.eigenvalues.imag).max(initial=0.0), abs(lam.imag), 1.0)
    panel = min(0.5, 1.0 / freq)

    def integrate(n_mult):
        n_panels = max(4, int(np.ceil(t_max / panel)) * n_mult)
        nodes, weights = np.polynomial.legendre.leggauss(12)
        edges = np.linspace(0.0, t_max, n_panels + 1)
        mid = 0.5 * (edges[:-1] + edges[1:])
        half = 0.5 * np.diff(edges)
        ts = (mid[:, None] + half[:, None] * nodes[None, :]).ravel()
        ws = (half[:, None] * weights[None, :]).ravel()
        vals = _group_on_nodes(G, ts)
        return np.einsum("k,kij->ij", ws * np.exp(-lam * ts), vals)

    coarse = integrate(1)
    fine = integrate(2)
    err = float(np.linalg.norm(fine - coarse))
    if err > max(quad_tol, 1e-9):
        raise OpGroupError(f"carleman quadrature failed to converge: "
                           f"achieved {err:.3e}")
    return CarlemanTransform(fine, float(t_max), float(tail(t_max)), err)


def D_op(G: MatrixGenerator, alpha: float, beta: float) -> np.ndarray:
    """R(alpha + i beta) - R(-alpha + i beta); alpha != 0."""
    if alpha == 0.0:
        raise OpGroupError("alpha must be nonzero")
    return resolvent(G, alpha + 1j * beta) - resolvent(G, -alpha + 1j * beta)


def d_op_factored(G: MatrixGenerator, alpha: float, beta: float) -> np.ndarray:
    """2 alpha [alpha^2 - (A - i beta)^2]^{-1}: the factored form of D.

    The quadratic is inverted through its commuting factorization
    (alpha - B)(alpha + B), which keeps each solve well-conditioned even
    when beta sits close to an eigenvalue height.
    """
    I = np.eye(G.n, dtype=complex)
    B = G.A - 1j * beta * I
    try:
        t1 = np.linalg.solve(alpha * I - B, I)
        t2 = np.linalg.solve(alpha * I + B, I)
    except np.linalg.LinAlgError as exc:
        raise SingularityError(f"alpha^2 - (A - i beta)^2 singular: {exc}") from exc
    return 2.0 * alpha * (t2 @ t1)


def d_apply_grid(G: MatrixGenerator, beta: float, x: np.ndarray,
                 alphas: np.ndarray) -> np.ndarray:
    """D(alpha + i beta) x over a whole alpha grid, shape (len(alphas), n).

    Uses the root-space series: on each cluster, with mu = lam - i beta and
    d = alpha^2 - mu^2, the inverse of d - (2 mu N + N^2) expands in the
    nilpotent part, so each alpha costs O(1) vector work.
    """
    alphas = np.asarray(alphas, dtype=float)
    x = np.asarray(x, dtype=complex).ravel()
    out = np.zeros((alphas.size, G.n), dtype=complex)
    a2 = alphas ** 2
    for lam, P, N, idx in zip(G.spectral.eigenvalues, G.spectral.projections,
                              G.spectral.nilpotents, G.spectral.indices):
        mu = lam - 1j * beta
        d = a2 - mu ** 2                       # complex in general
        xj = P @ x
        B = 2.0 * mu * N + N @ N               # nilpotent on the root space
        terms = [xj]
        for _ in range(1, int(idx)):
            nxt = B @ terms[-1]
            if np.linalg.norm(nxt) == 0.0:
                break
            terms.append(nxt)
        acc = np.zeros((alphas.size, G.n), dtype=complex)
        for m, u in enumerate(terms):
            acc += u[None, :] / (d ** (m + 1))[:, None]
        out += acc
    return 2.0 * alphas[:, None] * out


def local_spectrum(G: MatrixGenerator, x: np.ndarray,
                   tol: float = 1e-10) -> tuple:
    """Eigenvalues whose root-subspace component of x is nonzero."""
    x = np.asarray(x, dtype=complex).ravel()
    nx = np.linalg.norm(x)
    if nx == 0.0:
        return ()
    hits = [lam for lam, P in zip(G.spectral.eigenvalues, G.spectral.projections)
            if np.linalg.norm(P @ x) > tol * nx]
    return tuple(sorted(hits, key=lambda v: (v.imag, v.real)))


def spectral_subspace(G: MatrixGenerator, F: ClosedRealSet,
                      axis_tol: float = 1e-9) -> Subspace:
    """X(F): span of root subspaces with eigenvalue in iF."""
    cols = []
    for lam, P in zip(G.spectral.eigenvalues, G.spectral.projections):
        if abs(lam.real) <= axis_tol and F.contains(lam.imag):
            cols.append(P)
    if not cols:
        return Subspace.zero(G.n)
    return Subspace.from_span(np.hstack(cols))


def beta_test_points(G: MatrixGenerator, F: ClosedRealSet, rng,
                     per_gap: int = 3, include_heights: bool = True) -> list:
    """Test frequencies in R \\ F: eigenvalue heights outside F (decisive in
    finite dimension) plus random off-spectrum samples per complement gap."""
    heights = G.heights()
    betas = []
    if include_heights:
        betas.extend(float(h) for h in heights if not F.contains(h))
    lo_clip = (heights.min() if heights.size else 0.0) - 5.0
    hi_clip = (heights.max() if heights.size else 0.0) + 5.0
    for lo, hi in F.complement_intervals():
        a = max(lo, lo_clip) if math.isfinite(lo) else lo_clip
        b = min(hi, hi_clip) if math.isfinite(hi) else hi_clip
        if b <= a:
            a, b = (lo if math.isfinite(lo) else b - 1.0,
                    hi if math.isfinite(hi) else a + 1.0)
        width = b - a
        # stay away from the gap endpoints and from the spectrum
        inner_a, inner_b = a + 0.1 * width, b - 0.1 * width
        for _ in range(per_gap):
            for _attempt in range(50):
                cand = float(rng.uniform(inner_a, inner_b))
                if heights.size == 0 or np.min(np.abs(heights - cand)) > 1e-3:
                    betas.append(cand)
                    break
    return betas


@dataclass(frozen=True)
class MembershipEvidence:
    beta: float
    sup: float
    tail_max: float
    slope: float
    verdict: str   # "decays" | "diverges" | "bounded" | "inconclusive"


@dataclass(frozen=True)
class MembershipResult:
    member: bool | None
    evidence: tuple
    betas: tuple


def _decay_verdict(norms: np.ndarray, alphas: np.ndarray, tol: float) -> tuple:
    k = min(10, norms.size)
    tail, ta = norms[-k:], alphas[-k:]
    tail_max = float(tail.max(initial=0.0))
    sup = float(norms.max(initial=0.0))
    if tail_max == 0.0:
        return "decays", tail_max, sup, 1.0
    pos = tail > 0
    slope = 0.0
    if pos.sum() >= 3:
        slope = float(np.polyfit(np.log(ta[pos]), np.log(tail[pos]), 1)[0])
    if tail_max <= tol and slope > 0.2:
        return "decays", tail_max, sup, slope
    if tail_max <= tol * 1e-3:
        return "decays", tail_max, sup, slope
    if slope < -0.2 or tail_max > 1.0 / tol:
        return "diverges", tail_max, sup, slope
    return "inconclusive", tail_max, sup, slope


def limit_membership(G: MatrixGenerator, F: ClosedRealSet, x: np.ndarray,
                     alphas: np.ndarray | None = None, tol: float = 1e-6,
                     rng=None, per_gap: int = 3) -> MembershipResult:
    """Membership in X(F) by the vanishing of ||D(alpha + i beta) x|| as
    alpha -> 0+ for every test beta outside F.

    Inconclusive decay at some beta (no decisive divergence anywhere) yields
    member=None rather than a coerced boolean.
    """
    if alphas is None:
        alphas = DEFAULT_ALPHAS
    if rng is None:
        rng = np.random.default_rng(0)
    betas = beta_test_points(G, F, rng, per_gap=per_gap, include_heights=True)
    evidence = []
    any_diverges = False
    any_inconclusive = False
    for beta in betas:
        vals = d_apply_grid(G, beta, x, alphas)
        norms = np.linalg.norm(vals, axis=1)
        verdict, tail_max, sup, slope = _decay_verdict(norms, alphas, tol)
        evidence.append(MembershipEvidence(beta, sup, tail_max, slope, verdict))
        any_diverges |= verdict == "diverges"
        any_inconclusive |= verdict == "inconclusive"
    if any_diverges:
        member = False
    elif any_inconclusive:
        member = None
    else:
        member = True
    return MembershipResult(member, tuple(evidence), tuple(betas))


def _refined_sup(G, beta, x, alphas, norms) -> float:
    k = int(np.argmax(norms))
    lo = alphas[min(k + 1, alphas.size - 1)]
    hi = alphas[max(k - 1, 0)]
    if lo == hi:
        return float(norms[k])
    res = scipy.optimize.minimize_scalar(
        lambda a: -np.linalg.norm(d_apply_grid(G, beta, x, np.array([a]))[0]),
        bounds=(lo, hi), method="bounded",
        options={"xatol": 1e-13 * max(hi, 1.0)})
    return float(max(norms[k], -res.fun))


def bounded_membership(G: MatrixGenerator, F: ClosedRealSet, x: np.ndarray,
                       alphas: np.ndarray | None = None, rng=None,
                       per_gap: int = 3, refine: bool = True) -> MembershipResult:
    """Boundedness of sup_alpha ||D(alpha + i beta) x|| over test beta in R \\ F.

    Point spectrum makes the sup at an exact eigenvalue height trivially
    infinite in finite dimension, so the test set here consists of
    off-spectrum frequencies only; this operation exhibits why the
    boundedness characterization needs empty point spectrum rather than
    validating it.
    """
    if alphas is None:
        alphas = DEFAULT_ALPHAS
    if rng is None:
        rng = np.random.default_rng(0)
    betas = beta_test_points(G, F, rng, per_gap=per_gap, include_heights=False)
    # the sup runs over all alpha > 0: extend the dyadic schedule upward so
    # the maximum (attained near alpha ~ |beta - height|) is bracketed
    up = alphas.max() * 2.0 ** np.arange(12, 0, -1)
    sup_grid = np.unique(np.concatenate([up, alphas]))[::-1]
    evidence = []
    all_bounded = True
    for beta in betas:
        vals = d_apply_grid(G, beta, x, alphas)
        norms = np.linalg.norm(vals, axis=1)
        if refine:
            sup_norms = np.linalg.norm(d_apply_grid(G, beta, x, sup_grid), axis=1)
            sup = _refined_sup(G, beta, x, sup_grid, sup_norms)
        else:
            sup = float(norms.max(initial=0.0))
        tail = norms[-10:]
        slope = 0.0
        if np.all(tail > 0):
            slope = float(np.polyfit(np.log(alphas[-10:]), np.log(tail), 1)[0])
        bounded = slope > -0.05  # no growth trend as alpha -> 0+
        evidence.append(MembershipEvidence(
            beta, sup, float(tail.max(initial=0.0)), slope,
            "bounded" if bounded else "diverges"))
        all_bounded &= bounded
    return MembershipResult(all_bounded, tuple(evidence), tuple(betas))


def range_power(G: MatrixGenerator, beta: float, n: int) -> Subspace:
    """Column space of (i beta - A)^n by SVD rank reveal."""
    if n < 1:
        raise OpGroupError("power must be >= 1")
    B = np.linalg.matrix_power(1j * beta * np.eye(G.n) - G.A, n)
    return Subspace.from_span(B)


def ranges_intersection(G: MatrixGenerator, F: ClosedRealSet, n: int) -> Subspace:
    """Intersection of ran (i beta - A)^n over constraining beta outside F.

    Only beta with i*beta in the spectrum constrain; off-spectrum shifts are
    invertible and contribute the full space.
    """
    result = Subspace.full(G.n)
    for lam in G.spectral.eigenvalues:
        if abs(lam.real) <= 1e-9 and not F.contains(lam.imag):
            result = result.intersect(range_power(G, float(lam.imag), n))
    return result


def triangular_group(A1, A2, B, t: float, quad_tol: float = 1e-10):
    """Group of the block-triangular generator [[A1, B], [0, A2]] at time t:
    diagonal blocks exp(tA1), exp(tA2) and corner int_0^t T1(s) B T2(t-s) ds
    by quadrature."""
    G1 = A1 if isinstance(A1, MatrixGenerator) else MatrixGenerator(A1)
    G2 = A2 if isinstance(A2, MatrixGenerator) else MatrixGenerator(A2)
    if not (G1.spectrum_on_imaginary_axis() and G2.spectrum_on_imaginary_axis()):
        raise ExponentialGrowthError("diagonal generators must have spectra on iR")
    B = np.asarray(B, dtype=complex)

    freq = max(np.abs(G1.eigenvalues.imag).max(initial=0.0),
               np.abs(G2.eigenvalues.imag).max(initial=0.0), 1.0)

    def corner(n_mult):
        if t == 0.0:
            return np.zeros((G1.n, G2.n), dtype=complex)
        n_panels = max(4, int(np.ceil(abs(t) * freq / 0.5)) * n_mult)
        nodes, weights = np.polynomial.legendre.leggauss(12)
        edges = np.linspace(0.0, t, n_panels + 1)
        mid = 0.5 * (edges[:-1] + edges[1:])
        half = 0.5 * np.diff(edges)
        ss = (mid[:, None] + half[:, None] * nodes[None, :]).ravel()
        ws = (half[:, None] * weights[None, :]).ravel()
        T1s = _group_on_nodes(G1, ss)
        T2s = _group_on_nodes(G2, t - ss)
        vals = np.einsum("kij,jl,klm->kim", T1s, B, T2s)
        return np.einsum("k,kim->im", ws, vals)

    coarse = corner(1)
    fine = corner(2)
    err = float(np.linalg.norm(fine - coarse))
    if err > max(quad_tol, 1e-8):
        raise OpGroupError(f"corner quadrature failed to converge: {err:.3e}")
    top = np.hstack([group_at(G1, t), fine])
    bot = np.hstack([np.zeros((G2.n, G1.n)), group_at(G2, t)])
    return np.vstack([top, bot])


@dataclass(frozen=True)
class TestFunction:
    """Real smooth test function with an explicit transform
    fhat(t) = int e^{-i s t} f(s) ds.

    Gaussian: f(s) = exp(-(s-center)^2 / (2 width^2)), transform in closed
    form.  Bump: f(s) = (1 - u^2)^k on the support interval (u the affine
    map onto [-1,1]), transform by quadrature.
    """

    family: str
    center: float = 0.0
    width: float = 1.0
    support: tuple = (-1.0, 1.0)
    order: int = 4

    @staticmethod
    def gaussian(center: float, width: float) -> "TestFunction":
        if width <= 0:
            raise OpGroupError("gaussian width must be positive")
        return TestFunction("gaussian", center=center, width=width)

    @staticmethod
    def bump(a: float, b: float, order: int = 4) -> "TestFunction":
        if b <= a:
            raise OpGroupError("bump support must be a nonempty interval")
        return TestFunction("bump", support=(a, b), order=order)

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        if self.family == "gaussian":
            out = np.exp(-((s - self.center) ** 2) / (2.0 * self.width ** 2))
        else:
            a, b = self.support
            u = (2.0 * s - a - b) / (b - a)
            out = np.where(np.abs(u) < 1.0, (1.0 - u ** 2) ** self.order, 0.0)
        return out if out.ndim else float(out)

    def transform(self, t):
        t = np.asarray(t, dtype=float)
        if self.family == "gaussian":
            out = (self.width * math.sqrt(2.0 * math.pi)
                   * np.exp(-1j * self.center * t)
                   * np.exp(-(self.width ** 2) * t ** 2 / 2.0))
            return out if out.ndim else complex(out)
        a, b = self.support
        xs, ws = np.polynomial.legendre.leggauss(200)
        ss = 0.5 * (a + b) + 0.5 * (b - a) * xs
        fs = self(ss) * 0.5 * (b - a) * ws
        out = np.exp(-1j * np.multiply.outer(t, ss)) @ fs
        return out if out.ndim else complex(out)


@dataclass(frozen=True)
class PairingResult:
    time_side: np.ndarray
    frequency_side: np.ndarray | None
    discrepancy: float | None
    horizon: float
    tail_bound: float


def distribution_pairing(G: MatrixGenerator, f: TestFunction, alpha: float,
                         t_horizon: float | None = None) -> PairingResult:
    """Pair the group distribution with a test function.

    Time side: int e^{-alpha |t|} fhat(t) exp(tA) dt.  For alpha > 0 this is
    checked against the frequency side int f(beta) D(alpha + i beta) dbeta;
    for alpha = 0 the time side alone is the pairing.
    """
    if alpha < 0:
        raise OpGroupError("alpha must be >= 0")
    if G.growth is None:
        growth_exponent(G)
    M, a = G.growth

    if t_horizon is None:
        if f.family == "gaussian":
            t_horizon = 1.0
            while f.width * math.sqrt(2 * math.pi) * \
                    math.exp(-(f.width ** 2) * t_horizon ** 2 / 2.0) * \
                    M * (1 + t_horizon ** a) > 1e-14 and t_horizon < 1e4:
                t_horizon *= 1.5
        else:
            raise OpGroupError("bump pairings need an explicit t_horizon")
    tail = (abs(complex(f.transform(t_horizon)))
            * M * (1 + t_horizon ** max(a, 0.0)))
    if tail > 1e-8:
        raise OpGroupError(f"horizon tail budget exceeded: {tail:.3e}")

    freq = max(np.abs(G.eigenvalues.imag).max(initial=0.0), abs(f.center), 1.0)
    panel = min(0.5, 1.0 / freq)
    nodes, weights = np.polynomial.legendre.leggauss(12)

    def time_side(n_mult):
        n_panels = max(8, int(np.ceil(2 * t_horizon / panel)) * n_mult)
        if n_panels % 2:
            n_panels += 1  # keep t=0 a panel edge: |t| has a kink there
        edges = np.linspace(-t_horizon, t_horizon, n_panels + 1)
        mid = 0.5 * (edges[:-1] + edges[1:])
        half = 0.5 * np.diff(edges)
        ts = (mid[:, None] + half[:, None] * nodes[None, :]).ravel()
        ws = (half[:, None] * weights[None, :]).ravel()
        vals = _group_on_nodes(G, ts)
        coef = ws * np.exp(-alpha * np.abs(ts)) * f.transform(ts)
        return np.einsum("k,kij->ij", coef, vals)

    lhs = time_side(1)
    lhs_fine = time_side(2)
    lhs_err = float(np.linalg.norm(lhs_fine - lhs))
    lhs = lhs_fine

    if alpha == 0.0:
        return PairingResult(lhs, None, None, float(t_horizon), float(tail))

    # frequency side: split panels at eigenvalue heights, refine at scale alpha
    if f.family == "gaussian":
        lo, hi = f.center - 12.0 * f.width, f.center + 12.0 * f.width
    else:
        lo, hi = f.support
    cuts = {lo, hi}
    for h in G.heights():
        for s in (0.0, alpha, 2 * alpha, 4 * alpha, 8 * alpha, 1.0):
            for sgn in (-1.0, 1.0):
                c = float(h + sgn * s)
                if lo < c < hi:
                    cuts.add(c)
    edges = np.array(sorted(cuts))

    def freq_side(n_sub):
        total = np.zeros((G.n, G.n), dtype=complex)
        for a0, b0 in zip(edges[:-1], edges[1:]):
            sub = np.linspace(a0, b0, n_sub + 1)
            for s0, s1 in zip(sub[:-1], sub[1:]):
                mid = 0.5 * (s0 + s1)
                half = 0.5 * (s1 - s0)
                bs = mid + half * nodes
                ws = half * weights
                for b, w in zip(bs, ws):
                    total += (w * f(b)) * d_matrix(G, alpha, b)
        return total

    rhs = freq_side(2)
    rhs_fine = freq_side(4)
    rhs_err = float(np.linalg.norm(rhs_fine - rhs))
    rhs = rhs_fine
    disc = float(np.linalg.norm(lhs - rhs))
    return PairingResult(lhs, rhs, disc, float(t_horizon),
                         float(tail + lhs_err + rhs_err))


def d_matrix(G: MatrixGenerator, alpha: float, beta: float) -> np.ndarray:
    """D(alpha + i beta) as a matrix via the root-space series (fast path)."""
    out = np.zeros((G.n, G.n), dtype=complex)
    for lam, P, N, idx in zip(G.spectral.eigenvalues, G.spectral.projections,
                              G.spectral.nilpotents, G.spectral.indices):
        mu = lam - 1j * beta
        d = alpha ** 2 - mu ** 2
        B = 2.0 * mu * N + N @ N
        term = P.astype(complex).copy()
        acc = term / d
        Bp = np.eye(G.n, dtype=complex)
        for m in range(1, int(idx)):
            Bp = Bp @ B
            acc += (Bp @ P) / d ** (m + 1)
        out += acc
    return 2.0 * alpha * out


def poisson_identity_selfadjoint(G: MatrixGenerator, x: np.ndarray,
                                 alpha: float, beta: float) -> tuple:
    """For skew-Hermitian A: the quadratic form (D(alpha+i beta)x, x) against
    the explicit kernel sum 2 sum_j alpha |<x, e_j>|^2 / (alpha^2 + (beta - t_j)^2)."""
    if alpha <= 0:
        raise OpGroupError("alpha must be positive")
    A = G.A
    skew_resid = np.linalg.norm(A + A.conj().T) / max(1.0, np.linalg.norm(A))
    if skew_resid > 1e-10:
        raise PreconditionError(
            f"generator not skew-Hermitian (residual {skew_resid:.3e})")
    x = np.asarray(x, dtype=complex).ravel()
    lhs = complex(np.vdot(x, D_op(G, alpha, beta) @ x))
    ts, E = np.linalg.eigh(-1j * A)
    coeffs = np.abs(E.conj().T @ x) ** 2
    rhs = float(np.sum(2.0 * alpha * coeffs / (alpha ** 2 + (beta - ts) ** 2)))
    return lhs, rhs


def membership_suite_vectors(n: int, rng, n_random: int = 20) -> list:
    """Standard basis, pairwise sums, and dense random vectors."""
    vecs = [np.eye(n, dtype=complex)[:, i] for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            vecs.append(vecs[i] + vecs[j])
    for _ in range(n_random):
        vecs.append(rng.standard_normal(n) + 1j * rng.standard_normal(n))
    return vecs


def worker_count() -> int:
    """Worker count for sweeps, from HARMSPEC_WORKERS (default: cpu count)."""
    env = os.environ.get("HARMSPEC_WORKERS", "")
    if env.strip():
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1
