"""Harmonic functions on the disc and the rectangle, their growth envelopes,
and boundary-limit verdicts along approach regions.

The growth envelope M_r(u) is the maximum of u (and of |u|) on the circle of
radius r; on the rectangle the maximum runs over a horizontal section.  The
classifier fits the envelope of |u| against the scale
bounded < C(1-r)^{-p} < exp(C(1-r)^{-p}) < exp(exp(C(1-r)^{-q}))
and returns the lowest class whose transformed fit is within tolerance.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import ApproachFunction, DiscRegion, approach_path

__all__ = [
    "HarmonicError",
    "DomainError",
    "HarmonicFunction",
    "FourierSeriesHarmonic",
    "ShapiroSeriesHarmonic",
    "PoissonIntegralHarmonic",
    "shapiro_series_eval",
    "poisson_disc",
    "GrowthProfile",
    "GrowthClass",
    "envelope",
    "classify_growth",
    "LimitVerdict",
    "boundary_limit",
    "UniquenessReport",
    "uniqueness_report",
    "circle_average",
    "mean_value_residual",
]


class HarmonicError(ValueError):
    pass


class DomainError(HarmonicError):
    pass


class HarmonicFunction:
    """Evaluable harmonic function; subclasses set ``domain`` to ``disc``
    (unit disc) or ``rectangle`` ({x+iy : -1 < x < 1, 0 < y < 1})."""

    domain = "disc"

    def __call__(self, z):
        raise NotImplementedError

    def mvp_tolerance(self) -> float:
        """Evaluator-accuracy allowance added to the mean-value tolerance."""
        return 1e-12

    def _check_disc(self, z):
        z = np.asarray(z, dtype=complex)
        if np.any(np.abs(z) >= 1.0):
            raise DomainError("point outside the open unit disc")
        return z


class FourierSeriesHarmonic(HarmonicFunction):
    """u(z) = Re sum_n c_n z^n; with c_n = a_n - i b_n this is
    sum r^n (a_n cos + b_n sin)."""

    domain = "disc"

    def __init__(self, coeffs):
        self.coeffs = np.asarray(coeffs, dtype=complex)
        if self.coeffs.ndim != 1 or self.coeffs.size < 1:
            raise HarmonicError("coefficient sequence must be a 1-d array")

    def __call__(self, z):
        z = self._check_disc(z)
        acc = np.zeros_like(z)
        for c in self.coeffs[::-1]:
            acc = acc * z + c
        out = acc.real
        return out if out.ndim else float(out)


class ShapiroSeriesHarmonic(HarmonicFunction):
    """The fixed example sum_{n>0} n r^n sin(n theta) = Im(z / (1 - z)^2)."""

    domain = "disc"

    def __call__(self, z):
        z = self._check_disc(z)
        out = (z / (1.0 - z) ** 2).imag
        return out if out.ndim else float(out)

    @staticmethod
    def partial_sum(z: complex, n_terms: int) -> float:
        z = complex(z)
        total = 0.0
        zn = 1.0 + 0.0j
        for n in range(1, n_terms + 1):
            zn *= z
            total += n * zn.imag
        return total


class PoissonIntegralHarmonic(HarmonicFunction):
    """Harmonic extension of a sampled boundary density by the trapezoid
    discretization of the kernel integral on a refined periodic grid."""

    domain = "disc"

    def __init__(self, thetas, values, n_quad: int | None = None):
        thetas = np.asarray(thetas, dtype=float)
        values = np.asarray(values, dtype=float)
        if thetas.ndim != 1 or thetas.shape != values.shape or thetas.size < 2:
            raise HarmonicError("density table needs two equal-length columns")
        if np.any(np.diff(thetas) <= 0) or thetas[0] < 0 or thetas[-1] > 2 * math.pi:
            raise HarmonicError("density table must increase within [0, 2*pi]")
        if n_quad is None:
            n_quad = max(2048, 4 * thetas.size)
        self.n_quad = n_quad
        self._ext_t = np.concatenate([thetas, [thetas[0] + 2.0 * math.pi]])
        self._ext_v = np.concatenate([values, [values[0]]])
        self._grids: dict = {}

    def _grid_for(self, n: int):
        hit = self._grids.get(n)
        if hit is None:
            grid = np.linspace(0.0, 2.0 * math.pi, n, endpoint=False)
            hit = (np.interp(grid, self._ext_t, self._ext_v), np.exp(1j * grid))
            self._grids[n] = hit
        return hit

    def __call__(self, z):
        z = self._check_disc(z)
        flat = np.atleast_1d(z).ravel()
        # the kernel peak has width 1-|z|: refine the trapezoid grid to match
        closeness = max(1.0 - np.abs(flat).max(), 1e-6)
        n = self.n_quad
        while n < 48.0 / closeness and n < 2 ** 17:
            n *= 2
        density, eix = self._grid_for(n)
        num = 1.0 - np.abs(flat) ** 2
        vals = np.empty(flat.size)
        block = max(1, int(4e6 // n))
        for s in range(0, flat.size, block):
            den = np.abs(eix[None, :] - flat[s:s + block, None]) ** 2
            vals[s:s + block] = (num[s:s + block, None] / den
                                 * density[None, :]).mean(axis=1)
        out = vals.reshape(np.shape(z))
        return out if out.ndim else float(out)

    def mvp_tolerance(self) -> float:
        return 1e-9


def shapiro_series_eval(z) -> float:
    """Im(z / (1-z)^2) on the open disc; closed form of sum n r^n sin(n theta)."""
    return ShapiroSeriesHarmonic()(z)


def poisson_disc(thetas, values, z, n_quad: int | None = None):
    """Poisson integral of a sampled density at z, |z| < 1."""
    return PoissonIntegralHarmonic(thetas, values, n_quad=n_quad)(z)


@dataclass
class GrowthProfile:
    param: str                 # "r" (disc radii) or "y" (rectangle heights)
    grid: np.ndarray
    M_u: np.ndarray            # signed maxima of u
    M_abs: np.ndarray          # maxima of |u|

    def closeness(self) -> np.ndarray:
        """1-r for disc profiles, y for rectangle profiles (both -> 0)."""
        return 1.0 - self.grid if self.param == "r" else self.grid


def _refine_peak(fn, xs, vals, refine: bool):
    k = int(np.argmax(vals))
    best = float(vals[k])
    if refine and 0 < k < xs.size - 1:
        lo, hi = xs[k - 1], xs[k + 1]
        for _ in range(2):
            grid = np.linspace(lo, hi, 13)
            v = fn(grid)
            j = int(np.argmax(v))
            best = max(best, float(v[j]))
            lo, hi = grid[max(j - 1, 0)], grid[min(j + 1, 12)]
    return best


def envelope(u: HarmonicFunction, grid, resolution: int = 4096,
             refine: bool = True) -> GrowthProfile:
    """Sampled maximum-modulus envelope of u over circles (disc) or
    horizontal sections (rectangle); reports both the signed max of u and
    the max of |u|."""
    grid = np.asarray(grid, dtype=float)
    if np.any(grid <= 0.0) or np.any(grid >= 1.0):
        raise HarmonicError("envelope grid values must lie in (0, 1)")
    M_u = np.empty_like(grid)
    M_abs = np.empty_like(grid)
    for i, g in enumerate(grid):
        if u.domain == "disc":
            xs = np.linspace(0.0, 2.0 * math.pi, resolution, endpoint=False)
            fn = lambda t: np.asarray(u(g * np.exp(1j * t)))
        else:
            xs = _section_samples(g, resolution)
            fn = lambda x: np.asarray(u(x + 1j * g))
        vals = fn(xs)
        M_u[i] = _refine_peak(fn, xs, vals, refine)
        M_abs[i] = _refine_peak(lambda x: np.abs(fn(x)), xs, np.abs(vals), refine)
    return GrowthProfile("r" if u.domain == "disc" else "y", grid, M_u, M_abs)


def _section_samples(y: float, resolution: int) -> np.ndarray:
    """Sample abscissae for a horizontal section of the rectangle: uniform
    background plus a logarithmic cluster near 0 (features live at |x| ~ y)."""
    n_uni = max(resolution // 2, 32)
    xs = [np.linspace(-1.0 + 1e-9, 1.0 - 1e-9, n_uni)]
    lo = max(y * 1e-3, 1e-12)
    cluster = np.geomspace(lo, 1.0 - 1e-9, max(resolution // 4, 32))
    xs.extend([cluster, -cluster])
    return np.unique(np.concatenate(xs))


_CLASS_ORDER = ("bounded", "poly", "exp", "double-exp")


@dataclass(frozen=True)
class GrowthClass:
    tag: str                    # bounded | poly | exp | double-exp | inconclusive
    exponent: float | None
    constant: float | None
    residual: float

    def describe(self) -> str:
        if self.tag == "bounded":
            return "bounded"
        if self.tag == "poly":
            return f"M ~ C (1-r)^-p, p={self.exponent:.3f}"
        if self.tag == "exp":
            return f"log+ M ~ C (1-r)^-p, p={self.exponent:.3f}, C={self.constant:.3g}"
        if self.tag == "double-exp":
            return f"log+log+ M ~ C (1-r)^-q, q={self.exponent:.3f}"
        return "inconclusive"


def _rel_rms(resid: np.ndarray, values: np.ndarray) -> float:
    scale = math.sqrt(float(np.mean(values ** 2))) or 1.0
    return math.sqrt(float(np.mean(resid ** 2))) / max(scale, 1e-300)


def classify_growth(profile: GrowthProfile, threshold: float = 0.05,
                    window: float = 0.1) -> GrowthClass:
    """Least-squares fit of M, log+ M, log+log+ M against C t^-p with
    t = 1-r (or y); classes tried from bounded upward, first fit whose
    relative RMS residual in the transformed coordinate passes wins."""
    t = profile.closeness()
    mask = (t <= window) & np.isfinite(profile.M_abs)
    if mask.sum() < 12:
        raise HarmonicError("need at least 12 finite grid points inside "
                            "the fit window")
    t = t[mask]
    M = profile.M_abs[mask]
    s = -np.log(t)

    # bounded: flat on the relative scale
    mean = float(np.mean(M))
    if float(np.max(np.abs(M))) == 0.0:
        return GrowthClass("bounded", None, 0.0, 0.0)
    if mean > 0 and np.isfinite(mean):
        rel = M / mean - 1.0
        dev = math.sqrt(float(np.mean(rel ** 2)))
        if dev <= threshold:
            return GrowthClass("bounded", None, mean, dev)

    def try_fit(sv, y):
        coef = np.polyfit(sv, y, 1)
        resid = y - np.polyval(coef, sv)
        return float(coef[0]), math.exp(float(coef[1])), _rel_rms(resid, y)

    good = M > 1e-300
    if good.sum() >= 12:
        p, C, res = try_fit(s[good], np.log(M[good]))
        if res <= threshold and p > 0.05:
            return GrowthClass("poly", p, C, res)

    logM = np.log(np.maximum(M, 1.0))     # log+ M
    good = logM > 0
    if good.sum() >= 12:
        p, C, res = try_fit(s[good], np.log(logM[good]))
        if res <= threshold and p > 0.05:
            return GrowthClass("exp", p, C, res)

    loglogM = np.log(np.maximum(logM, 1.0))
    good = loglogM > 0
    if good.sum() >= 12:
        q, C, res = try_fit(s[good], np.log(loglogM[good]))
        if res <= threshold and q > 0.05:
            return GrowthClass("double-exp", q, C, res)

    return GrowthClass("inconclusive", None, None, math.inf)


@dataclass
class LimitVerdict:
    target: complex
    region: object
    decision: str               # tends-to-zero | bounded-by-one | diverges | inconclusive
    rate: float | None          # fitted log2 decay per step (negative = decay)
    points: np.ndarray
    values: np.ndarray


def _tail_decreasing(tail: np.ndarray, tol: float) -> bool:
    if np.all(tail == 0.0):
        return True
    if float(tail.max()) <= tol * 1e-3:
        return True
    ok = all(tail[i + 1] <= tail[i] * 1.3 + 1e-300 for i in range(tail.size - 1))
    return ok and tail[-1] <= max(tail[0] * 1.000001, tol * 1e-3)


def boundary_limit(u: HarmonicFunction, region, mode: str = "zero-limit",
                   n_points: int = 24, tol: float = 1e-3) -> LimitVerdict:
    """Evaluate u along an approach path and classify the boundary limit.

    zero-limit mode: tends-to-zero needs the last quarter of |u| samples
    below tol and decreasing in envelope.  max-principle mode: bounded-by-one
    needs the tail limsup estimate <= 1 + tol.  Either mode reports diverges
    when the envelope exceeds 1/tol, and inconclusive otherwise (never
    silently coerced).
    """
    if mode not in ("zero-limit", "max-principle"):
        raise HarmonicError(f"unknown mode {mode!r}")
    pts = approach_path(region, n_points)
    try:
        vals = np.asarray(u(pts), dtype=float)
    except Exception:
        vals = np.empty(len(pts))
        for i, p in enumerate(pts):
            try:
                vals[i] = float(u(p))
            except Exception as exc:
                raise HarmonicError(
                    f"evaluation failed inside the region at {p}: {exc}") from exc
    av = np.abs(vals)
    n_tail = max(4, n_points // 4)
    tail = av[-n_tail:]
    rate = None
    pos = av > 0
    if pos.sum() >= 3:
        ks = np.arange(n_points)[pos]
        rate = float(np.polyfit(ks, np.log2(av[pos]), 1)[0])
    if mode == "zero-limit":
        if float(tail.max()) < tol and _tail_decreasing(tail, tol):
            decision = "tends-to-zero"
        elif float(av.max()) > 1.0 / tol:
            decision = "diverges"
        else:
            decision = "inconclusive"
    else:
        if float(tail.max()) <= 1.0 + tol:
            decision = "bounded-by-one"
        elif float(av.max()) > 1.0 / tol:
            decision = "diverges"
        else:
            decision = "inconclusive"
    return LimitVerdict(region.target, region, decision, rate, pts, vals)


def _theorem_budget(h: ApproachFunction, cls: GrowthClass, margin: float = 0.05):
    """Whether the fitted class sits strictly inside the uniqueness-scale
    budget attached to the approach function; None if no case applies."""
    order = {tag: i for i, tag in enumerate(_CLASS_ORDER)}
    if cls.tag not in order:
        return None, "growth class inconclusive"
    rank = order[cls.tag]
    if h.kind == "zero":
        desc = "M = o(t^-2) as t = 1-r -> 0"
        if cls.tag == "bounded":
            return True, desc
        if cls.tag == "poly":
            return cls.exponent < 2.0 - margin, desc
        return False, desc
    if h.kind == "cubic":
        desc = "log+ M = o(t^-1)"
        if rank <= 1:
            return True, desc
        if cls.tag == "exp":
            return cls.exponent < 1.0 - margin, desc
        return False, desc
    if h.kind == "linear":
        crit = math.pi / (2.0 * math.atan(1.0 / h.c))
        desc = f"log+ M = o(t^-{crit:.3f})"
        if rank <= 1:
            return True, desc
        if cls.tag == "exp":
            return cls.exponent < crit - margin, desc
        return False, desc
    if h.kind == "power" and h.c < 1.0:
        crit = 1.0 - h.c
        desc = f"log+log+ M = o(t^-{crit:.3f})"
        if rank <= 2:
            return True, desc
        return cls.exponent < crit - margin, desc
    return None, "no uniqueness case covers this approach function"


@dataclass
class UniquenessReport:
    h: ApproachFunction
    growth: GrowthClass
    budget_within: bool | None
    budget_description: str
    verdicts: list
    all_zero_limits: bool
    predicts_zero: bool
    interior_max: float
    contradiction: bool
    notes: list = field(default_factory=list)

    def rows(self) -> list:
        out = []
        for v in self.verdicts:
            phi = cmath.phase(v.target) % (2.0 * math.pi)
            out.append({"phi": phi, "decision": v.decision,
                        "rate": "" if v.rate is None else float(v.rate)})
        return out


def uniqueness_report(u: HarmonicFunction, h: ApproachFunction, phis,
                      envelope_grid=None, tol: float = 1e-3,
                      n_points: int = 24) -> UniquenessReport:
    """Consistency harness: combine the growth classification with boundary
    verdicts along the h-regions at each phi, compare against the
    uniqueness-scale budget, and cross-check interior samples when the
    combination predicts the zero function."""
    if u.domain != "disc":
        raise HarmonicError("uniqueness reports run on disc functions")
    if envelope_grid is None:
        envelope_grid = 1.0 - np.geomspace(0.05, 1e-3, 16)
    prof = envelope(u, envelope_grid, resolution=512)
    cls = classify_growth(prof)
    within, desc = _theorem_budget(h, cls)
    verdicts = [boundary_limit(u, DiscRegion(h, float(phi)), "zero-limit",
                               n_points=n_points, tol=tol) for phi in phis]
    all_zero = all(v.decision == "tends-to-zero" for v in verdicts)
    predicted = bool(within) and all_zero
    rs, ths = np.meshgrid(np.linspace(0.05, 0.7, 8),
                          np.linspace(0.0, 2 * math.pi, 16, endpoint=False))
    interior = np.abs(np.asarray(u(rs * np.exp(1j * ths)))).max()
    contradiction = predicted and interior > 10.0 * tol
    notes = []
    if h.kind == "cubic" and cls.tag == "poly":
        notes.append(
            "cubic threshold: polynomial growth sits inside the o()-budget "
            "of the log scale, so nonvanishing examples are permitted only "
            "through a failed limit at some phi")
    if within is None:
        notes.append("no theorem case for this approach function; "
                     "verdicts reported without a prediction")
    return UniquenessReport(h, cls, within, desc, verdicts, all_zero,
                            predicted, float(interior), contradiction, notes)


def circle_average(u, z: complex, rho: float, n_nodes: int = 256) -> float:
    thetas = np.linspace(0.0, 2.0 * math.pi, n_nodes, endpoint=False)
    pts = z + rho * np.exp(1j * thetas)
    return float(np.mean(np.asarray(u(pts), dtype=float)))


def mean_value_residual(u, z: complex, rho: float, n_nodes: int = 256) -> float:
    return abs(float(u(z)) - circle_average(u, z, rho, n_nodes))
