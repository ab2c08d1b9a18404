"""Quantitative potential-theory bounds.

Three engines: the log-log interior bound for subharmonic functions under a
decreasing majorant (pass condition ``sum_k w^{-1}(2^k T) <= 1/10`` with
certified bound ``2T`` on the core square), the harmonic-measure estimate
``(8/pi) exp(-pi * int dr / width(r))`` for strip-like domains, and the
sector certificate that assembles both into an explicit ``<= 3`` bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "PotentialError",
    "ParameterError",
    "CutoffError",
    "Majorant",
    "WidthFunction",
    "DomarCheck",
    "DomarMinimalT",
    "domar_check",
    "domar_minimal_T",
    "CarlemanBound",
    "carleman_measure_bound",
    "carleman_band_bound",
    "SectorCertificate",
    "sector_certificate",
    "parse_majorant_literal",
]

SUM_BUDGET = 0.1
_SUM_SLACK = 1e-12


class PotentialError(ValueError):
    pass


class ParameterError(PotentialError):
    """A parameter fails an arithmetic side condition; carries the index."""

    def __init__(self, message: str, n: int | None = None):
        super().__init__(message)
        self.n = n


class CutoffError(PotentialError):
    """Summation cutoff too small to certify the tail."""


@dataclass(frozen=True)
class Majorant:
    """Decreasing w : (0,2) -> [1, inf).

    Kinds: ``const`` (w = v), ``pow`` (w = max(1, y^-p)), ``exp``
    (w = exp(y^-p)), ``custom`` (non-increasing sample table, extended by
    its end values).  The generalized inverse is
    ``w^{-1}(s) = inf{y in (0,2) : w(y) <= s}``, set to 0 when every y
    qualifies and to 2 when none does.
    """

    kind: str
    p: float = 1.0
    table: tuple = field(default=(), repr=False)

    @staticmethod
    def constant(v: float) -> "Majorant":
        if v < 1.0:
            raise PotentialError("majorant values must be >= 1")
        return Majorant("const", v)

    @staticmethod
    def power_law(p: float) -> "Majorant":
        if p <= 0:
            raise PotentialError("power-law exponent must be positive")
        return Majorant("pow", p)

    @staticmethod
    def exp_law(p: float) -> "Majorant":
        if p <= 0:
            raise PotentialError("exp-law exponent must be positive")
        return Majorant("exp", p)

    @staticmethod
    def custom(ys, ws) -> "Majorant":
        ys = np.asarray(ys, dtype=float)
        ws = np.asarray(ws, dtype=float)
        if ys.ndim != 1 or ys.shape != ws.shape or ys.size < 2:
            raise PotentialError("custom majorant needs two equal-length columns")
        if np.any(ys <= 0) or np.any(ys >= 2):
            raise PotentialError("custom majorant abscissae must lie in (0, 2)")
        if np.any(np.diff(ys) <= 0):
            raise PotentialError("custom majorant abscissae must increase")
        if np.any(np.diff(ws) > 0):
            raise PotentialError("custom majorant must be non-increasing")
        if np.any(ws < 1.0):
            raise PotentialError("majorant values must be >= 1")
        return Majorant("custom", table=(tuple(ys), tuple(ws)))

    def value(self, y):
        y = np.asarray(y, dtype=float)
        if self.kind == "const":
            out = np.full_like(y, self.p)
        elif self.kind == "pow":
            out = np.maximum(1.0, y ** (-self.p))
        elif self.kind == "exp":
            out = np.exp(y ** (-self.p))
        else:
            ys, ws = self.table
            out = np.interp(y, ys, ws)
        return out if out.ndim else float(out)

    def inverse_from_log(self, log_s: float) -> float:
        """w^{-1}(s) given log(s); log-space input avoids overflow at 2^k T."""
        if self.kind == "const":
            return 0.0 if log_s >= math.log(self.p) else 2.0
        if self.kind == "pow":
            if log_s < 0.0:
                return 2.0
            return min(2.0, math.exp(-log_s / self.p))
        if self.kind == "exp":
            if log_s <= 0.0:
                return 2.0
            return min(2.0, log_s ** (-1.0 / self.p))
        ys, ws = np.asarray(self.table[0]), np.asarray(self.table[1])
        if log_s >= math.log(ws[0]):
            return 0.0
        if log_s < math.log(ws[-1]):
            return 2.0
        s = math.exp(log_s)
        # w is non-increasing: -w is increasing, invert through np.interp
        return float(np.interp(-s, -ws, ys))

    def inverse(self, s: float) -> float:
        if s <= 0:
            return 2.0
        return self.inverse_from_log(math.log(s))


def parse_majorant_literal(text: str) -> Majorant:
    """Parse ``const:<v>``, ``pow:<p>``, ``exp:<p>``, ``custom:<path>``."""
    text = text.strip()
    if ":" not in text:
        raise PotentialError(f"bad majorant literal: {text!r}")
    kind, arg = text.split(":", 1)
    if kind == "const":
        return Majorant.constant(float(arg))
    if kind == "pow":
        return Majorant.power_law(float(arg))
    if kind == "exp":
        return Majorant.exp_law(float(arg))
    if kind == "custom":
        data = np.loadtxt(arg)
        if data.ndim != 2 or data.shape[1] != 2:
            raise PotentialError(f"custom table {arg!r} must have two columns")
        return Majorant.custom(data[:, 0], data[:, 1])
    raise PotentialError(f"unknown majorant kind: {kind!r}")


@dataclass(frozen=True)
class DomarCheck:
    passed: bool
    total: float
    bound: float | None
    terms_used: int
    tail_bound: float
    crossing_index: int | None = None


def _tail_bound(w: Majorant, k_next: int, log_T: float) -> float | None:
    """Upper bound for sum_{k >= k_next} w^{-1}(2^k T), or None if divergent."""
    ln2 = math.log(2.0)
    if w.kind == "const":
        return 0.0  # terms are 0 or 2; the loop only exits on a zero term
    if w.kind == "pow":
        t_next = w.inverse_from_log(k_next * ln2 + log_T)
        q = 2.0 ** (-1.0 / w.p)
        return t_next / (1.0 - q)
    if w.kind == "exp":
        if w.p >= 1.0:
            return None  # terms ~ (k ln 2)^{-1/p}: divergent series
        a = k_next * ln2 + log_T
        if a <= 0:
            return None
        # integral test: int_{k_next}^inf (x ln2 + log_T)^{-1/p} dx
        r = 1.0 / w.p
        return a ** (1.0 - r) / (ln2 * (r - 1.0))
    return 0.0  # custom: the loop only exits on a zero term


def domar_check(w: Majorant, T: float, K: int = 20000) -> DomarCheck:
    """Evaluate the majorant summability condition at level T.

    Pass means ``sum_k w^{-1}(2^k T) <= 1/10`` with a certified tail, and the
    interior bound ``2T`` on the core square is reported.  A crossing of the
    budget by a non-vanishing partial sum is a fail with the crossing index;
    an uncertifiable tail raises :class:`CutoffError`.
    """
    if T <= 0:
        raise PotentialError("T must be positive")
    log_T = math.log(T)
    ln2 = math.log(2.0)
    total = 0.0
    for k in range(K + 1):
        term = w.inverse_from_log(k * ln2 + log_T)
        if term == 0.0:
            # inverse is non-increasing in s: all later terms vanish too
            return DomarCheck(total <= SUM_BUDGET + _SUM_SLACK, total,
                              2.0 * T if total <= SUM_BUDGET + _SUM_SLACK else None,
                              k, 0.0)
        total += term
        if total > SUM_BUDGET + _SUM_SLACK:
            return DomarCheck(False, total, None, k + 1, math.inf,
                              crossing_index=k)
    tail = _tail_bound(w, K + 1, log_T)
    if tail is None or tail > 1e-6:
        raise CutoffError(
            f"cutoff insufficient: K={K} leaves tail "
            f"{'divergent' if tail is None else f'{tail:.3g}'}")
    passed = total + tail <= SUM_BUDGET + _SUM_SLACK
    return DomarCheck(passed, total, 2.0 * T if passed else None, K + 1, tail)


@dataclass(frozen=True)
class DomarMinimalT:
    T_star: float
    check: DomarCheck
    degenerate_zero_sum: bool


def domar_minimal_T(w: Majorant, ceiling: float = 1e12,
                    rel_tol: float = 1e-7) -> DomarMinimalT | None:
    """Smallest passing T, by bisection on the monotone pass set.

    Returns None when no T up to the ceiling passes.  The degenerate flag
    marks majorants whose sum vanishes identically at the threshold
    (constant majorants), where T* is just the level at which the inverse
    collapses.
    """

    def passes(T):
        try:
            return domar_check(w, T)
        except CutoffError:
            return DomarCheck(False, math.inf, None, 0, math.inf)

    hi = 1.0
    chk_hi = passes(hi)
    while not chk_hi.passed:
        hi *= 4.0
        if hi > ceiling:
            return None
        chk_hi = passes(hi)
    lo = hi
    while True:
        cand = lo / 4.0
        if cand < 1e-18:
            lo = cand
            break
        if passes(cand).passed:
            lo = cand
        else:
            lo = cand
            break
    # invariant: fails at lo (or lo is the floor), passes at hi
    for _ in range(200):
        if hi - lo <= rel_tol * hi:
            break
        mid = math.sqrt(lo * hi)
        if passes(mid).passed:
            hi = mid
            chk_hi = None
        else:
            lo = mid
    chk = passes(hi)
    return DomarMinimalT(hi, chk, degenerate_zero_sum=(chk.total == 0.0))


@dataclass(frozen=True)
class WidthFunction:
    """Half-width of a strip-like domain ``{x+iy : |y| < width(x)}``.

    The canonical family is ``x * exp(-(log x / N)^2)`` above ``e^N`` and
    constant ``e^{N-1}`` below; the measure estimate integrates against the
    canonical denominator ``r * exp(-(log r / N)^2)`` throughout.
    """

    kind: str
    N: float = 0.0
    fn: object = field(default=None, repr=False)

    @staticmethod
    def canonical(N: float) -> "WidthFunction":
        if N <= 0:
            raise PotentialError("canonical width needs N > 0")
        return WidthFunction("canonical", N=N)

    @staticmethod
    def from_callable(fn) -> "WidthFunction":
        return WidthFunction("callable", fn=fn)

    def value(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind == "canonical":
            out = np.where(x <= math.exp(self.N),
                           math.exp(self.N - 1.0),
                           x * np.exp(-(np.log(np.maximum(x, 1e-300)) / self.N) ** 2))
            return out if out.ndim else float(out)
        out = np.asarray(self.fn(x), dtype=float)
        return out if out.ndim else float(out)


def _gl_panels(a: float, b: float, n_panels: int, order: int = 12):
    nodes, weights = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(a, b, n_panels + 1)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * np.diff(edges)
    xs = (mid[:, None] + half[:, None] * nodes[None, :]).ravel()
    ws = (half[:, None] * weights[None, :]).ravel()
    return xs, ws


@dataclass(frozen=True)
class CarlemanBound:
    value: float
    log_value: float
    integral: float
    panels: int


def carleman_measure_bound(width: WidthFunction, r1: float, r2: float,
                           rel_tol: float = 1e-9) -> CarlemanBound:
    """``(8/pi) exp(-pi * int_{r1}^{r2} dr / denom(r))`` with the canonical
    denominator ``r * exp(-(log r / N)^2)`` (general widths: denom = width).

    The quadrature doubles panel counts until the integral is stable to
    rel_tol; the log of the value is exact even when the value underflows.
    """
    if r1 > r2:
        raise PotentialError("need r1 <= r2")
    if r1 == r2:
        return CarlemanBound(8.0 / math.pi, math.log(8.0 / math.pi), 0.0, 0)

    if width.kind == "canonical":
        if r1 <= 0:
            raise PotentialError("need r1 > 0")
        l1, l2 = math.log(r1), math.log(r2)

        def integral_with(n_panels):
            xs, ws = _gl_panels(l1, l2, n_panels)
            return float(np.sum(ws * np.exp((xs / width.N) ** 2)))
    else:
        if r1 <= 0:
            raise PotentialError("need r1 > 0")

        def integral_with(n_panels):
            xs, ws = _gl_panels(r1, r2, n_panels)
            beta = np.asarray(width.value(xs), dtype=float)
            if np.any(beta <= 0):
                raise PotentialError("width function must be positive on [r1, r2]")
            return float(np.sum(ws / beta))

    n = 8
    prev = integral_with(n)
    for _ in range(20):
        n *= 2
        cur = integral_with(n)
        if abs(cur - prev) <= rel_tol * max(abs(cur), 1e-300):
            break
        prev = cur
    log_value = math.log(8.0 / math.pi) - math.pi * cur
    value = math.exp(log_value) if log_value > -745.0 else 0.0
    return CarlemanBound(value, log_value, cur, n)


def carleman_band_bound(N: float, n: int) -> CarlemanBound:
    """Measure bound for the band ``[exp((n-1)N), exp(nN)]`` of the canonical
    strip; compared in tests against ``exp(-N e^{(n-1)^2})``."""
    if n < 1:
        raise PotentialError("band index must be >= 1")
    return carleman_measure_bound(WidthFunction.canonical(N),
                                  math.exp((n - 1) * N), math.exp(n * N))


@dataclass(frozen=True)
class SectorCertificate:
    certified: bool
    total: float
    leading: float
    final_term: float
    middle_terms: tuple
    omega_checks: tuple
    violating_n: int | None


def _safe_exp(x: float) -> float:
    if x > 700.0:
        return math.inf
    if x < -745.0:
        return 0.0
    return math.exp(x)


def sector_certificate(gamma: float, delta: float, N: int, M: int,
                       z: complex = 10.0 + 0.0j) -> SectorCertificate:
    """Assemble the explicit harmonic-estimation chain for the truncated
    strip and certify the resulting bound <= 3.

    Verifies the side condition ``exp((n-1)^2) >= 2 delta n
    exp((1-gamma)(n+1)^2)`` for 1 <= n <= M (raising
    :class:`ParameterError` naming the first violating n), checks each band's
    measure bound against ``exp(-N e^{(n-1)^2})``, and sums
    ``1 + exp[(NM)^{1/gamma} - N e^{(M-1)^2}] + sum_{2<=n<M}
    exp[delta n N e^{(1-gamma)(n+1)^2} - N e^{(n-1)^2}]``.
    """
    if not (0.0 < gamma < 1.0):
        raise PotentialError("gamma must lie in (0, 1)")
    if delta <= 0:
        raise PotentialError("delta must be positive")
    if N < 1 or M < 1:
        raise PotentialError("N and M must be >= 1")
    for n in range(1, M + 1):
        lhs = (n - 1) ** 2
        rhs = math.log(2.0 * delta * n) + (1.0 - gamma) * (n + 1) ** 2
        if lhs < rhs:
            raise ParameterError(
                f"delta={delta} violates the side condition at n={n}", n=n)
    # geometric step: the first two boundary pieces carry weight e^{-N/2}
    # only once N dominates 2(1 + log|z|)
    if N < 2.0 * (1.0 + math.log(max(abs(z), 1.0))):
        raise PotentialError(
            f"N={N} below the geometric threshold for z with |z|={abs(z):.3g}")

    leading = 1.0
    log_final = (N * M) ** (1.0 / gamma) - N * _safe_exp((M - 1) ** 2)
    final_term = _safe_exp(log_final)
    middle = []
    omega_checks = []
    total = leading + final_term
    violating = M if final_term > 1.0 else None
    for n in range(2, M):
        log_sup = delta * n * N * _safe_exp((1.0 - gamma) * (n + 1) ** 2)
        log_omega = -N * _safe_exp((n - 1) ** 2)
        cb = carleman_band_bound(N, n)
        omega_checks.append((n, cb.log_value, log_omega,
                             cb.log_value <= log_omega + 1e-9))
        term = _safe_exp(log_sup + log_omega)
        middle.append((n, term))
        total += term
        if term > 1.0 and violating is None:
            violating = n
    certified = total <= 3.0
    return SectorCertificate(certified, total, leading, final_term,
                             tuple(middle), tuple(omega_checks),
                             None if certified else violating)
