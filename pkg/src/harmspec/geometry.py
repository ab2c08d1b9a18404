"""Approach regions in the half-plane and the disc.

An approach function h fixes how wide the region of admissible approach to a
boundary point is: the half-plane region is ``{x+iy : |x - x0| <= h(y),
0 < y < 1}`` and its disc counterpart is the Moebius image anchored at
``exp(i*phi)``.  Paths produced here witness boundary limits along those
regions; they shrink geometrically and alternate between the centre line and
the region edge.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "GeometryError",
    "ApproachFunction",
    "HalfPlaneRegion",
    "DiscRegion",
    "moebius_to_disc",
    "moebius_from_disc",
    "region_contains",
    "approach_path",
    "parse_approach_literal",
]


class GeometryError(ValueError):
    """Domain or construction error in the region machinery."""


@dataclass(frozen=True)
class ApproachFunction:
    """Non-decreasing continuous h : [0,1] -> [0,1] with h(0) = 0.

    Kinds: ``zero``, ``linear`` (c*t), ``cubic`` (c*t^3), ``power`` (t^gamma
    with gamma in (0,1) or (1,3]) and ``custom`` (piecewise-linear monotone
    table).
    """

    kind: str
    c: float = 0.0
    table: tuple = field(default=(), repr=False)

    @staticmethod
    def zero() -> "ApproachFunction":
        return ApproachFunction("zero")

    @staticmethod
    def linear(c: float) -> "ApproachFunction":
        if c <= 0:
            raise GeometryError("linear approach function needs c > 0")
        return ApproachFunction("linear", c)

    @staticmethod
    def cubic(c: float) -> "ApproachFunction":
        if c <= 0:
            raise GeometryError("cubic approach function needs c > 0")
        return ApproachFunction("cubic", c)

    @staticmethod
    def power(gamma: float) -> "ApproachFunction":
        if not (0.0 < gamma < 1.0 or 1.0 < gamma <= 3.0):
            raise GeometryError("power exponent must lie in (0,1) or (1,3]")
        return ApproachFunction("power", gamma)

    @staticmethod
    def custom(ts, hs) -> "ApproachFunction":
        ts = np.asarray(ts, dtype=float)
        hs = np.asarray(hs, dtype=float)
        if ts.ndim != 1 or ts.shape != hs.shape or ts.size < 2:
            raise GeometryError("custom table needs two equal-length columns")
        if ts[0] != 0.0 or hs[0] != 0.0:
            raise GeometryError("custom table must start at (0, 0)")
        if np.any(np.diff(ts) <= 0):
            raise GeometryError("custom table abscissae must increase")
        if np.any(np.diff(hs) < 0):
            raise GeometryError("custom table must be non-decreasing")
        if ts[-1] > 1.0 or np.any(hs < 0) or np.any(hs > 1.0):
            raise GeometryError("custom table values must stay within [0, 1]")
        return ApproachFunction("custom", table=(tuple(ts), tuple(hs)))

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind == "zero":
            out = np.zeros_like(t)
        elif self.kind == "linear":
            out = self.c * t
        elif self.kind == "cubic":
            out = self.c * t ** 3
        elif self.kind == "power":
            out = np.power(np.maximum(t, 0.0), self.c)
        else:
            ts, hs = self.table
            out = np.interp(t, ts, hs)
        return out if out.ndim else float(out)

    def inverse(self, s: float) -> float:
        """sup{t in [0,1] : h(t) <= s}; returns 1.0 if h stays below s."""
        if s < 0:
            return 0.0
        if self.kind == "zero":
            return 1.0
        if self.kind == "linear":
            return min(1.0, s / self.c)
        if self.kind == "cubic":
            return min(1.0, (s / self.c) ** (1.0 / 3.0))
        if self.kind == "power":
            return min(1.0, s ** (1.0 / self.c)) if s < 1.0 else 1.0
        ts, hs = np.asarray(self.table[0]), np.asarray(self.table[1])
        if s >= hs[-1]:
            return float(ts[-1])
        idx = int(np.searchsorted(hs, s, side="right")) - 1
        t0, t1 = ts[idx], ts[idx + 1]
        h0, h1 = hs[idx], hs[idx + 1]
        if h1 == h0:
            return float(t1)
        return float(t0 + (s - h0) * (t1 - t0) / (h1 - h0))


def parse_approach_literal(text: str) -> ApproachFunction:
    """Parse ``zero``, ``linear:<c>``, ``cubic:<c>``, ``power:<g>``,
    ``custom:<path>`` (two-column table file)."""
    text = text.strip()
    if text == "zero":
        return ApproachFunction.zero()
    if ":" not in text:
        raise GeometryError(f"bad approach-function literal: {text!r}")
    kind, arg = text.split(":", 1)
    if kind == "linear":
        return ApproachFunction.linear(float(arg))
    if kind == "cubic":
        return ApproachFunction.cubic(float(arg))
    if kind == "power":
        return ApproachFunction.power(float(arg))
    if kind == "custom":
        data = np.loadtxt(arg)
        if data.ndim != 2 or data.shape[1] != 2:
            raise GeometryError(f"custom table {arg!r} must have two columns")
        return ApproachFunction.custom(data[:, 0], data[:, 1])
    raise GeometryError(f"unknown approach-function kind: {kind!r}")


@dataclass(frozen=True)
class HalfPlaneRegion:
    """``{x+iy : |x - x0| <= h(y), 0 < y < 1}`` anchored at the real point x0."""

    h: ApproachFunction
    x0: float = 0.0

    @property
    def target(self) -> complex:
        return complex(self.x0, 0.0)

    def contains(self, z: complex) -> bool:
        x, y = z.real, z.imag
        if not (0.0 < y < 1.0):
            return False
        return abs(x - self.x0) <= self.h(y)


@dataclass(frozen=True)
class DiscRegion:
    """Moebius image of a half-plane region, anchored at exp(i*phi)."""

    h: ApproachFunction
    phi: float = 0.0

    @property
    def target(self) -> complex:
        return cmath.exp(1j * self.phi)

    def contains(self, w: complex) -> bool:
        v = w * cmath.exp(-1j * self.phi)
        if abs(v + 1.0) < 1e-300:
            return False
        z = 1j * (1.0 - v) / (1.0 + v)
        x, y = z.real, z.imag
        if not (0.0 < y < 1.0):
            return False
        # closed inequality, with a float guard for pulled-back edge points
        return abs(x) <= self.h(y) * (1.0 + 1e-12) + 1e-15


def moebius_to_disc(phi: float, z: complex) -> complex:
    """exp(i*phi) * (i - z) / (i + z); upper half-plane onto the unit disc."""
    z = complex(z)
    if z == -1j:
        raise GeometryError("z = -i is the pole of the half-plane chart")
    return cmath.exp(1j * phi) * (1j - z) / (1j + z)


def moebius_from_disc(phi: float, w: complex) -> complex:
    """Inverse of :func:`moebius_to_disc`; defined for |w| < 1."""
    w = complex(w)
    if abs(w) >= 1.0:
        raise GeometryError("moebius_from_disc needs |w| < 1")
    v = w * cmath.exp(-1j * phi)
    return 1j * (1.0 - v) / (1.0 + v)


def region_contains(region, point: complex) -> bool:
    return region.contains(complex(point))


def approach_path(region, n_points: int) -> np.ndarray:
    """Points converging to the region's boundary target.

    Heights follow y_k = 2^-(k+1), capped by h^{-1}(2^-(k+1)) so that wide
    (gamma < 1) regions still converge like C * 2^-k.  Offsets alternate
    0, +h(y), 0, -h(y): the path visits the centre line and the region edge.
    """
    if n_points < 1:
        raise GeometryError("approach_path needs n_points >= 1")
    if isinstance(region, HalfPlaneRegion):
        h, anchor, to_disc = region.h, region.x0, None
    elif isinstance(region, DiscRegion):
        h, anchor, to_disc = region.h, 0.0, region.phi
    else:
        raise GeometryError(f"unsupported region type {type(region).__name__}")

    pts = np.empty(n_points, dtype=complex)
    for k in range(n_points):
        s = 2.0 ** (-(k + 1))
        y = min(s, h.inverse(s))
        mode = k % 4
        if mode == 1:
            off = float(h(y))
        elif mode == 3:
            off = -float(h(y))
        else:
            off = 0.0
        if to_disc is None:
            pts[k] = complex(anchor + off, y)
        else:
            # shave the edge: pulling the point back through the chart loses
            # ~1e-16 in y, which h can amplify by h'(y) ~ 1/y for wide regions
            shave = max(1e-10, 1e-15 / y)
            pts[k] = moebius_to_disc(to_disc, complex(off * (1 - shave), y))
    return pts
