"""Nonzero harmonic function on the rectangle with vanishing boundary limits.

Given gamma in (1,3], eps > 0 and a cut-off exponent delta in
(max(0, 2-gamma), 1), the building blocks are

  f0(z) = exp(eps/z - z^{-delta})          (principal branch, real on (0,1)),
  f1    = C^2 ramp, 0 below 1.25, 1 above 1.75 (quintic smoothstep),
  f2    = f0 cut off across the wedge y^gamma <= x <= 2 y^gamma via f1(x/y^gamma),
  f3    = (1/pi) int d-bar f2(zeta) / (z - zeta) dA(zeta)   (Cauchy transform),
  f4    = harmonic extension of Im f3 from the rectangle boundary,

and u = Im(f2 - f3) + f4.  f2 - f3 is analytic (the transform repairs the
d-bar defect of the cut-off), so u is harmonic; u vanishes on the bottom
edge away from 0, is dominated by C + C exp(eps/y), and tends to 0 inside
the approach region |x| <= y^gamma.

The d-bar integrand lives on the wedge; it is integrated by tensor
Gauss-Legendre panels in (y, t=x/y^gamma) coordinates, with per-target
quadtree refinement near the singularity of the Cauchy kernel and an exact
polygon rule on the finest cells.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.fft
from scipy.interpolate import RectBivariateSpline

from .harmonic import DomainError, HarmonicError, HarmonicFunction

__all__ = [
    "ParameterRangeError",
    "ResolutionError",
    "HalfPlaneConstruction",
    "build_counterexample_halfplane",
]

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(6)
_RAMP_LO, _RAMP_HI = 1.25, 1.75


class ParameterRangeError(HarmonicError):
    pass


class ResolutionError(HarmonicError):
    pass


def _smoothstep(s):
    s = np.clip(s, 0.0, 1.0)
    return s ** 3 * (10.0 + s * (6.0 * s - 15.0))


def _smoothstep_d(s):
    inside = (s > 0.0) & (s < 1.0)
    s = np.clip(s, 0.0, 1.0)
    return np.where(inside, 30.0 * s ** 2 * (1.0 - s) ** 2, 0.0)


@dataclass(frozen=True)
class _Panel:
    y0: float
    y1: float
    u0: float
    u1: float
    i0: int
    i1: int
    bbox: tuple
    diam: float


class HalfPlaneConstruction(HarmonicFunction):
    """u on Q = (-1,1) x (0,1), harmonic, nonzero, with u = 0 on
    [-1,1] \\ {0} and zero limit along the wedge-shaped approach region."""

    domain = "rectangle"

    def __init__(self, gamma: float, eps: float, delta: float, grid: int = 400,
                 kappa: float = 1.2, leaf_size: float = 4e-4):
        if not (1.0 < gamma <= 3.0):
            raise ParameterRangeError("gamma must lie in (1, 3]")
        if eps <= 0.0:
            raise ParameterRangeError("eps must be positive")
        if not (max(0.0, 2.0 - gamma) < delta < 1.0):
            raise ParameterRangeError(
                f"delta must lie in ({max(0.0, 2.0 - gamma):g}, 1)")
        if grid < 64:
            raise ResolutionError(
                f"grid={grid} too coarse to resolve the wedge; need >= 64")
        if grid % 2:
            raise ResolutionError("grid must be even (coarse/fine error probe)")
        self.gamma = float(gamma)
        self.eps = float(eps)
        self.delta = float(delta)
        self.grid = int(grid)
        self.kappa = float(kappa)
        self.leaf_size = float(leaf_size)
        self._build_quadrature()
        self._build_extension()
        self._build_wedge_polyline()

    # ---------------------------------------------------------------- pieces

    def f0(self, z):
        """exp(eps/z - z^{-delta}), principal branch, positive on (0, inf)."""
        z = np.asarray(z, dtype=complex)
        w = self.eps / z - z ** (-self.delta)
        re = np.clip(w.real, -745.0, 700.0)
        out = np.exp(re + 1j * w.imag)
        return out if out.ndim else complex(out)

    def ramp(self, t):
        return _smoothstep((np.asarray(t, dtype=float) - _RAMP_LO)
                           / (_RAMP_HI - _RAMP_LO))

    def ramp_d(self, t):
        return _smoothstep_d((np.asarray(t, dtype=float) - _RAMP_LO)
                             / (_RAMP_HI - _RAMP_LO)) / (_RAMP_HI - _RAMP_LO)

    def wedge_parameter(self, z):
        """t = x / y^gamma; +inf for x > 0 on the axis, 0 for x <= 0."""
        z = np.asarray(z, dtype=complex)
        x, y = z.real, z.imag
        safe_y = np.where(y > 0.0, y, 1.0)
        t = np.where(y > 0.0, x / safe_y ** self.gamma,
                     np.where(x > 0.0, np.inf, 0.0))
        return t

    def f2(self, z):
        """f0 cut off across the wedge: 0 for x < y^gamma, f0 for x > 2 y^gamma."""
        z = np.asarray(z, dtype=complex)
        flat = np.atleast_1d(z).ravel()
        t = np.atleast_1d(self.wedge_parameter(flat)).ravel()
        ramp = self.ramp(np.where(np.isinf(t), 2.0, t))
        out = np.zeros(flat.shape, dtype=complex)
        m = ramp > 0.0
        if np.any(m):
            out[m] = self.f0(flat[m]) * ramp[m]
        return out.reshape(z.shape) if z.ndim else complex(out[0])

    def dbar_f2(self, z):
        """(d/dx + i d/dy) f2 / 2; supported on the ramp part of the wedge."""
        z = np.asarray(z, dtype=complex)
        flat = np.atleast_1d(z).ravel()
        t = np.atleast_1d(self.wedge_parameter(flat)).ravel()
        dr = self.ramp_d(np.where(np.isfinite(t), t, 0.0))
        out = np.zeros(flat.shape, dtype=complex)
        m = dr > 0.0
        if np.any(m):
            y = flat.imag[m]
            grad = (y ** (-self.gamma) - 1j * self.gamma * t[m] / y) / 2.0
            out[m] = self.f0(flat[m]) * dr[m] * grad
        return out.reshape(z.shape) if z.ndim else complex(out[0])

    # ----------------------------------------------------- wedge quadrature

    def _t_hi(self, y):
        """Upper ramp parameter inside Q: min(1.75, the value where x = 1)."""
        return np.minimum(_RAMP_HI, np.asarray(y, dtype=float) ** (-self.gamma))

    def _pick_y_floor(self) -> float:
        cand = np.geomspace(2e-2, 1e-7, 160)
        tg = np.linspace(_RAMP_LO, _RAMP_HI, 9)
        ok = np.zeros(cand.size, dtype=bool)
        for i, y in enumerate(cand):
            zz = tg * y ** self.gamma + 1j * y
            dens = (np.abs(self.f0(zz)) * 3.75
                    * (y ** (-self.gamma) + self.gamma * tg / y) / 2.0)
            mass = dens.max() * 0.5 * y ** self.gamma
            ok[i] = mass / y < 1e-16
        # largest candidate below which the strip mass stays negligible
        for i in range(cand.size):
            if ok[i:].all():
                return float(cand[i])
        return float(cand[-1])

    def _map_nodes_cached(self, y0, y1, u0, u1):
        key = (y0, y1, u0, u1)
        hit = self._node_cache.get(key)
        if hit is None:
            if len(self._node_cache) > 60000:
                self._node_cache.clear()
            hit = self._map_nodes(y0, y1, u0, u1)
            self._node_cache[key] = hit
        return hit

    def _map_nodes(self, y0, y1, u0, u1):
        """Tensor GL nodes of a parameter rectangle; returns zeta, weights W
        such that the cell integral of dbar_f2 / (z - zeta) is sum W/(z-zeta)."""
        ym = 0.5 * (y0 + y1)
        yh = 0.5 * (y1 - y0)
        um = 0.5 * (u0 + u1)
        uh = 0.5 * (u1 - u0)
        yv = (ym + yh * _GL_NODES)[:, None]
        uv = (um + uh * _GL_NODES)[None, :]
        wv = (yh * _GL_WEIGHTS)[:, None] * (uh * _GL_WEIGHTS)[None, :]
        th = self._t_hi(yv)
        L = np.maximum(th - _RAMP_LO, 0.0)
        t = _RAMP_LO + uv * L
        x = t * yv ** self.gamma
        zeta = x + 1j * np.broadcast_to(yv, x.shape)
        dens = (self.ramp_d(t)
                * (1.0 - 1j * self.gamma * t * yv ** (self.gamma - 1.0)) / 2.0)
        W = wv * L * dens * self.f0(zeta)
        return zeta.ravel(), W.ravel()

    def _corners(self, y0, y1, u0, u1):
        pts = []
        for y in (y0, y1):
            th = float(self._t_hi(y))
            L = max(th - _RAMP_LO, 0.0)
            for u in (u0, u1):
                t = _RAMP_LO + u * L
                pts.append(complex(t * y ** self.gamma, y))
        return pts

    def _build_quadrature(self):
        g = self.gamma
        self._node_cache: dict = {}
        self._geom_cache: dict = {}
        y_floor = self._pick_y_floor()
        y_kink = _RAMP_HI ** (-1.0 / g)      # above: the right edge clips the ramp
        y_top = _RAMP_LO ** (-1.0 / g)       # above: the ramp leaves Q entirely
        y_top = min(y_top, 1.0 - 1e-12)
        n_geo = max(40, self.grid // 8)
        breaks = list(np.geomspace(y_floor, min(0.5, y_kink), n_geo))
        if y_kink > 0.5:
            breaks += list(np.linspace(0.5, y_kink, max(8, self.grid // 40))[1:])
        breaks += list(np.linspace(y_kink, y_top, max(10, self.grid // 32))[1:])
        refined = [breaks[0]]
        for b in breaks[1:]:
            # keep strips shallow so the near-field radius stays local
            n_sub = max(1, int(math.ceil((b - refined[-1]) / 0.02)))
            refined.extend(np.linspace(refined[-1], b, n_sub + 1)[1:])
        breaks = refined
        self.y_floor = y_floor
        zetas, weights, panels = [], [], []
        count = 0
        for y0, y1 in zip(breaks[:-1], breaks[1:]):
            if y1 <= y0:
                continue
            # split the ramp parameter so panels stay roughly square in x
            width = (float(self._t_hi(y1)) - _RAMP_LO) * y1 ** g
            n_t = int(np.clip(math.ceil(width / 0.02), 3, 12))
            u_edges = np.linspace(0.0, 1.0, n_t + 1)
            for u0, u1 in zip(u_edges[:-1], u_edges[1:]):
                zeta, W = self._map_nodes(y0, y1, u0, u1)
                corners = self._corners(y0, y1, u0, u1)
                xs = [c.real for c in corners] + list(zeta.real)
                ys = [c.imag for c in corners] + list(zeta.imag)
                xmin, xmax = min(xs), max(xs)
                ymin, ymax = min(ys), max(ys)
                pad = 0.3 * max(xmax - xmin, ymax - ymin, 1e-12)
                bbox = (xmin - pad, xmax + pad, ymin - pad, ymax + pad)
                diam = math.hypot(bbox[1] - bbox[0], bbox[3] - bbox[2])
                panels.append(_Panel(y0, y1, u0, u1, count, count + zeta.size,
                                     bbox, diam))
                zetas.append(zeta)
                weights.append(W)
                count += zeta.size
        self._zeta = np.concatenate(zetas)
        self._W = np.concatenate(weights)
        self._panels = panels
        self._bbox_arr = np.array([p.bbox for p in panels])
        self._diam_arr = np.array([p.diam for p in panels])

    @staticmethod
    def _quad_kernel(z: complex, corners) -> complex:
        """Exact integral of dA(zeta)/(z - zeta) over a straight-edge polygon."""
        area2 = 0.0
        for a, b in zip(corners, corners[1:] + corners[:1]):
            area2 += a.real * b.imag - b.real * a.imag
        if area2 < 0.0:
            corners = corners[::-1]
        total = 0.0 + 0.0j
        for a, b in zip(corners, corners[1:] + corners[:1]):
            p = a - z
            q = b - a
            if abs(q) < 1e-300:
                continue
            if abs(p) < 1e-14 or abs(p + q) < 1e-14:
                z = z + 1e-12 * (1.0 + 1.0j)   # nudge off a vertex
                p = a - z
            total += (np.conj(q)
                      + (np.conj(p) - p * np.conj(q) / q)
                      * np.log((b - z) / (a - z)))
        return 0.5j * total

    def _rect_geometry(self, y0, y1, u0, u1):
        key = (y0, y1, u0, u1)
        hit = self._geom_cache.get(key)
        if hit is None:
            if len(self._geom_cache) > 200000:
                self._geom_cache.clear()
            corners = self._corners(y0, y1, u0, u1)
            xs = [c.real for c in corners]
            ys = [c.imag for c in corners]
            hit = (corners, min(xs), max(xs), min(ys), max(ys),
                   math.hypot(max(xs) - min(xs), max(ys) - min(ys)))
            self._geom_cache[key] = hit
        return hit

    def _refined_panel(self, z: complex, y0, y1, u0, u1, depth: int) -> complex:
        corners, x0, x1, ylo, yhi, diam = self._rect_geometry(y0, y1, u0, u1)
        dx = max(x0 - z.real, 0.0, z.real - x1)
        dy = max(ylo - z.imag, 0.0, z.imag - yhi)
        dist = math.hypot(dx, dy)
        if dist >= self.kappa * diam:
            zeta, W = self._map_nodes_cached(y0, y1, u0, u1)
            return complex(np.sum(W / (z - zeta)))
        if diam < self.leaf_size or depth >= 30:
            centre = complex(0.5 * (x0 + x1), 0.5 * (ylo + yhi))
            gval = complex(np.asarray(self.dbar_f2(np.array([centre])))[0])
            if gval == 0.0:
                return 0.0 + 0.0j
            return gval * self._quad_kernel(z, corners)
        ym = 0.5 * (y0 + y1)
        um = 0.5 * (u0 + u1)
        return (self._refined_panel(z, y0, ym, u0, um, depth + 1)
                + self._refined_panel(z, y0, ym, um, u1, depth + 1)
                + self._refined_panel(z, ym, y1, u0, um, depth + 1)
                + self._refined_panel(z, ym, y1, um, u1, depth + 1))

    def f3(self, z):
        """Cauchy transform of dbar f2 at z (arrays supported)."""
        z = np.asarray(z, dtype=complex)
        flat = np.atleast_1d(z).ravel()
        out = np.zeros(flat.size, dtype=complex)
        block = max(1, int(2e6 // max(self._zeta.size, 1)))
        for s in range(0, flat.size, block):
            zb = flat[s:s + block]
            out[s:s + block] = (1.0 / (zb[:, None] - self._zeta[None, :])) @ self._W
        # near-panel corrections
        bx0, bx1, by0, by1 = self._bbox_arr.T
        dxa = np.maximum(np.maximum(bx0[None, :] - flat.real[:, None],
                                    flat.real[:, None] - bx1[None, :]), 0.0)
        dya = np.maximum(np.maximum(by0[None, :] - flat.imag[:, None],
                                    flat.imag[:, None] - by1[None, :]), 0.0)
        near = np.hypot(dxa, dya) < self.kappa * self._diam_arr[None, :]
        for zi, pi in zip(*np.nonzero(near)):
            p = self._panels[pi]
            zc = complex(flat[zi])
            plain = complex(np.sum(self._W[p.i0:p.i1]
                                   / (zc - self._zeta[p.i0:p.i1])))
            refined = self._refined_panel(zc, p.y0, p.y1, p.u0, p.u1, 0)
            out[zi] += refined - plain
        out /= math.pi
        out = out.reshape(np.shape(z)) if z.ndim else complex(out[0])
        return out

    # ----------------------------------------------- harmonic extension f4

    def _solve_grid(self, ny: int):
        nx = 2 * ny
        xs = np.linspace(-1.0, 1.0, nx + 1)
        ys = np.linspace(0.0, 1.0, ny + 1)
        step = self.grid // ny
        bottom = self._edge_bottom[::step]
        top = self._edge_top[::step]
        left = self._edge_left[::step]
        right = self._edge_right[::step]
        F = np.zeros((ny - 1, nx - 1))
        F[0, :] += bottom[1:-1]
        F[-1, :] += top[1:-1]
        F[:, 0] += left[1:-1]
        F[:, -1] += right[1:-1]
        lamx = 2.0 - 2.0 * np.cos(np.pi * np.arange(1, nx) / nx)
        lamy = 2.0 - 2.0 * np.cos(np.pi * np.arange(1, ny) / ny)
        Fh = scipy.fft.dstn(F, type=1, norm="ortho")
        Uh = Fh / (lamy[:, None] + lamx[None, :])
        U = scipy.fft.idstn(Uh, type=1, norm="ortho")
        full = np.empty((ny + 1, nx + 1))
        full[0, :] = bottom
        full[-1, :] = top
        full[:, 0] = left
        full[:, -1] = right
        full[1:-1, 1:-1] = U
        return xs, ys, full

    def _build_extension(self):
        ny = self.grid
        nx = 2 * ny
        xs = np.linspace(-1.0, 1.0, nx + 1)
        ys = np.linspace(0.0, 1.0, ny + 1)
        self._edge_bottom = np.asarray(self.f3(xs + 0.0j)).imag
        self._edge_top = np.asarray(self.f3(xs + 1.0j)).imag
        self._edge_left = np.asarray(self.f3(-1.0 + 1j * ys)).imag
        self._edge_right = np.asarray(self.f3(1.0 + 1j * ys)).imag
        xs_f, ys_f, full = self._solve_grid(ny)
        self._spline = RectBivariateSpline(ys_f, xs_f, full)
        # Richardson estimate of the 5-point discretization error
        xs_c, ys_c, full_c = self._solve_grid(ny // 2)
        coarse = RectBivariateSpline(ys_c, xs_c, full_c)
        rng = np.random.default_rng(7)
        px = rng.uniform(-0.9, 0.9, 200)
        py = rng.uniform(0.05, 0.95, 200)
        diff = np.abs(self._spline.ev(py, px) - coarse.ev(py, px)).max()
        self.f4_error_estimate = float(diff) / 3.0

    def f4(self, z):
        z = np.asarray(z, dtype=complex)
        out = self._spline.ev(np.atleast_1d(z.imag).ravel(),
                              np.atleast_1d(z.real).ravel())
        return out.reshape(z.shape) if z.ndim else float(out[0])

    # -------------------------------------------------------------- evaluate

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        flat = np.atleast_1d(z)
        if np.any(np.abs(flat.real) > 1.0 + 1e-12) or \
                np.any(flat.imag < -1e-12) or np.any(flat.imag > 1.0 + 1e-12):
            raise DomainError("point outside the closed rectangle")
        if np.any(flat == 0.0):
            raise DomainError("u does not extend to the boundary point 0")
        vals = (self.f2(z).imag - self.f3(z).imag + self.f4(z))
        return vals if np.ndim(vals) else float(vals)

    def mvp_tolerance(self) -> float:
        return 3.0 * self.f4_error_estimate + 1e-7

    # ------------------------------------------------------------- utilities

    def _build_wedge_polyline(self):
        ys = np.geomspace(max(self.y_floor * 0.5, 1e-8), 1.0, 600)
        lo = ys ** self.gamma
        hi = np.minimum(2.0 * ys ** self.gamma, 1.0)
        pts = np.concatenate([lo + 1j * ys, hi + 1j * ys])
        self._wedge_pts = pts

    def wedge_distance(self, z) -> float:
        """Distance from z to the cut-off wedge y^gamma <= x <= 2 y^gamma."""
        z = complex(z)
        x, y = z.real, z.imag
        if 0.0 < y < 1.0:
            t = x / y ** self.gamma
            if 1.0 <= t <= 2.0:
                return 0.0
        return float(np.abs(self._wedge_pts - z).min())

    def to_config(self) -> str:
        return (f"gamma={self.gamma:.17g}\neps={self.eps:.17g}\n"
                f"delta={self.delta:.17g}\ngrid={self.grid}\n")

    @staticmethod
    def from_config(text: str) -> "HalfPlaneConstruction":
        fields = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise HarmonicError(f"config line {lineno}: expected key=value")
            key, val = (s.strip() for s in line.split("=", 1))
            if key not in ("gamma", "eps", "delta", "grid"):
                raise HarmonicError(f"config line {lineno}: unknown key {key!r}")
            fields[key] = val
        missing = {"gamma", "eps", "delta", "grid"} - fields.keys()
        if missing:
            raise HarmonicError(f"config missing keys: {sorted(missing)}")
        return HalfPlaneConstruction(float(fields["gamma"]), float(fields["eps"]),
                                     float(fields["delta"]), int(fields["grid"]))


def build_counterexample_halfplane(gamma: float, eps: float, delta: float,
                                   grid: int = 400) -> HalfPlaneConstruction:
    """Assemble the rectangle function u = Im(f2 - f3) + f4 for the given
    wedge exponent, growth budget and cut-off exponent."""
    return HalfPlaneConstruction(gamma, eps, delta, grid=grid)
