"""Matrix generators with cached root-subspace decompositions.

A generator A is stored together with its spectral data: clustered
eigenvalues, the (generally oblique) spectral projections onto root
subspaces, and the nilpotent parts (A - lambda)P.  Simple spectra go through
plain eigenvectors; clustered spectra fall back to a Schur block
diagonalization (Sylvester splitting), clustering threshold 1e-8.
"""

from __future__ import annotations

import ast
import math
import re
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

__all__ = [
    "OpGroupError",
    "SingularityError",
    "ExponentialGrowthError",
    "PreconditionError",
    "SpectralResolutionError",
    "SpectralData",
    "MatrixGenerator",
    "ClosedRealSet",
    "Subspace",
    "parse_matrix_text",
    "format_matrix_text",
    "jordan_matrix",
]

CLUSTER_TOL = 1e-8
RESIDUAL_TOL = 1e-10


class OpGroupError(ValueError):
    pass


class SingularityError(OpGroupError):
    pass


class ExponentialGrowthError(OpGroupError):
    pass


class PreconditionError(OpGroupError):
    pass


class SpectralResolutionError(OpGroupError):
    pass


@dataclass
class SpectralData:
    eigenvalues: np.ndarray          # one representative per cluster
    multiplicities: np.ndarray
    projections: list                # P_j, sum to I, P_i P_j = 0
    nilpotents: list                 # N_j = (A - lambda_j) P_j
    indices: np.ndarray              # smallest m with N_j^m = 0
    residual: float

    @property
    def n_clusters(self) -> int:
        return len(self.projections)


def _cluster(values: np.ndarray, tol: float) -> list:
    order = np.lexsort((values.imag, values.real))
    groups: list[list[int]] = []
    for idx in order:
        placed = False
        for g in groups:
            if abs(values[idx] - values[g[0]]) <= tol:
                g.append(idx)
                placed = True
                break
        if not placed:
            groups.append([idx])
    return groups


def _projection_for_cluster(A: np.ndarray, lam: complex, tol: float) -> np.ndarray:
    """Spectral projection via sorted Schur + Sylvester block splitting."""
    def select(x):
        return abs(x - lam) <= tol

    T, Z, sdim = scipy.linalg.schur(A, output="complex", sort=select)
    k = int(sdim)
    if k == A.shape[0]:
        return np.eye(A.shape[0], dtype=complex)
    T11, T12, T22 = T[:k, :k], T[:k, k:], T[k:, k:]
    Y = scipy.linalg.solve_sylvester(T11, -T22, -T12)
    P = np.zeros_like(T)
    P[:k, :k] = np.eye(k)
    P[:k, k:] = -Y
    return Z @ P @ Z.conj().T


def _spectral_data(A: np.ndarray, cluster_tol: float = CLUSTER_TOL) -> SpectralData:
    n = A.shape[0]
    eigvals = np.linalg.eigvals(A)
    groups = _cluster(eigvals, cluster_tol * max(1.0, np.abs(eigvals).max(initial=0.0)))
    lams, mults, projs, nils, idxs = [], [], [], [], []
    all_simple = all(len(g) == 1 for g in groups)
    if all_simple:
        w, V = np.linalg.eig(A)
        W = np.linalg.inv(V)
        for g in groups:
            j = g[0]
            # match eig output to the clustered value
            jj = int(np.argmin(np.abs(w - eigvals[j])))
            P = np.outer(V[:, jj], W[jj, :])
            lams.append(w[jj])
            mults.append(1)
            projs.append(P)
            nils.append(np.zeros_like(P))
            idxs.append(1)
    else:
        for g in groups:
            lam = eigvals[g].mean()
            P = _projection_for_cluster(A, lam, cluster_tol * max(1.0, np.abs(eigvals).max()))
            N = (A - lam * np.eye(n)) @ P
            m = len(g)
            idx = m
            Npow = np.eye(n, dtype=complex)
            for p in range(1, m + 1):
                Npow = Npow @ N
                if np.linalg.norm(Npow) <= RESIDUAL_TOL * max(1.0, np.linalg.norm(A) ** p):
                    idx = p
                    break
            lams.append(lam)
            mults.append(m)
            projs.append(P)
            nils.append(N)
            idxs.append(idx)
    data = SpectralData(np.array(lams), np.array(mults), projs, nils,
                        np.array(idxs), 0.0)
    data.residual = _resolution_residual(A, data)
    return data


def _resolution_residual(A: np.ndarray, data: SpectralData) -> float:
    n = A.shape[0]
    scale = max(1.0, np.linalg.norm(A))
    res = np.linalg.norm(sum(data.projections) - np.eye(n))
    recon = sum(lam * P + N for lam, P, N in
                zip(data.eigenvalues, data.projections, data.nilpotents))
    res = max(res, np.linalg.norm(recon - A) / scale)
    for i, P in enumerate(data.projections):
        res = max(res, np.linalg.norm(P @ P - P) / max(1.0, np.linalg.norm(P)))
        for j, Q in enumerate(data.projections):
            if i != j:
                res = max(res, np.linalg.norm(P @ Q) /
                          max(1.0, np.linalg.norm(P) * np.linalg.norm(Q)))
    for N, m in zip(data.nilpotents, data.indices):
        res = max(res, np.linalg.norm(np.linalg.matrix_power(N, int(m))) / scale)
    return float(res)


class MatrixGenerator:
    """Square complex matrix A plus cached spectral data and, once profiled,
    the polynomial growth metadata (M, a) of exp(tA)."""

    def __init__(self, A, cluster_tol: float = CLUSTER_TOL):
        A = np.asarray(A, dtype=complex)
        if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] < 1:
            raise OpGroupError("generator must be a square matrix of size >= 1")
        self.A = A
        self.n = A.shape[0]
        # defective eigenvalues scatter like eps^(1/m) under roundoff, so the
        # base clustering threshold escalates until the reconstruction holds
        best = None
        for tol in (cluster_tol, 1e-6, 3e-5, 1e-3):
            data = _spectral_data(A, tol)
            if best is None or data.residual < best.residual:
                best = data
            if data.residual <= RESIDUAL_TOL:
                best = data
                break
        self.spectral = best
        if self.spectral.residual > RESIDUAL_TOL * 10:
            raise SpectralResolutionError(
                f"spectral resolution residual {self.spectral.residual:.3e} "
                f"exceeds tolerance; eigenvalues {self.spectral.eigenvalues}")
        self._growth: tuple | None = None

    @property
    def eigenvalues(self) -> np.ndarray:
        return self.spectral.eigenvalues

    def spectrum_on_imaginary_axis(self, tol: float = 1e-9) -> bool:
        return bool(np.all(np.abs(self.eigenvalues.real) <= tol))

    def heights(self) -> np.ndarray:
        """Imaginary parts of the (imaginary-axis) spectrum, sorted."""
        if not self.spectrum_on_imaginary_axis():
            raise ExponentialGrowthError("spectrum is not on the imaginary axis")
        return np.sort(self.eigenvalues.imag)

    @property
    def growth(self) -> tuple | None:
        return self._growth

    def set_growth(self, M: float, a: float) -> None:
        self._growth = (float(M), float(a))

    @classmethod
    def from_jordan_spec(cls, spec) -> "MatrixGenerator":
        """`spec` is a list of (height, size) pairs or the literal string
        ``jordan:[(height,size),...]``; heights are imaginary parts."""
        if isinstance(spec, str):
            text = spec.strip()
            if text.startswith("jordan:"):
                text = text[len("jordan:"):]
            try:
                pairs = ast.literal_eval(text)
            except (SyntaxError, ValueError) as exc:
                raise OpGroupError(f"bad jordan spec: {spec!r}") from exc
        else:
            pairs = spec
        return cls(jordan_matrix(pairs))

    @classmethod
    def from_text(cls, text: str) -> "MatrixGenerator":
        return cls(parse_matrix_text(text))


def jordan_matrix(pairs) -> np.ndarray:
    blocks = []
    for height, size in pairs:
        size = int(size)
        if size < 1:
            raise OpGroupError("jordan block size must be >= 1")
        B = np.eye(size, k=1, dtype=complex) + 1j * float(height) * np.eye(size)
        blocks.append(B)
    if not blocks:
        raise OpGroupError("jordan spec must contain at least one block")
    return scipy.linalg.block_diag(*blocks)


def parse_matrix_text(text: str) -> np.ndarray:
    """Plain-text matrix: lines ``n=<int>``, ``re=<n*n floats>``,
    ``im=<n*n floats>`` (row-major)."""
    fields = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise OpGroupError(f"matrix text line {lineno}: expected key=value")
        key, value = line.split("=", 1)
        fields[key.strip()] = (value.strip(), lineno)
    for key in ("n", "re", "im"):
        if key not in fields:
            raise OpGroupError(f"matrix text missing field {key!r}")
    try:
        n = int(fields["n"][0])
        re_vals = [float(v) for v in fields["re"][0].split()]
        im_vals = [float(v) for v in fields["im"][0].split()]
    except ValueError as exc:
        raise OpGroupError(f"matrix text has non-numeric entries: {exc}") from exc
    if n < 1 or len(re_vals) != n * n or len(im_vals) != n * n:
        raise OpGroupError(
            f"matrix text needs {n}*{n} entries in re and im, got "
            f"{len(re_vals)} and {len(im_vals)}")
    return (np.array(re_vals) + 1j * np.array(im_vals)).reshape(n, n)


def format_matrix_text(A: np.ndarray) -> str:
    A = np.asarray(A, dtype=complex)
    n = A.shape[0]
    re_line = " ".join(format(v, ".17g") for v in A.real.ravel())
    im_line = " ".join(format(v, ".17g") for v in A.imag.ravel())
    return f"n={n}\nre={re_line}\nim={im_line}\n"


_INTERVAL_RE = re.compile(r"\[([^,\]]+),([^,\]]+)\]")


@dataclass(frozen=True)
class ClosedRealSet:
    """Finite union of disjoint closed real intervals; rays allowed."""

    intervals: tuple

    @staticmethod
    def from_intervals(pairs) -> "ClosedRealSet":
        cleaned = []
        for a, b in pairs:
            a, b = float(a), float(b)
            if math.isnan(a) or math.isnan(b) or a > b:
                raise OpGroupError(f"bad interval [{a}, {b}]")
            cleaned.append((a, b))
        cleaned.sort()
        merged: list[list[float]] = []
        for a, b in cleaned:
            if merged and a <= merged[-1][1]:
                merged[-1][1] = max(merged[-1][1], b)
            else:
                merged.append([a, b])
        return ClosedRealSet(tuple((a, b) for a, b in merged))

    @staticmethod
    def empty() -> "ClosedRealSet":
        return ClosedRealSet(())

    @staticmethod
    def reals() -> "ClosedRealSet":
        return ClosedRealSet(((-math.inf, math.inf),))

    @staticmethod
    def from_string(text: str) -> "ClosedRealSet":
        text = text.strip()
        if text in ("", "empty", "{}"):
            return ClosedRealSet.empty()
        parts = text.split("u")
        pairs = []
        for part in parts:
            m = _INTERVAL_RE.fullmatch(part.strip())
            if not m:
                raise OpGroupError(f"bad closed-set literal: {part!r}")
            pairs.append((float(m.group(1)), float(m.group(2))))
        return ClosedRealSet.from_intervals(pairs)

    def __str__(self) -> str:
        if not self.intervals:
            return "empty"
        return "u".join(f"[{a:g},{b:g}]" for a, b in self.intervals)

    def contains(self, x: float) -> bool:
        return any(a <= x <= b for a, b in self.intervals)

    def complement_intervals(self) -> list:
        """Open gaps of the complement, as (lo, hi) with infinite ends."""
        gaps = []
        prev = -math.inf
        for a, b in self.intervals:
            if a > prev:
                gaps.append((prev, a))
            prev = max(prev, b)
        if prev < math.inf:
            gaps.append((prev, math.inf))
        return gaps


class Subspace:
    """Subspace represented by an orthonormal basis (matrix columns).

    Equality is decided by principal angles, computed in the sine metric
    ``max ||(I - U U*) V||`` so that angles near 1e-8 stay resolvable.
    """

    def __init__(self, basis: np.ndarray):
        basis = np.asarray(basis, dtype=complex)
        if basis.ndim != 2:
            raise OpGroupError("subspace basis must be a 2-d array")
        self.basis = basis

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[0]

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @staticmethod
    def zero(n: int) -> "Subspace":
        return Subspace(np.zeros((n, 0), dtype=complex))

    @staticmethod
    def full(n: int) -> "Subspace":
        return Subspace(np.eye(n, dtype=complex))

    @staticmethod
    def from_span(vectors: np.ndarray, tol: float = 1e-10) -> "Subspace":
        vectors = np.asarray(vectors, dtype=complex)
        if vectors.ndim == 1:
            vectors = vectors[:, None]
        if vectors.shape[1] == 0:
            return Subspace.zero(vectors.shape[0])
        U, s, _ = np.linalg.svd(vectors, full_matrices=False)
        if s.size == 0 or s[0] <= 1e-13:
            return Subspace.zero(vectors.shape[0])
        rank = int(np.sum(s > tol * s[0]))
        return Subspace(U[:, :rank])

    def contains_vector(self, x: np.ndarray, tol: float = 1e-8) -> bool:
        x = np.asarray(x, dtype=complex).ravel()
        nx = np.linalg.norm(x)
        if nx == 0.0:
            return True
        resid = x - self.basis @ (self.basis.conj().T @ x)
        return bool(np.linalg.norm(resid) <= tol * nx)

    def principal_sine(self, other: "Subspace") -> float:
        """max over both directions of || (I - U U*) V ||_2; 0 iff equal."""
        if self.dim == 0 and other.dim == 0:
            return 0.0
        if self.dim == 0 or other.dim == 0:
            return 1.0
        U, V = self.basis, other.basis
        a = np.linalg.norm(V - U @ (U.conj().T @ V), ord=2)
        b = np.linalg.norm(U - V @ (V.conj().T @ U), ord=2)
        return float(max(a, b))

    def equals(self, other: "Subspace", tol: float = 1e-8) -> bool:
        return self.dim == other.dim and self.principal_sine(other) <= tol

    def intersect(self, other: "Subspace") -> "Subspace":
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.ambient_dim)
        M = np.hstack([self.basis, -other.basis])
        _, s, Vh = np.linalg.svd(M, full_matrices=True)
        tol = max(max(M.shape) * np.finfo(float).eps * (s[0] if s.size else 1.0),
                  1e-10)
        n_null = int(np.sum(s <= tol)) + (Vh.shape[0] - s.size)
        if n_null == 0:
            return Subspace.zero(self.ambient_dim)
        coeffs = Vh[-n_null:, :self.dim].conj().T
        vectors = self.basis @ coeffs
        return Subspace.from_span(vectors)
