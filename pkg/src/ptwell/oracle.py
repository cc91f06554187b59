"""Independent checks of the analytic spectrum.

Two routes that share no code with the analytic solver:

* a three-point finite-difference discretization of -psi'' + V psi = E psi on
  [-Lambda, Lambda] with Dirichlet walls, diagonalized either densely or by a
  shift-invert sweep along the real energy axis;
* a dense sign-change scan of the secular function followed by plain bisection.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.sparse
import scipy.sparse.linalg

from .model import WellSpec, as_index
from .secular import StructuralError

log = logging.getLogger(__name__)

ALIGN_TOL = 1e-9
DENSE_LIMIT = 1500
MAX_SWEEPS = 60


class ConfigError(ValueError):
    """Grid does not land on +-pi and +-Lambda."""


class OracleError(RuntimeError):
    pass


@dataclass(frozen=True)
class OracleConfig:
    """Truncation half-width ``lam`` and grid step ``h`` (h = pi/M).

    ``im_tol`` bounds |Im E| of kept eigenpairs; None means 1e-2 * max(1, T**2).
    """

    lam: float
    h: float
    count: int = 5
    im_tol: float | None = None

    def __post_init__(self):
        if not self.h > 0:
            raise ConfigError("grid step must be positive")
        if not self.lam > math.pi:
            raise ConfigError("truncation half-width must exceed pi")
        if self.count < 1:
            raise ConfigError("count must be at least 1")
        for name, ratio in (("pi/h", math.pi / self.h), ("lambda/h", self.lam / self.h)):
            if abs(ratio - round(ratio)) > ALIGN_TOL * max(1.0, ratio):
                raise ConfigError(f"{name} = {ratio!r} is not an integer")

    @property
    def M(self) -> int:
        """Grid intervals per pi."""
        return round(math.pi / self.h)

    @property
    def half_nodes(self) -> int:
        """Grid intervals in [0, lambda]."""
        return round(self.lam / self.h)

    @classmethod
    def aligned(cls, M: int, lam_intervals: int, **kw) -> "OracleConfig":
        h = math.pi / M
        return cls(lam=lam_intervals * h, h=h, **kw)


@dataclass(frozen=True)
class OracleEigenpair:
    energy: complex
    inner_weight: float
    grid_vector: np.ndarray


def tail_margin_ok(cfg: OracleConfig, p_min: float) -> bool:
    """Whether lambda >= pi + 6/p_min (tails decayed by ~e^-6 at the wall)."""
    return cfg.lam >= math.pi + 6.0 / p_min


def default_lambda(p_min: float, h: float) -> float:
    """max(4 pi, pi + 8/p_min), rounded up to a multiple of h."""
    lam = max(4.0 * math.pi, math.pi + 8.0 / p_min)
    return math.ceil(lam / h - 1e-9) * h


def fd_grid(cfg: OracleConfig) -> np.ndarray:
    """Interior nodes x_j = j h, |j| < lambda/h."""
    n = cfg.half_nodes
    return np.arange(-n + 1, n) * cfg.h


def fd_potential(spec: WellSpec, cfg: OracleConfig) -> np.ndarray:
    """Nodal potential; the nodes on +-pi carry the mean of the one-sided values."""
    n = cfg.half_nodes
    j = np.arange(-n + 1, n)
    M = cfg.M
    V = np.zeros(j.shape, dtype=complex)
    V[j > M] = 1j * spec.T**2
    V[j < -M] = -1j * spec.T**2
    V[j == M] = 0.5j * spec.T**2
    V[j == -M] = -0.5j * spec.T**2
    return V


def fd_matrix(spec: WellSpec, cfg: OracleConfig) -> scipy.sparse.csc_matrix:
    """Complex-symmetric tridiagonal discretization of -d2/dx2 + V."""
    V = fd_potential(spec, cfg)
    inv_h2 = 1.0 / cfg.h**2
    off = np.full(V.size - 1, -inv_h2, dtype=complex)
    return scipy.sparse.diags([off, 2.0 * inv_h2 + V, off], [-1, 0, 1], format="csc")


def _inner_weights(cfg: OracleConfig, vecs: np.ndarray) -> np.ndarray:
    n = cfg.half_nodes
    j = np.arange(-n + 1, n)
    # trapezoid weights: interior nodes 1, the Dirichlet end nodes are zero
    inner = np.where(np.abs(j) < cfg.M, 1.0, np.where(np.abs(j) == cfg.M, 0.5, 0.0))
    mass = np.abs(vecs) ** 2
    return (inner @ mass) / mass.sum(axis=0)


def _sweep_eigs(A, im_tol, n_eig, enough):
    """Shift-invert sweep from E = 0 upward along the real axis.

    Each window returns the n_eig eigenvalues closest to a real shift s, so
    every eigenvalue with |Im E| <= im_tol and Re E below the right end of the
    disk's chord is known.  All eigenvalues of -d2/dx2 + iW have Re E > 0,
    which makes s = 0 a safe start.  Stops once ``enough(vals, vecs, covered)``.
    """
    values, vectors = [], []
    shift = 0.0
    for _ in range(MAX_SWEEPS):
        w, v = scipy.sparse.linalg.eigs(A, k=n_eig, sigma=shift, which="LM")
        for i in range(w.size):
            if not any(abs(w[i] - u) <= 1e-9 * max(1.0, abs(u)) for u in values):
                values.append(w[i])
                vectors.append(v[:, i])
        radius = float(np.max(np.abs(w - shift)))
        if radius <= im_tol:
            raise OracleError("shift-invert window narrower than the imaginary band")
        covered = shift + math.sqrt(radius**2 - im_tol**2)
        vals, vecs = np.array(values), np.column_stack(vectors)
        if enough(vals, vecs, covered):
            return vals, vecs
        shift = covered
    raise OracleError(f"eigenvalue sweep did not finish in {MAX_SWEEPS} windows")


def fd_spectrum(spec: WellSpec, cfg: OracleConfig, method: str = "auto") -> list[OracleEigenpair]:
    """Lowest ``cfg.count`` bound-state eigenpairs of the discretized problem.

    Kept: inner_weight >= 0.5 (mass mostly inside (-pi, pi)) and
    |Im E| <= im_tol.  This discards box modes living in the absorbing and
    amplifying exterior, which sit near Re E +- i T**2.  Sorted by Re E, ties
    by |Im E|.  ``method`` is "dense", "sweep" or "auto" (dense up to
    DENSE_LIMIT nodes).
    """
    A = fd_matrix(spec, cfg)
    n = A.shape[0]
    im_tol = cfg.im_tol if cfg.im_tol is not None else 1e-2 * max(1.0, spec.T**2)
    if method == "auto":
        method = "dense" if n <= DENSE_LIMIT else "sweep"

    def keep(vals, vecs):
        weights = _inner_weights(cfg, vecs)
        ok = (weights >= 0.5) & (np.abs(vals.imag) <= im_tol)
        return vals[ok], vecs[:, ok], weights[ok]

    def enough(vals, vecs, covered):
        sel, _, _ = keep(vals, vecs)
        return np.count_nonzero(sel.real < covered) >= cfg.count

    try:
        if method == "dense":
            vals, vecs = scipy.linalg.eig(A.toarray(), check_finite=False)
        elif method == "sweep":
            n_eig = min(n - 2, max(4 * cfg.count + 20, 40))
            vals, vecs = _sweep_eigs(A, im_tol, n_eig, enough)
        else:
            raise ValueError(f"unknown method {method!r}")
    except (np.linalg.LinAlgError, scipy.sparse.linalg.ArpackError) as exc:
        raise OracleError(f"eigensolver failed for a {n}x{n} matrix: {exc}") from exc

    vals, vecs, weights = keep(vals, vecs)
    order = np.lexsort((np.abs(vals.imag), vals.real))
    if order.size < cfg.count:
        raise OracleError(f"only {order.size} bound-state eigenpairs found, wanted {cfg.count}")
    return [
        OracleEigenpair(complex(vals[i]), float(weights[i]), vecs[:, i])
        for i in order[: cfg.count]
    ]


def pt_mismatch(vec: np.ndarray) -> float:
    """Relative residual of v[-j] = conj(v[j]) after fixing the phase at the centre node."""
    v = np.asarray(vec, dtype=complex)
    c = v[v.size // 2]
    if c == 0:
        raise OracleError("eigenvector vanishes at the centre node")
    v = v * (abs(c) / c)
    return float(np.linalg.norm(v[::-1] - np.conj(v)) / np.linalg.norm(v))


def _secular(T, N, w):
    a = 0.5 * np.pi * w
    return np.sin(a) - (2 * N + 2 - w) / (4.0 * T) * np.sqrt(np.maximum(2.0 * np.cos(a), 0.0))


def sign_change_brackets(values: np.ndarray, grid: np.ndarray) -> list[tuple[float, float]]:
    positive = np.asarray(values) > 0
    idx = np.flatnonzero(positive[1:] != positive[:-1])
    return [(float(grid[i]), float(grid[i + 1])) for i in idx]


def scan_roots(spec: WellSpec, N, points: int = 10_000) -> list[tuple[float, float]]:
    """Sign-change brackets of the secular function on a uniform grid of [0, 1].

    Anything other than exactly one bracket raises StructuralError.
    """
    if points < 1000:
        raise ValueError("scan needs at least 1000 points")
    N = as_index(N).N
    grid = np.linspace(0.0, 1.0, points)
    brackets = sign_change_brackets(_secular(spec.T, N, grid), grid)
    if len(brackets) != 1:
        raise StructuralError(f"scan of N={N} found {len(brackets)} sign changes", bracket=brackets)
    return brackets


def bisect_root(spec: WellSpec, N, bracket: tuple[float, float], xtol: float = 1e-12) -> float:
    N = as_index(N).N
    lo, hi = bracket
    f_lo = _secular(spec.T, N, lo)
    while hi - lo > xtol:
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        f_mid = _secular(spec.T, N, mid)
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def scan_root(spec: WellSpec, N, points: int = 10_000, xtol: float = 1e-12) -> float:
    """Root of the secular function by dense scan plus bisection."""
    return bisect_root(spec, N, scan_roots(spec, N, points)[0], xtol)
