"""Root finding for the combined quantization condition

    F_N(omega) = sin(pi omega / 2) - (2N + 2 - omega)/(4T) * sqrt(2 cos(pi omega / 2))

on (0, 1), its resolved fixed-point form, the two tan(k pi) branches and the
weak/strong coupling estimators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .model import (
    DomainError,
    Level,
    SigmaParts,
    WellSpec,
    as_index,
    make_level,
    q_minus_p,
)

DEFAULT_TOL = 1e-13
PRESCAN_POINTS = 1000
FIXED_POINT_DAMPING = 0.7
FIXED_POINT_MAX_ITER = 200
POLE_CLEARANCE = 1e-6


class SolverError(RuntimeError):
    """Root search failed; ``bracket`` holds the last (lo, hi) interval."""

    def __init__(self, message, bracket=None):
        super().__init__(message)
        self.bracket = bracket


class StructuralError(SolverError):
    """The sign-change structure of F_N differs from the single crossing expected."""


@dataclass(frozen=True)
class SecularRoot:
    index: object
    omega: float
    residual: float
    iterations: int
    method: str  # "bracketed" | "fixed_point"


@dataclass(frozen=True)
class BranchRoots:
    X1: float
    X2: float


def _half_angle_cos(omega):
    # cos(pi w/2) written as sin(pi (1-w)/2): 1 - w is exact near w = 1
    return np.sin(0.5 * np.pi * (1.0 - omega))


def _check_omega(omega):
    w = np.asarray(omega, dtype=float)
    if np.any((w < 0.0) | (w > 1.0)) or np.any(~np.isfinite(w)):
        raise DomainError("omega must lie in [0, 1]")
    return w


def secular_residual(spec: WellSpec, N, omega):
    """F_N(omega); accepts scalars or arrays."""
    N = as_index(N).N
    w = _check_omega(omega)
    c = np.maximum(_half_angle_cos(w), 0.0)
    F = np.sin(0.5 * np.pi * w) - (2 * N + 2 - w) / (4.0 * spec.T) * np.sqrt(2.0 * c)
    return float(F) if F.ndim == 0 else F


def secular_slope(spec: WellSpec, N, omega: float) -> float:
    """dF_N/domega for omega in [0, 1)."""
    N = as_index(N).N
    a = 0.5 * math.pi * omega
    c = float(_half_angle_cos(omega))
    s2c = math.sqrt(2.0 * c)
    if s2c == 0.0:
        return math.inf
    return (
        0.5 * math.pi * math.cos(a)
        + s2c / (4.0 * spec.T)
        + (2 * N + 2 - omega) / (4.0 * spec.T) * 0.5 * math.pi * math.sin(a) / s2c
    )


def resolved_cos(R):
    """Positive root c = cos(pi omega/2) of c**2 + 2 R c - 1 = 0, subtraction-free."""
    return 1.0 / (R + np.sqrt(R * R + 1.0))


def _omega_of_R(R: float) -> float:
    c = resolved_cos(R)
    # atan2 keeps full relative accuracy at both c -> 1 and c -> 0
    return 2.0 / math.pi * math.atan2(math.sqrt(2.0 * R * c), c)


def _R(spec: WellSpec, N: int, omega: float) -> float:
    return ((2 * N + 2 - omega) / (4.0 * spec.T)) ** 2


def fixed_point_residual(spec: WellSpec, N, omega: float) -> float:
    """|cos(pi omega/2) - 1/(R + sqrt(R**2 + 1))| with R = R(omega, N)."""
    N = as_index(N).N
    return abs(float(_half_angle_cos(omega)) - resolved_cos(_R(spec, N, omega)))


def _residual_floor(spec, N, omega):
    # smallest |F| reachable by a double near omega
    return abs(secular_slope(spec, N, omega)) * np.spacing(omega)


def _sign_brackets(grid, values):
    positive = values > 0
    idx = np.flatnonzero(positive[1:] != positive[:-1])
    return [(float(grid[i]), float(grid[i + 1])) for i in idx]


def _polish(f, omega):
    # Brent stops within a few ulps; pick the neighbour with the smallest |F|
    best, best_val = omega, abs(f(omega))
    for direction in (0.0, 1.0):
        w = omega
        for _ in range(4):
            w = float(np.nextafter(w, direction))
            if not 0.0 < w < 1.0:
                break
            val = abs(f(w))
            if val < best_val:
                best, best_val = w, val
    return best, best_val


def solve_root(spec: WellSpec, N, tol: float = DEFAULT_TOL) -> SecularRoot:
    """Bracketed solve of F_N(omega) = 0 on (0, 1).

    A uniform pre-scan must show exactly one sign change; otherwise a
    StructuralError is raised rather than choosing a crossing.  The reported
    residual is |F_N| at the returned double.  In the weak-coupling regime
    dF/domega grows like R and the attainable |F| is bounded below by
    |F'| * ulp(omega); the convergence check allows that floor.
    """
    if not tol > 0:
        raise DomainError("tol must be positive")
    index = as_index(N)
    grid = np.linspace(0.0, 1.0, PRESCAN_POINTS + 1)
    brackets = _sign_brackets(grid, secular_residual(spec, index, grid))
    if len(brackets) != 1:
        raise StructuralError(
            f"expected one sign change of F_{index.N}, found {len(brackets)}",
            bracket=brackets,
        )
    lo, hi = brackets[0]

    def f(w):
        return secular_residual(spec, index, w)

    omega, info = brentq(f, lo, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps,
                         maxiter=200, full_output=True, disp=False)
    if not info.converged:
        raise SolverError(f"Brent did not converge for N={index.N}", bracket=(lo, hi))
    omega, residual = _polish(f, omega)
    if not 0.0 < omega < 1.0:
        raise SolverError(f"root escaped (0, 1) for N={index.N}", bracket=(lo, hi))
    if residual > max(tol, 2.0 * _residual_floor(spec, index, omega)):
        raise SolverError(
            f"|F| = {residual:.3e} above tolerance {tol:.1e} for N={index.N}",
            bracket=(lo, hi),
        )
    return SecularRoot(index, omega, residual, info.iterations, "bracketed")


def solve_root_fixed_point(
    spec: WellSpec,
    N,
    tol: float = DEFAULT_TOL,
    start: float = 0.5,
    damping: float = FIXED_POINT_DAMPING,
    max_iter: int = FIXED_POINT_MAX_ITER,
) -> SecularRoot:
    """Damped iteration omega <- (1-d) omega + d * g(omega) of the resolved form.

    g(omega) = (2/pi) arccos[1 / (R + sqrt(R**2 + 1))], R = [(2N+2-omega)/(4T)]**2.
    Falls back to :func:`solve_root` (method "bracketed") when the iteration
    does not settle within ``max_iter`` steps.
    """
    if not tol > 0:
        raise DomainError("tol must be positive")
    if not 0.0 < damping <= 1.0:
        raise DomainError("damping must lie in (0, 1]")
    index = as_index(N)
    omega = float(start)
    if not 0.0 <= omega <= 1.0:
        raise DomainError("start must lie in [0, 1]")
    step_tol = 4.0 * np.spacing(1.0)
    for it in range(1, max_iter + 1):
        update = _omega_of_R(_R(spec, index.N, omega))
        if abs(update - omega) <= step_tol:
            omega = update
            if fixed_point_residual(spec, index, omega) <= tol and 0.0 < omega < 1.0:
                return SecularRoot(
                    index, omega, abs(secular_residual(spec, index, omega)), it, "fixed_point"
                )
            break
        omega = (1.0 - damping) * omega + damping * update
    return solve_root(spec, index, tol)


def solve_level(spec: WellSpec, N, tol: float = DEFAULT_TOL) -> Level:
    root = solve_root(spec, N, tol)
    return make_level(spec, root.index, root.omega)


def branch_roots(parts: SigmaParts) -> BranchRoots:
    """The two solutions X = tan(k pi) of the matching quadratic: (p+q)/k and (p-q)/k."""
    return BranchRoots((parts.p + parts.q) / parts.k, -q_minus_p(parts) / parts.k)


def tan_k_pi(k: float) -> float:
    """tan(k pi) with the argument reduced exactly by the nearest integer."""
    r = k - round(k)
    if abs(abs(r) - 0.5) * math.pi < POLE_CLEARANCE:
        raise DomainError(f"k = {k!r} sits on a pole of tan(k pi)")
    return math.tan(math.pi * r)


def branch_consistency(level: Level) -> float:
    """|tan(k pi) - X| with X = X1 for even N and X2 for odd N.

    k here is the coupling-dependent momentum T sin(alpha)/sqrt(2 cos(alpha))
    held in ``sigma_parts``; with k = (2N+2-omega)/4 instead, the relation
    would hold for every omega and test nothing.
    """
    roots = branch_roots(level.sigma_parts)
    X = roots.X1 if level.branch == "+" else roots.X2
    return abs(tan_k_pi(level.sigma_parts.k) - X)


def weak_coupling_eta(R: float, use_series: bool = False) -> float:
    """eta = 1 - omega from (pi/2) eta = arcsin[1/(R + sqrt(R**2+1))].

    The series 1/(2R) - 5/(48 R**3) is only offered for R >= 2.
    """
    R = float(R)
    if not R > 0:
        raise DomainError("R must be positive")
    if use_series:
        if R < 2.0:
            raise DomainError("series form needs R >= 2")
        return 2.0 / math.pi * (1.0 / (2.0 * R) - 5.0 / (48.0 * R**3))
    return 2.0 / math.pi * math.asin(resolved_cos(R))


def strong_coupling_omega(R: float) -> float:
    """omega = (4/pi) arcsin sqrt{[R - (sqrt(1+R**2) - 1)]/2}.

    Exact rewriting of the resolved form through the half-angle identity.
    """
    R = float(R)
    if R < 0:
        raise DomainError("R must be nonnegative")
    # sqrt(1+R^2) - 1 without cancellation
    inner = 0.5 * (R - R * R / (math.sqrt(1.0 + R * R) + 1.0))
    if inner < 0:
        raise DomainError("negative radicand in strong-coupling form")
    return 4.0 / math.pi * math.asin(math.sqrt(inner))
