"""Regime analysis: energy bounds, the deep-well and shallow-well limits,
spectrum tables and the graphical-solution curves."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .model import Level, WellSpec, as_index, g_value
from .secular import DEFAULT_TOL, solve_level


@dataclass(frozen=True)
class SpectrumRow:
    N: int
    omega: float
    k: float
    E: float
    p: float
    q: float
    alpha: float
    R: float
    G: float
    branch: str

    @classmethod
    def from_level(cls, level: Level) -> "SpectrumRow":
        sp = level.sigma_parts
        return cls(level.N, level.omega, level.k, level.E, sp.p, sp.q, sp.alpha, sp.R,
                   level.G, level.branch)


@dataclass(frozen=True)
class LimitReport:
    """E_N(T) on a coupling grid with both limiting level formulas.

    ``energies[i][N]`` belongs to ``T_values[i]``; deviations are E - reference.
    """

    T_values: list[float]
    levels: int
    energies: list[list[float]]
    hermitian: list[float] = field(default_factory=list)
    weak: list[float] = field(default_factory=list)

    def deviation_hermitian(self, N: int) -> list[float]:
        return [row[N] - self.hermitian[N] for row in self.energies]

    def deviation_weak(self, N: int) -> list[float]:
        return [row[N] - self.weak[N] for row in self.energies]


@dataclass(frozen=True)
class AsymptoticRecord:
    p: float
    q: float
    k: float
    R: float
    p_weak_estimate: float  # q / (2R)
    q_minus_k: float
    G_plus: float
    G_minus: float
    regime: str  # "weak" (R >= 10), "strong" (R <= 0.01) or "intermediate"
    weak_ok: bool | None
    strong_ok: bool | None


def hermitian_limit_level(N) -> float:
    """(N+1)**2/4: level N of the infinitely deep real well on (-pi, pi)."""
    N = as_index(N).N
    return (N + 1) ** 2 / 4.0


def weak_limit_level(N) -> float:
    """(N+1/2)**2/4, the T -> 0 end of the energy window."""
    N = as_index(N).N
    return (N + 0.5) ** 2 / 4.0


def bounds_check(level: Level) -> bool:
    return weak_limit_level(level.N) <= level.E <= hermitian_limit_level(level.N)


def strict_bounds_check(level: Level) -> bool:
    return weak_limit_level(level.N) < level.E < hermitian_limit_level(level.N)


def asymptotic_orders(spec: WellSpec, N, tol: float = DEFAULT_TOL) -> AsymptoticRecord:
    level = solve_level(spec, N, tol)
    sp = level.sigma_parts
    p_est = sp.q / (2.0 * sp.R)
    Gp, Gm = g_value(sp, "+"), g_value(sp, "-")
    weak_ok = strong_ok = None
    if sp.R >= 10.0:
        regime = "weak"
        weak_ok = abs(sp.p - p_est) / sp.p <= 0.1 and abs(sp.q - sp.k) / sp.k <= 0.1
    elif sp.R <= 0.01:
        regime = "strong"
        strong_ok = abs(Gp) < 0.05 * abs(Gm)
    else:
        regime = "intermediate"
    return AsymptoticRecord(sp.p, sp.q, sp.k, sp.R, p_est, abs(sp.q - sp.k), Gp, Gm,
                            regime, weak_ok, strong_ok)


def spectrum_table(spec: WellSpec, count: int, tol: float = DEFAULT_TOL) -> list[SpectrumRow]:
    if count < 1:
        raise ValueError("count must be at least 1")
    return [SpectrumRow.from_level(solve_level(spec, N, tol)) for N in range(count)]


def limit_report(T_values, levels: int, tol: float = DEFAULT_TOL) -> LimitReport:
    T_values = [float(T) for T in T_values]
    if not T_values:
        raise ValueError("need at least one coupling")
    energies = [[solve_level(WellSpec(T), N, tol).E for N in range(levels)] for T in T_values]
    return LimitReport(
        T_values=T_values,
        levels=levels,
        energies=energies,
        hermitian=[hermitian_limit_level(N) for N in range(levels)],
        weak=[weak_limit_level(N) for N in range(levels)],
    )


def figure1_curves(T: float, samples: int, levels: int):
    """(omega, lhs, rhs) over omega in [0, 1]; rhs has one row per level.

    lhs = sin(pi omega/2), rhs_N = (2N+2-omega)/(4T) sqrt(2 cos(pi omega/2)).
    """
    if samples < 100:
        raise ValueError("need at least 100 samples")
    omega = np.linspace(0.0, 1.0, samples)
    lhs = np.sin(0.5 * np.pi * omega)
    root = np.sqrt(2.0 * np.maximum(np.sin(0.5 * np.pi * (1.0 - omega)), 0.0))
    N = np.arange(levels)[:, None]
    rhs = (2 * N + 2 - omega) / (4.0 * T) * root
    return omega, lhs, rhs


def interpolate_crossings(omega, lhs, rhs) -> list[float]:
    """First crossing of lhs with each rhs row, located by linear interpolation."""
    out = []
    for row in np.atleast_2d(rhs):
        d = lhs - row
        idx = np.flatnonzero((d[:-1] <= 0) & (d[1:] > 0))
        if idx.size == 0:
            out.append(math.nan)
            continue
        i = idx[0]
        out.append(float(omega[i] - d[i] * (omega[i + 1] - omega[i]) / (d[i + 1] - d[i])))
    return out
