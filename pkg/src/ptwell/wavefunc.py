"""Piecewise wave functions of solved levels.

Inside the well psi(x) = cos(kx) + B sin(kx) with B = iG/k, so psi(0) = 1 and
psi'(0) = iG.  Right of the well psi decays as exp(-sigma x); the left tail
follows from psi(-x) = conj(psi(x)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import Level, g_value  # noqa: F401  (g_value re-exported)
from .secular import SolverError

MATCH_TOL = 1e-9


class NotConvergedError(SolverError):
    """The level does not satisfy the derivative matching at x = pi."""


@dataclass(frozen=True)
class WaveFunction:
    level: Level
    B: complex
    sigma: complex
    edge: complex  # psi(pi), the tail amplitude referred to x = pi

    @property
    def k(self) -> float:
        return self.level.k

    @property
    def G(self) -> float:
        return self.level.G

    @property
    def outer_amp(self) -> complex:
        """Amplitude A of the right tail written as A exp(-sigma x).

        Overflows for very deep wells (Re sigma * pi > ~700); evaluation
        never goes through it.
        """
        return complex(np.exp(self.sigma * math.pi) * self.edge)


@dataclass(frozen=True)
class MatchingData:
    Omega: complex
    residual7: float
    re_tan: float


def build(level: Level, check: bool = True, tol: float = MATCH_TOL) -> WaveFunction:
    """Wave function of ``level``; rejects levels whose log-derivatives do not match."""
    k = level.k
    B = 1j * level.G / k
    kpi = k * math.pi
    edge = complex(math.cos(kpi) + B * math.sin(kpi))
    wf = WaveFunction(level=level, B=complex(0.0, B.imag), sigma=level.sigma_parts.sigma, edge=edge)
    if check:
        dv, dd = matching_residual(wf)
        if dv > tol or dd > tol:
            raise NotConvergedError(
                f"matching mismatch at x=pi ({dv:.2e}, {dd:.2e}) for N={level.N}"
            )
    return wf


def _inner(wf, x):
    k = wf.k
    return np.cos(k * x) + wf.B * np.sin(k * x)


def _inner_prime(wf, x):
    k = wf.k
    return k * (-np.sin(k * x) + wf.B * np.cos(k * x))


def _right(wf, x):
    return wf.edge * np.exp(-wf.sigma * (x - math.pi))


def evaluate(wf: WaveFunction, x):
    """psi(x) for scalar or array ``x``."""
    x = np.asarray(x, dtype=float)
    out = np.empty(x.shape, dtype=complex)
    inside = np.abs(x) <= math.pi
    out[inside] = _inner(wf, x[inside])
    right = x > math.pi
    out[right] = _right(wf, x[right])
    left = x < -math.pi
    out[left] = np.conj(_right(wf, -x[left]))
    return complex(out) if out.ndim == 0 else out


def derivative(wf: WaveFunction, x):
    """psi'(x); one-sided values at x = +-pi are taken from the inside."""
    x = np.asarray(x, dtype=float)
    out = np.empty(x.shape, dtype=complex)
    inside = np.abs(x) <= math.pi
    out[inside] = _inner_prime(wf, x[inside])
    right = x > math.pi
    out[right] = -wf.sigma * _right(wf, x[right])
    left = x < -math.pi
    # d/dx conj(psi(-x)) = -conj(psi'(-x))
    out[left] = np.conj(wf.sigma * _right(wf, -x[left]))
    return complex(out) if out.ndim == 0 else out


def matching_residual(wf: WaveFunction, at: float = math.pi) -> tuple[float, float]:
    """(|value jump|, |derivative jump|) across x = +pi or x = -pi."""
    if at > 0:
        inner_v, inner_d = _inner(wf, math.pi), _inner_prime(wf, math.pi)
        outer_v = wf.edge
        outer_d = -wf.sigma * wf.edge
    else:
        inner_v, inner_d = _inner(wf, -math.pi), _inner_prime(wf, -math.pi)
        outer_v = np.conj(wf.edge)
        outer_d = np.conj(wf.sigma * wf.edge)
    return float(abs(inner_v - outer_v)), float(abs(inner_d - outer_d))


def complex_tan(z: complex) -> complex:
    """tan(z) that stays finite for large |Im z|.

    Uses tan(x+iy) = (sin 2x + i sinh 2y)/(cos 2x + cosh 2y) divided through by
    cosh 2y, with sech 2y formed from exp(-2|2y|).
    """
    z = complex(z)
    x2, y2 = 2.0 * z.real, 2.0 * z.imag
    e = math.exp(-2.0 * abs(y2))
    sech = 2.0 * math.sqrt(e) / (1.0 + e)
    tanh = math.tanh(y2)
    return complex(math.sin(x2) * sech, tanh) / (math.cos(x2) * sech + 1.0)


def omega_matching(wf: WaveFunction, shift: int = 0) -> MatchingData:
    """Check G = -i k tan((k + Omega) pi) with tan(Omega pi) = -sigma/k.

    Omega is the principal complex arctangent divided by pi (plus ``shift``).
    The real part of tan((k + Omega) pi) must vanish at a level.
    """
    k = wf.k
    w = -wf.sigma / k
    if abs(w - 1j) < 1e-300 or abs(w + 1j) < 1e-300:
        raise ValueError("sigma/k at a branch point of arctan")
    Omega = complex(np.arctan(w)) / math.pi + shift
    t = complex_tan((k + Omega) * math.pi)
    return MatchingData(
        Omega=Omega,
        residual7=abs(wf.G + 1j * k * t),
        re_tan=abs(t.real),
    )
