"""Domain types and the single-angle parametrization of the decay constant.

Units are hbar = 2m = 1 and the well occupies (-pi, pi).  The right exterior
carries the potential +i T^2, the left exterior -i T^2.

The angle ``alpha`` in (0, pi/2) is the internal variable; the root variable
``omega = 2 alpha / pi`` in (0, 1) is what gets reported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


class DomainError(ValueError):
    """An argument lies outside the domain of a formula."""


@dataclass(frozen=True)
class WellSpec:
    """Imaginary square well of coupling ``T`` (exterior potential magnitude T**2)."""

    T: float

    def __post_init__(self):
        T = float(self.T)
        if not math.isfinite(T) or T <= 0.0:
            raise DomainError(f"coupling T must be positive and finite, got {self.T!r}")
        object.__setattr__(self, "T", T)


@dataclass(frozen=True, order=True)
class LevelIndex:
    """Level number N; even N belong to the '+' family, odd N to the '-' family."""

    N: int

    def __post_init__(self):
        if isinstance(self.N, bool) or int(self.N) != self.N or self.N < 0:
            raise DomainError(f"level index must be a nonnegative integer, got {self.N!r}")
        object.__setattr__(self, "N", int(self.N))

    @property
    def branch(self) -> str:
        return "+" if self.N % 2 == 0 else "-"

    @property
    def family_index(self) -> int:
        """n for N = 2n, m for N = 2m + 1."""
        return self.N // 2


def as_index(N) -> LevelIndex:
    return N if isinstance(N, LevelIndex) else LevelIndex(N)


@dataclass(frozen=True)
class SigmaParts:
    alpha: float
    p: float
    q: float
    k: float
    sigma: complex
    R: float


@dataclass(frozen=True)
class Level:
    """A solved bound state.

    ``k`` is tied to the root by k = (2N + 2 - omega)/4 and ``E = k**2``.
    ``sigma_parts`` come from the angle pi*omega/2, so at a converged root
    ``sigma_parts.k`` agrees with ``k`` to the root accuracy.
    """

    index: LevelIndex
    omega: float
    k: float
    E: float
    sigma_parts: SigmaParts
    G: float

    @property
    def N(self) -> int:
        return self.index.N

    @property
    def branch(self) -> str:
        return self.index.branch


def sigma_from_alpha(spec: WellSpec, alpha: float) -> SigmaParts:
    """Decay constant sigma = p + i q and momentum k at angle ``alpha``.

    p = q cos(alpha), k = q sin(alpha), q = T / sqrt(2 cos(alpha)), so that
    p**2 + k**2 = q**2 and 2 p q = T**2.
    """
    alpha = float(alpha)
    if not 0.0 < alpha < math.pi / 2:
        raise DomainError(f"alpha must lie in (0, pi/2), got {alpha!r}")
    c = math.cos(alpha)
    q = spec.T / math.sqrt(2.0 * c)
    p = q * c
    k = q * math.sin(alpha)
    return SigmaParts(alpha=alpha, p=p, q=q, k=k, sigma=complex(p, q), R=(k / spec.T) ** 2)


def k_from_omega(N, omega: float) -> float:
    """Momentum (2N + 2 - omega)/4 of level ``N`` at root value ``omega``."""
    N = as_index(N).N
    omega = float(omega)
    if not 0.0 <= omega <= 1.0:
        raise DomainError(f"omega must lie in [0, 1], got {omega!r}")
    return (2 * N + 2 - omega) / 4.0


def alpha_from_omega(omega: float) -> float:
    omega = float(omega)
    if not 0.0 < omega < 1.0:
        raise DomainError(f"omega must lie in (0, 1), got {omega!r}")
    return math.pi * omega / 2.0


def omega_from_alpha(alpha: float) -> float:
    return 2.0 * float(alpha) / math.pi


def q_minus_p(parts: SigmaParts) -> float:
    """q - p written as 2 q sin^2(alpha/2), free of cancellation at small alpha."""
    return 2.0 * parts.q * math.sin(0.5 * parts.alpha) ** 2


def g_value(parts: SigmaParts, branch: str) -> float:
    """Origin-derivative parameter G = -k**2/(q + p) for '+', -k**2/(q - p) for '-'.

    The '-' value equals -(q + p) because q**2 - p**2 = k**2.
    """
    if branch == "+":
        return -parts.k**2 / (parts.q + parts.p)
    if branch in ("-", "−"):
        return -parts.k**2 / q_minus_p(parts)
    raise DomainError(f"branch must be '+' or '-', got {branch!r}")


def make_level(spec: WellSpec, N, omega: float) -> Level:
    """Assemble a Level at ``omega`` without checking that omega is a root."""
    index = as_index(N)
    k = k_from_omega(index, omega)
    parts = sigma_from_alpha(spec, alpha_from_omega(omega))
    return Level(
        index=index,
        omega=float(omega),
        k=k,
        E=k * k,
        sigma_parts=parts,
        G=g_value(parts, index.branch),
    )
