"""Exact bound states of the PT-symmetric purely imaginary square well."""

__version__ = "0.1.0"

from .model import (  # noqa: E402
    DomainError,
    Level,
    LevelIndex,
    SigmaParts,
    WellSpec,
    alpha_from_omega,
    g_value,
    k_from_omega,
    make_level,
    sigma_from_alpha,
)
from .secular import (  # noqa: E402
    SecularRoot,
    SolverError,
    StructuralError,
    solve_level,
    solve_root,
    solve_root_fixed_point,
)

__all__ = [
    "DomainError",
    "Level",
    "LevelIndex",
    "SecularRoot",
    "SigmaParts",
    "SolverError",
    "StructuralError",
    "WellSpec",
    "alpha_from_omega",
    "g_value",
    "k_from_omega",
    "make_level",
    "sigma_from_alpha",
    "solve_level",
    "solve_root",
    "solve_root_fixed_point",
]
