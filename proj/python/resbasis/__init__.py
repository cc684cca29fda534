"""Spherically symmetric residual-stress bases on a shell."""

from ._core import (
    FunctionalParams,
    ModeConstants,
    ResbasisError,
    ShellGeometry,
    continue_in_p,
    decay_slope,
    eval_mode,
    eval_mu,
    fit,
    mode_records,
    shrinkfit_pressure,
    solve_modes,
    solve_p0,
    strip_violation,
)

__all__ = [
    "FunctionalParams",
    "ModeConstants",
    "ResbasisError",
    "ShellGeometry",
    "continue_in_p",
    "decay_slope",
    "eval_mode",
    "eval_mu",
    "fit",
    "mode_records",
    "shrinkfit_pressure",
    "solve_modes",
    "solve_p0",
    "strip_violation",
]
