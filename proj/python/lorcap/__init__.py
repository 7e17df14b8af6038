"""Lorentz quasinorms, 1D condenser capacitances and conductor inequalities."""

from ._lorcap import (
    cap1d,
    cap_union,
    criterion_ratio,
    distribution,
    exact_p_cap,
    frullani,
    inequality_ratio,
    maximal,
    norm_starstar,
    quasinorm,
    quasinorm_via_distribution,
    rearrangement,
    solve_cap,
    verify_conductor,
)

__all__ = [
    "cap1d",
    "cap_union",
    "criterion_ratio",
    "distribution",
    "exact_p_cap",
    "frullani",
    "inequality_ratio",
    "maximal",
    "norm_starstar",
    "quasinorm",
    "quasinorm_via_distribution",
    "rearrangement",
    "solve_cap",
    "verify_conductor",
]
