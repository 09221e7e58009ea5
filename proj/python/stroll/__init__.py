"""Solvers for k-stroll, point-to-point orienteering, and deadline routing."""

from ._stroll import (
    Metric,
    exact_deadline,
    exact_kstroll,
    exact_p2p,
    solve_deadline,
    solve_kstroll,
    solve_p2p,
)

__all__ = [
    "Metric",
    "exact_deadline",
    "exact_kstroll",
    "exact_p2p",
    "solve_deadline",
    "solve_kstroll",
    "solve_p2p",
]
