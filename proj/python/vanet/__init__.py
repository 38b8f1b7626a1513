"""Deterministic VANET routing simulator (EBGR, greedy and PDGR-like forwarding)."""

from ._core import (
    Scenario,
    ScenarioError,
    classify_ring,
    closeness,
    direction_alignment,
    link_lifetime,
    link_stability,
    metrics_csv,
    next_hop,
    potential_score,
    run,
    run_sweep,
)

__all__ = [
    "Scenario",
    "ScenarioError",
    "classify_ring",
    "closeness",
    "direction_alignment",
    "link_lifetime",
    "link_stability",
    "metrics_csv",
    "next_hop",
    "potential_score",
    "run",
    "run_sweep",
]
