"""Multilevel maxent-stress graph layout."""

from ._core import (
    DataError,
    Graph,
    evaluate,
    full_stress,
    iterate_exact,
    jitter,
    layout,
    maxent_stress,
    optimal_scale,
    parse_metis,
    perturb,
    read_graph,
    render_svg,
    to_metis,
    update_layout,
)

__all__ = [
    "DataError",
    "Graph",
    "evaluate",
    "full_stress",
    "iterate_exact",
    "jitter",
    "layout",
    "maxent_stress",
    "optimal_scale",
    "parse_metis",
    "perturb",
    "read_graph",
    "render_svg",
    "to_metis",
    "update_layout",
]
