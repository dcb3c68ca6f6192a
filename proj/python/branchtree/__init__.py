"""Optimal decision and search trees under asymmetric branch costs.

The heavy lifting lives in the compiled ``branchtree._core`` extension;
everything here is re-exported from it. Costs and probabilities go in as
``int``, ``str`` (``"3/10"`` or ``"0.3"``), ``float`` or
``fractions.Fraction`` and come back out as exact ``Fraction`` values.
"""

import json as _json

from branchtree._core import (
    branch_cost_dynamic,
    brute_force_optimal,
    emit_code,
    emit_dot,
    expected_cost,
    mispredict_curve,
    rate_a2,
    rate_a2_exact,
    rate_a3,
    rate_a3_exact,
    simulate,
    solve_branch_optimal,
    solve_generalized,
    solve_ordered_edge,
    solve_search_tree,
    static_rate,
    stationary_rate,
)

__all__ = [
    "branch_cost_dynamic",
    "brute_force_optimal",
    "emit_code",
    "emit_dot",
    "emit_json",
    "expected_cost",
    "mispredict_curve",
    "rate_a2",
    "rate_a2_exact",
    "rate_a3",
    "rate_a3_exact",
    "simulate",
    "solve_branch_optimal",
    "solve_generalized",
    "solve_ordered_edge",
    "solve_search_tree",
    "static_rate",
    "stationary_rate",
]

__version__ = "0.1.0"


def emit_json(result):
    """Canonical JSON text for a solve result dict: sorted keys, compact
    separators, costs as ``p/q`` strings. Matches the CLI's ``emit``
    output byte for byte."""
    tree = result["tree"] if "tree" in result else result
    payload = {
        "expected_cost": str(result.get("expected_cost", 0)),
        "total_cost": str(result.get("total_cost", 0)),
        "tree": tree,
    }
    return _json.dumps(payload, sort_keys=True, separators=(",", ":"))
