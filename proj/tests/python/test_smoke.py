"""End-to-end smoke tests for the python bindings."""

import json
from fractions import Fraction

import branchtree


def test_branch_solver_exact_costs():
    result = branchtree.solve_branch_optimal([1, 6, 15, 20, 15, 6, 1], 11, 2)
    assert result["expected_cost"] == Fraction(831, 64)
    assert result["total_cost"] == Fraction(831)
    assert result["tree"]["type"] == "node"


def test_ordered_edge_baseline():
    result = branchtree.solve_ordered_edge([1, 6, 15, 20, 15, 6, 1], 11, 2)
    assert result["expected_cost"] == Fraction(967, 64)


def test_fraction_and_string_inputs():
    weights = [Fraction(3, 10), "0.2", "1/5", Fraction(3, 10)]
    result = branchtree.solve_branch_optimal(weights, 3, 1)
    assert result["expected_cost"] == Fraction(18, 5)
    assert result["tree"]["split"] in (2, 4)


def test_generalized_dynamic_model():
    model = {"type": "dynamic", "automaton": "A2", "c_mispredict": 3, "c_predict": 1}
    result = branchtree.solve_generalized([1, 3], model)
    assert result["expected_cost"] == Fraction(8, 5)


def test_search_solver():
    result = branchtree.solve_search_tree([0, 0, 0], ["1/2", "1/2"], 1, 1, 1)
    assert result["expected_cost"] == Fraction(3, 2)


def test_expected_cost_round_trip():
    solved = branchtree.solve_branch_optimal([1, 1, 1, 1], 3, 1)
    model = {"type": "static", "c_mispredict": 3, "c_predict": 1}
    breakdown = branchtree.expected_cost(solved["tree"], [1, 1, 1, 1], model)
    assert breakdown["normalized_cost"] == Fraction(15, 4)
    assert breakdown["total_cost"] == solved["total_cost"]


def test_predictor_rates():
    assert branchtree.rate_a2_exact(Fraction(1, 4)) == Fraction(3, 10)
    assert branchtree.rate_a3_exact("1/4") == Fraction(33, 104)
    assert abs(branchtree.rate_a3(0.25) - 0.317308) < 1e-6
    assert branchtree.stationary_rate("A2", Fraction(1, 4)) == Fraction(3, 10)
    assert branchtree.branch_cost_dynamic(3, 1, "A2", "1/4", "3/4") == Fraction(8, 5)


def test_curve_contains_quarter_point():
    curve = branchtree.mispredict_curve("A3", 5)
    by_p1 = dict(curve)
    assert abs(by_p1[0.25] - 33 / 104) < 1e-12


def test_simulation_deterministic():
    solved = branchtree.solve_branch_optimal([1, 1, 1, 1], 3, 1)
    run = lambda: branchtree.simulate(
        solved["tree"], [1, 1, 1, 1], 3, 1, iterations=2000, seed=42, warmup=100, automaton="A2"
    )
    first, second = run(), run()
    assert first == second
    assert first["iterations"] == 1900


def test_emitters():
    solved = branchtree.solve_branch_optimal([1, 1, 1, 1], 3, 1)
    code = branchtree.emit_code(solved["tree"], thresholds=["v1", "v2", "v3"])
    assert code.count("if (") == 3

    dot = branchtree.emit_dot(solved["tree"], solved["expected_cost"], 3, 1)
    assert dot.startswith("digraph")

    text = branchtree.emit_json(solved)
    parsed = json.loads(text)
    assert parsed["expected_cost"] == "15/4"
    assert parsed["tree"] == solved["tree"]
