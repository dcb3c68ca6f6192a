// Acceptance suite: one line per criterion, nonzero exit if any fail.

#include "branchtree/dp.hpp"
#include "branchtree/emit.hpp"
#include "branchtree/eval.hpp"
#include "branchtree/predictor.hpp"
#include "branchtree/sim.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace branchtree;

namespace {

int failures = 0;

void criterion(int number, const std::string& name, const std::function<void()>& body) {
    const auto start = std::chrono::steady_clock::now();
    std::string failure;
    try {
        body();
    } catch (const std::exception& e) {
        failure = e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (failure.empty()) {
        std::printf("PASS %2d  %s  (%.2fs)\n", number, name.c_str(), seconds);
    } else {
        std::printf("FAIL %2d  %s: %s\n", number, name.c_str(), failure.c_str());
        ++failures;
    }
}

void expect(bool condition, const std::string& message) {
    if (!condition) throw std::runtime_error(message);
}

Rational rat(const char* text) { return parse_rational(text); }

std::vector<Rational> random_weights(std::mt19937& rng, int n) {
    std::uniform_int_distribution<int> numerator(0, 20);
    const int denominators[] = {1, 2, 5, 10};
    for (;;) {
        std::vector<Rational> weights;
        bool any = false;
        for (int k = 0; k < n; ++k) {
            const int num = numerator(rng);
            any = any || num > 0;
            weights.emplace_back(num, denominators[rng() % 4]);
            weights.back().canonicalize();
        }
        if (any) return weights;
    }
}

StaticCostPair random_pair(std::mt19937& rng) {
    std::uniform_int_distribution<int> numerator(1, 12);
    std::uniform_int_distribution<int> denominator(1, 2);
    return StaticCostPair(Rational(numerator(rng), denominator(rng)),
                          Rational(numerator(rng), denominator(rng)));
}

void criterion_binomial_exact() {
    const ItemDistribution binomial({1, 6, 15, 20, 15, 6, 1});
    const StaticCostPair pair(11, 2);
    const auto start = std::chrono::steady_clock::now();
    const SolveResult ordered = solve_ordered_edge(binomial, pair);
    const SolveResult branch = solve_branch_optimal(binomial, pair);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    expect(ordered.normalized_cost == rat("967/64"),
           "ordered-edge cost is " + to_string(ordered.normalized_cost) + ", want 967/64");
    expect(branch.normalized_cost == rat("831/64"),
           "branch cost is " + to_string(branch.normalized_cost) + ", want 831/64");
    expect(seconds < 1.0, "solves took " + std::to_string(seconds) + "s, want < 1s");
}

void criterion_split_counterexample() {
    const ItemDistribution dist({3, 2, 2, 3});
    const StaticCostPair pair(3, 1);
    const SolveResult result = solve_branch_optimal(dist, pair);
    const int root = result.tree->split();
    expect(root == 2 || root == 4, "root split is " + std::to_string(root) + ", want 2 or 4");
    expect(result.table.split(1, 3) == 3, "subproblem (1,3) split is not 3");
    expect(result.table.split(2, 4) == 3, "subproblem (2,4) split is not 3");
    expect(result.normalized_cost == rat("18/5"),
           "normalized cost is " + to_string(result.normalized_cost) + ", want 18/5");
    const SolveResult oracle = brute_force_optimal(dist, CostModel::static_pair(pair));
    expect(oracle.total_cost == result.total_cost, "brute-force oracle disagrees");
}

void criterion_uniform_four() {
    const ItemDistribution uniform({1, 1, 1, 1});
    const StaticCostPair pair(3, 1);
    const SolveResult result = solve_branch_optimal(uniform, pair);
    expect(result.normalized_cost == rat("15/4"),
           "optimal cost is " + to_string(result.normalized_cost) + ", want 15/4");

    const TreePtr complete = DecisionTree::node(
        3, 1, DecisionTree::node(2, 1, DecisionTree::leaf(1), DecisionTree::leaf(2)),
        DecisionTree::node(4, 1, DecisionTree::leaf(3), DecisionTree::leaf(4)));
    const CostBreakdown breakdown =
        expected_cost(complete, uniform, CostModel::static_pair(pair));
    expect(breakdown.normalized == 4, "complete tree evaluates to " +
                                          to_string(breakdown.normalized) + ", want 4");
}

void criterion_worst_case_ratios() {
    auto max_ratio = [](const std::function<double(double)>& rate) {
        double best = 0.0;
        for (int k = 1; k <= 200000; ++k) {
            const double p = 0.5 * k / 200000.0;
            best = std::max(best, rate(p) / p);
        }
        return best;
    };
    const double a2 = max_ratio([](double p) { return rate_a2(p); });
    const double a3 = max_ratio([](double p) { return rate_a3(p); });
    expect(std::abs(a2 - 1.2071) <= 1e-3,
           "A2 worst ratio " + std::to_string(a2) + ", want 1.2071 +- 1e-3");
    expect(std::abs(a3 - 1.2692) <= 1e-3,
           "A3 worst ratio " + std::to_string(a3) + ", want 1.2692 +- 1e-3");
    const double a3_at_quarter = rate_a3(0.25) / 0.25;
    expect(std::abs(a3_at_quarter - 1.2692) <= 1e-3, "A3 ratio at p1=0.25 is off");
}

void criterion_closed_form_oracle() {
    const PredictorAutomaton& a2 = builtin_automaton(PredictorKind::A2);
    const PredictorAutomaton& a3 = builtin_automaton(PredictorKind::A3);

    std::mt19937_64 rng(20240811);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    for (int round = 0; round < 1000; ++round) {
        const double p = uniform(rng);
        expect(std::abs(stationary_rate(a2, p) - rate_a2(p)) <= 1e-12, "A2 oracle mismatch");
        expect(std::abs(stationary_rate(a3, p) - rate_a3(p)) <= 1e-12, "A3 oracle mismatch");
    }
    for (int k = 0; k <= 20; ++k) {
        const Rational p(k, 20);
        expect(stationary_rate(a2, p) == rate_a2(p), "A2 exact grid mismatch");
        expect(stationary_rate(a3, p) == rate_a3(p), "A3 exact grid mismatch");
    }
}

void criterion_oracle_equivalence() {
    const auto start = std::chrono::steady_clock::now();
    std::mt19937 rng(1009);
    int instances = 0;
    for (int n = 1; n <= 8; ++n) {
        for (int round = 0; round < 7; ++round) {
            const ItemDistribution dist(random_weights(rng, n));
            const StaticCostPair pair = random_pair(rng);
            ++instances;

            const CostModel static_model = CostModel::static_pair(pair);
            expect(solve_branch_optimal(dist, pair).total_cost ==
                       brute_force_optimal(dist, static_model).total_cost,
                   "static DP != brute force at n=" + std::to_string(n));

            const CostModel dynamic_model = CostModel::dynamic(PredictorKind::A2, pair);
            expect(solve_generalized(dist, dynamic_model).total_cost ==
                       brute_force_optimal(dist, dynamic_model).total_cost,
                   "dynamic DP != brute force at n=" + std::to_string(n));
        }
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    expect(instances >= 50, "only " + std::to_string(instances) + " instances");
    expect(seconds <= 60.0, "suite took " + std::to_string(seconds) + "s, want <= 60s");
}

void criterion_bound_property() {
    std::mt19937 rng(2027);
    for (int round = 0; round < 40; ++round) {
        const int n = 2 + static_cast<int>(rng() % 9);
        const ItemDistribution dist(random_weights(rng, n));
        const StaticCostPair pair = random_pair(rng);
        expect(solve_branch_optimal(dist, pair).total_cost <=
                   solve_ordered_edge(dist, pair).total_cost,
               "branch-optimal exceeded ordered-edge");
    }
    const ItemDistribution binomial({1, 6, 15, 20, 15, 6, 1});
    const StaticCostPair pair(11, 2);
    expect(solve_branch_optimal(binomial, pair).total_cost <
               solve_ordered_edge(binomial, pair).total_cost,
           "bound not strict on the binomial instance");
}

void criterion_simulation() {
    const ItemDistribution uniform({1, 1, 1, 1});
    const StaticCostPair pair(3, 1);
    const SolveResult solved = solve_branch_optimal(uniform, pair);

    const SimReport static_run = simulate(solved.tree, uniform, nullptr, pair, 1000000, 20, 0);
    expect(std::abs(static_run.mean_cost() - 3.75) <= 0.01,
           "static mean " + std::to_string(static_run.mean_cost()) + ", want 3.75 +- 0.01");

    const ItemDistribution skewed({1, 3});
    const TreePtr single = DecisionTree::node(2, 1, DecisionTree::leaf(1), DecisionTree::leaf(2));
    const PredictorAutomaton a2 = PredictorAutomaton::a2();
    const SimReport adaptive = simulate(single, skewed, &a2, pair, 1000000, 21, 1000);
    expect(std::abs(adaptive.per_node.front().rate() - 0.3) <= 0.01,
           "A2 empirical rate " + std::to_string(adaptive.per_node.front().rate()) +
               ", want 0.3 +- 0.01");
    expect(std::abs(adaptive.mean_cost() - 1.6) <= 0.01,
           "A2 mean " + std::to_string(adaptive.mean_cost()) + ", want 1.6 +- 0.01");

    const SimReport again = simulate(single, skewed, &a2, pair, 1000000, 21, 1000);
    expect(sim_report_to_json(again).dump() == sim_report_to_json(adaptive).dump(),
           "identical seeds produced different reports");
}

void criterion_search_reduction() {
    std::mt19937 rng(3109);
    for (int round = 0; round < 20; ++round) {
        const int n = 2 + static_cast<int>(rng() % 6);
        const std::vector<Rational> weights = random_weights(rng, n);
        const StaticCostPair pair = random_pair(rng);
        const SolveResult alphabetic = solve_branch_optimal(ItemDistribution(weights), pair);
        const SearchDistribution search(
            weights, std::vector<Rational>(static_cast<size_t>(n) - 1, Rational(0)));
        const SearchSolveResult via_search = solve_search_tree(search, pair, Rational(1));
        expect(via_search.total_cost == alphabetic.total_cost,
               "beta=0 search cost differs from the alphabetic cost");
    }

    const SearchDistribution two({Rational(0), Rational(0), Rational(0)},
                                 {Rational(1, 2), Rational(1, 2)});
    const SearchSolveResult hand = solve_search_tree(two, StaticCostPair(1, 1), Rational(1));
    expect(hand.total_cost == rat("3/2"),
           "two-key instance is " + to_string(hand.total_cost) + ", want 3/2");
}

void criterion_emitters() {
    std::mt19937 rng(4007);
    for (int round = 0; round < 15; ++round) {
        const int n = 1 + static_cast<int>(rng() % 8);
        const ItemDistribution dist(random_weights(rng, n));
        const StaticCostPair pair = random_pair(rng);
        const SolveResult result = solve_branch_optimal(dist, pair);

        for (const SolveResult& solved :
             {result, solve_ordered_edge(dist, pair),
              solve_generalized(dist, CostModel::dynamic(PredictorKind::A2, pair))}) {
            const std::string round_trip = emit_json(solved.tree, solved);
            expect(tree_equal(tree_from_json(nlohmann::json::parse(round_trip)), solved.tree),
                   "JSON round trip changed the tree");
        }

        const std::string text = emit_json(result.tree, result);
        expect(emit_json(result.tree, result) == text, "emit_json not deterministic");

        const std::string code = emit_code(result.tree, EmitOptions{});
        int comparisons = 0;
        for (size_t at = code.find("if ("); at != std::string::npos;
             at = code.find("if (", at + 4))
            ++comparisons;
        expect(comparisons == n - 1,
               "emit_code produced " + std::to_string(comparisons) + " comparisons for n=" +
                   std::to_string(n));

        EmitOptions dot_options;
        dot_options.edge_costs = pair;
        SolveResult view = result;
        expect(emit_dot(result.tree, view, dot_options) == emit_dot(result.tree, view, dot_options),
               "emit_dot not deterministic");
    }

    const SearchDistribution search({Rational(1), Rational(2), Rational(1)},
                                    {Rational(3), Rational(3)});
    const SearchSolveResult solved = solve_search_tree(search, StaticCostPair(4, 1), Rational(2));
    const std::string text = emit_json(solved.tree, solved);
    expect(search_tree_equal(search_tree_from_json(nlohmann::json::parse(text)), solved.tree),
           "search JSON round trip changed the tree");
}

}  // namespace

int main() {
    criterion(1, "binomial instance: ordered 967/64, branch 831/64, under 1s",
              criterion_binomial_exact);
    criterion(2, "split-point counterexample (3,2,2,3) with cost 18/5", criterion_split_counterexample);
    criterion(3, "uniform 4 items: optimum 15/4, complete tree 4", criterion_uniform_four);
    criterion(4, "worst-case dynamic/static ratios 1.2071 (A2) and 1.2692 (A3)",
              criterion_worst_case_ratios);
    criterion(5, "closed forms match the stationary oracle (1000 samples + exact grid)",
              criterion_closed_form_oracle);
    criterion(6, "DP equals brute force on 56 instances, static and dynamic",
              criterion_oracle_equivalence);
    criterion(7, "branch-optimal never exceeds ordered-edge, strictly better on binomial",
              criterion_bound_property);
    criterion(8, "simulation converges and is seed-deterministic", criterion_simulation);
    criterion(9, "search solver: beta=0 reduction and the 3/2 hand instance",
              criterion_search_reduction);
    criterion(10, "emitters: round trip, n-1 comparisons, deterministic bytes",
              criterion_emitters);

    if (failures > 0) {
        std::printf("%d criterion(s) failed\n", failures);
        return 1;
    }
    std::printf("all acceptance criteria passed\n");
    return 0;
}
