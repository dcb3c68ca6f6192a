#include "branchtree/sim.hpp"

#include "branchtree/dp.hpp"
#include "branchtree/eval.hpp"
#include "helpers.hpp"

#include <doctest.h>

#include <array>
#include <cmath>

using namespace branchtree;
using branchtree::testing::rat;

namespace {

bool reports_identical(const SimReport& a, const SimReport& b) {
    if (a.iterations != b.iterations || a.warmup_discarded != b.warmup_discarded ||
        a.seed != b.seed || a.cost_sum != b.cost_sum || a.cost_sq_sum != b.cost_sq_sum ||
        a.per_node.size() != b.per_node.size())
        return false;
    for (size_t k = 0; k < a.per_node.size(); ++k) {
        const auto& x = a.per_node[k];
        const auto& y = b.per_node[k];
        if (x.i != y.i || x.j != y.j || x.split != y.split || x.visits != y.visits ||
            x.mispredictions != y.mispredictions)
            return false;
    }
    return true;
}

}  // namespace

TEST_CASE("identical seeds give bit-identical reports") {
    const ItemDistribution dist({1, 1, 1, 1});
    const StaticCostPair pair(3, 1);
    const TreePtr tree = solve_branch_optimal(dist, pair).tree;
    const PredictorAutomaton a2 = PredictorAutomaton::a2();

    const SimReport first = simulate(tree, dist, &a2, pair, 20000, 42, 100);
    const SimReport second = simulate(tree, dist, &a2, pair, 20000, 42, 100);
    CHECK(reports_identical(first, second));

    const SimReport different = simulate(tree, dist, &a2, pair, 20000, 43, 100);
    CHECK_FALSE(reports_identical(first, different));
}

TEST_CASE("static simulation converges to the analytic expected cost") {
    const ItemDistribution dist({1, 1, 1, 1});
    const StaticCostPair pair(3, 1);
    const SolveResult solved = solve_branch_optimal(dist, pair);

    const std::uint64_t draws = 200000;
    const SimReport report = simulate(solved.tree, dist, nullptr, pair, draws, 7, 0);
    CHECK(report.iterations == draws);
    CHECK(report.per_node.front().visits == draws);

    const double expected = to_double(solved.normalized_cost);
    const double standard_error = std::sqrt(report.variance() / static_cast<double>(draws));
    CHECK(std::abs(report.mean_cost() - expected) <= 3.0 * standard_error + 1e-9);
}

TEST_CASE("adaptive simulation converges to the stationary rate") {
    const ItemDistribution dist({1, 3});
    const StaticCostPair pair(3, 1);
    const TreePtr tree = DecisionTree::node(2, 1, DecisionTree::leaf(1), DecisionTree::leaf(2));
    const PredictorAutomaton a2 = PredictorAutomaton::a2();

    const SimReport report = simulate(tree, dist, &a2, pair, 200000, 9, 1000);
    CHECK(std::abs(report.per_node.front().rate() - 0.3) <= 0.01);
    CHECK(std::abs(report.mean_cost() - 1.6) <= 0.01);
}

TEST_CASE("visits nest: the root sees every draw, children see a subset") {
    const ItemDistribution dist({2, 1, 1, 2});
    const StaticCostPair pair(3, 1);
    const SolveResult solved = solve_branch_optimal(dist, pair);
    const SimReport report = simulate(solved.tree, dist, nullptr, pair, 50000, 3, 500);

    CHECK(report.per_node.front().visits == report.iterations);
    for (const SimNodeStats& stats : report.per_node) {
        CHECK(stats.visits <= report.iterations);
        CHECK(stats.mispredictions <= stats.visits);
        // direct internal children partition a subset of the parent's visits
        std::uint64_t child_visits = 0;
        for (const SimNodeStats& other : report.per_node) {
            const bool inside = other.i >= stats.i && other.j <= stats.j && &other != &stats;
            const bool direct = inside && (other.j == stats.split - 1 || other.i == stats.split);
            if (direct && other.i == stats.i) child_visits += other.visits;
            if (direct && other.j == stats.j) child_visits += other.visits;
        }
        CHECK(child_visits <= stats.visits);
    }
}

TEST_CASE("every node's empirical rate matches its own minority probability") {
    // optimal tree for (1,2,1) has nodes with conditional minority
    // probabilities 1/4 (root) and 1/3 (inner)
    const ItemDistribution dist({1, 2, 1});
    const StaticCostPair pair(3, 1);
    const SolveResult solved = solve_branch_optimal(dist, pair);
    const PredictorAutomaton a2 = PredictorAutomaton::a2();
    const SimReport report = simulate(solved.tree, dist, &a2, pair, 400000, 19, 2000);

    for (const SimNodeStats& stats : report.per_node) {
        const Rational left = dist.mass(stats.i, stats.split - 1);
        const Rational right = dist.mass(stats.split, stats.j);
        const Rational minority = std::min(left, right) / (left + right);
        const double expected = to_double(rate_a2(minority));
        const double standard_error =
            std::sqrt(expected * (1.0 - expected) / static_cast<double>(stats.visits));
        CHECK(std::abs(stats.rate() - expected) <= 3.0 * standard_error + 1e-9);
    }
}

TEST_CASE("merge is exact and order-insensitive") {
    const ItemDistribution dist({1, 2, 3});
    const StaticCostPair pair(rat("7/2"), rat("3/4"));
    const TreePtr tree = solve_branch_optimal(dist, pair).tree;
    const PredictorAutomaton a3 = PredictorAutomaton::a3();

    const SimReport r1 = simulate(tree, dist, &a3, pair, 5000, 11, 50);
    const SimReport r2 = simulate(tree, dist, &a3, pair, 7000, 12, 0);
    const SimReport r3 = simulate(tree, dist, &a3, pair, 9000, 13, 200);

    const std::array<SimReport, 3> abc{r1, r2, r3};
    const std::array<SimReport, 3> cba{r3, r2, r1};
    const std::array<SimReport, 3> bca{r2, r3, r1};
    const SimReport m1 = merge_reports(abc);
    const SimReport m2 = merge_reports(cba);
    const SimReport m3 = merge_reports(bca);

    CHECK(reports_identical(m1, m2));
    CHECK(reports_identical(m1, m3));
    CHECK(m1.iterations == r1.iterations + r2.iterations + r3.iterations);
    CHECK(m1.cost_sum == r1.cost_sum + r2.cost_sum + r3.cost_sum);
    CHECK(m1.seed == (r1.seed ^ r2.seed ^ r3.seed));
}

TEST_CASE("replicated runs are deterministic in the base seed") {
    const ItemDistribution dist({1, 1});
    const StaticCostPair pair(3, 1);
    const TreePtr tree = solve_branch_optimal(dist, pair).tree;
    const SimReport a = simulate_replicated(tree, dist, nullptr, pair, 1000, 4, 99, 10);
    const SimReport b = simulate_replicated(tree, dist, nullptr, pair, 1000, 4, 99, 10);
    CHECK(reports_identical(a, b));
    CHECK(a.iterations == 4 * (1000 - 10));
}

TEST_CASE("simulation validates its inputs") {
    const ItemDistribution dist({1, 1});
    const StaticCostPair pair(3, 1);
    const TreePtr tree = solve_branch_optimal(dist, pair).tree;
    CHECK_THROWS_AS(simulate(tree, dist, nullptr, pair, 0, 1, 0), std::invalid_argument);
    CHECK_THROWS_AS(simulate(tree, dist, nullptr, pair, 10, 1, 10), std::invalid_argument);
    const ItemDistribution three({1, 1, 1});
    CHECK_THROWS_AS(simulate(tree, three, nullptr, pair, 10, 1, 0), std::invalid_argument);
}

TEST_CASE("zero-weight items are never drawn") {
    const ItemDistribution dist({Rational(0), Rational(1), Rational(1)});
    const StaticCostPair pair(2, 1);
    const SolveResult solved = solve_branch_optimal(dist, pair);
    const SimReport report = simulate(solved.tree, dist, nullptr, pair, 20000, 5, 0);
    CHECK(report.per_node.front().visits == 20000);
    // the node over items {1,2} predicts right and item 1 has no mass, so
    // every visit is correctly predicted
    bool found = false;
    for (const SimNodeStats& stats : report.per_node) {
        if (stats.i == 1 && stats.j == 2) {
            found = true;
            CHECK(stats.mispredictions == 0);
        }
    }
    CHECK(found);
}

TEST_CASE("sim report serializes with per-node triples") {
    const ItemDistribution dist({1, 1, 1, 1});
    const StaticCostPair pair(3, 1);
    const SolveResult solved = solve_branch_optimal(dist, pair);
    const SimReport report = simulate(solved.tree, dist, nullptr, pair, 1000, 21, 0);
    const nlohmann::json doc = sim_report_to_json(report);
    CHECK(doc.at("iterations") == 1000);
    CHECK(doc.at("seed") == 21);
    CHECK(doc.at("per_node").is_object());
    const std::string root_key = std::to_string(solved.tree->first_item()) + ":" +
                                 std::to_string(solved.tree->last_item()) + ":" +
                                 std::to_string(solved.tree->split());
    CHECK(doc.at("per_node").contains(root_key));
    CHECK(doc.at("per_node").at(root_key).at("visits") == 1000);
}
