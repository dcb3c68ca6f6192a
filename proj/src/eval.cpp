#include "branchtree/eval.hpp"

#include "branchtree/predictor.hpp"

#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <utility>

namespace branchtree {

Rational path_cost(const BranchOutcomeWord& word, const StaticCostPair& pair) {
    Rational total(0);
    for (BranchOutcome outcome : word)
        total += outcome == BranchOutcome::Mispredicted ? pair.c_mispredict : pair.c_predict;
    return total;
}

namespace {

struct Walker {
    const ItemDistribution& dist;
    const std::vector<BranchCostFn>& functions;
    bool per_side_split;    // static pair: charge each side its own edge cost
    bool choice_is_a_hint;  // dynamic models: choice carries bias, not a cost index
    const StaticCostPair* pair = nullptr;
    CostBreakdown out;

    void walk(const TreePtr& tree) {
        if (tree->is_leaf()) return;
        const int i = tree->first_item();
        const int j = tree->last_item();
        const int s = tree->split();
        const int k = tree->choice();
        if (!choice_is_a_hint && (k < 1 || k > static_cast<int>(functions.size())))
            throw std::invalid_argument("tree records a choice index outside the cost model");
        const size_t fn_index = choice_is_a_hint ? 0 : static_cast<size_t>(k) - 1;

        const Rational left_mass = dist.mass(i, s - 1);
        const Rational right_mass = dist.mass(s, j);
        Rational contribution = functions[fn_index].fn(left_mass, right_mass, i, j, s);
        out.per_node.push_back({i, j, s, k, contribution});
        out.total += contribution;

        if (per_side_split) {
            const Rational& on_left = k == 1 ? pair->c_mispredict : pair->c_predict;
            const Rational& on_right = k == 1 ? pair->c_predict : pair->c_mispredict;
            add_to_items(i, s - 1, on_left);
            add_to_items(s, j, on_right);
        } else {
            const Rational node_mass = left_mass + right_mass;
            if (node_mass != 0) {
                const Rational per_visit = contribution / node_mass;
                add_to_items(i, j, per_visit);
            }
        }
        walk(tree->left());
        walk(tree->right());
    }

    void add_to_items(int first, int last, const Rational& per_visit) {
        for (int item = first; item <= last; ++item) {
            auto& entry = out.per_item[static_cast<size_t>(item) - 1];
            entry.comparisons += 1;
            entry.path_cost += per_visit;
        }
    }
};

}  // namespace

CostBreakdown expected_cost(const TreePtr& tree, const ItemDistribution& dist,
                            const CostModel& model) {
    if (!tree) throw std::invalid_argument("null tree");
    if (tree->leaf_count() != dist.size())
        throw std::invalid_argument("tree size does not match distribution");
    if (tree->first_item() != 1 || tree->last_item() != dist.size())
        throw std::invalid_argument("tree does not cover items 1..n");

    const std::vector<BranchCostFn> functions = branch_cost_functions(model);
    Walker walker{dist, functions, model.is_static(), model.is_dynamic(),
                  model.is_static() ? &model.as_static().pair : nullptr, {}};
    walker.out.total = Rational(0);
    walker.out.per_item.resize(static_cast<size_t>(dist.size()));
    for (int item = 1; item <= dist.size(); ++item)
        walker.out.per_item[static_cast<size_t>(item) - 1].item = item;
    walker.walk(tree);
    walker.out.normalized = walker.out.total / dist.total();
    return walker.out;
}

namespace {

Rational search_cost_walk(const SearchTreePtr& tree, const SearchDistribution& dist,
                          const StaticCostPair& pair, const Rational& equality_cost) {
    if (tree->is_gap()) return Rational(0);
    const int s = tree->key();
    const Rational left_mass = dist.mass(tree->first_boundary(), s - 1);
    const Rational right_mass = dist.mass(s, tree->last_boundary());
    const Rational& on_left = tree->choice() == 1 ? pair.c_mispredict : pair.c_predict;
    const Rational& on_right = tree->choice() == 1 ? pair.c_predict : pair.c_mispredict;
    return on_left * left_mass + on_right * right_mass + equality_cost * dist.beta(s) +
           search_cost_walk(tree->left(), dist, pair, equality_cost) +
           search_cost_walk(tree->right(), dist, pair, equality_cost);
}

}  // namespace

Rational expected_search_cost(const SearchTreePtr& tree, const SearchDistribution& dist,
                              const StaticCostPair& pair, const Rational& equality_cost) {
    if (!tree) throw std::invalid_argument("null tree");
    if (tree->first_boundary() != 0 || tree->last_boundary() != dist.key_count())
        throw std::invalid_argument("tree does not cover boundaries 0..n'");
    return search_cost_walk(tree, dist, pair, equality_cost);
}

namespace {

struct ShapeNode {
    int i, j, s;
};
using Shape = std::vector<ShapeNode>;

// Every alphabetic shape over items i..j, pre-order, splits ascending.
std::vector<Shape> enumerate_shapes(int i, int j) {
    if (i == j) return {Shape{}};
    std::vector<Shape> shapes;
    for (int s = i + 1; s <= j; ++s) {
        const std::vector<Shape> lefts = enumerate_shapes(i, s - 1);
        const std::vector<Shape> rights = enumerate_shapes(s, j);
        for (const Shape& left : lefts) {
            for (const Shape& right : rights) {
                Shape shape;
                shape.reserve(1 + left.size() + right.size());
                shape.push_back({i, j, s});
                shape.insert(shape.end(), left.begin(), left.end());
                shape.insert(shape.end(), right.begin(), right.end());
                shapes.push_back(std::move(shape));
            }
        }
    }
    return shapes;
}

TreePtr tree_from_shape(const std::unordered_map<std::uint64_t, std::pair<int, int>>& plan,
                        int i, int j) {
    if (i == j) return DecisionTree::leaf(i);
    const auto [s, k] = plan.at((static_cast<std::uint64_t>(i) << 32) | static_cast<std::uint64_t>(j));
    return DecisionTree::node(s, k, tree_from_shape(plan, i, s - 1), tree_from_shape(plan, s, j));
}

}  // namespace

SolveResult brute_force_optimal(const ItemDistribution& dist, const CostModel& model, int limit) {
    const int n = dist.size();
    if (n > limit) throw std::invalid_argument("distribution size exceeds brute-force limit");

    const std::vector<BranchCostFn> functions = branch_cost_functions(model);
    const int m = static_cast<int>(functions.size());

    SolveResult best;
    bool have = false;
    Shape best_shape;
    std::vector<int> best_assignment;

    for (const Shape& shape : enumerate_shapes(1, n)) {
        const size_t nodes = shape.size();

        // All m candidate branch costs per node, evaluated once per shape.
        std::vector<std::vector<Rational>> node_costs(nodes);
        for (size_t idx = 0; idx < nodes; ++idx) {
            const auto [i, j, s] = shape[idx];
            const Rational left_mass = dist.mass(i, s - 1);
            const Rational right_mass = dist.mass(s, j);
            node_costs[idx].reserve(static_cast<size_t>(m));
            for (int k = 1; k <= m; ++k)
                node_costs[idx].push_back(
                    functions[static_cast<size_t>(k) - 1].fn(left_mass, right_mass, i, j, s));
        }

        double search_space = 1.0;
        for (size_t idx = 0; idx < nodes; ++idx) search_space *= static_cast<double>(m);
        if (search_space > (1 << 20))
            throw std::invalid_argument("brute-force choice space too large");

        std::vector<int> assignment(nodes, 1);
        for (;;) {
            Rational total(0);
            for (size_t idx = 0; idx < nodes; ++idx)
                total += node_costs[idx][static_cast<size_t>(assignment[idx]) - 1];
            if (!have || total < best.total_cost) {
                have = true;
                best.total_cost = std::move(total);
                best_shape = shape;
                best_assignment = assignment;
            }
            // odometer over choice indices
            size_t pos = 0;
            while (pos < nodes && ++assignment[pos] > m) {
                assignment[pos] = 1;
                ++pos;
            }
            if (pos == nodes) break;
        }
    }

    std::unordered_map<std::uint64_t, std::pair<int, int>> plan;
    for (size_t idx = 0; idx < best_shape.size(); ++idx) {
        const auto [i, j, s] = best_shape[idx];
        plan[(static_cast<std::uint64_t>(i) << 32) | static_cast<std::uint64_t>(j)] = {
            s, best_assignment[idx]};
    }
    best.tree = tree_from_shape(plan, 1, n);
    best.normalized_cost = best.total_cost / dist.total();
    return best;
}

}  // namespace branchtree
