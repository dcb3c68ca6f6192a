#include "branchtree/dp.hpp"

#include <stdexcept>

namespace branchtree {

DPTable::DPTable(int lo, int hi) : lo_(lo), hi_(hi) {
    if (hi < lo) throw std::invalid_argument("empty DP index range");
    const size_t n = static_cast<size_t>(hi - lo + 1);
    cost_.assign(n * n, Rational(0));
    split_.assign(n * n, 0);
    choice_.assign(n * n, 0);
}

size_t DPTable::index(int i, int j) const {
    if (i < lo_ || j > hi_ || i > j) throw std::out_of_range("DP cell out of range");
    const size_t n = static_cast<size_t>(hi_ - lo_ + 1);
    return static_cast<size_t>(i - lo_) * n + static_cast<size_t>(j - lo_);
}

namespace {

TreePtr rebuild_tree(const DPTable& table, int i, int j) {
    if (i == j) return DecisionTree::leaf(i);
    const int s = table.split(i, j);
    return DecisionTree::node(s, table.choice(i, j), rebuild_tree(table, i, s - 1),
                              rebuild_tree(table, s, j));
}

SearchTreePtr rebuild_search_tree(const DPTable& table, int i, int j) {
    if (i == j) return SearchTree::gap(i);
    const int s = table.split(i, j);
    return SearchTree::node(s, table.choice(i, j), rebuild_search_tree(table, i, s - 1),
                            rebuild_search_tree(table, s, j));
}

}  // namespace

SolveResult solve_with_cost_functions(const ItemDistribution& dist,
                                      const std::vector<BranchCostFn>& functions) {
    if (functions.empty()) throw std::invalid_argument("need at least one cost function");
    const int n = dist.size();
    const int m = static_cast<int>(functions.size());
    DPTable table(1, n);

    for (int len = 2; len <= n; ++len) {
        for (int i = 1; i + len - 1 <= n; ++i) {
            const int j = i + len - 1;
            bool have = false;
            Rational best;
            for (int s = i + 1; s <= j; ++s) {
                const Rational left_mass = dist.mass(i, s - 1);
                const Rational right_mass = dist.mass(s, j);
                const Rational subtrees = table.cost(i, s - 1) + table.cost(s, j);
                for (int k = 1; k <= m; ++k) {
                    Rational branch =
                        functions[static_cast<size_t>(k) - 1].fn(left_mass, right_mass, i, j, s);
                    if (branch < 0)
                        throw std::invalid_argument(
                            "cost function '" + functions[static_cast<size_t>(k) - 1].name +
                            "' returned a negative cost");
                    Rational candidate = branch + subtrees;
                    if (!have || candidate < best) {
                        have = true;
                        best = std::move(candidate);
                        table.split(i, j) = s;
                        table.choice(i, j) = k;
                    }
                }
            }
            table.cost(i, j) = std::move(best);
        }
    }

    SolveResult result;
    result.tree = rebuild_tree(table, 1, n);
    result.total_cost = table.cost(1, n);
    result.normalized_cost = result.total_cost / dist.total();
    result.table = std::move(table);
    return result;
}

SolveResult solve_branch_optimal(const ItemDistribution& dist, const StaticCostPair& pair) {
    return solve_with_cost_functions(dist, branch_cost_functions(CostModel::static_pair(pair)));
}

SolveResult solve_ordered_edge(const ItemDistribution& dist, const StaticCostPair& pair) {
    std::vector<BranchCostFn> only_left = {branch_cost_functions(CostModel::static_pair(pair))[0]};
    return solve_with_cost_functions(dist, only_left);
}

SolveResult solve_generalized(const ItemDistribution& dist, const CostModel& model) {
    return solve_with_cost_functions(dist, branch_cost_functions(model));
}

SearchSolveResult solve_search_tree(const SearchDistribution& dist, const StaticCostPair& pair,
                                    const Rational& equality_cost_in) {
    const Rational equality_cost = canonical(equality_cost_in);
    if (equality_cost <= 0) throw std::invalid_argument("equality cost must be strictly positive");
    const int keys = dist.key_count();
    DPTable table(0, keys);

    for (int len = 1; len <= keys; ++len) {
        for (int i = 0; i + len <= keys; ++i) {
            const int j = i + len;
            bool have = false;
            Rational best;
            for (int s = i + 1; s <= j; ++s) {
                const Rational left_mass = dist.mass(i, s - 1);
                const Rational right_mass = dist.mass(s, j);
                const Rational common = equality_cost * dist.beta(s) + table.cost(i, s - 1) +
                                        table.cost(s, j);
                for (int k = 1; k <= 2; ++k) {
                    const Rational& on_left = k == 1 ? pair.c_mispredict : pair.c_predict;
                    const Rational& on_right = k == 1 ? pair.c_predict : pair.c_mispredict;
                    Rational candidate = on_left * left_mass + on_right * right_mass + common;
                    if (!have || candidate < best) {
                        have = true;
                        best = std::move(candidate);
                        table.split(i, j) = s;
                        table.choice(i, j) = k;
                    }
                }
            }
            table.cost(i, j) = std::move(best);
        }
    }

    SearchSolveResult result;
    result.tree = rebuild_search_tree(table, 0, keys);
    result.total_cost = table.cost(0, keys);
    result.normalized_cost = result.total_cost / dist.total();
    result.table = std::move(table);
    return result;
}

}  // namespace branchtree
