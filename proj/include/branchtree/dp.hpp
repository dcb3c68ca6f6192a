#pragma once

#include "branchtree/model.hpp"
#include "branchtree/predictor.hpp"

#include <vector>

namespace branchtree {

// Triangular table of optimal subrange costs with the split point and cost
// function index that achieved each one. Indices run lo..hi inclusive
// (items 1..n for decision trees, boundaries 0..n' for search trees).
class DPTable {
public:
    DPTable() = default;
    DPTable(int lo, int hi);

    int lo() const { return lo_; }
    int hi() const { return hi_; }
    bool empty() const { return cost_.empty(); }

    const Rational& cost(int i, int j) const { return cost_[index(i, j)]; }
    int split(int i, int j) const { return split_[index(i, j)]; }
    int choice(int i, int j) const { return choice_[index(i, j)]; }

    Rational& cost(int i, int j) { return cost_[index(i, j)]; }
    int& split(int i, int j) { return split_[index(i, j)]; }
    int& choice(int i, int j) { return choice_[index(i, j)]; }

private:
    size_t index(int i, int j) const;
    int lo_ = 0;
    int hi_ = -1;
    std::vector<Rational> cost_;
    std::vector<int> split_;
    std::vector<int> choice_;
};

struct SolveResult {
    TreePtr tree;
    Rational total_cost;
    Rational normalized_cost;  // total_cost / total mass
    DPTable table;             // empty for non-DP solvers
};

struct SearchSolveResult {
    SearchTreePtr tree;
    Rational total_cost;
    Rational normalized_cost;
    DPTable table;
};

// Minimum-cost alphabetic tree where each node may put the mispredict cost
// on either side. O(n^3) time, O(n^2) space. Ties break deterministically:
// candidates are scanned with the split ascending and the cost function
// index ascending, and only a strict improvement replaces the incumbent.
SolveResult solve_branch_optimal(const ItemDistribution& dist, const StaticCostPair& pair);

// Baseline with edge costs bound to direction: the left edge always costs
// c_mispredict. Never cheaper than solve_branch_optimal on the same input.
SolveResult solve_ordered_edge(const ItemDistribution& dist, const StaticCostPair& pair);

// Minimization over an arbitrary set of m branch cost functions, O(m n^3).
// A static pair reduces to exactly solve_branch_optimal; a dynamic model
// contributes a single adaptive cost function.
SolveResult solve_generalized(const ItemDistribution& dist, const CostModel& model);

// Shared DP core: minimize over splits and the given cost functions.
SolveResult solve_with_cost_functions(const ItemDistribution& dist,
                                      const std::vector<BranchCostFn>& functions);

// Three-way search tree: each node pays an oriented branch pair on the two
// subtree masses plus equality_cost * beta(key) for the equality outcome.
SearchSolveResult solve_search_tree(const SearchDistribution& dist, const StaticCostPair& pair,
                                    const Rational& equality_cost);

}  // namespace branchtree
