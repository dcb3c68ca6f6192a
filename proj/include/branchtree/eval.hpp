#pragma once

#include "branchtree/dp.hpp"
#include "branchtree/model.hpp"

#include <vector>

namespace branchtree {

struct ItemCost {
    int item = 0;
    int comparisons = 0;  // number of branches on the item's root-to-leaf path
    Rational path_cost;   // expected branch cost accumulated along that path
};

struct NodeCost {
    int i = 0;
    int j = 0;
    int split = 0;
    int choice = 0;
    Rational cost;  // this node's contribution to the weight-denominated total
};

struct CostBreakdown {
    Rational total;       // sum over nodes, denominated in raw weight
    Rational normalized;  // total / total mass
    std::vector<ItemCost> per_item;  // indexed item-1
    std::vector<NodeCost> per_node;  // pre-order
};

// Cost of one root-to-leaf outcome word under a static pair.
Rational path_cost(const BranchOutcomeWord& word, const StaticCostPair& pair);

// Exact expected cost of an arbitrary tree under any cost model. Static
// models charge each node's recorded orientation; dynamic models charge the
// adaptive branch cost of the node's child masses; table models charge the
// recorded cost function. The tree must cover exactly items 1..n.
CostBreakdown expected_cost(const TreePtr& tree, const ItemDistribution& dist,
                            const CostModel& model);

// Static-pair evaluation of a three-way search tree (equality outcome pays
// equality_cost on the key's hit mass).
Rational expected_search_cost(const SearchTreePtr& tree, const SearchDistribution& dist,
                              const StaticCostPair& pair, const Rational& equality_cost);

// Independent optimum for small n: enumerates every alphabetic tree shape
// and every per-node cost-function assignment, evaluates each, and keeps
// the minimum. Exponential; refuses n beyond the limit.
SolveResult brute_force_optimal(const ItemDistribution& dist, const CostModel& model,
                                int limit = 10);

}  // namespace branchtree
