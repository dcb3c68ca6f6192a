#pragma once

#include "branchtree/rational.hpp"

#include <functional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace branchtree {

class PredictorAutomaton;  // predictor.hpp

// Exact nonnegative weights for items 1..n. Range masses are O(1) via a
// prefix-sum table. Weights are not normalized: every cost in the toolkit
// is homogeneous of degree 1 in mass, so solving commutes with scaling and
// results stay exact fractions of the raw weights.
class ItemDistribution {
public:
    explicit ItemDistribution(std::vector<Rational> weights);

    int size() const { return static_cast<int>(weights_.size()); }
    const Rational& weight(int item) const;           // item in 1..n
    Rational mass(int first, int last) const;         // inclusive, 1 <= first <= last <= n
    const Rational& total() const { return prefix_.back(); }

private:
    std::vector<Rational> weights_;
    std::vector<Rational> prefix_;  // prefix_[k] = sum of weights 1..k
};

ItemDistribution build_distribution(std::vector<Rational> weights);

// Branch timing pair: c_mispredict is charged when the hardware guessed the
// wrong direction, c_predict when it guessed right. Both strictly positive.
struct StaticCostPair {
    Rational c_mispredict;
    Rational c_predict;

    StaticCostPair(Rational mispredict, Rational predict);
};

enum class PredictorKind { Static, A2, A3, Custom };

enum class BranchOutcome : int { Mispredicted = 1, Predicted = 2 };
using BranchOutcomeWord = std::vector<BranchOutcome>;

class DecisionTree;
using TreePtr = std::shared_ptr<const DecisionTree>;

// Alphabetic comparison tree over items 1..n. A node splits its item range
// i..j at s (left subtree gets i..s-1, right gets s..j) and records which
// cost function / orientation index the solver chose for the branch.
// Construction enforces that children cover adjacent ranges, so in-order
// leaves of any reachable tree are a contiguous ascending run.
class DecisionTree {
public:
    static TreePtr leaf(int item);
    static TreePtr node(int split, int choice, TreePtr left, TreePtr right);

    bool is_leaf() const { return !left_; }
    int item() const;    // leaf only
    int split() const;   // node only
    int choice() const;  // node only
    const TreePtr& left() const;
    const TreePtr& right() const;

    int first_item() const { return first_; }
    int last_item() const { return last_; }
    int leaf_count() const { return last_ - first_ + 1; }

private:
    DecisionTree() = default;
    int item_ = 0;
    int split_ = 0;
    int choice_ = 0;
    TreePtr left_;
    TreePtr right_;
    int first_ = 0;
    int last_ = 0;
};

bool tree_equal(const TreePtr& a, const TreePtr& b);

// Hit/miss model for three-way search trees: beta[i] is the probability a
// search hits key i (1..n'), alpha[i] the probability it falls in the gap
// between keys i and i+1 (0..n'). mass(i,j) over boundary indices includes
// the left gap alpha_i plus every key and gap strictly inside (i,j].
class SearchDistribution {
public:
    SearchDistribution(std::vector<Rational> alpha, std::vector<Rational> beta);

    int key_count() const { return static_cast<int>(beta_.size()); }  // n'
    const Rational& alpha(int gap) const;  // gap in 0..n'
    const Rational& beta(int key) const;   // key in 1..n'
    Rational mass(int i, int j) const;     // 0 <= i <= j <= n'
    const Rational& total() const { return total_; }

private:
    std::vector<Rational> alpha_;
    std::vector<Rational> beta_;
    std::vector<Rational> prefix_;  // prefix_[j] = alpha_0 + sum_{k<=j} (beta_k + alpha_k)
    Rational total_;
};

class SearchTree;
using SearchTreePtr = std::shared_ptr<const SearchTree>;

// Three-way search tree over boundary range (i,j): a node tests equality
// against key s in (i,j] then branches, Gap(i) is the failure outcome with
// probability alpha_i.
class SearchTree {
public:
    static SearchTreePtr gap(int index);
    static SearchTreePtr node(int key, int choice, SearchTreePtr left, SearchTreePtr right);

    bool is_gap() const { return !left_; }
    int gap_index() const;
    int key() const;
    int choice() const;
    const SearchTreePtr& left() const;
    const SearchTreePtr& right() const;

    int first_boundary() const { return first_; }
    int last_boundary() const { return last_; }

private:
    SearchTree() = default;
    int gap_ = 0;
    int key_ = 0;
    int choice_ = 0;
    SearchTreePtr left_;
    SearchTreePtr right_;
    int first_ = 0;
    int last_ = 0;
};

bool search_tree_equal(const SearchTreePtr& a, const SearchTreePtr& b);

// One candidate branch cost: left/right subtree masses plus the item range
// and split, exact result. Must be total and homogeneous of degree 1 in the
// two masses.
struct BranchCostFn {
    std::string name;
    std::function<Rational(const Rational& left_mass, const Rational& right_mass,
                           int i, int j, int s)> fn;
};

// How a branch is charged: a fixed mispredict/predict pair with explicit
// orientation, a per-branch adaptive predictor, or an arbitrary indexed
// table of branch cost functions.
class CostModel {
public:
    struct Static {
        StaticCostPair pair;
    };
    struct Dynamic {
        PredictorKind kind = PredictorKind::A2;
        std::shared_ptr<const PredictorAutomaton> automaton;  // set when kind == Custom
        StaticCostPair pair;
    };
    struct Table {
        std::vector<BranchCostFn> functions;
    };

    static CostModel static_pair(StaticCostPair pair);
    static CostModel dynamic(PredictorKind kind, StaticCostPair pair);
    static CostModel dynamic_custom(std::shared_ptr<const PredictorAutomaton> automaton,
                                    StaticCostPair pair);
    static CostModel table(std::vector<BranchCostFn> functions);

    bool is_static() const { return std::holds_alternative<Static>(value_); }
    bool is_dynamic() const { return std::holds_alternative<Dynamic>(value_); }
    bool is_table() const { return std::holds_alternative<Table>(value_); }
    const Static& as_static() const { return std::get<Static>(value_); }
    const Dynamic& as_dynamic() const { return std::get<Dynamic>(value_); }
    const Table& as_table() const { return std::get<Table>(value_); }

private:
    explicit CostModel(std::variant<Static, Dynamic, Table> value) : value_(std::move(value)) {}
    std::variant<Static, Dynamic, Table> value_;
};

}  // namespace branchtree
