#include "branchtree/model.hpp"

#include <stdexcept>
#include <utility>

namespace branchtree {

ItemDistribution::ItemDistribution(std::vector<Rational> weights)
    : weights_(std::move(weights)) {
    if (weights_.empty()) throw std::invalid_argument("empty distribution");
    prefix_.reserve(weights_.size() + 1);
    prefix_.emplace_back(0);
    for (Rational& w : weights_) {
        w.canonicalize();
        if (w < 0) throw std::invalid_argument("negative weight in distribution");
        prefix_.push_back(prefix_.back() + w);
    }
    if (prefix_.back() == 0) throw std::invalid_argument("distribution has zero total weight");
}

const Rational& ItemDistribution::weight(int item) const {
    if (item < 1 || item > size()) throw std::out_of_range("item index out of range");
    return weights_[static_cast<size_t>(item) - 1];
}

Rational ItemDistribution::mass(int first, int last) const {
    if (first < 1 || last > size() || first > last)
        throw std::out_of_range("mass range out of bounds");
    return prefix_[static_cast<size_t>(last)] - prefix_[static_cast<size_t>(first) - 1];
}

ItemDistribution build_distribution(std::vector<Rational> weights) {
    return ItemDistribution(std::move(weights));
}

StaticCostPair::StaticCostPair(Rational mispredict, Rational predict)
    : c_mispredict(canonical(std::move(mispredict))), c_predict(canonical(std::move(predict))) {
    if (c_mispredict <= 0 || c_predict <= 0)
        throw std::invalid_argument("branch costs must be strictly positive");
}

TreePtr DecisionTree::leaf(int item) {
    if (item < 1) throw std::invalid_argument("leaf item must be >= 1");
    auto t = std::shared_ptr<DecisionTree>(new DecisionTree());
    t->item_ = item;
    t->first_ = t->last_ = item;
    return t;
}

TreePtr DecisionTree::node(int split, int choice, TreePtr left, TreePtr right) {
    if (!left || !right) throw std::invalid_argument("node requires two children");
    if (choice < 1) throw std::invalid_argument("choice index must be >= 1");
    if (left->last_item() != split - 1 || right->first_item() != split)
        throw std::invalid_argument("children do not meet contiguously at the split point");
    auto t = std::shared_ptr<DecisionTree>(new DecisionTree());
    t->split_ = split;
    t->choice_ = choice;
    t->first_ = left->first_item();
    t->last_ = right->last_item();
    t->left_ = std::move(left);
    t->right_ = std::move(right);
    return t;
}

int DecisionTree::item() const {
    if (!is_leaf()) throw std::logic_error("item() on internal node");
    return item_;
}

int DecisionTree::split() const {
    if (is_leaf()) throw std::logic_error("split() on leaf");
    return split_;
}

int DecisionTree::choice() const {
    if (is_leaf()) throw std::logic_error("choice() on leaf");
    return choice_;
}

const TreePtr& DecisionTree::left() const {
    if (is_leaf()) throw std::logic_error("left() on leaf");
    return left_;
}

const TreePtr& DecisionTree::right() const {
    if (is_leaf()) throw std::logic_error("right() on leaf");
    return right_;
}

bool tree_equal(const TreePtr& a, const TreePtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->is_leaf() != b->is_leaf()) return false;
    if (a->is_leaf()) return a->item() == b->item();
    return a->split() == b->split() && a->choice() == b->choice() &&
           tree_equal(a->left(), b->left()) && tree_equal(a->right(), b->right());
}

SearchDistribution::SearchDistribution(std::vector<Rational> alpha, std::vector<Rational> beta)
    : alpha_(std::move(alpha)), beta_(std::move(beta)) {
    if (beta_.empty()) throw std::invalid_argument("search distribution needs at least one key");
    if (alpha_.size() != beta_.size() + 1)
        throw std::invalid_argument("alpha must have one more entry than beta");
    for (Rational& a : alpha_) {
        a.canonicalize();
        if (a < 0) throw std::invalid_argument("negative alpha in search distribution");
    }
    for (Rational& b : beta_) {
        b.canonicalize();
        if (b < 0) throw std::invalid_argument("negative beta in search distribution");
    }

    prefix_.reserve(alpha_.size());
    prefix_.push_back(alpha_[0]);
    for (size_t k = 1; k < alpha_.size(); ++k)
        prefix_.push_back(prefix_.back() + beta_[k - 1] + alpha_[k]);
    total_ = prefix_.back();
    if (total_ == 0) throw std::invalid_argument("search distribution has zero total weight");
}

const Rational& SearchDistribution::alpha(int gap) const {
    if (gap < 0 || gap > key_count()) throw std::out_of_range("gap index out of range");
    return alpha_[static_cast<size_t>(gap)];
}

const Rational& SearchDistribution::beta(int key) const {
    if (key < 1 || key > key_count()) throw std::out_of_range("key index out of range");
    return beta_[static_cast<size_t>(key) - 1];
}

Rational SearchDistribution::mass(int i, int j) const {
    if (i < 0 || j > key_count() || i > j) throw std::out_of_range("mass range out of bounds");
    return alpha_[static_cast<size_t>(i)] + prefix_[static_cast<size_t>(j)] -
           prefix_[static_cast<size_t>(i)];
}

SearchTreePtr SearchTree::gap(int index) {
    if (index < 0) throw std::invalid_argument("gap index must be >= 0");
    auto t = std::shared_ptr<SearchTree>(new SearchTree());
    t->gap_ = index;
    t->first_ = t->last_ = index;
    return t;
}

SearchTreePtr SearchTree::node(int key, int choice, SearchTreePtr left, SearchTreePtr right) {
    if (!left || !right) throw std::invalid_argument("node requires two children");
    if (choice < 1) throw std::invalid_argument("choice index must be >= 1");
    if (left->last_boundary() != key - 1 || right->first_boundary() != key)
        throw std::invalid_argument("children do not meet contiguously at the key");
    auto t = std::shared_ptr<SearchTree>(new SearchTree());
    t->key_ = key;
    t->choice_ = choice;
    t->first_ = left->first_boundary();
    t->last_ = right->last_boundary();
    t->left_ = std::move(left);
    t->right_ = std::move(right);
    return t;
}

int SearchTree::gap_index() const {
    if (!is_gap()) throw std::logic_error("gap_index() on internal node");
    return gap_;
}

int SearchTree::key() const {
    if (is_gap()) throw std::logic_error("key() on gap");
    return key_;
}

int SearchTree::choice() const {
    if (is_gap()) throw std::logic_error("choice() on gap");
    return choice_;
}

const SearchTreePtr& SearchTree::left() const {
    if (is_gap()) throw std::logic_error("left() on gap");
    return left_;
}

const SearchTreePtr& SearchTree::right() const {
    if (is_gap()) throw std::logic_error("right() on gap");
    return right_;
}

bool search_tree_equal(const SearchTreePtr& a, const SearchTreePtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->is_gap() != b->is_gap()) return false;
    if (a->is_gap()) return a->gap_index() == b->gap_index();
    return a->key() == b->key() && a->choice() == b->choice() &&
           search_tree_equal(a->left(), b->left()) &&
           search_tree_equal(a->right(), b->right());
}

CostModel CostModel::static_pair(StaticCostPair pair) {
    return CostModel(Static{std::move(pair)});
}

CostModel CostModel::dynamic(PredictorKind kind, StaticCostPair pair) {
    if (kind == PredictorKind::Custom)
        throw std::invalid_argument("custom predictor needs an automaton; use dynamic_custom");
    return CostModel(Dynamic{kind, nullptr, std::move(pair)});
}

CostModel CostModel::dynamic_custom(std::shared_ptr<const PredictorAutomaton> automaton,
                                    StaticCostPair pair) {
    if (!automaton) throw std::invalid_argument("null automaton");
    return CostModel(Dynamic{PredictorKind::Custom, std::move(automaton), std::move(pair)});
}

CostModel CostModel::table(std::vector<BranchCostFn> functions) {
    if (functions.empty()) throw std::invalid_argument("cost table must have at least one entry");
    for (const auto& f : functions)
        if (!f.fn) throw std::invalid_argument("cost table entry '" + f.name + "' has no function");
    return CostModel(Table{std::move(functions)});
}

}  // namespace branchtree
