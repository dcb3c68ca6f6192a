#include "branchtree/emit.hpp"

#include <stdexcept>

namespace branchtree {

TreePtr orient_majority(const TreePtr& tree, const ItemDistribution& dist) {
    if (!tree) throw std::invalid_argument("null tree");
    if (tree->is_leaf()) return tree;
    const Rational left_mass = dist.mass(tree->first_item(), tree->split() - 1);
    const Rational right_mass = dist.mass(tree->split(), tree->last_item());
    const int choice = right_mass >= left_mass ? 1 : 2;
    return DecisionTree::node(tree->split(), choice, orient_majority(tree->left(), dist),
                              orient_majority(tree->right(), dist));
}

nlohmann::json tree_to_json(const TreePtr& tree) {
    if (!tree) throw std::invalid_argument("null tree");
    if (tree->is_leaf()) return {{"type", "leaf"}, {"item", tree->item()}};
    return {{"type", "node"},
            {"split", tree->split()},
            {"choice", tree->choice()},
            {"left", tree_to_json(tree->left())},
            {"right", tree_to_json(tree->right())}};
}

nlohmann::json search_tree_to_json(const SearchTreePtr& tree) {
    if (!tree) throw std::invalid_argument("null tree");
    if (tree->is_gap()) return {{"type", "gap"}, {"gap", tree->gap_index()}};
    return {{"type", "node"},
            {"key", tree->key()},
            {"choice", tree->choice()},
            {"left", search_tree_to_json(tree->left())},
            {"right", search_tree_to_json(tree->right())}};
}

namespace {

const nlohmann::json& unwrap_tree(const nlohmann::json& value) {
    if (value.is_object() && value.contains("tree")) return value.at("tree");
    return value;
}

}  // namespace

TreePtr tree_from_json(const nlohmann::json& value) {
    const nlohmann::json& node = unwrap_tree(value);
    if (!node.is_object() || !node.contains("type"))
        throw std::invalid_argument("tree JSON must be an object with a \"type\"");
    const std::string type = node.at("type").get<std::string>();
    if (type == "leaf") return DecisionTree::leaf(node.at("item").get<int>());
    if (type == "node")
        return DecisionTree::node(node.at("split").get<int>(), node.at("choice").get<int>(),
                                  tree_from_json(node.at("left")),
                                  tree_from_json(node.at("right")));
    throw std::invalid_argument("unknown tree node type '" + type + "'");
}

SearchTreePtr search_tree_from_json(const nlohmann::json& value) {
    const nlohmann::json& node = unwrap_tree(value);
    if (!node.is_object() || !node.contains("type"))
        throw std::invalid_argument("tree JSON must be an object with a \"type\"");
    const std::string type = node.at("type").get<std::string>();
    if (type == "gap") return SearchTree::gap(node.at("gap").get<int>());
    if (type == "node")
        return SearchTree::node(node.at("key").get<int>(), node.at("choice").get<int>(),
                                search_tree_from_json(node.at("left")),
                                search_tree_from_json(node.at("right")));
    throw std::invalid_argument("unknown search tree node type '" + type + "'");
}

std::string emit_json(const TreePtr& tree, const SolveResult& result) {
    nlohmann::json out = {{"expected_cost", to_string(result.normalized_cost)},
                          {"total_cost", to_string(result.total_cost)},
                          {"tree", tree_to_json(tree)}};
    return out.dump();
}

std::string emit_json(const SearchTreePtr& tree, const SearchSolveResult& result) {
    nlohmann::json out = {{"expected_cost", to_string(result.normalized_cost)},
                          {"total_cost", to_string(result.total_cost)},
                          {"tree", search_tree_to_json(tree)}};
    return out.dump();
}

namespace {

std::string node_id(int i, int j) {
    return "n_" + std::to_string(i) + "_" + std::to_string(j);
}

void dot_decision(const TreePtr& tree, const EmitOptions& options, std::string& out) {
    const std::string id = node_id(tree->first_item(), tree->last_item());
    if (tree->is_leaf()) {
        out += "  " + id + " [shape=box, label=\"item " + std::to_string(tree->item()) + "\"];\n";
        return;
    }
    out += "  " + id + " [label=\"split " + std::to_string(tree->split()) + "\"];\n";
    const std::string left_id = node_id(tree->left()->first_item(), tree->left()->last_item());
    const std::string right_id = node_id(tree->right()->first_item(), tree->right()->last_item());
    std::string left_attr, right_attr;
    if (options.edge_costs) {
        const bool mispredict_left = tree->choice() == 1;
        const Rational& left_cost =
            mispredict_left ? options.edge_costs->c_mispredict : options.edge_costs->c_predict;
        const Rational& right_cost =
            mispredict_left ? options.edge_costs->c_predict : options.edge_costs->c_mispredict;
        left_attr = " [label=\"" + to_string(left_cost) + "\"" +
                    (mispredict_left ? ", style=dashed" : "") + "]";
        right_attr = " [label=\"" + to_string(right_cost) + "\"" +
                     (mispredict_left ? "" : ", style=dashed") + "]";
    }
    out += "  " + id + " -> " + left_id + left_attr + ";\n";
    out += "  " + id + " -> " + right_id + right_attr + ";\n";
    dot_decision(tree->left(), options, out);
    dot_decision(tree->right(), options, out);
}

void dot_search(const SearchTreePtr& tree, const EmitOptions& options, std::string& out) {
    const std::string id = node_id(tree->first_boundary(), tree->last_boundary());
    if (tree->is_gap()) {
        out += "  " + id + " [shape=box, label=\"gap " + std::to_string(tree->gap_index()) +
               "\"];\n";
        return;
    }
    out += "  " + id + " [label=\"key " + std::to_string(tree->key()) + "\"];\n";
    const std::string left_id =
        node_id(tree->left()->first_boundary(), tree->left()->last_boundary());
    const std::string right_id =
        node_id(tree->right()->first_boundary(), tree->right()->last_boundary());
    std::string left_attr, right_attr;
    if (options.edge_costs) {
        const bool mispredict_left = tree->choice() == 1;
        const Rational& left_cost =
            mispredict_left ? options.edge_costs->c_mispredict : options.edge_costs->c_predict;
        const Rational& right_cost =
            mispredict_left ? options.edge_costs->c_predict : options.edge_costs->c_mispredict;
        left_attr = " [label=\"" + to_string(left_cost) + "\"" +
                    (mispredict_left ? ", style=dashed" : "") + "]";
        right_attr = " [label=\"" + to_string(right_cost) + "\"" +
                     (mispredict_left ? "" : ", style=dashed") + "]";
    }
    out += "  " + id + " -> " + left_id + left_attr + ";\n";
    out += "  " + id + " -> " + right_id + right_attr + ";\n";
    dot_search(tree->left(), options, out);
    dot_search(tree->right(), options, out);
}

}  // namespace

std::string emit_dot(const TreePtr& tree, const SolveResult& result, const EmitOptions& options) {
    if (!tree) throw std::invalid_argument("null tree");
    std::string out = "digraph decision_tree {\n";
    out += "  // expected cost " + to_string(result.normalized_cost) + "\n";
    dot_decision(tree, options, out);
    out += "}\n";
    return out;
}

std::string emit_dot(const SearchTreePtr& tree, const SearchSolveResult& result,
                     const EmitOptions& options) {
    if (!tree) throw std::invalid_argument("null tree");
    std::string out = "digraph search_tree {\n";
    out += "  // expected cost " + to_string(result.normalized_cost) + "\n";
    dot_search(tree, options, out);
    out += "}\n";
    return out;
}

namespace {

std::string indent_of(int depth) { return std::string(static_cast<size_t>(depth) * 4, ' '); }

std::string threshold_label(const EmitOptions& options, int cutoff_index) {
    if (options.threshold_names.empty()) return "v" + std::to_string(cutoff_index);
    return options.threshold_names[static_cast<size_t>(cutoff_index) - 1];
}

std::string condition_text(const EmitOptions& options, const std::string& comparison,
                           bool likely_branch) {
    std::string cond = options.value_name + " " + comparison;
    if (options.hint_style == HintStyle::Macro)
        return (likely_branch ? "LIKELY(" : "UNLIKELY(") + cond + ")";
    return cond;
}

std::string hint_comment(const EmitOptions& options, bool likely_branch) {
    if (options.hint_style != HintStyle::Comment) return "";
    return likely_branch ? " /* likely */" : " /* unlikely */";
}

void code_decision(const TreePtr& tree, const EmitOptions& options, int depth, std::string& out) {
    const std::string pad = indent_of(depth);
    if (tree->is_leaf()) {
        out += pad + "return " + std::to_string(tree->item()) + ";\n";
        return;
    }
    const std::string label = threshold_label(options, tree->split() - 1);
    // choice 1: the right side is the majority, so testing the left-side
    // predicate keeps the fall-through on the majority side.
    const bool majority_right = tree->choice() == 1;
    const std::string comparison = majority_right ? "< " + label : ">= " + label;
    out += pad + "if (" + condition_text(options, comparison, false) + ") {" +
           hint_comment(options, false) + "\n";
    code_decision(majority_right ? tree->left() : tree->right(), options, depth + 1, out);
    out += pad + "} else {" + hint_comment(options, true) + "\n";
    code_decision(majority_right ? tree->right() : tree->left(), options, depth + 1, out);
    out += pad + "}\n";
}

void code_search(const SearchTreePtr& tree, const EmitOptions& options, int depth,
                 std::string& out) {
    const std::string pad = indent_of(depth);
    if (tree->is_gap()) {
        out += pad + "return " + std::to_string(-(tree->gap_index() + 1)) + ";\n";
        return;
    }
    std::string label;
    if (options.threshold_names.empty())
        label = "k" + std::to_string(tree->key());
    else
        label = options.threshold_names[static_cast<size_t>(tree->key()) - 1];
    out += pad + "if (" + options.value_name + " == " + label + ") return " +
           std::to_string(tree->key()) + ";\n";
    const bool majority_right = tree->choice() == 1;
    const std::string comparison = majority_right ? "< " + label : ">= " + label;
    out += pad + "if (" + condition_text(options, comparison, false) + ") {" +
           hint_comment(options, false) + "\n";
    code_search(majority_right ? tree->left() : tree->right(), options, depth + 1, out);
    out += pad + "} else {" + hint_comment(options, true) + "\n";
    code_search(majority_right ? tree->right() : tree->left(), options, depth + 1, out);
    out += pad + "}\n";
}

}  // namespace

std::string emit_code(const TreePtr& tree, const EmitOptions& options) {
    if (!tree) throw std::invalid_argument("null tree");
    if (!options.threshold_names.empty() &&
        static_cast<int>(options.threshold_names.size()) != tree->leaf_count() - 1)
        throw std::invalid_argument("threshold names must have one entry per cutoff (n-1)");
    std::string out;
    code_decision(tree, options, 0, out);
    return out;
}

std::string emit_code(const SearchTreePtr& tree, const EmitOptions& options) {
    if (!tree) throw std::invalid_argument("null tree");
    const int keys = tree->last_boundary() - tree->first_boundary();
    if (!options.threshold_names.empty() &&
        static_cast<int>(options.threshold_names.size()) != keys)
        throw std::invalid_argument("threshold names must have one entry per key");
    std::string out;
    code_search(tree, options, 0, out);
    return out;
}

}  // namespace branchtree
