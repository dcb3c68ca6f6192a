#pragma once

#include "branchtree/dp.hpp"
#include "branchtree/model.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace branchtree {

enum class EmitFormat { Json, Dot, C };
enum class HintStyle { Macro, Comment, None };

struct EmitOptions {
    EmitFormat format = EmitFormat::Json;
    HintStyle hint_style = HintStyle::None;

    // Labels for the comparison values. Decision trees need n-1 entries
    // (entry s-2 labels the cutoff used by a node splitting at s); search
    // trees need one entry per key. Empty picks v1..v_{n-1} / k1..k_{n'}.
    std::vector<std::string> threshold_names;

    // When set, DOT edges carry their static cost and mark the
    // mispredicted side.
    std::optional<StaticCostPair> edge_costs;

    std::string value_name = "x";
};

// Rewrites every node's choice to point the majority side right-ward
// (choice 1) or left-ward (choice 2) by mass. Trees solved under adaptive
// prediction carry no orientation of their own; this stamps the analytic
// majority on them so emitted code starts with the right initial bias.
TreePtr orient_majority(const TreePtr& tree, const ItemDistribution& dist);

nlohmann::json tree_to_json(const TreePtr& tree);
nlohmann::json search_tree_to_json(const SearchTreePtr& tree);

// Accepts either a bare tree object or a solver-output envelope with a
// "tree" member. Structural invariants are re-validated while building.
TreePtr tree_from_json(const nlohmann::json& value);
SearchTreePtr search_tree_from_json(const nlohmann::json& value);

// Canonical solver output: compact JSON, sorted keys, costs as "p/q".
// Parsing the text back yields an identical tree.
std::string emit_json(const TreePtr& tree, const SolveResult& result);
std::string emit_json(const SearchTreePtr& tree, const SearchSolveResult& result);

// Graphviz rendering with deterministic n_i_j node ids; edge labels carry
// per-edge static costs when edge_costs is set, with the mispredicted side
// dashed, so cost-proportional layouts can be derived from the output.
std::string emit_dot(const TreePtr& tree, const SolveResult& result, const EmitOptions& options);
std::string emit_dot(const SearchTreePtr& tree, const SearchSolveResult& result,
                     const EmitOptions& options);

// Nested if/else in C-like syntax, one comparison per internal node. Each
// condition is oriented so the else branch (the fall-through) receives the
// node's majority side; hint_style wraps conditions in LIKELY()/UNLIKELY()
// or appends /* likely */ comments. Search trees add an equality test per
// node; gaps return the negated insertion point -(gap+1).
std::string emit_code(const TreePtr& tree, const EmitOptions& options);
std::string emit_code(const SearchTreePtr& tree, const EmitOptions& options);

}  // namespace branchtree
