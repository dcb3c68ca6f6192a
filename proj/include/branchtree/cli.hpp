#pragma once

#include "branchtree/model.hpp"

#include <json.hpp>

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace branchtree::cli {

// Parsed problem description:
//   {"weights": ["3/10", ...],            exactly one of weights /
//    "alpha": [...], "beta": [...],       (alpha, beta)
//    "cost_model": {"type": "static|dynamic|table",
//                   "c_mispredict": ..., "c_predict": ...,
//                   "automaton": "A2"|"A3"|"static"|{...},   dynamic only
//                   "functions": ["mispredict_left", ...],   table only
//                   "e": ...},                               equality cost
//    "thresholds": ["v1", ...]}           optional labels for emit
// Numbers may be JSON numbers (exact when integral) or rational strings.
struct ProblemFile {
    std::optional<ItemDistribution> items;
    std::optional<SearchDistribution> search;
    std::optional<CostModel> model;
    std::optional<StaticCostPair> pair;
    Rational equality_cost{1};
    std::vector<std::string> thresholds;
};

Rational rational_from_json(const nlohmann::json& value);

// cost_model descriptor helpers, shared with the python bindings
StaticCostPair pair_from_descriptor(const nlohmann::json& descriptor);
CostModel model_from_descriptor(const nlohmann::json& descriptor);

ProblemFile load_problem(const nlohmann::json& doc);
ProblemFile load_problem_file(const std::string& path);

// Runs one subcommand (solve, eval, simulate, compare, curve, emit) against
// the given streams. Returns 0 on success, 2 on invalid input (message on
// err), 1 on internal failure.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// main()-shaped wrapper over dispatch using stdout/stderr.
int run_main(int argc, char** argv);

}  // namespace branchtree::cli
