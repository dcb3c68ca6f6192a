#include "branchtree/cli.hpp"

#include "branchtree/dp.hpp"
#include "branchtree/emit.hpp"
#include "branchtree/eval.hpp"
#include "branchtree/predictor.hpp"
#include "branchtree/sim.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace branchtree::cli {

Rational rational_from_json(const nlohmann::json& value) {
    if (value.is_number_integer()) return Rational(static_cast<long>(value.get<std::int64_t>()));
    if (value.is_number_unsigned())
        return Rational(static_cast<unsigned long>(value.get<std::uint64_t>()));
    if (value.is_number_float()) return parse_rational(shortest_decimal(value.get<double>()));
    if (value.is_string()) return parse_rational(value.get<std::string>());
    throw std::invalid_argument("expected a number or rational string");
}

namespace {

std::vector<Rational> rational_array(const nlohmann::json& value) {
    if (!value.is_array()) throw std::invalid_argument("expected an array of rationals");
    std::vector<Rational> out;
    out.reserve(value.size());
    for (const auto& entry : value) out.push_back(rational_from_json(entry));
    return out;
}

BranchCostFn table_function(const std::string& name, const StaticCostPair& pair) {
    if (name == "mispredict_left")
        return branch_cost_functions(CostModel::static_pair(pair))[0];
    if (name == "mispredict_right")
        return branch_cost_functions(CostModel::static_pair(pair))[1];
    if (name == "unit")
        return {"unit",
                [](const Rational& l, const Rational& r, int, int, int) -> Rational { return l + r; }};
    if (name == "adaptive_a2")
        return branch_cost_functions(CostModel::dynamic(PredictorKind::A2, pair))[0];
    if (name == "adaptive_a3")
        return branch_cost_functions(CostModel::dynamic(PredictorKind::A3, pair))[0];
    if (name == "predict_majority")
        return branch_cost_functions(CostModel::dynamic(PredictorKind::Static, pair))[0];
    throw std::invalid_argument("unknown cost table function '" + name + "'");
}

}  // namespace

StaticCostPair pair_from_descriptor(const nlohmann::json& descriptor) {
    return StaticCostPair(rational_from_json(descriptor.at("c_mispredict")),
                          rational_from_json(descriptor.at("c_predict")));
}

CostModel model_from_descriptor(const nlohmann::json& descriptor) {
    const StaticCostPair pair = pair_from_descriptor(descriptor);
    const std::string type = descriptor.value("type", "static");
    if (type == "static") return CostModel::static_pair(pair);
    if (type == "dynamic") {
        const auto& automaton = descriptor.at("automaton");
        if (automaton.is_string()) {
            const std::string name = automaton.get<std::string>();
            if (name == "A2") return CostModel::dynamic(PredictorKind::A2, pair);
            if (name == "A3") return CostModel::dynamic(PredictorKind::A3, pair);
            if (name == "static") return CostModel::dynamic(PredictorKind::Static, pair);
            throw std::invalid_argument("unknown automaton '" + name + "'");
        }
        return CostModel::dynamic_custom(
            std::make_shared<PredictorAutomaton>(automaton_from_json(automaton)), pair);
    }
    if (type == "table") {
        std::vector<BranchCostFn> functions;
        if (descriptor.contains("functions")) {
            for (const auto& entry : descriptor.at("functions"))
                functions.push_back(table_function(entry.get<std::string>(), pair));
        } else {
            functions = branch_cost_functions(CostModel::static_pair(pair));
        }
        return CostModel::table(std::move(functions));
    }
    throw std::invalid_argument("unknown cost model type '" + type + "'");
}

ProblemFile load_problem(const nlohmann::json& doc) {
    if (!doc.is_object()) throw std::invalid_argument("problem file must be a JSON object");
    ProblemFile problem;

    const bool has_weights = doc.contains("weights");
    const bool has_search = doc.contains("alpha") || doc.contains("beta");
    if (has_weights == has_search)
        throw std::invalid_argument("problem needs exactly one of weights or alpha/beta");
    if (has_weights) {
        problem.items.emplace(rational_array(doc.at("weights")));
    } else {
        problem.search.emplace(rational_array(doc.at("alpha")), rational_array(doc.at("beta")));
    }

    if (doc.contains("cost_model")) {
        const auto& descriptor = doc.at("cost_model");
        problem.pair.emplace(pair_from_descriptor(descriptor));
        problem.model.emplace(model_from_descriptor(descriptor));
        if (descriptor.contains("e")) {
            problem.equality_cost = rational_from_json(descriptor.at("e"));
            if (problem.equality_cost <= 0)
                throw std::invalid_argument("equality cost must be strictly positive");
        }
    }

    if (doc.contains("thresholds"))
        for (const auto& entry : doc.at("thresholds"))
            problem.thresholds.push_back(entry.get<std::string>());
    return problem;
}

ProblemFile load_problem_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot read '" + path + "'");
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("malformed JSON in '" + path + "': " + e.what());
    }
    return load_problem(doc);
}

namespace {

nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot read '" + path + "'");
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("malformed JSON in '" + path + "': " + e.what());
    }
}

nlohmann::json rational_json(const Rational& value, bool as_float) {
    if (as_float) return to_double(value);
    return to_string(value);
}

const StaticCostPair& require_pair(const ProblemFile& problem) {
    if (!problem.pair)
        throw std::invalid_argument("problem file needs a cost_model with c_mispredict/c_predict");
    return *problem.pair;
}

const ItemDistribution& require_items(const ProblemFile& problem) {
    if (!problem.items) throw std::invalid_argument("this command needs a weights problem");
    return *problem.items;
}

struct Args {
    std::string input;
    std::string tree;
    std::string solver = "auto";
    std::string automaton = "static";
    std::string format = "json";
    std::string hints = "none";
    std::uint64_t iterations = 0;
    std::uint64_t seed = 0;
    std::uint64_t warmup = 0;
    int points = 101;
    bool as_float = false;
};

int cmd_solve(const Args& args, std::ostream& out) {
    const ProblemFile problem = load_problem_file(args.input);
    std::string solver = args.solver;
    if (solver == "auto") solver = problem.search ? "search" : "branch";

    nlohmann::json result_json;
    if (solver == "search") {
        if (!problem.search)
            throw std::invalid_argument("search solver needs an alpha/beta problem");
        const SearchSolveResult result =
            solve_search_tree(*problem.search, require_pair(problem), problem.equality_cost);
        result_json = {{"solver", solver},
                       {"expected_cost", rational_json(result.normalized_cost, args.as_float)},
                       {"total_cost", rational_json(result.total_cost, args.as_float)},
                       {"tree", search_tree_to_json(result.tree)}};
    } else {
        const ItemDistribution& items = require_items(problem);
        SolveResult result;
        if (solver == "branch") {
            result = solve_branch_optimal(items, require_pair(problem));
        } else if (solver == "ordered") {
            result = solve_ordered_edge(items, require_pair(problem));
        } else if (solver == "general") {
            if (!problem.model) throw std::invalid_argument("problem file needs a cost_model");
            result = solve_generalized(items, *problem.model);
        } else {
            throw std::invalid_argument("unknown solver '" + solver + "'");
        }
        result_json = {{"solver", solver},
                       {"expected_cost", rational_json(result.normalized_cost, args.as_float)},
                       {"total_cost", rational_json(result.total_cost, args.as_float)},
                       {"tree", tree_to_json(result.tree)}};
    }
    out << result_json.dump(2) << "\n";
    return 0;
}

int cmd_eval(const Args& args, std::ostream& out) {
    const ProblemFile problem = load_problem_file(args.input);
    const nlohmann::json tree_doc = read_json_file(args.tree);

    if (problem.search) {
        const SearchTreePtr tree = search_tree_from_json(tree_doc);
        const Rational total = expected_search_cost(tree, *problem.search, require_pair(problem),
                                                    problem.equality_cost);
        const nlohmann::json result = {
            {"total_cost", rational_json(total, args.as_float)},
            {"normalized_cost", rational_json(total / problem.search->total(), args.as_float)}};
        out << result.dump(2) << "\n";
        return 0;
    }

    const ItemDistribution& items = require_items(problem);
    if (!problem.model) throw std::invalid_argument("problem file needs a cost_model");
    const TreePtr tree = tree_from_json(tree_doc);
    const CostBreakdown breakdown = expected_cost(tree, items, *problem.model);

    nlohmann::json per_item = nlohmann::json::array();
    for (const ItemCost& entry : breakdown.per_item)
        per_item.push_back({{"item", entry.item},
                            {"comparisons", entry.comparisons},
                            {"path_cost", rational_json(entry.path_cost, args.as_float)}});
    nlohmann::json per_node = nlohmann::json::array();
    for (const NodeCost& entry : breakdown.per_node)
        per_node.push_back({{"i", entry.i},
                            {"j", entry.j},
                            {"split", entry.split},
                            {"choice", entry.choice},
                            {"cost", rational_json(entry.cost, args.as_float)}});
    const nlohmann::json result = {
        {"total_cost", rational_json(breakdown.total, args.as_float)},
        {"normalized_cost", rational_json(breakdown.normalized, args.as_float)},
        {"per_item", per_item},
        {"per_node", per_node}};
    out << result.dump(2) << "\n";
    return 0;
}

int cmd_simulate(const Args& args, std::ostream& out) {
    const ProblemFile problem = load_problem_file(args.input);
    const ItemDistribution& items = require_items(problem);
    const TreePtr tree = tree_from_json(read_json_file(args.tree));

    const PredictorAutomaton* automaton = nullptr;
    if (args.automaton == "A2")
        automaton = &builtin_automaton(PredictorKind::A2);
    else if (args.automaton == "A3")
        automaton = &builtin_automaton(PredictorKind::A3);
    else if (args.automaton != "static")
        throw std::invalid_argument("automaton must be A2, A3 or static");

    const SimReport report = simulate(tree, items, automaton, require_pair(problem),
                                      args.iterations, args.seed, args.warmup);
    out << sim_report_to_json(report).dump(2) << "\n";
    return 0;
}

int cmd_compare(const Args& args, std::ostream& out) {
    const ProblemFile problem = load_problem_file(args.input);
    const ItemDistribution& items = require_items(problem);
    const StaticCostPair& pair = require_pair(problem);

    const SolveResult uniform = solve_branch_optimal(items, StaticCostPair(1, 1));
    const SolveResult ordered = solve_ordered_edge(items, pair);
    const SolveResult branch = solve_branch_optimal(items, pair);
    const SolveResult dyn_a2 = solve_generalized(items, CostModel::dynamic(PredictorKind::A2, pair));
    const SolveResult dyn_a3 = solve_generalized(items, CostModel::dynamic(PredictorKind::A3, pair));

    const nlohmann::json result = {
        {"uniform_cost", rational_json(uniform.normalized_cost, args.as_float)},
        {"ordered_edge", rational_json(ordered.normalized_cost, args.as_float)},
        {"branch_optimal", rational_json(branch.normalized_cost, args.as_float)},
        {"dynamic_a2", rational_json(dyn_a2.normalized_cost, args.as_float)},
        {"dynamic_a3", rational_json(dyn_a3.normalized_cost, args.as_float)},
        {"branch_vs_ordered_ratio",
         to_double(branch.normalized_cost / ordered.normalized_cost)}};
    out << result.dump(2) << "\n";
    return 0;
}

int cmd_curve(const Args& args, std::ostream& out) {
    PredictorKind kind;
    if (args.automaton == "A2")
        kind = PredictorKind::A2;
    else if (args.automaton == "A3")
        kind = PredictorKind::A3;
    else if (args.automaton == "static")
        kind = PredictorKind::Static;
    else
        throw std::invalid_argument("automaton must be A2, A3 or static");

    out << "p1,rate\n";
    for (const MispredictCurvePoint& point : mispredict_curve(kind, args.points))
        out << shortest_decimal(point.p1) << "," << shortest_decimal(point.rate) << "\n";
    return 0;
}

int cmd_emit(const Args& args, std::ostream& out) {
    const ProblemFile problem = load_problem_file(args.input);
    const nlohmann::json tree_doc = read_json_file(args.tree);

    EmitOptions options;
    options.threshold_names = problem.thresholds;
    if (args.hints == "macro")
        options.hint_style = HintStyle::Macro;
    else if (args.hints == "comment")
        options.hint_style = HintStyle::Comment;
    else if (args.hints == "none")
        options.hint_style = HintStyle::None;
    else
        throw std::invalid_argument("hints must be macro, comment or none");

    if (problem.search) {
        const SearchTreePtr tree = search_tree_from_json(tree_doc);
        SearchSolveResult result;
        result.tree = tree;
        result.total_cost = expected_search_cost(tree, *problem.search, require_pair(problem),
                                                 problem.equality_cost);
        result.normalized_cost = result.total_cost / problem.search->total();
        if (args.format == "json") {
            out << emit_json(tree, result) << "\n";
        } else if (args.format == "dot") {
            options.edge_costs = require_pair(problem);
            out << emit_dot(tree, result, options);
        } else if (args.format == "c") {
            out << emit_code(tree, options);
        } else {
            throw std::invalid_argument("format must be json, dot or c");
        }
        return 0;
    }

    const ItemDistribution& items = require_items(problem);
    if (!problem.model) throw std::invalid_argument("problem file needs a cost_model");
    const TreePtr tree = tree_from_json(tree_doc);
    const CostBreakdown breakdown = expected_cost(tree, items, *problem.model);
    SolveResult result;
    result.tree = tree;
    result.total_cost = breakdown.total;
    result.normalized_cost = breakdown.normalized;

    // Trees solved under adaptive prediction carry no orientation; stamp the
    // analytic majority on them so hints and fall-through sides line up.
    const TreePtr oriented =
        problem.model->is_dynamic() ? orient_majority(tree, items) : tree;

    if (args.format == "json") {
        out << emit_json(tree, result) << "\n";
    } else if (args.format == "dot") {
        if (problem.model->is_static()) options.edge_costs = require_pair(problem);
        result.tree = oriented;
        out << emit_dot(oriented, result, options);
    } else if (args.format == "c") {
        out << emit_code(oriented, options);
    } else {
        throw std::invalid_argument("format must be json, dot or c");
    }
    return 0;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"optimal decision and search trees under asymmetric branch costs"};
    app.require_subcommand(1);
    Args parsed;

    CLI::App* solve = app.add_subcommand("solve", "solve a problem file for an optimal tree");
    solve->add_option("--input", parsed.input, "problem JSON file")->required();
    solve->add_option("--solver", parsed.solver, "branch|ordered|general|search (default: auto)")
        ->check(CLI::IsMember({"auto", "branch", "ordered", "general", "search"}));
    solve->add_flag("--float", parsed.as_float, "render costs as decimals");

    CLI::App* eval = app.add_subcommand("eval", "evaluate a tree against a problem file");
    eval->add_option("--input", parsed.input, "problem JSON file")->required();
    eval->add_option("--tree", parsed.tree, "tree JSON file")->required();
    eval->add_flag("--float", parsed.as_float, "render costs as decimals");

    CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo run of a tree");
    simulate->add_option("--input", parsed.input, "problem JSON file")->required();
    simulate->add_option("--tree", parsed.tree, "tree JSON file")->required();
    simulate->add_option("--iterations", parsed.iterations, "number of draws")->required();
    simulate->add_option("--seed", parsed.seed, "64-bit generator seed")->required();
    simulate->add_option("--warmup", parsed.warmup, "draws discarded before measuring");
    simulate->add_option("--automaton", parsed.automaton, "A2|A3|static (default static)");

    CLI::App* compare = app.add_subcommand("compare", "cost table across solver variants");
    compare->add_option("--input", parsed.input, "problem JSON file")->required();
    compare->add_flag("--float", parsed.as_float, "render costs as decimals");

    CLI::App* curve = app.add_subcommand("curve", "misprediction rate curve as CSV");
    curve->add_option("--automaton", parsed.automaton, "A2|A3|static")->required();
    curve->add_option("--points", parsed.points, "samples over p1 in [0, 0.5]")
        ->check(CLI::Range(2, 1000000));

    CLI::App* emit = app.add_subcommand("emit", "emit a tree as json, dot or c");
    emit->add_option("--input", parsed.input, "problem JSON file")->required();
    emit->add_option("--tree", parsed.tree, "tree JSON file")->required();
    emit->add_option("--format", parsed.format, "json|dot|c (default json)")
        ->check(CLI::IsMember({"json", "dot", "c"}));
    emit->add_option("--hints", parsed.hints, "macro|comment|none (default none)")
        ->check(CLI::IsMember({"macro", "comment", "none"}));

    std::vector<std::string> argv_storage;
    argv_storage.reserve(args.size() + 1);
    argv_storage.push_back("branchtree");
    for (const std::string& arg : args) argv_storage.push_back(arg);
    std::vector<const char*> argv;
    for (const std::string& arg : argv_storage) argv.push_back(arg.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (solve->parsed()) return cmd_solve(parsed, out);
        if (eval->parsed()) return cmd_eval(parsed, out);
        if (simulate->parsed()) return cmd_simulate(parsed, out);
        if (compare->parsed()) return cmd_compare(parsed, out);
        if (curve->parsed()) return cmd_curve(parsed, out);
        if (emit->parsed()) return cmd_emit(parsed, out);
        err << "error: no subcommand\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::out_of_range& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 1;
    }
}

int run_main(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return dispatch(args, std::cout, std::cerr);
}

}  // namespace branchtree::cli
