#include "branchtree/cli.hpp"
#include "branchtree/dp.hpp"
#include "branchtree/emit.hpp"
#include "branchtree/eval.hpp"
#include "branchtree/predictor.hpp"
#include "branchtree/sim.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include <memory>
#include <string>
#include <vector>

namespace py = pybind11;
using namespace branchtree;

namespace {

py::object to_fraction(const Rational& value) {
    static py::object fraction_type = py::module_::import("fractions").attr("Fraction");
    return fraction_type(py::str(to_string(value)));
}

Rational rational_from_py(py::handle value) {
    if (py::isinstance<py::int_>(value) || py::isinstance<py::str>(value))
        return parse_rational(py::str(value).cast<std::string>());
    if (py::isinstance<py::float_>(value))
        return parse_rational(shortest_decimal(value.cast<double>()));
    if (py::hasattr(value, "numerator") && py::hasattr(value, "denominator"))
        return parse_rational(py::str(value.attr("numerator")).cast<std::string>() + "/" +
                              py::str(value.attr("denominator")).cast<std::string>());
    throw std::invalid_argument("expected an int, float, str or Fraction");
}

std::vector<Rational> rationals_from_py(py::handle values) {
    std::vector<Rational> out;
    for (py::handle entry : values) out.push_back(rational_from_py(entry));
    return out;
}

py::object json_to_py(const nlohmann::json& value) {
    switch (value.type()) {
        case nlohmann::json::value_t::null: return py::none();
        case nlohmann::json::value_t::boolean: return py::bool_(value.get<bool>());
        case nlohmann::json::value_t::number_integer: return py::int_(value.get<std::int64_t>());
        case nlohmann::json::value_t::number_unsigned: return py::int_(value.get<std::uint64_t>());
        case nlohmann::json::value_t::number_float: return py::float_(value.get<double>());
        case nlohmann::json::value_t::string: return py::str(value.get<std::string>());
        case nlohmann::json::value_t::array: {
            py::list list;
            for (const auto& entry : value) list.append(json_to_py(entry));
            return list;
        }
        case nlohmann::json::value_t::object: {
            py::dict dict;
            for (const auto& [key, entry] : value.items())
                dict[py::str(key)] = json_to_py(entry);
            return dict;
        }
        default: throw std::invalid_argument("unsupported JSON value");
    }
}

nlohmann::json py_to_json(py::handle value) {
    if (value.is_none()) return nullptr;
    if (py::isinstance<py::bool_>(value)) return value.cast<bool>();
    if (py::isinstance<py::int_>(value)) return value.cast<std::int64_t>();
    if (py::isinstance<py::float_>(value)) return value.cast<double>();
    if (py::isinstance<py::str>(value)) return value.cast<std::string>();
    if (py::isinstance<py::dict>(value)) {
        nlohmann::json out = nlohmann::json::object();
        for (auto item : value.cast<py::dict>())
            out[item.first.cast<std::string>()] = py_to_json(item.second);
        return out;
    }
    if (py::isinstance<py::list>(value) || py::isinstance<py::tuple>(value)) {
        nlohmann::json out = nlohmann::json::array();
        for (py::handle entry : value) out.push_back(py_to_json(entry));
        return out;
    }
    throw std::invalid_argument("value is not JSON-representable");
}

py::dict result_to_py(const SolveResult& result, const char* solver) {
    py::dict out;
    out["solver"] = solver;
    out["expected_cost"] = to_fraction(result.normalized_cost);
    out["total_cost"] = to_fraction(result.total_cost);
    out["tree"] = json_to_py(tree_to_json(result.tree));
    return out;
}

StaticCostPair pair_from_py(py::handle c_mispredict, py::handle c_predict) {
    return StaticCostPair(rational_from_py(c_mispredict), rational_from_py(c_predict));
}

// "static" -> nullptr, "A2"/"A3" -> builtin, dict -> parsed automaton
const PredictorAutomaton* resolve_automaton(py::handle descriptor,
                                            std::unique_ptr<PredictorAutomaton>& storage) {
    if (py::isinstance<py::str>(descriptor)) {
        const std::string name = descriptor.cast<std::string>();
        if (name == "static") return nullptr;
        if (name == "A2") return &builtin_automaton(PredictorKind::A2);
        if (name == "A3") return &builtin_automaton(PredictorKind::A3);
        throw std::invalid_argument("automaton must be A2, A3, static or an automaton dict");
    }
    storage = std::make_unique<PredictorAutomaton>(automaton_from_json(py_to_json(descriptor)));
    return storage.get();
}

PredictorKind kind_from_name(const std::string& name) {
    if (name == "static") return PredictorKind::Static;
    if (name == "A2") return PredictorKind::A2;
    if (name == "A3") return PredictorKind::A3;
    throw std::invalid_argument("automaton must be A2, A3 or static");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Optimal decision and search trees under asymmetric branch costs";

    m.def(
        "solve_branch_optimal",
        [](py::handle weights, py::handle c_mispredict, py::handle c_predict) {
            const ItemDistribution dist(rationals_from_py(weights));
            return result_to_py(solve_branch_optimal(dist, pair_from_py(c_mispredict, c_predict)),
                                "branch");
        },
        py::arg("weights"), py::arg("c_mispredict"), py::arg("c_predict"),
        "Minimum-cost alphabetic tree; either side of a node may carry the mispredict cost.");

    m.def(
        "solve_ordered_edge",
        [](py::handle weights, py::handle c_mispredict, py::handle c_predict) {
            const ItemDistribution dist(rationals_from_py(weights));
            return result_to_py(solve_ordered_edge(dist, pair_from_py(c_mispredict, c_predict)),
                                "ordered");
        },
        py::arg("weights"), py::arg("c_mispredict"), py::arg("c_predict"),
        "Baseline with the mispredict cost bound to the left edge.");

    m.def(
        "solve_generalized",
        [](py::handle weights, py::handle cost_model) {
            const ItemDistribution dist(rationals_from_py(weights));
            const CostModel model = cli::model_from_descriptor(py_to_json(cost_model));
            return result_to_py(solve_generalized(dist, model), "general");
        },
        py::arg("weights"), py::arg("cost_model"),
        "Minimization over a cost-model descriptor dict (static, dynamic or table).");

    m.def(
        "solve_search_tree",
        [](py::handle alpha, py::handle beta, py::handle c_mispredict, py::handle c_predict,
           py::handle equality_cost) {
            const SearchDistribution dist(rationals_from_py(alpha), rationals_from_py(beta));
            const SearchSolveResult result = solve_search_tree(
                dist, pair_from_py(c_mispredict, c_predict), rational_from_py(equality_cost));
            py::dict out;
            out["solver"] = "search";
            out["expected_cost"] = to_fraction(result.normalized_cost);
            out["total_cost"] = to_fraction(result.total_cost);
            out["tree"] = json_to_py(search_tree_to_json(result.tree));
            return out;
        },
        py::arg("alpha"), py::arg("beta"), py::arg("c_mispredict"), py::arg("c_predict"),
        py::arg("equality_cost") = 1,
        "Three-way search tree over hit probabilities beta and gap probabilities alpha.");

    m.def(
        "brute_force_optimal",
        [](py::handle weights, py::handle cost_model, int limit) {
            const ItemDistribution dist(rationals_from_py(weights));
            const CostModel model = cli::model_from_descriptor(py_to_json(cost_model));
            return result_to_py(brute_force_optimal(dist, model, limit), "brute_force");
        },
        py::arg("weights"), py::arg("cost_model"), py::arg("limit") = 10,
        "Exhaustive optimum over every shape and choice assignment (small n only).");

    m.def(
        "expected_cost",
        [](py::handle tree, py::handle weights, py::handle cost_model) {
            const ItemDistribution dist(rationals_from_py(weights));
            const CostModel model = cli::model_from_descriptor(py_to_json(cost_model));
            const CostBreakdown breakdown =
                expected_cost(tree_from_json(py_to_json(tree)), dist, model);
            py::dict out;
            out["total_cost"] = to_fraction(breakdown.total);
            out["normalized_cost"] = to_fraction(breakdown.normalized);
            py::list per_item;
            for (const ItemCost& entry : breakdown.per_item) {
                py::dict item;
                item["item"] = entry.item;
                item["comparisons"] = entry.comparisons;
                item["path_cost"] = to_fraction(entry.path_cost);
                per_item.append(item);
            }
            out["per_item"] = per_item;
            py::list per_node;
            for (const NodeCost& entry : breakdown.per_node) {
                py::dict node;
                node["i"] = entry.i;
                node["j"] = entry.j;
                node["split"] = entry.split;
                node["choice"] = entry.choice;
                node["cost"] = to_fraction(entry.cost);
                per_node.append(node);
            }
            out["per_node"] = per_node;
            return out;
        },
        py::arg("tree"), py::arg("weights"), py::arg("cost_model"),
        "Exact expected cost of a tree dict under a cost-model descriptor.");

    m.def(
        "simulate",
        [](py::handle tree, py::handle weights, py::handle c_mispredict, py::handle c_predict,
           std::uint64_t iterations, std::uint64_t seed, std::uint64_t warmup,
           py::handle automaton) {
            const ItemDistribution dist(rationals_from_py(weights));
            std::unique_ptr<PredictorAutomaton> storage;
            const PredictorAutomaton* resolved = resolve_automaton(automaton, storage);
            const SimReport report =
                simulate(tree_from_json(py_to_json(tree)), dist, resolved,
                         pair_from_py(c_mispredict, c_predict), iterations, seed, warmup);
            return json_to_py(sim_report_to_json(report));
        },
        py::arg("tree"), py::arg("weights"), py::arg("c_mispredict"), py::arg("c_predict"),
        py::arg("iterations"), py::arg("seed"), py::arg("warmup") = 0,
        py::arg("automaton") = "static",
        "Seed-deterministic Monte Carlo run; automaton is A2, A3, static or a dict.");

    m.def("static_rate", [](double p1) { return static_rate(p1); }, py::arg("p1"));
    m.def("rate_a2", [](double p1) { return rate_a2(p1); }, py::arg("p1"));
    m.def("rate_a3", [](double p1) { return rate_a3(p1); }, py::arg("p1"));
    m.def(
        "rate_a2_exact",
        [](py::handle p1) { return to_fraction(rate_a2(rational_from_py(p1))); }, py::arg("p1"));
    m.def(
        "rate_a3_exact",
        [](py::handle p1) { return to_fraction(rate_a3(rational_from_py(p1))); }, py::arg("p1"));

    m.def(
        "stationary_rate",
        [](py::handle automaton, py::handle p1) {
            std::unique_ptr<PredictorAutomaton> storage;
            const PredictorAutomaton* resolved = resolve_automaton(automaton, storage);
            if (!resolved) throw std::invalid_argument("stationary_rate needs an automaton");
            if (py::isinstance<py::float_>(p1))
                return py::cast(stationary_rate(*resolved, p1.cast<double>()));
            return py::object(to_fraction(stationary_rate(*resolved, rational_from_py(p1))));
        },
        py::arg("automaton"), py::arg("p1"),
        "Exact (Fraction input) or floating (float input) stationary misprediction rate.");

    m.def(
        "branch_cost_dynamic",
        [](py::handle c_mispredict, py::handle c_predict, const std::string& automaton,
           py::handle p_min, py::handle p_max) {
            return to_fraction(branch_cost_dynamic(pair_from_py(c_mispredict, c_predict),
                                                   kind_from_name(automaton),
                                                   rational_from_py(p_min),
                                                   rational_from_py(p_max)));
        },
        py::arg("c_mispredict"), py::arg("c_predict"), py::arg("automaton"), py::arg("p_min"),
        py::arg("p_max"), "Expected cost of one branch with child masses p_min <= p_max.");

    m.def(
        "mispredict_curve",
        [](const std::string& automaton, int points) {
            py::list out;
            for (const MispredictCurvePoint& point :
                 mispredict_curve(kind_from_name(automaton), points))
                out.append(py::make_tuple(point.p1, point.rate));
            return out;
        },
        py::arg("automaton"), py::arg("points") = 101,
        "(p1, rate) samples over p1 in [0, 0.5].");

    m.def(
        "emit_code",
        [](py::handle tree, py::handle thresholds, const std::string& hints,
           const std::string& value_name) {
            EmitOptions options;
            if (!thresholds.is_none())
                options.threshold_names = thresholds.cast<std::vector<std::string>>();
            if (hints == "macro")
                options.hint_style = HintStyle::Macro;
            else if (hints == "comment")
                options.hint_style = HintStyle::Comment;
            else if (hints != "none")
                throw std::invalid_argument("hints must be macro, comment or none");
            options.value_name = value_name;
            const nlohmann::json doc = py_to_json(tree);
            const nlohmann::json& node = doc.contains("tree") ? doc.at("tree") : doc;
            if (node.is_object() && node.contains("type") && node.at("type") == "gap")
                return emit_code(search_tree_from_json(doc), options);
            if (node.is_object() && node.contains("key"))
                return emit_code(search_tree_from_json(doc), options);
            return emit_code(tree_from_json(doc), options);
        },
        py::arg("tree"), py::arg("thresholds") = py::none(), py::arg("hints") = "none",
        py::arg("value_name") = "x",
        "Nested if/else source for a tree dict (decision or search).");

    m.def(
        "emit_dot",
        [](py::handle tree, py::handle expected_cost, py::handle c_mispredict,
           py::handle c_predict) {
            EmitOptions options;
            if (!c_mispredict.is_none() && !c_predict.is_none())
                options.edge_costs = pair_from_py(c_mispredict, c_predict);
            SolveResult view;
            view.tree = tree_from_json(py_to_json(tree));
            view.total_cost = Rational(0);
            view.normalized_cost =
                expected_cost.is_none() ? Rational(0) : rational_from_py(expected_cost);
            return emit_dot(view.tree, view, options);
        },
        py::arg("tree"), py::arg("expected_cost") = py::none(),
        py::arg("c_mispredict") = py::none(), py::arg("c_predict") = py::none(),
        "Graphviz text for a decision tree dict.");
}
