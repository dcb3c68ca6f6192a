#include "branchtree/predictor.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <stdexcept>

namespace branchtree {

PredictorAutomaton::PredictorAutomaton(std::vector<bool> predict_taken,
                                       std::vector<std::array<int, 2>> next_state,
                                       int initial_state)
    : predict_taken_(std::move(predict_taken)),
      next_(std::move(next_state)),
      initial_state_(initial_state) {
    if (predict_taken_.empty()) throw std::invalid_argument("automaton needs at least one state");
    if (next_.size() != predict_taken_.size())
        throw std::invalid_argument("automaton transition table size mismatch");
    const int n = state_count();
    for (const auto& row : next_)
        for (int target : row)
            if (target < 0 || target >= n)
                throw std::invalid_argument("automaton transition target out of range");
    if (initial_state_ < 0 || initial_state_ >= n)
        throw std::invalid_argument("automaton initial state out of range");
}

PredictorAutomaton PredictorAutomaton::a2() {
    return PredictorAutomaton({false, false, true, true},
                              {{{0, 1}, {0, 2}, {1, 3}, {2, 3}}}, 1);
}

PredictorAutomaton PredictorAutomaton::a3() {
    return PredictorAutomaton({false, false, true, true},
                              {{{0, 1}, {0, 3}, {0, 3}, {2, 3}}}, 1);
}

bool PredictorAutomaton::is_irreducible() const {
    const int n = state_count();
    auto reachable = [&](bool forward) {
        std::vector<char> seen(static_cast<size_t>(n), 0);
        std::deque<int> queue{0};
        seen[0] = 1;
        while (!queue.empty()) {
            int s = queue.front();
            queue.pop_front();
            for (int t = 0; t < n; ++t) {
                bool edge = forward ? (next_state(s, false) == t || next_state(s, true) == t)
                                    : (next_state(t, false) == s || next_state(t, true) == s);
                if (edge && !seen[static_cast<size_t>(t)]) {
                    seen[static_cast<size_t>(t)] = 1;
                    queue.push_back(t);
                }
            }
        }
        return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
    };
    return reachable(true) && reachable(false);
}

const PredictorAutomaton& builtin_automaton(PredictorKind kind) {
    static const PredictorAutomaton a2 = PredictorAutomaton::a2();
    static const PredictorAutomaton a3 = PredictorAutomaton::a3();
    switch (kind) {
        case PredictorKind::A2: return a2;
        case PredictorKind::A3: return a3;
        default: throw std::invalid_argument("no built-in automaton for this predictor kind");
    }
}

PredictorAutomaton automaton_from_json(const nlohmann::json& descriptor) {
    if (!descriptor.is_object()) throw std::invalid_argument("automaton descriptor must be a JSON object");
    const int states = descriptor.at("states").get<int>();
    if (states < 1) throw std::invalid_argument("automaton needs at least one state");

    std::vector<bool> predict;
    for (const auto& entry : descriptor.at("predict")) {
        const std::string label = entry.get<std::string>();
        if (label == "T")
            predict.push_back(true);
        else if (label == "N")
            predict.push_back(false);
        else
            throw std::invalid_argument("predict entries must be \"T\" or \"N\"");
    }
    if (static_cast<int>(predict.size()) != states)
        throw std::invalid_argument("predict array size does not match states");

    std::vector<std::array<int, 2>> next;
    for (const auto& row : descriptor.at("next")) {
        if (!row.is_array() || row.size() != 2)
            throw std::invalid_argument("next rows must be [untaken, taken] pairs");
        next.push_back({row[0].get<int>(), row[1].get<int>()});
    }
    if (static_cast<int>(next.size()) != states)
        throw std::invalid_argument("next array size does not match states");

    const int initial = descriptor.value("initial", 0);
    return PredictorAutomaton(std::move(predict), std::move(next), initial);
}

nlohmann::json automaton_to_json(const PredictorAutomaton& automaton) {
    nlohmann::json predict = nlohmann::json::array();
    nlohmann::json next = nlohmann::json::array();
    for (int s = 0; s < automaton.state_count(); ++s) {
        predict.push_back(automaton.predicts_taken(s) ? "T" : "N");
        next.push_back({automaton.next_state(s, false), automaton.next_state(s, true)});
    }
    return {{"states", automaton.state_count()},
            {"predict", predict},
            {"next", next},
            {"initial", automaton.initial_state()}};
}

namespace {

template <typename F>
void check_probability(const F& p) {
    if (p < F(0) || p > F(1)) throw std::invalid_argument("probability outside [0,1]");
}

// At p in {0,1} the chain is deterministic: follow transitions from the
// initial state into the cycle it ends up in and average mispredictions
// over that cycle. This is the limit of the stationary rate from inside.
template <typename F>
F boundary_rate(const PredictorAutomaton& a, bool taken) {
    const int n = a.state_count();
    std::vector<int> first_visit(static_cast<size_t>(n), -1);
    int s = a.initial_state();
    int step = 0;
    while (first_visit[static_cast<size_t>(s)] < 0) {
        first_visit[static_cast<size_t>(s)] = step++;
        s = a.next_state(s, taken);
    }
    int mispredicts = 0;
    int cycle_len = 0;
    int t = s;
    do {
        if (a.predicts_taken(t) != taken) ++mispredicts;
        t = a.next_state(t, taken);
        ++cycle_len;
    } while (t != s);
    return F(mispredicts) / F(cycle_len);
}

template <typename F>
bool is_pivotable(const F& x) {
    if constexpr (std::is_same_v<F, double>)
        return std::abs(x) > 1e-14;
    else
        return x != 0;
}

// pi P = pi with sum(pi) = 1, by Gaussian elimination on the transposed
// system. The first n-1 balance equations plus normalization are
// nonsingular exactly when the chain has a unique stationary distribution.
template <typename F>
F stationary_rate_impl(const PredictorAutomaton& a, const F& p_taken) {
    check_probability(p_taken);
    if (!a.is_irreducible())
        throw std::invalid_argument("predictor chain is reducible");
    if (p_taken == F(0)) return boundary_rate<F>(a, false);
    if (p_taken == F(1)) return boundary_rate<F>(a, true);

    const int n = a.state_count();
    const F q = F(1) - p_taken;

    // Balance equations sum_t pi_t P(t->e) - pi_e = 0 for e < n-1; the last
    // row is replaced by the normalization sum(pi) = 1.
    std::vector<std::vector<F>> m(static_cast<size_t>(n),
                                  std::vector<F>(static_cast<size_t>(n) + 1, F(0)));
    for (int t = 0; t < n; ++t) {
        m[static_cast<size_t>(a.next_state(t, true))][static_cast<size_t>(t)] += p_taken;
        m[static_cast<size_t>(a.next_state(t, false))][static_cast<size_t>(t)] += q;
    }
    for (int e = 0; e < n; ++e) m[static_cast<size_t>(e)][static_cast<size_t>(e)] -= F(1);
    for (int t = 0; t < n; ++t) m[static_cast<size_t>(n) - 1][static_cast<size_t>(t)] = F(1);
    m[static_cast<size_t>(n) - 1][static_cast<size_t>(n)] = F(1);

    for (int col = 0; col < n; ++col) {
        int pivot = -1;
        if constexpr (std::is_same_v<F, double>) {
            double best = 0.0;
            for (int r = col; r < n; ++r)
                if (std::abs(m[static_cast<size_t>(r)][static_cast<size_t>(col)]) > best) {
                    best = std::abs(m[static_cast<size_t>(r)][static_cast<size_t>(col)]);
                    pivot = r;
                }
        } else {
            for (int r = col; r < n; ++r)
                if (is_pivotable(m[static_cast<size_t>(r)][static_cast<size_t>(col)])) {
                    pivot = r;
                    break;
                }
        }
        if (pivot < 0) throw std::invalid_argument("predictor chain has no unique stationary distribution");
        std::swap(m[static_cast<size_t>(col)], m[static_cast<size_t>(pivot)]);
        const F head = m[static_cast<size_t>(col)][static_cast<size_t>(col)];
        for (int c = col; c <= n; ++c) m[static_cast<size_t>(col)][static_cast<size_t>(c)] /= head;
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            const F factor = m[static_cast<size_t>(r)][static_cast<size_t>(col)];
            if (factor == F(0)) continue;
            for (int c = col; c <= n; ++c)
                m[static_cast<size_t>(r)][static_cast<size_t>(c)] -=
                    factor * m[static_cast<size_t>(col)][static_cast<size_t>(c)];
        }
    }

    F rate = F(0);
    for (int s = 0; s < n; ++s) {
        const F& pi = m[static_cast<size_t>(s)][static_cast<size_t>(n)];
        rate += pi * (a.predicts_taken(s) ? q : p_taken);
    }
    return rate;
}

}  // namespace

Rational static_rate(const Rational& p1) {
    const Rational p = canonical(p1);
    if (p < 0 || p > Rational(1, 2))
        throw std::invalid_argument("static prediction rate needs p1 in [0, 1/2]");
    return p;
}

double static_rate(double p1) {
    if (p1 < 0.0 || p1 > 0.5)
        throw std::invalid_argument("static prediction rate needs p1 in [0, 1/2]");
    return p1;
}

Rational rate_a2(const Rational& p1) {
    const Rational p = canonical(p1);
    check_probability(p);
    return (p - p * p) / (1 - 2 * p + 2 * p * p);
}

double rate_a2(double p1) {
    check_probability(p1);
    return (p1 - p1 * p1) / (1.0 - 2.0 * p1 + 2.0 * p1 * p1);
}

Rational rate_a3(const Rational& p1) {
    const Rational p = canonical(p1);
    check_probability(p);
    const Rational p2 = p * p;
    return (p + p2 - 4 * p2 * p + 2 * p2 * p2) / (1 - p + p2);
}

double rate_a3(double p1) {
    check_probability(p1);
    const double p2 = p1 * p1;
    return (p1 + p2 - 4.0 * p2 * p1 + 2.0 * p2 * p2) / (1.0 - p1 + p2);
}

Rational stationary_rate(const PredictorAutomaton& automaton, const Rational& p_taken) {
    return stationary_rate_impl<Rational>(automaton, canonical(p_taken));
}

double stationary_rate(const PredictorAutomaton& automaton, double p_taken) {
    return stationary_rate_impl<double>(automaton, p_taken);
}

namespace {

template <typename RateFn>
Rational dynamic_cost_with(const StaticCostPair& pair, const Rational& p_min_in,
                           const Rational& p_max_in, RateFn&& rate_of) {
    const Rational p_min = canonical(p_min_in);
    const Rational p_max = canonical(p_max_in);
    if (p_min < 0 || p_max < 0) throw std::invalid_argument("negative branch mass");
    if (p_min > p_max) throw std::invalid_argument("p_min exceeds p_max");
    const Rational total = p_min + p_max;
    if (total == 0) return Rational(0);
    const Rational p1 = p_min / total;
    const Rational f = rate_of(p1);
    return total * (pair.c_mispredict * f + pair.c_predict * (1 - f));
}

}  // namespace

Rational branch_cost_dynamic(const StaticCostPair& pair, PredictorKind kind,
                             const Rational& p_min, const Rational& p_max) {
    switch (kind) {
        case PredictorKind::Static:
            return dynamic_cost_with(pair, p_min, p_max,
                                     [](const Rational& p1) { return static_rate(p1); });
        case PredictorKind::A2:
            return dynamic_cost_with(pair, p_min, p_max,
                                     [](const Rational& p1) { return rate_a2(p1); });
        case PredictorKind::A3:
            return dynamic_cost_with(pair, p_min, p_max,
                                     [](const Rational& p1) { return rate_a3(p1); });
        case PredictorKind::Custom:
            throw std::invalid_argument("custom predictor needs an automaton");
    }
    throw std::invalid_argument("unknown predictor kind");
}

Rational branch_cost_dynamic(const StaticCostPair& pair, const PredictorAutomaton& automaton,
                             const Rational& p_min, const Rational& p_max) {
    return dynamic_cost_with(pair, p_min, p_max, [&automaton](const Rational& p1) {
        return stationary_rate(automaton, p1);
    });
}

std::vector<BranchCostFn> branch_cost_functions(const CostModel& model) {
    if (model.is_static()) {
        const StaticCostPair pair = model.as_static().pair;
        return {
            {"mispredict_left",
             [pair](const Rational& l, const Rational& r, int, int, int) -> Rational {
                 return pair.c_mispredict * l + pair.c_predict * r;
             }},
            {"mispredict_right",
             [pair](const Rational& l, const Rational& r, int, int, int) -> Rational {
                 return pair.c_predict * l + pair.c_mispredict * r;
             }},
        };
    }
    if (model.is_dynamic()) {
        const auto& dyn = model.as_dynamic();
        const StaticCostPair pair = dyn.pair;
        std::string name;
        switch (dyn.kind) {
            case PredictorKind::Static: name = "predict_majority"; break;
            case PredictorKind::A2: name = "adaptive_a2"; break;
            case PredictorKind::A3: name = "adaptive_a3"; break;
            case PredictorKind::Custom: name = "adaptive_custom"; break;
        }
        const PredictorKind kind = dyn.kind;
        const auto automaton = dyn.automaton;
        return {{name, [pair, kind, automaton](const Rational& l, const Rational& r, int, int, int) {
                     const Rational& mn = l <= r ? l : r;
                     const Rational& mx = l <= r ? r : l;
                     if (kind == PredictorKind::Custom)
                         return branch_cost_dynamic(pair, *automaton, mn, mx);
                     return branch_cost_dynamic(pair, kind, mn, mx);
                 }}};
    }
    return model.as_table().functions;
}

std::vector<MispredictCurvePoint> mispredict_curve(PredictorKind kind, int points) {
    if (points < 2) throw std::invalid_argument("curve needs at least two points");
    std::vector<MispredictCurvePoint> curve;
    curve.reserve(static_cast<size_t>(points));
    for (int i = 0; i < points; ++i) {
        const double p1 = 0.5 * static_cast<double>(i) / static_cast<double>(points - 1);
        double rate = 0.0;
        switch (kind) {
            case PredictorKind::Static: rate = static_rate(p1); break;
            case PredictorKind::A2: rate = rate_a2(p1); break;
            case PredictorKind::A3: rate = rate_a3(p1); break;
            case PredictorKind::Custom:
                throw std::invalid_argument("curve supports the built-in predictor kinds");
        }
        curve.push_back({p1, rate});
    }
    return curve;
}

}  // namespace branchtree
