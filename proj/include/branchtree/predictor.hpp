#pragma once

#include "branchtree/model.hpp"

#include <json.hpp>

#include <array>
#include <vector>

namespace branchtree {

// Moore-style finite predictor: each state predicts taken or untaken, the
// actual outcome drives the transition. Under i.i.d. branch outcomes the
// state sequence is a Markov chain whose stationary distribution gives the
// long-run misprediction rate.
class PredictorAutomaton {
public:
    PredictorAutomaton(std::vector<bool> predict_taken,
                       std::vector<std::array<int, 2>> next_state,
                       int initial_state);

    // Four-state saturating up-down counter: 0,1 predict untaken, 2,3 taken;
    // taken moves up, untaken moves down, saturating at the ends.
    static PredictorAutomaton a2();

    // Four-state two-bit chain with shortcut transitions out of the weak
    // states: 0:T->1,N->0  1:T->3,N->0  2:T->3,N->0  3:T->3,N->2.
    static PredictorAutomaton a3();

    int state_count() const { return static_cast<int>(predict_taken_.size()); }
    bool predicts_taken(int state) const { return predict_taken_[static_cast<size_t>(state)]; }
    int next_state(int state, bool taken) const {
        return next_[static_cast<size_t>(state)][taken ? 1 : 0];
    }
    int initial_state() const { return initial_state_; }

    // Strong connectivity of the two-outcome transition graph; required for
    // a unique stationary distribution at interior outcome probabilities.
    bool is_irreducible() const;

    bool operator==(const PredictorAutomaton& other) const = default;

private:
    std::vector<bool> predict_taken_;
    std::vector<std::array<int, 2>> next_;  // [untaken, taken]
    int initial_state_ = 0;
};

// {"states":4,"predict":["N","N","T","T"],"next":[[0,1],[0,2],[1,3],[2,3]],"initial":1}
// where next[s] = [state on untaken, state on taken].
PredictorAutomaton automaton_from_json(const nlohmann::json& descriptor);
nlohmann::json automaton_to_json(const PredictorAutomaton& automaton);

// Built-in automaton for A2/A3; throws for Static/Custom.
const PredictorAutomaton& builtin_automaton(PredictorKind kind);

struct MispredictCurvePoint {
    double p1 = 0.0;
    double rate = 0.0;
};

// Misprediction probability of always predicting the majority outcome.
Rational static_rate(const Rational& p1);
double static_rate(double p1);

// Closed-form stationary misprediction rates. Both are symmetric in
// p1 <-> 1-p1, so the argument may be either outcome's probability.
//   A2: (p - p^2) / (1 - 2p + 2p^2)
//   A3: (p + p^2 - 4p^3 + 2p^4) / (1 - p + p^2)
Rational rate_a2(const Rational& p1);
Rational rate_a3(const Rational& p1);
double rate_a2(double p1);
double rate_a3(double p1);

// Oracle: solves pi P = pi, sum pi = 1 for the chain induced by
// P[taken] = p_taken and returns sum_s pi(s) * P[outcome != prediction(s)].
// At p_taken in {0,1} returns the average misprediction over the cycle the
// deterministic limit dynamics reach from the initial state.
Rational stationary_rate(const PredictorAutomaton& automaton, const Rational& p_taken);
double stationary_rate(const PredictorAutomaton& automaton, double p_taken);

// Expected cost of one branch whose two sides carry masses p_min <= p_max,
// predicted by the given scheme:
//   C = (p_min + p_max) * (c_mispredict * f(p1) + c_predict * (1 - f(p1)))
// with p1 = p_min / (p_min + p_max). Zero when both masses are zero.
Rational branch_cost_dynamic(const StaticCostPair& pair, PredictorKind kind,
                             const Rational& p_min, const Rational& p_max);
Rational branch_cost_dynamic(const StaticCostPair& pair, const PredictorAutomaton& automaton,
                             const Rational& p_min, const Rational& p_max);

// The candidate branch cost functions a solver minimizes over: two oriented
// static costs for a Static model, one adaptive cost for a Dynamic model,
// the table itself for a Table model.
std::vector<BranchCostFn> branch_cost_functions(const CostModel& model);

// Rate-vs-p1 samples over p1 in [0, 1/2], for plotting or CSV export.
std::vector<MispredictCurvePoint> mispredict_curve(PredictorKind kind, int points);

}  // namespace branchtree
