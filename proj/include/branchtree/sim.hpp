#pragma once

#include "branchtree/model.hpp"
#include "branchtree/predictor.hpp"

#include <json.hpp>

#include <cstdint>
#include <span>
#include <vector>

namespace branchtree {

struct SimNodeStats {
    int i = 0;
    int j = 0;
    int split = 0;
    std::uint64_t visits = 0;
    std::uint64_t mispredictions = 0;

    double rate() const {
        return visits == 0 ? 0.0 : static_cast<double>(mispredictions) / static_cast<double>(visits);
    }
};

// Outcome of a simulation run. Cost moments are kept as exact rationals so
// merging replications is associative and commutative with no rounding;
// mean/variance are derived views.
struct SimReport {
    std::uint64_t iterations = 0;        // measured draws (after warmup)
    std::uint64_t warmup_discarded = 0;
    std::uint64_t seed = 0;
    Rational cost_sum;                   // sum of per-draw path costs
    Rational cost_sq_sum;                // sum of squared per-draw path costs
    std::vector<SimNodeStats> per_node;  // pre-order over internal nodes

    double mean_cost() const;
    double variance() const;  // sample variance of the per-draw path cost
};

// Draws items i.i.d. proportional to their weights with a deterministic
// 64-bit-seeded generator and walks the tree once per draw. With an
// automaton, every internal node owns a private predictor started in the
// automaton's initial state; outcome "taken" means the item goes right.
// With automaton == nullptr each node statically predicts its recorded
// majority side. The first `warmup` draws update predictor state but are
// excluded from all statistics. Identical inputs and seed give an
// identical report.
SimReport simulate(const TreePtr& tree, const ItemDistribution& dist,
                   const PredictorAutomaton* automaton, const StaticCostPair& pair,
                   std::uint64_t iterations, std::uint64_t seed, std::uint64_t warmup = 0);

// Sums counts and exact cost accumulators across runs of the same tree.
// Merged seed is the XOR of the component seeds, so the result does not
// depend on merge order.
SimReport merge_reports(std::span<const SimReport> reports);

// Convenience: `replications` independent runs with per-replication seeds
// derived from base_seed by a splitmix64 stream, merged.
SimReport simulate_replicated(const TreePtr& tree, const ItemDistribution& dist,
                              const PredictorAutomaton* automaton, const StaticCostPair& pair,
                              std::uint64_t iterations_per_replication, int replications,
                              std::uint64_t base_seed, std::uint64_t warmup = 0);

nlohmann::json sim_report_to_json(const SimReport& report);

}  // namespace branchtree
