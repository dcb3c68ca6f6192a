#include "branchtree/sim.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace branchtree {

double SimReport::mean_cost() const {
    if (iterations == 0) return 0.0;
    return to_double(cost_sum / Rational(static_cast<unsigned long>(iterations)));
}

double SimReport::variance() const {
    if (iterations < 2) return 0.0;
    const Rational m(static_cast<unsigned long>(iterations));
    return to_double((cost_sq_sum - cost_sum * cost_sum / m) / (m - 1));
}

namespace {

// Unbiased bounded draw; rejection keeps it exact and the byte stream
// consumption deterministic for a given generator state.
std::uint64_t bounded_draw(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
    for (;;) {
        const std::uint64_t x = rng();
        if (x >= threshold) return x % bound;
    }
}

struct FlatNode {
    int i, j, split, choice;
    int left = -1;   // index into nodes, or ~item for a leaf
    int right = -1;
    int state = 0;   // live predictor state
};

int flatten(const TreePtr& tree, std::vector<FlatNode>& nodes, int initial_state) {
    if (tree->is_leaf()) return ~tree->item();
    const int index = static_cast<int>(nodes.size());
    nodes.push_back({tree->first_item(), tree->last_item(), tree->split(), tree->choice(), -1, -1,
                     initial_state});
    nodes[static_cast<size_t>(index)].left = flatten(tree->left(), nodes, initial_state);
    const int right = flatten(tree->right(), nodes, initial_state);
    nodes[static_cast<size_t>(index)].right = right;
    return index;
}

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

SimReport simulate(const TreePtr& tree, const ItemDistribution& dist,
                   const PredictorAutomaton* automaton, const StaticCostPair& pair,
                   std::uint64_t iterations, std::uint64_t seed, std::uint64_t warmup) {
    if (!tree) throw std::invalid_argument("null tree");
    if (iterations == 0) throw std::invalid_argument("iterations must be >= 1");
    if (warmup >= iterations) throw std::invalid_argument("warmup must be less than iterations");
    if (tree->first_item() != 1 || tree->last_item() != dist.size())
        throw std::invalid_argument("tree does not cover items 1..n");

    // Exact integer cumulative weights: scale by the lcm of denominators.
    const int n = dist.size();
    mpz_class scale(1);
    for (int item = 1; item <= n; ++item)
        mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), dist.weight(item).get_den_mpz_t());
    std::vector<std::uint64_t> cumulative(static_cast<size_t>(n));
    mpz_class running(0);
    for (int item = 1; item <= n; ++item) {
        running += dist.weight(item).get_num() * (scale / dist.weight(item).get_den());
        if (mpz_sizeinbase(running.get_mpz_t(), 2) > 63)
            throw std::invalid_argument("weights too large for exact integer sampling");
        cumulative[static_cast<size_t>(item) - 1] = running.get_ui();
    }
    const std::uint64_t total = cumulative.back();

    std::vector<FlatNode> nodes;
    const int initial_state = automaton ? automaton->initial_state() : 0;
    const int root = flatten(tree, nodes, initial_state);

    SimReport report;
    report.iterations = iterations - warmup;
    report.warmup_discarded = warmup;
    report.seed = seed;
    report.cost_sum = Rational(0);
    report.cost_sq_sum = Rational(0);
    for (const FlatNode& node : nodes) report.per_node.push_back({node.i, node.j, node.split, 0, 0});

    // Integer path-cost moments: a draw costing a*c_mispredict + b*c_predict
    // contributes to these five sums, and the exact rational moments are
    // assembled once at the end.
    std::uint64_t sum_a = 0, sum_b = 0, sum_aa = 0, sum_ab = 0, sum_bb = 0;

    std::mt19937_64 rng(seed);
    for (std::uint64_t it = 0; it < iterations; ++it) {
        const bool measured = it >= warmup;
        const std::uint64_t u = bounded_draw(rng, total);
        const int item =
            static_cast<int>(std::upper_bound(cumulative.begin(), cumulative.end(), u) -
                             cumulative.begin()) + 1;

        std::uint64_t a = 0, b = 0;
        int at = root;
        while (at >= 0) {
            FlatNode& node = nodes[static_cast<size_t>(at)];
            const bool goes_right = item >= node.split;
            bool mispredicted;
            if (automaton) {
                mispredicted = automaton->predicts_taken(node.state) != goes_right;
                node.state = automaton->next_state(node.state, goes_right);
            } else {
                // choice 1 puts the mispredict cost on the left edge
                mispredicted = node.choice == 1 ? !goes_right : goes_right;
            }
            if (measured) {
                auto& stats = report.per_node[static_cast<size_t>(at)];
                stats.visits += 1;
                if (mispredicted) stats.mispredictions += 1;
            }
            if (mispredicted) ++a; else ++b;
            at = goes_right ? node.right : node.left;
        }
        if (measured) {
            sum_a += a;
            sum_b += b;
            sum_aa += a * a;
            sum_ab += a * b;
            sum_bb += b * b;
        }
    }

    const Rational& c1 = pair.c_mispredict;
    const Rational& c2 = pair.c_predict;
    auto r = [](std::uint64_t v) { return Rational(static_cast<unsigned long>(v)); };
    report.cost_sum = c1 * r(sum_a) + c2 * r(sum_b);
    report.cost_sq_sum = c1 * c1 * r(sum_aa) + 2 * c1 * c2 * r(sum_ab) + c2 * c2 * r(sum_bb);
    return report;
}

SimReport merge_reports(std::span<const SimReport> reports) {
    if (reports.empty()) throw std::invalid_argument("nothing to merge");
    SimReport merged = reports.front();
    for (size_t idx = 1; idx < reports.size(); ++idx) {
        const SimReport& next = reports[idx];
        if (next.per_node.size() != merged.per_node.size())
            throw std::invalid_argument("reports describe different trees");
        for (size_t k = 0; k < merged.per_node.size(); ++k) {
            auto& into = merged.per_node[k];
            const auto& from = next.per_node[k];
            if (into.i != from.i || into.j != from.j || into.split != from.split)
                throw std::invalid_argument("reports describe different trees");
            into.visits += from.visits;
            into.mispredictions += from.mispredictions;
        }
        merged.iterations += next.iterations;
        merged.warmup_discarded += next.warmup_discarded;
        merged.seed ^= next.seed;
        merged.cost_sum += next.cost_sum;
        merged.cost_sq_sum += next.cost_sq_sum;
    }
    return merged;
}

SimReport simulate_replicated(const TreePtr& tree, const ItemDistribution& dist,
                              const PredictorAutomaton* automaton, const StaticCostPair& pair,
                              std::uint64_t iterations_per_replication, int replications,
                              std::uint64_t base_seed, std::uint64_t warmup) {
    if (replications < 1) throw std::invalid_argument("replications must be >= 1");
    std::vector<SimReport> reports;
    reports.reserve(static_cast<size_t>(replications));
    std::uint64_t stream = base_seed;
    for (int rep = 0; rep < replications; ++rep) {
        const std::uint64_t seed = splitmix64(stream);
        reports.push_back(
            simulate(tree, dist, automaton, pair, iterations_per_replication, seed, warmup));
    }
    return merge_reports(reports);
}

nlohmann::json sim_report_to_json(const SimReport& report) {
    nlohmann::json per_node = nlohmann::json::object();
    for (const SimNodeStats& stats : report.per_node) {
        const std::string key = std::to_string(stats.i) + ":" + std::to_string(stats.j) + ":" +
                                std::to_string(stats.split);
        per_node[key] = {{"visits", stats.visits},
                         {"mispredictions", stats.mispredictions},
                         {"rate", stats.rate()}};
    }
    return {{"iterations", report.iterations},
            {"warmup_discarded", report.warmup_discarded},
            {"seed", report.seed},
            {"mean_cost", report.mean_cost()},
            {"variance", report.variance()},
            {"cost_sum", to_string(report.cost_sum)},
            {"cost_sq_sum", to_string(report.cost_sq_sum)},
            {"per_node", per_node}};
}

}  // namespace branchtree
