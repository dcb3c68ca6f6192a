#pragma once

#include "branchtree/model.hpp"

#include <random>
#include <vector>

namespace branchtree::testing {

inline Rational rat(const char* text) { return parse_rational(text); }

// Small random rational weight vectors, occasionally with zero entries but
// never all zero.
inline std::vector<Rational> random_weights(std::mt19937& rng, int n) {
    std::uniform_int_distribution<int> numerator(0, 20);
    std::uniform_int_distribution<int> denominator_pick(0, 3);
    const int denominators[] = {1, 2, 5, 10};
    for (;;) {
        std::vector<Rational> weights;
        weights.reserve(static_cast<size_t>(n));
        bool any_positive = false;
        for (int k = 0; k < n; ++k) {
            const int num = numerator(rng);
            any_positive = any_positive || num > 0;
            weights.emplace_back(num, denominators[denominator_pick(rng)]);
            weights.back().canonicalize();
        }
        if (any_positive) return weights;
    }
}

inline StaticCostPair random_pair(std::mt19937& rng) {
    std::uniform_int_distribution<int> numerator(1, 12);
    std::uniform_int_distribution<int> denominator(1, 2);
    return StaticCostPair(Rational(numerator(rng), denominator(rng)),
                          Rational(numerator(rng), denominator(rng)));
}

}  // namespace branchtree::testing
