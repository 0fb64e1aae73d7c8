#include "heliocast/sampling.hpp"

#include <string>
#include <vector>

#include "heliocast/errors.hpp"

namespace helio {

AliasTable::AliasTable(std::span<const double> weights) {
    const std::size_t n = weights.size();
    if (n == 0) throw EmptyWeights("alias table needs at least one weight");

    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!(weights[i] > 0.0))
            throw NonPositiveWeight("weight[" + std::to_string(i) + "] = " +
                                    std::to_string(weights[i]));
        total += weights[i];
    }

    prob_.resize(n);
    alias_.assign(n, 0);
    std::vector<double> scaled(n);
    for (std::size_t i = 0; i < n; ++i) scaled[i] = weights[i] * n / total;

    std::vector<int> small, large;
    small.reserve(n);
    large.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        (scaled[i] < 1.0 ? small : large).push_back(static_cast<int>(i));

    while (!small.empty() && !large.empty()) {
        const int s = small.back();
        const int l = large.back();
        small.pop_back();
        large.pop_back();
        prob_[s] = scaled[s];
        alias_[s] = l;
        scaled[l] = (scaled[l] + scaled[s]) - 1.0;
        (scaled[l] < 1.0 ? small : large).push_back(l);
    }
    // leftovers are exactly 1 up to rounding
    for (int i : large) prob_[i] = 1.0, alias_[i] = i;
    for (int i : small) prob_[i] = 1.0, alias_[i] = i;
}

int AliasTable::sample(Rng& rng) const {
    const std::size_t i = uniform_below(rng, prob_.size());
    return canonical(rng) < prob_[i] ? static_cast<int>(i) : alias_[i];
}

}  // namespace helio
