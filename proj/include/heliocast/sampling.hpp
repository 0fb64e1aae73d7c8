#pragma once

#include <span>
#include <vector>

#include "heliocast/rng.hpp"

namespace helio {

// Vose alias method: O(n) build, O(1) draws from a fixed discrete
// distribution proportional to the input weights.
class AliasTable {
  public:
    AliasTable() = default;
    explicit AliasTable(std::span<const double> weights);  // EmptyWeights, NonPositiveWeight

    int sample(Rng& rng) const;
    std::size_t size() const { return prob_.size(); }

    const std::vector<double>& probabilities() const { return prob_; }
    const std::vector<int>& aliases() const { return alias_; }

  private:
    std::vector<double> prob_;
    std::vector<int> alias_;
};

}  // namespace helio
