#pragma once

#include <cstdint>
#include <vector>

#include "heliocast/geo.hpp"

namespace helio {

struct WalkConfig {
    double return_p = 1.0;   // p: likelihood of immediately revisiting a node
    double in_out_q = 1.0;   // q: inward vs outward exploration
    int walk_length = 80;    // nodes per walk, including the start
    int walks_per_node = 10;
    std::uint64_t seed = 1;

    void validate() const;  // ParameterOutOfRange
};

// Second-order biased random walks. Each walk draws from its own seed
// stream derived from (seed, start node, repetition), so the output is
// identical for any thread count. p = q = 1 on a uniformly weighted graph
// reduces to first-order uniform walks.
std::vector<std::vector<int>> generate_walks(const SpatialGraph& graph, const WalkConfig& cfg,
                                             int threads = 1);

}  // namespace helio
