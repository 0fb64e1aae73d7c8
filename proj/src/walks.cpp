#include "heliocast/walks.hpp"

#include <algorithm>
#include <thread>
#include <unordered_map>

#include "heliocast/errors.hpp"
#include "heliocast/sampling.hpp"

namespace helio {

namespace {

// Memoized cumulative transition weights per (previous, current) pair.
// Draws use inverse-CDF search, so a cache hit and an on-the-fly
// computation produce the same node for the same uniform draw; the cache
// only saves recomputation and can be capped without changing walks.
class TransitionCache {
  public:
    explicit TransitionCache(std::size_t max_doubles) : budget_(max_doubles) {}

    const std::vector<double>* find(std::uint64_t key) const {
        auto it = table_.find(key);
        return it == table_.end() ? nullptr : &it->second;
    }

    void insert(std::uint64_t key, std::vector<double> cumulative) {
        if (used_ + cumulative.size() > budget_) return;
        used_ += cumulative.size();
        table_.emplace(key, std::move(cumulative));
    }

  private:
    std::size_t budget_;
    std::size_t used_ = 0;
    std::unordered_map<std::uint64_t, std::vector<double>> table_;
};

void second_order_cumulative(const SpatialGraph& g, int prev, int cur, double inv_p,
                             double inv_q, std::vector<double>& out) {
    const auto& neighbors = g.adj[cur];
    out.resize(neighbors.size());
    double running = 0.0;
    for (std::size_t i = 0; i < neighbors.size(); ++i) {
        const auto& nb = neighbors[i];
        double bias;
        if (nb.node == prev)
            bias = inv_p;
        else if (g.has_edge(prev, nb.node))
            bias = 1.0;
        else
            bias = inv_q;
        running += bias * nb.weight;
        out[i] = running;
    }
}

int draw_from_cumulative(const std::vector<double>& cumulative, Rng& rng) {
    const double u = canonical(rng) * cumulative.back();
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    const std::size_t idx =
        std::min<std::size_t>(it - cumulative.begin(), cumulative.size() - 1);
    return static_cast<int>(idx);
}

}  // namespace

void WalkConfig::validate() const {
    if (!(return_p > 0.0)) throw ParameterOutOfRange("walk p must be > 0");
    if (!(in_out_q > 0.0)) throw ParameterOutOfRange("walk q must be > 0");
    if (walk_length < 2) throw ParameterOutOfRange("walk_length must be >= 2");
    if (walks_per_node < 1) throw ParameterOutOfRange("walks_per_node must be >= 1");
}

std::vector<std::vector<int>> generate_walks(const SpatialGraph& graph, const WalkConfig& cfg,
                                             int threads) {
    cfg.validate();
    if (graph.n < 2 || graph.adj.empty() || !graph.connected())
        throw ParameterOutOfRange("walks need a connected graph with adjacency built");

    // first-order tables for the initial step
    std::vector<AliasTable> first_step(graph.n);
    std::vector<double> weights;
    for (int v = 0; v < graph.n; ++v) {
        weights.clear();
        for (const auto& nb : graph.adj[v]) weights.push_back(nb.weight);
        first_step[v] = AliasTable(weights);
    }

    const double inv_p = 1.0 / cfg.return_p;
    const double inv_q = 1.0 / cfg.in_out_q;
    const std::size_t total = static_cast<std::size_t>(graph.n) * cfg.walks_per_node;
    std::vector<std::vector<int>> walks(total);

    auto run_range = [&](std::size_t begin, std::size_t end) {
        // ~96 MB of cached transition rows per worker
        TransitionCache cache(12'000'000 / std::max(threads, 1));
        std::vector<double> scratch;
        for (std::size_t slot = begin; slot < end; ++slot) {
            const int start = static_cast<int>(slot / cfg.walks_per_node);
            const int rep = static_cast<int>(slot % cfg.walks_per_node);
            Rng rng = make_rng(cfg.seed, static_cast<std::uint64_t>(start), rep);

            std::vector<int>& walk = walks[slot];
            walk.resize(cfg.walk_length);
            walk[0] = start;
            walk[1] = graph.adj[start][first_step[start].sample(rng)].node;
            for (int k = 2; k < cfg.walk_length; ++k) {
                const int prev = walk[k - 2];
                const int cur = walk[k - 1];
                const std::uint64_t key =
                    (static_cast<std::uint64_t>(prev) << 32) | static_cast<std::uint32_t>(cur);
                const std::vector<double>* cumulative = cache.find(key);
                if (!cumulative) {
                    second_order_cumulative(graph, prev, cur, inv_p, inv_q, scratch);
                    const int idx = draw_from_cumulative(scratch, rng);
                    walk[k] = graph.adj[cur][idx].node;
                    cache.insert(key, scratch);
                } else {
                    const int idx = draw_from_cumulative(*cumulative, rng);
                    walk[k] = graph.adj[cur][idx].node;
                }
            }
        }
    };

    if (threads <= 1) {
        run_range(0, total);
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (total + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            const std::size_t begin = std::min(total, t * chunk);
            const std::size_t end = std::min(total, begin + chunk);
            if (begin < end) pool.emplace_back(run_range, begin, end);
        }
        for (auto& th : pool) th.join();
    }
    return walks;
}

}  // namespace helio
