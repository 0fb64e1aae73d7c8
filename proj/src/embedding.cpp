#include "heliocast/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

#include "heliocast/csv.hpp"
#include "heliocast/errors.hpp"
#include "heliocast/sampling.hpp"

namespace helio {

namespace {

constexpr std::uint64_t kInitStream = 0x1a;
constexpr std::uint64_t kTrainStream = 0x2b;

// Noise distribution over nodes that occur in the walks, P(n) ~ count^0.75.
struct NoiseSampler {
    AliasTable table;
    std::vector<int> node_of_outcome;

    int sample(Rng& rng) const { return node_of_outcome[table.sample(rng)]; }
};

NoiseSampler build_noise_sampler(const std::vector<std::int64_t>& counts) {
    NoiseSampler sampler;
    std::vector<double> weights;
    for (std::size_t node = 0; node < counts.size(); ++node) {
        if (counts[node] > 0) {
            sampler.node_of_outcome.push_back(static_cast<int>(node));
            weights.push_back(std::pow(static_cast<double>(counts[node]), 0.75));
        }
    }
    sampler.table = AliasTable(weights);
    return sampler;
}

}  // namespace

void TrainConfig::validate() const {
    if (dims < 2) throw ParameterOutOfRange("embedding dims must be >= 2");
    if (window < 1) throw ParameterOutOfRange("window must be >= 1");
    if (negatives < 1) throw ParameterOutOfRange("negatives must be >= 1");
    if (epochs < 0) throw ParameterOutOfRange("epochs must be >= 0");
    if (!(lr_final > 0.0 && lr_final <= lr_initial))
        throw ParameterOutOfRange("need 0 < lr_final <= lr_initial");
}

Embedding train_skipgram(const std::vector<std::vector<int>>& walks, int node_count,
                         const TrainConfig& cfg, int threads, TrainStats* stats) {
    cfg.validate();
    if (node_count < 1) throw ParameterOutOfRange("node_count must be >= 1");
    if (walks.empty()) throw EmptyWalks("no walks to train on");

    std::vector<std::int64_t> counts(node_count, 0);
    std::vector<std::int64_t> token_prefix(walks.size() + 1, 0);
    for (std::size_t w = 0; w < walks.size(); ++w) {
        for (int node : walks[w]) {
            if (node < 0 || node >= node_count)
                throw NodeIdOutOfRange("node " + std::to_string(node) + " with n = " +
                                       std::to_string(node_count));
            ++counts[node];
        }
        token_prefix[w + 1] = token_prefix[w] + static_cast<std::int64_t>(walks[w].size());
    }
    const std::int64_t total_tokens = token_prefix.back();
    if (total_tokens == 0) throw EmptyWalks("walks contain no nodes");

    Embedding emb;
    emb.vectors.resize(node_count, cfg.dims);
    emb.context = EmbeddingMatrix::Zero(node_count, cfg.dims);
    {
        Rng init_rng = make_rng(cfg.seed, kInitStream);
        const double half_range = 0.5 / cfg.dims;
        for (int i = 0; i < node_count; ++i)
            for (int d = 0; d < cfg.dims; ++d)
                emb.vectors(i, d) = (2.0 * canonical(init_rng) - 1.0) * half_range;
    }
    if (stats) {
        stats->epoch_mean_loss.clear();
        stats->pairs_per_epoch = 0;
    }
    if (cfg.epochs == 0) return emb;

    const NoiseSampler noise = build_noise_sampler(counts);
    const double total_centers = static_cast<double>(total_tokens) * cfg.epochs;
    const double lr_slope = cfg.lr_final - cfg.lr_initial;

    // One SGD pass over walks [begin, end). The learning-rate schedule is a
    // function of the global center counter, so parallel chunks see the same
    // schedule as a sequential pass; only the update interleaving differs.
    auto train_range = [&](std::size_t begin, std::size_t end, Rng rng, int epoch,
                           double& loss_out, std::size_t& pairs_out) {
        Eigen::RowVectorXd center_grad(cfg.dims);
        double loss = 0.0;
        std::size_t pairs = 0;
        std::int64_t centers_done =
            static_cast<std::int64_t>(epoch) * total_tokens + token_prefix[begin];
        for (std::size_t w = begin; w < end; ++w) {
            const auto& walk = walks[w];
            const int len = static_cast<int>(walk.size());
            for (int i = 0; i < len; ++i) {
                const double progress = static_cast<double>(centers_done) / total_centers;
                const double lr = cfg.lr_initial + lr_slope * progress;
                ++centers_done;

                const int center = walk[i];
                auto center_vec = emb.vectors.row(center);
                const int lo = std::max(0, i - cfg.window);
                const int hi = std::min(len - 1, i + cfg.window);
                for (int j = lo; j <= hi; ++j) {
                    if (j == i) continue;
                    const int ctx = walk[j];
                    center_grad.setZero();
                    {
                        auto ctx_vec = emb.context.row(ctx);
                        const double score = ctx_vec.dot(center_vec);
                        const double g = sigmoid(score) - 1.0;
                        loss -= log_sigmoid(score);
                        center_grad += g * ctx_vec;
                        ctx_vec -= (lr * g) * center_vec;
                    }
                    for (int k = 0; k < cfg.negatives; ++k) {
                        const int noise_node = noise.sample(rng);
                        if (noise_node == ctx) continue;
                        auto noise_vec = emb.context.row(noise_node);
                        const double score = noise_vec.dot(center_vec);
                        const double g = sigmoid(score);
                        loss -= log_sigmoid(-score);
                        center_grad += g * noise_vec;
                        noise_vec -= (lr * g) * center_vec;
                    }
                    center_vec -= lr * center_grad;
                    ++pairs;
                }
            }
        }
        loss_out = loss;
        pairs_out = pairs;
    };

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        double epoch_loss = 0.0;
        std::size_t epoch_pairs = 0;
        if (threads <= 1) {
            train_range(0, walks.size(), make_rng(cfg.seed, kTrainStream, epoch), epoch,
                        epoch_loss, epoch_pairs);
        } else {
            std::vector<double> losses(threads, 0.0);
            std::vector<std::size_t> pair_counts(threads, 0);
            std::vector<std::thread> pool;
            const std::size_t chunk = (walks.size() + threads - 1) / threads;
            for (int t = 0; t < threads; ++t) {
                const std::size_t begin = std::min(walks.size(), t * chunk);
                const std::size_t end = std::min(walks.size(), begin + chunk);
                if (begin >= end) continue;
                pool.emplace_back(train_range, begin, end,
                                  make_rng(cfg.seed, kTrainStream,
                                           static_cast<std::uint64_t>(epoch) * threads + t),
                                  epoch, std::ref(losses[t]), std::ref(pair_counts[t]));
            }
            for (auto& th : pool) th.join();
            for (int t = 0; t < threads; ++t) {
                epoch_loss += losses[t];
                epoch_pairs += pair_counts[t];
            }
        }
        if (stats) {
            stats->epoch_mean_loss.push_back(epoch_pairs ? epoch_loss / epoch_pairs : 0.0);
            stats->pairs_per_epoch = epoch_pairs;
        }
    }

    if (!emb.vectors.allFinite() || !emb.context.allFinite())
        throw ParameterOutOfRange("training diverged: non-finite embedding values");
    return emb;
}

Embedding embed_graph(const SpatialGraph& graph, const WalkConfig& walk_cfg,
                      const TrainConfig& train_cfg, int threads, TrainStats* stats) {
    const auto walks = generate_walks(graph, walk_cfg, threads);
    return train_skipgram(walks, graph.n, train_cfg, threads, stats);
}

void save_embedding_csv(const std::filesystem::path& path, const EmbeddingMatrix& vectors) {
    std::string out = "node_id";
    for (Eigen::Index d = 0; d < vectors.cols(); ++d) out += ",e" + std::to_string(d);
    out += '\n';
    for (Eigen::Index i = 0; i < vectors.rows(); ++i) {
        out += std::to_string(i);
        for (Eigen::Index d = 0; d < vectors.cols(); ++d) {
            out += ',';
            out += format_double(vectors(i, d));
        }
        out += '\n';
    }
    write_text_file(path, out);
}

EmbeddingMatrix load_embedding_csv(const std::filesystem::path& path) {
    const auto lines = read_lines(path);
    const auto header = split_csv_line(lines[0]);
    if (header.size() < 2 || header[0] != "node_id")
        throw MalformedHeader(path.string() + ": expected 'node_id,e0,...'");
    for (std::size_t d = 1; d < header.size(); ++d)
        if (header[d] != "e" + std::to_string(d - 1))
            throw MalformedHeader(path.string() + ": bad embedding column " +
                                  std::string(header[d]));
    const Eigen::Index dims = static_cast<Eigen::Index>(header.size() - 1);
    EmbeddingMatrix vectors(static_cast<Eigen::Index>(lines.size() - 1), dims);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto fields = split_csv_line(lines[i]);
        if (fields.size() != header.size())
            throw UnparseableRow("line " + std::to_string(i + 1) + ": wrong field count");
        if (parse_int_field(fields[0], i + 1) != static_cast<long>(i - 1))
            throw UnparseableRow("line " + std::to_string(i + 1) +
                                 ": node ids must be contiguous from 0");
        for (Eigen::Index d = 0; d < dims; ++d)
            vectors(i - 1, d) = parse_double_field(fields[d + 1], i + 1);
    }
    return vectors;
}

}  // namespace helio
