#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "heliocast/walks.hpp"

namespace helio {

using EmbeddingMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct TrainConfig {
    int dims = 32;
    int window = 10;    // context radius within a walk
    int negatives = 5;  // noise samples per positive pair
    int epochs = 5;
    double lr_initial = 0.025;
    double lr_final = 0.0001;
    std::uint64_t seed = 1;

    void validate() const;  // ParameterOutOfRange
};

// Input (center) vectors and output (context) vectors, one row per node.
// Downstream features use `vectors` only.
struct Embedding {
    EmbeddingMatrix vectors;
    EmbeddingMatrix context;
};

struct TrainStats {
    std::vector<double> epoch_mean_loss;
    std::size_t pairs_per_epoch = 0;
};

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// log(sigmoid(x)) without overflow on either tail.
inline double log_sigmoid(double x) {
    return x >= 0.0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

// Loss of a single (center, context, negatives) sample:
//   -log s(u_c . v) - sum_k log s(-u_k . v)
// `negatives` holds one noise context vector per row.
template <typename V, typename C, typename N>
double sgns_pair_loss(const Eigen::MatrixBase<V>& center, const Eigen::MatrixBase<C>& context,
                      const Eigen::MatrixBase<N>& negatives) {
    double loss = -log_sigmoid(context.dot(center));
    for (Eigen::Index k = 0; k < negatives.rows(); ++k)
        loss -= log_sigmoid(-negatives.row(k).dot(center));
    return loss;
}

// Analytic gradients of sgns_pair_loss with respect to every input vector.
template <typename V, typename C, typename N, typename GV, typename GC, typename GN>
void sgns_pair_grad(const Eigen::MatrixBase<V>& center, const Eigen::MatrixBase<C>& context,
                    const Eigen::MatrixBase<N>& negatives, Eigen::MatrixBase<GV>& grad_center,
                    Eigen::MatrixBase<GC>& grad_context, Eigen::MatrixBase<GN>& grad_negatives) {
    const double g_pos = sigmoid(context.dot(center)) - 1.0;
    grad_center = g_pos * context;
    grad_context = g_pos * center;
    for (Eigen::Index k = 0; k < negatives.rows(); ++k) {
        const double g_neg = sigmoid(negatives.row(k).dot(center));
        grad_center += g_neg * negatives.row(k);
        grad_negatives.row(k) = g_neg * center;
    }
}

// SkipGram with negative sampling over node walks. Noise distribution is
// proportional to walk frequency^0.75; the learning rate decays linearly
// from lr_initial to lr_final over all epochs. threads == 1 is exactly
// reproducible per seed; threads > 1 runs lock-free parallel updates and
// is not.
Embedding train_skipgram(const std::vector<std::vector<int>>& walks, int node_count,
                         const TrainConfig& cfg, int threads = 1, TrainStats* stats = nullptr);

Embedding embed_graph(const SpatialGraph& graph, const WalkConfig& walk_cfg,
                      const TrainConfig& train_cfg, int threads = 1,
                      TrainStats* stats = nullptr);

// CSV with header `node_id,e0,...`; shortest round-trip decimals, so
// save -> load reproduces the matrix bit for bit.
void save_embedding_csv(const std::filesystem::path& path, const EmbeddingMatrix& vectors);
EmbeddingMatrix load_embedding_csv(const std::filesystem::path& path);

}  // namespace helio
