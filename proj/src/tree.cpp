#include "heliocast/tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "heliocast/errors.hpp"

namespace helio {

namespace {

struct PendingNode {
    int node_id;
    std::size_t begin;
    std::size_t end;  // half-open range into the row-index buffer
    int depth;
};

struct BestSplit {
    bool found = false;
    int feature = -1;
    double threshold = 0.0;
    double children_sse = 0.0;
};

}  // namespace

int Tree::depth() const {
    if (nodes.empty()) return 0;
    // iterative depth over the arena
    std::vector<std::pair<int, int>> stack{{0, 1}};
    int deepest = 0;
    while (!stack.empty()) {
        auto [id, d] = stack.back();
        stack.pop_back();
        deepest = std::max(deepest, d);
        const Node& node = nodes[id];
        if (node.feature >= 0) {
            stack.push_back({node.left, d + 1});
            stack.push_back({node.right, d + 1});
        }
    }
    return deepest;
}

int Tree::leaf_for(const Eigen::MatrixXd& X, Eigen::Index row) const {
    if (nodes.empty()) throw UnfittedModel("empty tree");
    int id = 0;
    while (nodes[id].feature >= 0)
        id = X(row, nodes[id].feature) <= nodes[id].threshold ? nodes[id].left
                                                              : nodes[id].right;
    return id;
}

double Tree::predict_row(const Eigen::MatrixXd& X, Eigen::Index row) const {
    return nodes[leaf_for(X, row)].prediction;
}

Tree fit_tree_rows(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                   std::span<const int> rows, const TreeFitParams& params, Rng& rng,
                   std::vector<double>* feature_gain) {
    const int p = static_cast<int>(X.cols());
    if (rows.empty()) throw EmptyTrainingSet("tree fit needs at least one row");
    if (p < 1) throw EmptyTrainingSet("tree fit needs at least one feature");
    if (params.min_leaf < 1) throw ParameterOutOfRange("min_leaf must be >= 1");
    if (params.mtry < 0 || params.mtry > p)
        throw ParameterOutOfRange("mtry must be in [0, feature count]");
    const int mtry = params.mtry == 0 ? p : params.mtry;
    const int max_depth = params.max_depth == 0 ? std::numeric_limits<int>::max()
                                                : params.max_depth;
    if (feature_gain) feature_gain->assign(p, 0.0);

    Tree tree;
    std::vector<int> index(rows.begin(), rows.end());
    std::vector<int> feature_pool(p);
    std::iota(feature_pool.begin(), feature_pool.end(), 0);
    std::vector<int> tried(mtry);
    std::vector<std::pair<double, double>> samples;  // (x, y) sorted per feature
    samples.reserve(index.size());

    tree.nodes.emplace_back();
    std::vector<PendingNode> stack{{0, 0, index.size(), 0}};  // root at depth 0
    while (!stack.empty()) {
        const PendingNode task = stack.back();
        stack.pop_back();
        const std::size_t n = task.end - task.begin;

        double sum = 0.0, sumsq = 0.0;
        double ymin = std::numeric_limits<double>::infinity();
        double ymax = -ymin;
        for (std::size_t i = task.begin; i < task.end; ++i) {
            const double v = y(index[i]);
            sum += v;
            sumsq += v * v;
            ymin = std::min(ymin, v);
            ymax = std::max(ymax, v);
        }
        Tree::Node& node = tree.nodes[task.node_id];
        node.prediction = sum / static_cast<double>(n);
        node.count = static_cast<int>(n);

        const bool splittable = task.depth < max_depth &&
                                n >= 2 * static_cast<std::size_t>(params.min_leaf) &&
                                ymin < ymax;
        if (!splittable) continue;

        // draw mtry distinct features, evaluated in ascending index order
        if (mtry == p) {
            std::copy(feature_pool.begin(), feature_pool.end(), tried.begin());
        } else {
            for (int i = 0; i < mtry; ++i) {
                const std::size_t j =
                    i + uniform_below(rng, static_cast<std::uint64_t>(p - i));
                std::swap(feature_pool[i], feature_pool[j]);
                tried[i] = feature_pool[i];
            }
            std::sort(tried.begin(), tried.end());
        }

        BestSplit best;
        const double parent_sse = sumsq - sum * sum / static_cast<double>(n);
        // Candidates whose costs agree within accumulated rounding are
        // ties: two features can induce the same row partition yet sum the
        // SSE in different orders. Scanning features and thresholds in
        // ascending order, keeping the incumbent resolves ties toward the
        // lowest feature index, then the lowest threshold.
        const double tie_tol = 1e-9 * std::max(1.0, parent_sse);
        for (int f : tried) {
            samples.clear();
            for (std::size_t i = task.begin; i < task.end; ++i)
                samples.emplace_back(X(index[i], f), y(index[i]));
            std::sort(samples.begin(), samples.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });

            double left_sum = 0.0, left_sumsq = 0.0;
            for (std::size_t i = 0; i + 1 < n; ++i) {
                left_sum += samples[i].second;
                left_sumsq += samples[i].second * samples[i].second;
                if (samples[i].first == samples[i + 1].first) continue;  // not a boundary
                const std::size_t nl = i + 1;
                const std::size_t nr = n - nl;
                if (nl < static_cast<std::size_t>(params.min_leaf) ||
                    nr < static_cast<std::size_t>(params.min_leaf))
                    continue;
                const double right_sum = sum - left_sum;
                const double right_sumsq = sumsq - left_sumsq;
                const double sse = (left_sumsq - left_sum * left_sum / nl) +
                                   (right_sumsq - right_sum * right_sum / nr);
                if (!best.found || sse < best.children_sse - tie_tol) {
                    best.found = true;
                    best.feature = f;
                    best.threshold = (samples[i].first + samples[i + 1].first) / 2.0;
                    best.children_sse = sse;
                }
            }
        }
        if (!best.found) continue;  // e.g. all tried features constant

        if (feature_gain)
            (*feature_gain)[best.feature] += std::max(0.0, parent_sse - best.children_sse);

        auto mid = std::stable_partition(
            index.begin() + task.begin, index.begin() + task.end,
            [&](int row) { return X(row, best.feature) <= best.threshold; });
        const std::size_t split_at = static_cast<std::size_t>(mid - index.begin());

        const int left_id = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();
        const int right_id = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();
        Tree::Node& parent = tree.nodes[task.node_id];  // re-take: vector may have grown
        parent.feature = best.feature;
        parent.threshold = best.threshold;
        parent.left = left_id;
        parent.right = right_id;
        stack.push_back({right_id, split_at, task.end, task.depth + 1});
        stack.push_back({left_id, task.begin, split_at, task.depth + 1});
    }
    return tree;
}

Tree fit_tree(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const TreeFitParams& params,
              Rng& rng, std::vector<double>* feature_gain) {
    std::vector<int> rows(static_cast<std::size_t>(X.rows()));
    std::iota(rows.begin(), rows.end(), 0);
    return fit_tree_rows(X, y, rows, params, rng, feature_gain);
}

}  // namespace helio
