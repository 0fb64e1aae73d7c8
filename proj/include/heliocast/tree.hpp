#pragma once

#include <Eigen/Core>
#include <span>
#include <vector>

#include "heliocast/rng.hpp"

namespace helio {

struct TreeFitParams {
    int mtry = 0;      // features evaluated per node; 0 = all
    int min_leaf = 5;  // minimum rows per leaf
    int max_depth = 0; // 0 = unlimited
};

// CART regression tree over a flat node arena. Internal nodes route
// x[feature] <= threshold to the left child; leaves predict the mean of
// the training targets routed to them. Split selection minimizes the
// summed child SSE with thresholds at midpoints between consecutive
// distinct feature values; ties break toward the lowest feature index,
// then the lowest threshold.
struct Tree {
    struct Node {
        int feature = -1;  // -1 marks a leaf
        double threshold = 0.0;
        int left = -1;
        int right = -1;
        double prediction = 0.0;
        int count = 0;
    };
    std::vector<Node> nodes;  // nodes[0] is the root

    bool empty() const { return nodes.empty(); }
    int depth() const;
    int leaf_for(const Eigen::MatrixXd& X, Eigen::Index row) const;
    double predict_row(const Eigen::MatrixXd& X, Eigen::Index row) const;
};

// Fit on all rows. `feature_gain`, when given, accumulates the total SSE
// reduction per splitting feature (size = X.cols()).
Tree fit_tree(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const TreeFitParams& params,
              Rng& rng, std::vector<double>* feature_gain = nullptr);

// Fit on a row multiset (bootstrap sample).
Tree fit_tree_rows(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                   std::span<const int> rows, const TreeFitParams& params, Rng& rng,
                   std::vector<double>* feature_gain = nullptr);

}  // namespace helio
