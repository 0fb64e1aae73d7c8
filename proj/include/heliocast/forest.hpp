#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "heliocast/tree.hpp"

namespace helio {

struct ForestHyperparams {
    int trees = 100;     // B
    int mtry = 0;        // 0 = max(1, floor(p / 3)); -1 = all features
    int min_leaf = 5;
    int max_depth = 0;   // 0 = unlimited
    bool bootstrap = true;
    std::uint64_t seed = 1;
};

// Bagged regression trees; prediction is the arithmetic mean over trees,
// importances the normalized total SSE reduction per splitting feature.
struct ForestModel {
    std::vector<Tree> trees;
    std::vector<std::string> feature_names;
    Eigen::VectorXd importances;
    ForestHyperparams hyperparams;

    bool fitted() const { return !trees.empty(); }
};

// Each tree trains on its own seed stream derived from (seed, tree index),
// so the fit is identical for any thread count.
ForestModel fit_forest(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                       std::span<const std::string> feature_names,
                       const ForestHyperparams& hp, int threads = 1);

// SchemaMismatch when the column count differs from the fit;
// UnfittedModel on an empty forest.
Eigen::VectorXd forest_predict(const ForestModel& model, const Eigen::MatrixXd& X);

}  // namespace helio
