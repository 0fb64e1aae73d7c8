#include "heliocast/forest.hpp"

#include <numeric>
#include <thread>

#include "heliocast/errors.hpp"

namespace helio {

ForestModel fit_forest(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                       std::span<const std::string> feature_names,
                       const ForestHyperparams& hp, int threads) {
    const Eigen::Index n = X.rows();
    const int p = static_cast<int>(X.cols());
    if (n < 1) throw EmptyTrainingSet("forest fit needs at least one row");
    if (y.size() != n) throw LengthMismatch("X rows != y length");
    if (hp.trees < 1) throw ParameterOutOfRange("forest needs at least one tree");
    if (!feature_names.empty() && static_cast<int>(feature_names.size()) != p)
        throw SchemaMismatch("feature name count != column count");

    if (hp.mtry < -1 || hp.mtry > p)
        throw ParameterOutOfRange("mtry must be -1 (all), 0 (p/3) or in [1, p]");
    TreeFitParams tree_params;
    tree_params.mtry = hp.mtry == 0 ? std::max(1, p / 3) : (hp.mtry == -1 ? p : hp.mtry);
    tree_params.min_leaf = hp.min_leaf;
    tree_params.max_depth = hp.max_depth;

    ForestModel model;
    model.hyperparams = hp;
    model.feature_names.assign(feature_names.begin(), feature_names.end());
    model.trees.resize(hp.trees);
    std::vector<std::vector<double>> gains(hp.trees);

    std::vector<int> identity(static_cast<std::size_t>(n));
    std::iota(identity.begin(), identity.end(), 0);

    auto fit_range = [&](int begin, int end) {
        std::vector<int> sample;
        for (int b = begin; b < end; ++b) {
            Rng rng(splitmix64(hp.seed ^ static_cast<std::uint64_t>(b)));
            if (hp.bootstrap) {
                sample.resize(static_cast<std::size_t>(n));
                for (auto& row : sample)
                    row = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(n)));
                model.trees[b] = fit_tree_rows(X, y, sample, tree_params, rng, &gains[b]);
            } else {
                model.trees[b] = fit_tree_rows(X, y, identity, tree_params, rng, &gains[b]);
            }
        }
    };

    if (threads <= 1) {
        fit_range(0, hp.trees);
    } else {
        std::vector<std::thread> pool;
        const int chunk = (hp.trees + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            const int begin = std::min(hp.trees, t * chunk);
            const int end = std::min(hp.trees, begin + chunk);
            if (begin < end) pool.emplace_back(fit_range, begin, end);
        }
        for (auto& th : pool) th.join();
    }

    // mean SSE reduction per feature across trees, normalized to sum 1
    model.importances = Eigen::VectorXd::Zero(p);
    for (const auto& g : gains)
        for (int f = 0; f < p; ++f) model.importances(f) += g[f];
    model.importances /= static_cast<double>(hp.trees);
    const double total = model.importances.sum();
    if (total > 0.0) model.importances /= total;

    return model;
}

Eigen::VectorXd forest_predict(const ForestModel& model, const Eigen::MatrixXd& X) {
    if (!model.fitted()) throw UnfittedModel("forest has no trees");
    if (!model.feature_names.empty() &&
        X.cols() != static_cast<Eigen::Index>(model.feature_names.size()))
        throw SchemaMismatch("predict expects " + std::to_string(model.feature_names.size()) +
                             " columns, got " + std::to_string(X.cols()));
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(X.rows());
    for (const auto& tree : model.trees)
        for (Eigen::Index i = 0; i < X.rows(); ++i) sum(i) += tree.predict_row(X, i);
    return sum / static_cast<double>(model.trees.size());
}

}  // namespace helio
