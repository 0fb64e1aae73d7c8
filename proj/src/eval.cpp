#include "heliocast/eval.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "heliocast/csv.hpp"
#include "heliocast/errors.hpp"
#include "heliocast/metrics.hpp"

namespace helio {

namespace {

using nlohmann::json;

constexpr int kModelFormatVersion = 1;

json tree_node_to_json(const Tree& tree, int id) {
    const Tree::Node& node = tree.nodes[id];
    if (node.feature < 0) return json{{"prediction", node.prediction}, {"count", node.count}};
    return json{{"feature", node.feature},
                {"threshold", node.threshold},
                {"left", tree_node_to_json(tree, node.left)},
                {"right", tree_node_to_json(tree, node.right)}};
}

int tree_node_from_json(const json& j, Tree& tree) {
    const int id = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    if (j.contains("feature")) {
        const int feature = j.at("feature").get<int>();
        const double threshold = j.at("threshold").get<double>();
        const int left = tree_node_from_json(j.at("left"), tree);
        const int right = tree_node_from_json(j.at("right"), tree);
        tree.nodes[id].feature = feature;
        tree.nodes[id].threshold = threshold;
        tree.nodes[id].left = left;
        tree.nodes[id].right = right;
    } else {
        tree.nodes[id].prediction = j.at("prediction").get<double>();
        tree.nodes[id].count = j.at("count").get<int>();
    }
    return id;
}

json vector_to_json(const Eigen::VectorXd& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

Eigen::VectorXd vector_from_json(const json& arr) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(arr.size()));
    for (std::size_t i = 0; i < arr.size(); ++i)
        v(static_cast<Eigen::Index>(i)) = arr[i].get<double>();
    return v;
}

json load_json_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MissingArtifact("cannot open " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw SchemaMismatch(path.string() + ": " + e.what());
    }
    return j;
}

void check_metric_sanity(const EvalReport& report) {
    // RMSE >= MAE by Jensen; a violation means a metric bug, not bad data.
    if (std::isfinite(report.rmse_w_m2) && std::isfinite(report.mae_w_m2) &&
        report.rmse_w_m2 < report.mae_w_m2 * (1.0 - 1e-12) - 1e-12)
        throw std::logic_error("rmse < mae in report for split " + report.split);
}

class Stopwatch {
  public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

  private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

const std::vector<WeatherRecord>& forecasts_for(const ExperimentData& data, int horizon) {
    auto it = data.forecasts.find(horizon);
    if (it == data.forecasts.end() || it->second.empty())
        throw NoForecastData("no forecast set for horizon " + std::to_string(horizon));
    return it->second;
}

}  // namespace

EvalReport build_report(std::string model, std::string split, int horizon_hours,
                        const Eigen::VectorXd& y_true, const Eigen::VectorXd& y_pred,
                        std::int64_t n_train, std::string ablation, double runtime_seconds) {
    EvalReport report;
    report.model = std::move(model);
    report.split = std::move(split);
    report.horizon_hours = horizon_hours;
    report.r2 = r2(y_true, y_pred);
    report.mae_w_m2 = mae(y_true, y_pred);
    report.rmse_w_m2 = rmse(y_true, y_pred);
    report.n_train = n_train;
    report.n_test = static_cast<std::int64_t>(y_true.size());
    report.ablation = std::move(ablation);
    report.runtime_seconds = runtime_seconds;
    check_metric_sanity(report);
    return report;
}

const char* model_kind_name(ModelKind kind) {
    switch (kind) {
        case ModelKind::forest: return "forest";
        case ModelKind::linear: return "linear";
        case ModelKind::ridge: return "ridge";
    }
    return "forest";
}

ModelKind parse_model_kind(const std::string& name) {
    if (name == "forest") return ModelKind::forest;
    if (name == "linear") return ModelKind::linear;
    if (name == "ridge") return ModelKind::ridge;
    throw ParameterOutOfRange("unknown model kind '" + name + "'");
}

Eigen::VectorXd TrainedModel::predict(const FeatureMatrix& features) const {
    if (features.columns != feature_names)
        throw SchemaMismatch("feature columns do not match the fitted model");
    const Eigen::MatrixXd scaled = scaler_apply(scaler, features.values);
    if (kind == ModelKind::forest) return forest_predict(forest, scaled);
    return linear_predict(linear, scaled);
}

TrainedModel fit_trained_model(const AssembledData& train, const ModelSpec& spec, int threads) {
    if (train.features.rows() == 0) throw EmptyTrainingSet("no training rows");
    TrainedModel model;
    model.kind = spec.kind;
    model.feature_names = train.features.columns;
    model.scaler = scaler_fit(train.features.values);
    const Eigen::MatrixXd scaled = scaler_apply(model.scaler, train.features.values);
    switch (spec.kind) {
        case ModelKind::forest:
            model.forest =
                fit_forest(scaled, train.target, model.feature_names, spec.forest, threads);
            break;
        case ModelKind::linear:
            model.linear = fit_linear(scaled, train.target, 0.0);
            break;
        case ModelKind::ridge:
            model.linear = fit_linear(scaled, train.target, spec.ridge_lambda);
            break;
    }
    return model;
}

void save_model_json(const std::filesystem::path& path, const TrainedModel& model) {
    json j;
    j["format_version"] = kModelFormatVersion;
    j["kind"] = model_kind_name(model.kind);
    j["feature_names"] = model.feature_names;
    j["scaler"] = {{"min", vector_to_json(model.scaler.min)},
                   {"max", vector_to_json(model.scaler.max)},
                   {"fitted_rows", model.scaler.fitted_rows}};
    j["embedding_checksum"] = model.embedding_checksum;
    if (model.kind == ModelKind::forest) {
        const auto& hp = model.forest.hyperparams;
        j["hyperparams"] = {{"trees", hp.trees},         {"mtry", hp.mtry},
                            {"min_leaf", hp.min_leaf},   {"max_depth", hp.max_depth},
                            {"bootstrap", hp.bootstrap}, {"seed", hp.seed}};
        j["importances"] = vector_to_json(model.forest.importances);
        json trees = json::array();
        for (const auto& tree : model.forest.trees) trees.push_back(tree_node_to_json(tree, 0));
        j["trees"] = std::move(trees);
    } else {
        j["hyperparams"] = {{"ridge_lambda", model.linear.ridge_lambda}};
        j["coefficients"] = vector_to_json(model.linear.coefficients);
        j["intercept"] = model.linear.intercept;
    }
    write_text_file(path, j.dump(2) + "\n");
}

TrainedModel load_model_json(const std::filesystem::path& path) {
    const json j = load_json_file(path);
    try {
        if (!j.contains("format_version") || j.at("format_version").get<int>() != kModelFormatVersion)
            throw SchemaMismatch(path.string() + ": unknown model format_version");
        TrainedModel model;
        model.kind = parse_model_kind(j.at("kind").get<std::string>());
        model.feature_names = j.at("feature_names").get<std::vector<std::string>>();
        model.scaler.min = vector_from_json(j.at("scaler").at("min"));
        model.scaler.max = vector_from_json(j.at("scaler").at("max"));
        model.scaler.fitted_rows = j.at("scaler").at("fitted_rows").get<std::int64_t>();
        model.embedding_checksum = j.at("embedding_checksum").get<std::string>();
        if (model.kind == ModelKind::forest) {
            const json& hp = j.at("hyperparams");
            model.forest.hyperparams.trees = hp.at("trees").get<int>();
            model.forest.hyperparams.mtry = hp.at("mtry").get<int>();
            model.forest.hyperparams.min_leaf = hp.at("min_leaf").get<int>();
            model.forest.hyperparams.max_depth = hp.at("max_depth").get<int>();
            model.forest.hyperparams.bootstrap = hp.at("bootstrap").get<bool>();
            model.forest.hyperparams.seed = hp.at("seed").get<std::uint64_t>();
            model.forest.feature_names = model.feature_names;
            model.forest.importances = vector_from_json(j.at("importances"));
            for (const json& tree_json : j.at("trees")) {
                Tree tree;
                tree_node_from_json(tree_json, tree);
                model.forest.trees.push_back(std::move(tree));
            }
        } else {
            model.linear.ridge_lambda = j.at("hyperparams").at("ridge_lambda").get<double>();
            model.linear.coefficients = vector_from_json(j.at("coefficients"));
            model.linear.intercept = j.at("intercept").get<double>();
        }
        return model;
    } catch (const json::exception& e) {
        throw SchemaMismatch(path.string() + ": " + e.what());
    }
}

std::string EvalReport::to_json_string() const {
    json j;
    j["model"] = model;
    j["split"] = split;
    j["horizon_hours"] = horizon_hours;
    j["r2"] = r2;
    j["mae_w_m2"] = mae_w_m2;
    j["rmse_w_m2"] = rmse_w_m2;
    j["n_train"] = n_train;
    j["n_test"] = n_test;
    j["ablation"] = ablation;
    j["runtime_seconds"] = runtime_seconds;
    return j.dump(2) + "\n";
}

EvalReport EvalReport::from_json_string(const std::string& text) {
    try {
        const json j = json::parse(text);
        EvalReport r;
        r.model = j.at("model").get<std::string>();
        r.split = j.at("split").get<std::string>();
        r.horizon_hours = j.at("horizon_hours").get<int>();
        r.r2 = j.at("r2").get<double>();
        r.mae_w_m2 = j.at("mae_w_m2").get<double>();
        r.rmse_w_m2 = j.at("rmse_w_m2").get<double>();
        r.n_train = j.at("n_train").get<std::int64_t>();
        r.n_test = j.at("n_test").get<std::int64_t>();
        r.ablation = j.at("ablation").get<std::string>();
        r.runtime_seconds = j.at("runtime_seconds").get<double>();
        return r;
    } catch (const json::exception& e) {
        throw SchemaMismatch(std::string("report json: ") + e.what());
    }
}

std::string reports_csv(std::span<const EvalReport> reports, std::span<const SweepMean> means) {
    std::string out = "model,split,horizon,r2,mae,rmse,n_train,n_test,ablation\n";
    for (const auto& r : reports) {
        out += r.model + ',' + r.split + ',' + std::to_string(r.horizon_hours) + ',' +
               format_double(r.r2) + ',' + format_double(r.mae_w_m2) + ',' +
               format_double(r.rmse_w_m2) + ',' + std::to_string(r.n_train) + ',' +
               std::to_string(r.n_test) + ',' + r.ablation + '\n';
    }
    for (const auto& m : means) {
        out += "forest," + m.split + ",mean," + format_double(m.mean_r2) + ',' +
               format_double(m.mean_mae) + ',' + format_double(m.mean_rmse) + ",,,\n";
    }
    return out;
}

EvalReport run_experiment(const ExperimentSetup& setup, const SplitSpec& split,
                          int horizon_hours, const AblationSpec* ablation) {
    Stopwatch watch;
    SplitResult parts = split_by_month(setup.data->measurements, split);
    std::vector<WeatherRecord> train_records =
        ablation ? ablate(parts.train, *ablation) : std::move(parts.train);

    const AssembledData train = assemble(*setup.embedding, train_records, setup.weather_features);
    const TrainedModel model = fit_trained_model(train, setup.model, setup.threads);

    const AlignResult aligned =
        horizon_align(parts.test, forecasts_for(*setup.data, horizon_hours), horizon_hours);
    const AssembledData test = assemble(*setup.embedding, aligned.rows, setup.weather_features);
    const Eigen::VectorXd predictions = model.predict(test.features);

    return build_report(model_kind_name(setup.model.kind), split.name, horizon_hours,
                       test.target, predictions, train.features.rows(),
                       ablation ? ablation->label() : "", watch.seconds());
}

SweepResult horizon_sweep(const ExperimentSetup& setup, std::span<const SplitSpec> splits,
                          std::span<const int> horizons) {
    SweepResult result;
    for (const SplitSpec& split : splits) {
        Stopwatch fit_watch;
        SplitResult parts = split_by_month(setup.data->measurements, split);
        const AssembledData train =
            assemble(*setup.embedding, parts.train, setup.weather_features);
        const TrainedModel model = fit_trained_model(train, setup.model, setup.threads);
        const double fit_seconds = fit_watch.seconds();

        SweepMean mean{split.name, 0.0, 0.0, 0.0};
        for (int horizon : horizons) {
            Stopwatch eval_watch;
            const AlignResult aligned =
                horizon_align(parts.test, forecasts_for(*setup.data, horizon), horizon);
            const AssembledData test =
                assemble(*setup.embedding, aligned.rows, setup.weather_features);
            const Eigen::VectorXd predictions = model.predict(test.features);
            result.reports.push_back(build_report(
                model_kind_name(setup.model.kind), split.name, horizon, test.target,
                predictions, train.features.rows(), "", fit_seconds + eval_watch.seconds()));
            mean.mean_r2 += result.reports.back().r2;
            mean.mean_mae += result.reports.back().mae_w_m2;
            mean.mean_rmse += result.reports.back().rmse_w_m2;
        }
        if (!horizons.empty()) {
            const double k = static_cast<double>(horizons.size());
            mean.mean_r2 /= k;
            mean.mean_mae /= k;
            mean.mean_rmse /= k;
            result.means.push_back(mean);
        }
    }
    return result;
}

std::vector<AblationOutcome> ablation_sweep(const ExperimentSetup& setup,
                                            const SplitSpec& split, int horizon_hours,
                                            std::span<const AblationSpec> specs) {
    std::vector<AblationOutcome> outcomes;
    outcomes.reserve(specs.size() + 1);
    outcomes.push_back({run_experiment(setup, split, horizon_hours), 0.0, 0.0, 0.0});
    const EvalReport& baseline = outcomes.front().report;
    for (const AblationSpec& spec : specs) {
        AblationOutcome outcome;
        outcome.report = run_experiment(setup, split, horizon_hours, &spec);
        outcome.delta_r2 = outcome.report.r2 - baseline.r2;
        outcome.delta_mae = outcome.report.mae_w_m2 - baseline.mae_w_m2;
        outcome.delta_rmse = outcome.report.rmse_w_m2 - baseline.rmse_w_m2;
        outcomes.push_back(std::move(outcome));
    }
    return outcomes;
}

std::vector<std::pair<std::string, double>> importance_report(const ForestModel& model) {
    if (!model.fitted()) throw UnfittedModel("importance needs a fitted forest");
    std::vector<std::pair<std::string, double>> ranked;
    ranked.reserve(model.feature_names.size());
    for (std::size_t f = 0; f < model.feature_names.size(); ++f)
        ranked.emplace_back(model.feature_names[f], model.importances(static_cast<Eigen::Index>(f)));
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    return ranked;
}

}  // namespace helio
