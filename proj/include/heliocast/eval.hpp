#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "heliocast/features.hpp"
#include "heliocast/forest.hpp"
#include "heliocast/linear.hpp"
#include "heliocast/scaler.hpp"

namespace helio {

enum class ModelKind { forest, linear, ridge };

const char* model_kind_name(ModelKind kind);
ModelKind parse_model_kind(const std::string& name);  // ParameterOutOfRange

struct ModelSpec {
    ModelKind kind = ModelKind::forest;
    ForestHyperparams forest;
    double ridge_lambda = 1.0;  // used when kind == ridge
};

// A fitted model plus the preprocessing that must travel with it; this is
// what `train` persists and `eval` loads.
struct TrainedModel {
    ModelKind kind = ModelKind::forest;
    ForestModel forest;
    LinearModel linear;
    std::vector<std::string> feature_names;
    ScalerParams scaler;
    std::string embedding_checksum;  // pins the embedding file used at fit time

    // Applies the scaler; SchemaMismatch when column names differ.
    Eigen::VectorXd predict(const FeatureMatrix& features) const;
};

TrainedModel fit_trained_model(const AssembledData& train, const ModelSpec& spec,
                               int threads = 1);

// Versioned JSON with hyperparameters, feature names, scaler, importances
// and nested tree nodes; loading rejects unknown format versions.
void save_model_json(const std::filesystem::path& path, const TrainedModel& model);
TrainedModel load_model_json(const std::filesystem::path& path);

struct EvalReport {
    std::string model;
    std::string split;
    int horizon_hours = 0;
    double r2 = 0.0;
    double mae_w_m2 = 0.0;
    double rmse_w_m2 = 0.0;
    std::int64_t n_train = 0;
    std::int64_t n_test = 0;
    std::string ablation;  // empty when none
    double runtime_seconds = 0.0;

    std::string to_json_string() const;
    static EvalReport from_json_string(const std::string& text);
};

// Computes the metrics and asserts the RMSE >= MAE identity every report
// must satisfy.
EvalReport build_report(std::string model, std::string split, int horizon_hours,
                        const Eigen::VectorXd& y_true, const Eigen::VectorXd& y_pred,
                        std::int64_t n_train, std::string ablation, double runtime_seconds);

// Aggregate CSV `model,split,horizon,r2,mae,rmse,n_train,n_test,ablation`;
// per-split mean rows (when given) carry "mean" in the horizon column.
struct SweepMean {
    std::string split;
    double mean_r2 = 0.0;
    double mean_mae = 0.0;
    double mean_rmse = 0.0;
};
std::string reports_csv(std::span<const EvalReport> reports,
                        std::span<const SweepMean> means = {});

struct ExperimentData {
    std::vector<WeatherRecord> measurements;
    std::map<int, std::vector<WeatherRecord>> forecasts;  // by horizon
};

struct ExperimentSetup {
    const ExperimentData* data = nullptr;
    const EmbeddingMatrix* embedding = nullptr;
    std::vector<std::string> weather_features = default_weather_features();
    ModelSpec model;
    int threads = 1;
};

// Fit on the split's training months, evaluate on horizon-aligned test
// rows. An ablation, when given, modifies the training rows only.
EvalReport run_experiment(const ExperimentSetup& setup, const SplitSpec& split,
                          int horizon_hours, const AblationSpec* ablation = nullptr);

struct SweepResult {
    std::vector<EvalReport> reports;  // one per (split, horizon)
    std::vector<SweepMean> means;     // one per split
};

// The training months do not depend on the horizon, so each split is
// fitted once and evaluated per horizon.
SweepResult horizon_sweep(const ExperimentSetup& setup, std::span<const SplitSpec> splits,
                          std::span<const int> horizons);

struct AblationOutcome {
    EvalReport report;
    double delta_r2 = 0.0;  // vs the unablated baseline
    double delta_mae = 0.0;
    double delta_rmse = 0.0;
};

// Baseline first, then one outcome per spec.
std::vector<AblationOutcome> ablation_sweep(const ExperimentSetup& setup,
                                            const SplitSpec& split, int horizon_hours,
                                            std::span<const AblationSpec> specs);

// Features by importance, descending; ties by name. UnfittedModel when the
// forest has no trees.
std::vector<std::pair<std::string, double>> importance_report(const ForestModel& model);

}  // namespace helio
