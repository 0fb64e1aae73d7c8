#include <doctest.h>

#include <cmath>
#include <random>

#include "heliocast/csv.hpp"
#include "heliocast/errors.hpp"
#include "heliocast/eval.hpp"
#include "heliocast/metrics.hpp"
#include "heliocast/synth.hpp"
#include "oracles.hpp"

using namespace helio;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> values) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (double x : values) v(i++) = x;
    return v;
}

SynthConfig tiny_synth(unsigned seed, double volatility_scale = 1.0, double noise = 0.02) {
    SynthConfig cfg;
    cfg.grid_rows = 3;
    cfg.grid_cols = 4;
    cfg.start = parse_date("2017-07-01");
    cfg.end = parse_date("2017-09-01");
    cfg.step_minutes = 60;
    for (auto& v : cfg.cloud_volatility) v *= volatility_scale;
    cfg.forecast_noise_per_hour = noise;
    cfg.horizons = {3, 6};
    cfg.seed = seed;
    return cfg;
}

struct Bench {
    ExperimentData data;
    EmbeddingMatrix embedding;
};

Bench make_bench(const SynthConfig& cfg) {
    Bench bench;
    SynthOutput out = generate(cfg);
    bench.data.measurements = std::move(out.measurements);
    bench.data.forecasts = std::move(out.forecasts);
    const SpatialGraph graph = build_graph(out.locations);
    WalkConfig wcfg;
    wcfg.walk_length = 20;
    wcfg.walks_per_node = 5;
    TrainConfig tcfg;
    tcfg.dims = 8;
    tcfg.epochs = 2;
    bench.embedding = embed_graph(graph, wcfg, tcfg).vectors;
    return bench;
}

const SplitSpec kJulAug = SplitSpec::custom("jul-aug", {7}, {8});

}  // namespace

TEST_CASE("r2 identities") {
    const Eigen::VectorXd y = vec({1.0, 2.0, 3.0});
    CHECK(r2(y, y) == 1.0);
    CHECK(r2(y, vec({2.0, 2.0, 2.0})) == doctest::Approx(0.0));  // mean predictor
    CHECK(r2(y, vec({1.0, 2.0, 4.0})) == doctest::Approx(0.5));  // 1 - 1/2
    CHECK(std::isnan(r2(vec({5.0, 5.0, 5.0}), y)));              // constant truth: undefined
}

TEST_CASE("mae and rmse hand values") {
    const Eigen::VectorXd y = vec({0.0, 0.0});
    CHECK(mae(y, y) == 0.0);
    CHECK(rmse(y, y) == 0.0);
    CHECK(mae(y, vec({3.0, -3.0})) == doctest::Approx(3.0));
    CHECK(rmse(y, vec({3.0, -3.0})) == doctest::Approx(3.0));
    CHECK(mae(y, vec({0.0, 4.0})) == doctest::Approx(2.0));
    CHECK(rmse(y, vec({0.0, 4.0})) == doctest::Approx(std::sqrt(8.0)));
    CHECK_THROWS_AS(mae(y, vec({1.0})), LengthMismatch);
    CHECK_THROWS_AS(rmse(vec({}), vec({})), LengthMismatch);
}

TEST_CASE("rmse dominates mae on random vectors") {
    std::mt19937 rng(21);
    std::normal_distribution<double> gauss;
    for (int rep = 0; rep < 50; ++rep) {
        Eigen::VectorXd a(30), b(30);
        for (int i = 0; i < 30; ++i) {
            a(i) = gauss(rng);
            b(i) = gauss(rng);
        }
        CHECK(rmse(a, b) >= mae(a, b));
    }
}

TEST_CASE("report json round trip is lossless") {
    EvalReport report;
    report.model = "forest";
    report.split = "summer";
    report.horizon_hours = 3;
    report.r2 = 0.912345678901234;
    report.mae_w_m2 = 42.76;
    report.rmse_w_m2 = 92.8;
    report.n_train = 123456;
    report.n_test = 7890;
    report.ablation = "random_rows:0.5";
    report.runtime_seconds = 1.25;
    const EvalReport back = EvalReport::from_json_string(report.to_json_string());
    CHECK(back.model == report.model);
    CHECK(back.split == report.split);
    CHECK(back.horizon_hours == report.horizon_hours);
    CHECK(back.r2 == report.r2);
    CHECK(back.mae_w_m2 == report.mae_w_m2);
    CHECK(back.rmse_w_m2 == report.rmse_w_m2);
    CHECK(back.n_train == report.n_train);
    CHECK(back.n_test == report.n_test);
    CHECK(back.ablation == report.ablation);
    CHECK(back.runtime_seconds == report.runtime_seconds);
}

TEST_CASE("aggregate csv rows carry model,split,horizon labels") {
    EvalReport report;
    report.model = "forest";
    report.split = "summer";
    report.horizon_hours = 3;
    report.r2 = 0.5;
    report.mae_w_m2 = 1.0;
    report.rmse_w_m2 = 2.0;
    report.n_train = 10;
    report.n_test = 5;
    const std::string csv = reports_csv(std::vector<EvalReport>{report});
    CHECK(csv.find("model,split,horizon,r2,mae,rmse,n_train,n_test,ablation\n") == 0);
    CHECK(csv.find("forest,summer,3,0.5,1,2,10,5,\n") != std::string::npos);
}

TEST_CASE("importance report sorts by importance then name") {
    ForestModel model;
    model.trees.resize(1);  // marks the model as fitted
    model.trees[0].nodes.push_back({});
    model.feature_names = {"b", "a", "c", "d"};
    model.importances = vec({0.2, 0.2, 0.5, 0.1});
    const auto ranked = importance_report(model);
    REQUIRE(ranked.size() == 4);
    CHECK(ranked[0].first == "c");
    CHECK(ranked[1].first == "a");  // tie with b broken by name
    CHECK(ranked[2].first == "b");
    CHECK(ranked[3].first == "d");
    CHECK_THROWS_AS(importance_report(ForestModel{}), UnfittedModel);
}

TEST_CASE("importance ranking is invariant under column permutation") {
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    Eigen::MatrixXd X(300, 3);
    Eigen::VectorXd y(300);
    for (int i = 0; i < 300; ++i) {
        for (int c = 0; c < 3; ++c) X(i, c) = uni(rng);
        y(i) = 2.0 * X(i, 0) + 0.5 * X(i, 1);
    }
    ForestHyperparams hp;
    hp.trees = 10;
    hp.mtry = 3;  // deterministic feature set per node
    hp.seed = 5;
    const ForestModel direct = fit_forest(X, y, std::vector<std::string>{"a", "b", "c"}, hp);

    Eigen::MatrixXd permuted(300, 3);
    permuted.col(0) = X.col(2);
    permuted.col(1) = X.col(0);
    permuted.col(2) = X.col(1);
    const ForestModel relabeled =
        fit_forest(permuted, y, std::vector<std::string>{"c", "a", "b"}, hp);

    // the ranking attaches to names; values may differ in the last decimals
    // because exact-tie splits at deep nodes break toward the column index
    const auto r1 = importance_report(direct);
    const auto r2_ = importance_report(relabeled);
    REQUIRE(r1.size() == r2_.size());
    for (std::size_t i = 0; i < r1.size(); ++i) {
        CHECK(r1[i].first == r2_[i].first);
        CHECK(r1[i].second == doctest::Approx(r2_[i].second).epsilon(0.02).scale(1.0));
    }
}

TEST_CASE("single informative feature takes importance 1") {
    Eigen::MatrixXd X(100, 1);
    Eigen::VectorXd y(100);
    for (int i = 0; i < 100; ++i) {
        X(i, 0) = i;
        y(i) = i * 2.0;
    }
    ForestHyperparams hp;
    hp.trees = 3;
    const ForestModel model = fit_forest(X, y, std::vector<std::string>{"only"}, hp);
    CHECK(model.importances(0) == doctest::Approx(1.0));
}

TEST_CASE("model json round trip reproduces predictions bit-exactly") {
    const auto dir = oracles::fresh_temp_dir("model");
    const SynthConfig cfg = tiny_synth(3);
    const Bench bench = make_bench(cfg);
    const SplitResult parts = split_by_month(bench.data.measurements, kJulAug);
    const AssembledData train =
        assemble(bench.embedding, parts.train, default_weather_features());

    // one-hot season columns are constant within a two-month window, so
    // plain OLS is legitimately singular here; it gets full-rank data below
    for (ModelKind kind : {ModelKind::forest, ModelKind::ridge}) {
        ModelSpec spec;
        spec.kind = kind;
        spec.forest.trees = 5;
        spec.forest.min_leaf = 10;
        spec.ridge_lambda = 0.5;
        TrainedModel model = fit_trained_model(train, spec);
        model.embedding_checksum = "deadbeef";
        const auto path = dir / (std::string(model_kind_name(kind)) + ".json");
        save_model_json(path, model);
        const TrainedModel loaded = load_model_json(path);
        CHECK(loaded.kind == kind);
        CHECK(loaded.embedding_checksum == "deadbeef");
        CHECK(loaded.feature_names == model.feature_names);
        const Eigen::VectorXd before = model.predict(train.features);
        const Eigen::VectorXd after = loaded.predict(train.features);
        CHECK((before - after).cwiseAbs().maxCoeff() == 0.0);
    }

    {
        std::mt19937 rng(8);
        std::normal_distribution<double> gauss;
        AssembledData flat;
        flat.features.values.resize(60, 4);
        for (Eigen::Index i = 0; i < 60; ++i)
            for (Eigen::Index c = 0; c < 4; ++c) flat.features.values(i, c) = gauss(rng);
        flat.features.columns = {"x0", "x1", "x2", "x3"};
        flat.target = flat.features.values * Eigen::Vector4d(1.0, -2.0, 0.5, 3.0);
        ModelSpec spec;
        spec.kind = ModelKind::linear;
        const TrainedModel model = fit_trained_model(flat, spec);
        save_model_json(dir / "linear.json", model);
        const TrainedModel loaded = load_model_json(dir / "linear.json");
        CHECK(loaded.kind == ModelKind::linear);
        CHECK((model.predict(flat.features) - loaded.predict(flat.features))
                  .cwiseAbs()
                  .maxCoeff() == 0.0);
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("unknown model format versions are rejected") {
    const auto dir = oracles::fresh_temp_dir("modelver");
    write_text_file(dir / "bad.json", "{\"format_version\": 99, \"kind\": \"forest\"}\n");
    CHECK_THROWS_AS(load_model_json(dir / "bad.json"), SchemaMismatch);
    std::filesystem::remove_all(dir);
}

TEST_CASE("zero-noise synthetic data is learned almost perfectly") {
    const SynthConfig cfg = tiny_synth(11, 0.0, 0.0);  // no clouds, no forecast noise
    const Bench bench = make_bench(cfg);
    ExperimentSetup setup;
    setup.data = &bench.data;
    setup.embedding = &bench.embedding;
    ModelSpec spec;
    spec.kind = ModelKind::forest;
    spec.forest.trees = 5;
    spec.forest.min_leaf = 1;
    spec.forest.mtry = 10;
    setup.model = spec;
    const EvalReport report = run_experiment(setup, kJulAug, 3);
    CHECK(report.split == "jul-aug");
    CHECK(report.horizon_hours == 3);
    CHECK(report.r2 >= 0.99);
    CHECK(report.n_test > 0);
    CHECK(report.rmse_w_m2 >= report.mae_w_m2);
}

TEST_CASE("zero-noise forecasts evaluate identically to measurement features") {
    const SynthConfig cfg = tiny_synth(23, 1.0, 0.0);  // clouds on, forecast noise off
    const Bench bench = make_bench(cfg);
    const SplitResult parts = split_by_month(bench.data.measurements, kJulAug);
    const AssembledData train =
        assemble(bench.embedding, parts.train, default_weather_features());
    ModelSpec spec;
    spec.forest.trees = 4;
    spec.forest.min_leaf = 20;
    const TrainedModel model = fit_trained_model(train, spec);

    const AlignResult aligned = horizon_align(parts.test, bench.data.forecasts.at(3), 3);
    REQUIRE(aligned.rows.size() == parts.test.size());
    const AssembledData via_forecast =
        assemble(bench.embedding, aligned.rows, default_weather_features());
    const AssembledData via_measurement =
        assemble(bench.embedding, parts.test, default_weather_features());
    const Eigen::VectorXd pf = model.predict(via_forecast.features);
    const Eigen::VectorXd pm = model.predict(via_measurement.features);
    CHECK((pf - pm).cwiseAbs().maxCoeff() == 0.0);
    CHECK(r2(via_forecast.target, pf) == r2(via_measurement.target, pm));
    CHECK(mae(via_forecast.target, pf) == mae(via_measurement.target, pm));
}

TEST_CASE("forest beats the train-mean predictor and ridge baseline") {
    const SynthConfig cfg = tiny_synth(13);
    const Bench bench = make_bench(cfg);
    ExperimentSetup setup;
    setup.data = &bench.data;
    setup.embedding = &bench.embedding;
    setup.model.kind = ModelKind::forest;
    setup.model.forest.trees = 8;
    setup.model.forest.min_leaf = 10;
    const EvalReport forest_report = run_experiment(setup, kJulAug, 3);

    setup.model.kind = ModelKind::ridge;
    setup.model.ridge_lambda = 1.0;
    const EvalReport ridge_report = run_experiment(setup, kJulAug, 3);

    // the train-mean predictor scores r2 <= 0 by construction
    CHECK(forest_report.r2 > 0.0);
    CHECK(forest_report.r2 > ridge_report.r2);
}

TEST_CASE("horizon sweep fits once per split and reports means") {
    const SynthConfig cfg = tiny_synth(17);
    const Bench bench = make_bench(cfg);
    ExperimentSetup setup;
    setup.data = &bench.data;
    setup.embedding = &bench.embedding;
    setup.model.forest.trees = 4;
    setup.model.forest.min_leaf = 20;
    const std::vector<SplitSpec> splits = {kJulAug};
    const std::vector<int> horizons = {3, 6};
    const SweepResult result = horizon_sweep(setup, splits, horizons);
    REQUIRE(result.reports.size() == 2);
    REQUIRE(result.means.size() == 1);
    CHECK(result.means[0].split == "jul-aug");
    CHECK(result.means[0].mean_r2 ==
          doctest::Approx((result.reports[0].r2 + result.reports[1].r2) / 2.0));
    const std::string csv = reports_csv(result.reports, result.means);
    CHECK(csv.find("forest,jul-aug,mean,") != std::string::npos);
}

TEST_CASE("ablation sweep reports the baseline first with zero deltas") {
    const SynthConfig cfg = tiny_synth(19);
    const Bench bench = make_bench(cfg);
    ExperimentSetup setup;
    setup.data = &bench.data;
    setup.embedding = &bench.embedding;
    setup.model.forest.trees = 4;
    setup.model.forest.min_leaf = 20;

    std::vector<AblationSpec> specs(1);
    specs[0].kind = AblationSpec::Kind::random_rows;
    specs[0].fraction = 0.0;  // identity ablation -> identical model
    const auto outcomes = ablation_sweep(setup, kJulAug, 3, specs);
    REQUIRE(outcomes.size() == 2);
    CHECK(outcomes[0].report.ablation.empty());
    CHECK(outcomes[0].delta_r2 == 0.0);
    CHECK(outcomes[1].report.ablation == "random_rows:0");
    CHECK(outcomes[1].delta_r2 == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
}
