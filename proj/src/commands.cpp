#include "heliocast/commands.hpp"

#include <chrono>
#include <cstdio>
#include <ostream>

#include "heliocast/csv.hpp"
#include "heliocast/errors.hpp"

namespace helio {

namespace {

void print_config(const RunConfig& cfg, std::ostream& out) {
    out << "resolved config:\n" << cfg.to_json_string();
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

std::string report_line(const EvalReport& r) {
    std::string line = "report: model=" + r.model + " split=" + r.split +
                       " horizon=" + std::to_string(r.horizon_hours) + " r2=" + fmt(r.r2) +
                       " mae=" + fmt(r.mae_w_m2) + " rmse=" + fmt(r.rmse_w_m2) +
                       " n_train=" + std::to_string(r.n_train) +
                       " n_test=" + std::to_string(r.n_test);
    if (!r.ablation.empty()) line += " ablation=" + r.ablation;
    return line;
}

std::string sanitize(std::string label) {
    for (char& c : label)
        if (c == ':' || c == '/' || c == ' ') c = '-';
    return label;
}

std::filesystem::path report_json_path(const RunConfig& cfg, const EvalReport& r) {
    std::string name = "report_" + r.model + "_" + r.split + "_h" +
                       std::to_string(r.horizon_hours);
    if (!r.ablation.empty()) name += "_" + sanitize(r.ablation);
    return cfg.out_dir() / (name + ".json");
}

std::vector<WeatherRecord> load_measurements(const RunConfig& cfg, std::ostream& out) {
    const IngestResult ingest = ingest_weather_csv(cfg.measurements_path());
    out << "ingested " << ingest.records.size() << " measurement records ("
        << ingest.dropped_missing << " dropped, " << fmt(100.0 * ingest.drop_fraction())
        << "% missing)\n";
    return ingest.records;
}

ExperimentData load_experiment_data(const RunConfig& cfg, std::ostream& out) {
    ExperimentData data;
    data.measurements = load_measurements(cfg, out);
    for (int h : cfg.experiment.horizons) {
        IngestResult ingest = ingest_weather_csv(cfg.forecast_path(h));
        out << "ingested " << ingest.records.size() << " forecast records for horizon " << h
            << "\n";
        data.forecasts[h] = std::move(ingest.records);
    }
    return data;
}

EmbeddingMatrix load_embedding_checked(const RunConfig& cfg, const TrainedModel& model) {
    const auto path = cfg.embedding_path();
    if (!model.embedding_checksum.empty() &&
        file_checksum(path) != model.embedding_checksum)
        throw SchemaMismatch("embedding file " + path.string() +
                             " does not match the checksum stored in the model");
    return load_embedding_csv(path);
}

ExperimentSetup make_setup(const RunConfig& cfg, const ExperimentData& data,
                           const EmbeddingMatrix& embedding) {
    ExperimentSetup setup;
    setup.data = &data;
    setup.embedding = &embedding;
    setup.weather_features = cfg.model.features;
    setup.model = cfg.model_spec();
    setup.threads = cfg.threads;
    return setup;
}

void write_reports(const RunConfig& cfg, std::span<const EvalReport> reports,
                   std::span<const SweepMean> means, const char* csv_name, std::ostream& out) {
    for (const auto& r : reports) {
        write_text_file(report_json_path(cfg, r), r.to_json_string());
        out << report_line(r) << "\n";
    }
    for (const auto& m : means)
        out << "mean: split=" << m.split << " r2=" << fmt(m.mean_r2)
            << " mae=" << fmt(m.mean_mae) << " rmse=" << fmt(m.mean_rmse) << "\n";
    const auto csv_path = cfg.out_dir() / csv_name;
    write_text_file(csv_path, reports_csv(reports, means));
    out << "wrote " << csv_path.string() << "\n";
}

}  // namespace

void cmd_synth(const RunConfig& cfg, std::ostream& out) {
    print_config(cfg, out);
    const SynthConfig synth_cfg = cfg.synth_config();
    const SynthOutput data = generate(synth_cfg, cfg.threads);
    save_locations_csv(cfg.locations_path(), data.locations);
    write_weather_csv(cfg.measurements_path(), data.measurements, /*pressure=*/true,
                      /*ghi=*/true, /*issued_lead=*/false);
    out << "wrote " << cfg.locations_path().string() << " (" << data.locations.size()
        << " locations)\n";
    out << "wrote " << cfg.measurements_path().string() << " (" << data.measurements.size()
        << " records)\n";
    for (const auto& [horizon, rows] : data.forecasts) {
        write_weather_csv(cfg.forecast_path(horizon), rows, /*pressure=*/true, /*ghi=*/false,
                          /*issued_lead=*/true);
        out << "wrote " << cfg.forecast_path(horizon).string() << " (" << rows.size()
            << " records)\n";
    }
}

void cmd_graph(const RunConfig& cfg, std::ostream& out) {
    print_config(cfg, out);
    const auto locations = load_locations_csv(cfg.locations_path());
    const SpatialGraph graph =
        build_graph(locations, cfg.graph.kernel_sigma_km, cfg.graph.prune_frac);
    save_graph_csv(cfg.graph_path(), graph);
    out << "wrote " << cfg.graph_path().string() << " (" << graph.n << " nodes, "
        << graph.edges.size() << " edges)\n";
}

void cmd_embed(const RunConfig& cfg, std::ostream& out) {
    print_config(cfg, out);
    const SpatialGraph graph = load_graph_csv(cfg.graph_path());
    TrainStats stats;
    const Embedding embedding =
        embed_graph(graph, cfg.walk_config(), cfg.train_config(), cfg.threads, &stats);
    for (std::size_t e = 0; e < stats.epoch_mean_loss.size(); ++e)
        out << "epoch " << e + 1 << ": mean pair loss " << fmt(stats.epoch_mean_loss[e])
            << "\n";
    save_embedding_csv(cfg.embedding_path(), embedding.vectors);
    out << "wrote " << cfg.embedding_path().string() << " (" << embedding.vectors.rows()
        << " x " << embedding.vectors.cols() << ")\n";
}

void cmd_train(const RunConfig& cfg, std::ostream& out) {
    print_config(cfg, out);
    const SplitSpec split = cfg.split_spec();  // reject bad parameters before any IO
    const ModelSpec spec = cfg.model_spec();
    const EmbeddingMatrix embedding = load_embedding_csv(cfg.embedding_path());
    const auto measurements = load_measurements(cfg, out);
    const SplitResult parts = split_by_month(measurements, split);
    const AssembledData train = assemble(embedding, parts.train, cfg.model.features);
    TrainedModel model = fit_trained_model(train, spec, cfg.threads);
    model.embedding_checksum = file_checksum(cfg.embedding_path());
    save_model_json(cfg.model_path(), model);
    out << "trained " << cfg.model.kind << " on " << train.features.rows() << " rows, "
        << train.features.cols() << " features\n";
    out << "wrote " << cfg.model_path().string() << "\n";
}

void cmd_eval(const RunConfig& cfg, std::ostream& out) {
    print_config(cfg, out);
    const SplitSpec split = cfg.split_spec();
    const TrainedModel model = load_model_json(cfg.model_path());
    const EmbeddingMatrix embedding = load_embedding_checked(cfg, model);
    const ExperimentData data = load_experiment_data(cfg, out);
    const SplitResult parts = split_by_month(data.measurements, split);

    std::vector<EvalReport> reports;
    for (int horizon : cfg.experiment.horizons) {
        const auto t0 = std::chrono::steady_clock::now();
        const AlignResult aligned =
            horizon_align(parts.test, data.forecasts.at(horizon), horizon);
        const AssembledData test = assemble(embedding, aligned.rows, cfg.model.features);
        const Eigen::VectorXd predictions = model.predict(test.features);
        if (aligned.excluded > 0)
            out << "horizon " << horizon << ": " << aligned.excluded
                << " targets lacked a matching forecast\n";
        reports.push_back(build_report(
            model_kind_name(model.kind), split.name, horizon, test.target, predictions,
            model.scaler.fitted_rows, "",
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()));
    }
    write_reports(cfg, reports, {}, "reports.csv", out);
}

void cmd_ablate(const RunConfig& cfg, std::ostream& out) {
    print_config(cfg, out);
    if (cfg.experiment.ablations.empty())
        throw ConfigError("experiment.ablations is empty; nothing to ablate");
    const SplitSpec split = cfg.split_spec();
    const EmbeddingMatrix embedding = load_embedding_csv(cfg.embedding_path());
    const ExperimentData data = load_experiment_data(cfg, out);
    const ExperimentSetup setup = make_setup(cfg, data, embedding);

    std::vector<AblationSpec> specs = cfg.experiment.ablations;
    for (auto& spec : specs) spec.seed = cfg.seeds.ablation;
    const int horizon = cfg.experiment.horizons.front();
    const auto outcomes = ablation_sweep(setup, split, horizon, specs);

    std::vector<EvalReport> reports;
    for (const auto& outcome : outcomes) reports.push_back(outcome.report);
    for (std::size_t i = 1; i < outcomes.size(); ++i)
        out << "delta vs baseline [" << outcomes[i].report.ablation
            << "]: r2 " << fmt(outcomes[i].delta_r2) << " mae " << fmt(outcomes[i].delta_mae)
            << " rmse " << fmt(outcomes[i].delta_rmse) << "\n";
    write_reports(cfg, reports, {}, "ablation_reports.csv", out);
}

void cmd_sweep(const RunConfig& cfg, std::ostream& out) {
    print_config(cfg, out);
    const EmbeddingMatrix embedding = load_embedding_csv(cfg.embedding_path());
    const ExperimentData data = load_experiment_data(cfg, out);
    const ExperimentSetup setup = make_setup(cfg, data, embedding);

    std::vector<SplitSpec> splits;
    for (const auto& name : cfg.experiment.splits) splits.push_back(SplitSpec::by_name(name));
    const SweepResult result = horizon_sweep(setup, splits, cfg.experiment.horizons);
    write_reports(cfg, result.reports, result.means, "sweep_reports.csv", out);
}

void cmd_importance(const RunConfig& cfg, std::ostream& out) {
    print_config(cfg, out);
    const TrainedModel model = load_model_json(cfg.model_path());
    if (model.kind != ModelKind::forest)
        throw UnfittedModel("importance needs a forest model, got " +
                            std::string(model_kind_name(model.kind)));
    const auto ranked = importance_report(model.forest);
    out << "top features by importance:\n";
    for (std::size_t i = 0; i < ranked.size() && i < 15; ++i)
        out << "  " << i + 1 << ". " << ranked[i].first << " " << fmt(ranked[i].second)
            << "\n";
    std::string csv = "feature,importance\n";
    for (const auto& [name, importance] : ranked)
        csv += name + ',' + format_double(importance) + '\n';
    const auto path = cfg.out_dir() / "importance.csv";
    write_text_file(path, csv);
    out << "wrote " << path.string() << "\n";
}

}  // namespace helio
