#include "heliocast/config.hpp"

#include <fstream>
#include <json.hpp>
#include <set>

#include "heliocast/errors.hpp"

namespace helio {

namespace {

using nlohmann::json;

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
    for (const auto& item : j.items())
        if (!allowed.contains(item.key()))
            throw ConfigError("unknown key '" + where + "." + item.key() + "'");
}

template <typename T>
void read(const json& j, const char* key, T& into, const std::string& where) {
    if (!j.contains(key)) return;
    try {
        j.at(key).get_to(into);
    } catch (const json::exception&) {
        throw ConfigError("bad value for '" + where + "." + std::string(key) + "'");
    }
}

std::filesystem::path resolve(const std::string& configured, const std::string& out_dir,
                              const char* default_name) {
    if (configured.empty()) return std::filesystem::path(out_dir) / default_name;
    return std::filesystem::path(configured);
}

void parse_paths(const json& j, RunConfig::Paths& paths) {
    check_keys(j, {"out_dir", "locations", "measurements", "graph", "embedding", "model",
                   "forecast_pattern"},
               "paths");
    read(j, "out_dir", paths.out_dir, "paths");
    read(j, "locations", paths.locations, "paths");
    read(j, "measurements", paths.measurements, "paths");
    read(j, "graph", paths.graph, "paths");
    read(j, "embedding", paths.embedding, "paths");
    read(j, "model", paths.model, "paths");
    read(j, "forecast_pattern", paths.forecast_pattern, "paths");
}

void parse_synth(const json& j, RunConfig::Synth& synth) {
    check_keys(j,
               {"grid_rows", "grid_cols", "origin_lat", "origin_lon", "spacing_km", "start",
                "end", "step_minutes", "cloud_volatility", "forecast_noise_per_hour",
                "reference_meridian"},
               "synth");
    read(j, "grid_rows", synth.grid_rows, "synth");
    read(j, "grid_cols", synth.grid_cols, "synth");
    read(j, "origin_lat", synth.origin_lat, "synth");
    read(j, "origin_lon", synth.origin_lon, "synth");
    read(j, "spacing_km", synth.spacing_km, "synth");
    read(j, "start", synth.start, "synth");
    read(j, "end", synth.end, "synth");
    read(j, "step_minutes", synth.step_minutes, "synth");
    read(j, "forecast_noise_per_hour", synth.forecast_noise_per_hour, "synth");
    if (j.contains("reference_meridian")) {
        const json& ref = j.at("reference_meridian");
        if (ref.is_string()) {
            if (ref.get<std::string>() != "grid-center")
                throw ConfigError("synth.reference_meridian must be a number or \"grid-center\"");
            synth.reference_meridian = std::nullopt;
        } else if (ref.is_number()) {
            synth.reference_meridian = ref.get<double>();
        } else {
            throw ConfigError("synth.reference_meridian must be a number or \"grid-center\"");
        }
    }
    if (j.contains("cloud_volatility")) {
        const json& vols = j.at("cloud_volatility");
        check_keys(vols, {"winter", "spring", "summer", "fall"}, "synth.cloud_volatility");
        read(vols, "winter", synth.cloud_volatility[0], "synth.cloud_volatility");
        read(vols, "spring", synth.cloud_volatility[1], "synth.cloud_volatility");
        read(vols, "summer", synth.cloud_volatility[2], "synth.cloud_volatility");
        read(vols, "fall", synth.cloud_volatility[3], "synth.cloud_volatility");
    }
}

void parse_graph(const json& j, RunConfig::Graph& graph) {
    check_keys(j, {"kernel_sigma", "prune_frac"}, "graph");
    if (j.contains("kernel_sigma")) {
        const json& sigma = j.at("kernel_sigma");
        if (sigma.is_string()) {
            if (sigma.get<std::string>() != "median")
                throw ConfigError("graph.kernel_sigma must be a number or \"median\"");
            graph.kernel_sigma_km = std::nullopt;
        } else if (sigma.is_number()) {
            graph.kernel_sigma_km = sigma.get<double>();
        } else {
            throw ConfigError("graph.kernel_sigma must be a number or \"median\"");
        }
    }
    read(j, "prune_frac", graph.prune_frac, "graph");
}

void parse_embedding(const json& j, RunConfig::EmbeddingCfg& emb) {
    check_keys(j,
               {"dims", "p", "q", "walk_length", "walks_per_node", "window", "negatives",
                "epochs", "lr_initial", "lr_final"},
               "embedding");
    read(j, "dims", emb.dims, "embedding");
    read(j, "p", emb.p, "embedding");
    read(j, "q", emb.q, "embedding");
    read(j, "walk_length", emb.walk_length, "embedding");
    read(j, "walks_per_node", emb.walks_per_node, "embedding");
    read(j, "window", emb.window, "embedding");
    read(j, "negatives", emb.negatives, "embedding");
    read(j, "epochs", emb.epochs, "embedding");
    read(j, "lr_initial", emb.lr_initial, "embedding");
    read(j, "lr_final", emb.lr_final, "embedding");
}

void parse_model(const json& j, RunConfig::Model& model) {
    check_keys(j,
               {"kind", "trees", "mtry", "min_leaf", "max_depth", "bootstrap", "ridge_lambda",
                "features"},
               "model");
    read(j, "kind", model.kind, "model");
    read(j, "trees", model.trees, "model");
    read(j, "mtry", model.mtry, "model");
    read(j, "min_leaf", model.min_leaf, "model");
    read(j, "max_depth", model.max_depth, "model");
    read(j, "bootstrap", model.bootstrap, "model");
    read(j, "ridge_lambda", model.ridge_lambda, "model");
    read(j, "features", model.features, "model");
}

AblationSpec parse_ablation(const json& j, std::size_t index) {
    const std::string where = "experiment.ablations[" + std::to_string(index) + "]";
    check_keys(j, {"kind", "fraction", "count", "season", "hours"}, where);
    if (!j.contains("kind")) throw ConfigError(where + " needs a kind");
    const std::string kind = j.at("kind").get<std::string>();
    AblationSpec spec;
    if (kind == "random_rows") {
        spec.kind = AblationSpec::Kind::random_rows;
        read(j, "fraction", spec.fraction, where);
    } else if (kind == "drop_locations") {
        spec.kind = AblationSpec::Kind::drop_locations;
        read(j, "count", spec.location_count, where);
    } else if (kind == "drop_season") {
        spec.kind = AblationSpec::Kind::drop_season;
        std::string season = "spring";
        read(j, "season", season, where);
        spec.season = parse_season(season);
    } else if (kind == "downsample") {
        spec.kind = AblationSpec::Kind::downsample;
        read(j, "hours", spec.resolution_hours, where);
    } else {
        throw ConfigError(where + ": unknown kind '" + kind + "'");
    }
    return spec;
}

void parse_experiment(const json& j, RunConfig::Experiment& exp) {
    check_keys(j, {"split", "train_months", "test_months", "splits", "horizons", "ablations"},
               "experiment");
    read(j, "split", exp.split, "experiment");
    read(j, "train_months", exp.train_months, "experiment");
    read(j, "test_months", exp.test_months, "experiment");
    read(j, "splits", exp.splits, "experiment");
    read(j, "horizons", exp.horizons, "experiment");
    if (j.contains("ablations")) {
        const json& specs = j.at("ablations");
        if (!specs.is_array()) throw ConfigError("experiment.ablations must be an array");
        exp.ablations.clear();
        for (std::size_t i = 0; i < specs.size(); ++i)
            exp.ablations.push_back(parse_ablation(specs[i], i));
    }
}

void parse_seeds(const json& j, RunConfig::Seeds& seeds) {
    check_keys(j, {"synth", "walk", "train", "forest", "ablation"}, "seeds");
    read(j, "synth", seeds.synth, "seeds");
    read(j, "walk", seeds.walk, "seeds");
    read(j, "train", seeds.train, "seeds");
    read(j, "forest", seeds.forest, "seeds");
    read(j, "ablation", seeds.ablation, "seeds");
}

json ablation_to_json(const AblationSpec& spec) {
    switch (spec.kind) {
        case AblationSpec::Kind::random_rows:
            return json{{"kind", "random_rows"}, {"fraction", spec.fraction}};
        case AblationSpec::Kind::drop_locations:
            return json{{"kind", "drop_locations"}, {"count", spec.location_count}};
        case AblationSpec::Kind::drop_season:
            return json{{"kind", "drop_season"}, {"season", season_name(spec.season)}};
        case AblationSpec::Kind::downsample:
            return json{{"kind", "downsample"}, {"hours", spec.resolution_hours}};
    }
    return json{};
}

}  // namespace

std::filesystem::path RunConfig::locations_path() const {
    return resolve(paths.locations, paths.out_dir, "locations.csv");
}
std::filesystem::path RunConfig::measurements_path() const {
    return resolve(paths.measurements, paths.out_dir, "measurements.csv");
}
std::filesystem::path RunConfig::graph_path() const {
    return resolve(paths.graph, paths.out_dir, "graph.csv");
}
std::filesystem::path RunConfig::embedding_path() const {
    return resolve(paths.embedding, paths.out_dir, "embedding.csv");
}
std::filesystem::path RunConfig::model_path() const {
    return resolve(paths.model, paths.out_dir, "model.json");
}

std::filesystem::path RunConfig::forecast_path(int horizon) const {
    if (paths.forecast_pattern.empty())
        return std::filesystem::path(paths.out_dir) /
               ("forecast_h" + std::to_string(horizon) + ".csv");
    std::string pattern = paths.forecast_pattern;
    const auto pos = pattern.find("{H}");
    if (pos == std::string::npos)
        throw ConfigError("paths.forecast_pattern must contain {H}");
    pattern.replace(pos, 3, std::to_string(horizon));
    return std::filesystem::path(pattern);
}

SynthConfig RunConfig::synth_config() const {
    SynthConfig cfg;
    cfg.grid_rows = synth.grid_rows;
    cfg.grid_cols = synth.grid_cols;
    cfg.origin_lat = synth.origin_lat;
    cfg.origin_lon = synth.origin_lon;
    cfg.spacing_km = synth.spacing_km;
    cfg.start = parse_date(synth.start);
    cfg.end = parse_date(synth.end);
    cfg.step_minutes = synth.step_minutes;
    cfg.cloud_volatility = synth.cloud_volatility;
    cfg.forecast_noise_per_hour = synth.forecast_noise_per_hour;
    cfg.reference_meridian_override = synth.reference_meridian;
    cfg.horizons = experiment.horizons;
    cfg.seed = seeds.synth;
    return cfg;
}

WalkConfig RunConfig::walk_config() const {
    WalkConfig cfg;
    cfg.return_p = embedding.p;
    cfg.in_out_q = embedding.q;
    cfg.walk_length = embedding.walk_length;
    cfg.walks_per_node = embedding.walks_per_node;
    cfg.seed = seeds.walk;
    return cfg;
}

TrainConfig RunConfig::train_config() const {
    TrainConfig cfg;
    cfg.dims = embedding.dims;
    cfg.window = embedding.window;
    cfg.negatives = embedding.negatives;
    cfg.epochs = embedding.epochs;
    cfg.lr_initial = embedding.lr_initial;
    cfg.lr_final = embedding.lr_final;
    cfg.seed = seeds.train;
    return cfg;
}

ModelSpec RunConfig::model_spec() const {
    ModelSpec spec;
    spec.kind = parse_model_kind(model.kind);
    spec.forest.trees = model.trees;
    spec.forest.mtry = model.mtry;
    spec.forest.min_leaf = model.min_leaf;
    spec.forest.max_depth = model.max_depth;
    spec.forest.bootstrap = model.bootstrap;
    spec.forest.seed = seeds.forest;
    spec.ridge_lambda = model.ridge_lambda;
    return spec;
}

SplitSpec RunConfig::split_spec() const {
    if (experiment.split == "custom")
        return SplitSpec::custom("custom", experiment.train_months, experiment.test_months);
    return SplitSpec::by_name(experiment.split);
}

void RunConfig::apply_master_seed(std::uint64_t master) {
    seeds.synth = master;
    seeds.walk = master + 1;
    seeds.train = master + 2;
    seeds.forest = master + 3;
    seeds.ablation = master + 4;
}

RunConfig RunConfig::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    check_keys(j, {"paths", "synth", "graph", "embedding", "model", "experiment", "seeds",
                   "threads"},
               "config");
    RunConfig cfg;
    if (j.contains("paths")) parse_paths(j.at("paths"), cfg.paths);
    if (j.contains("synth")) parse_synth(j.at("synth"), cfg.synth);
    if (j.contains("graph")) parse_graph(j.at("graph"), cfg.graph);
    if (j.contains("embedding")) parse_embedding(j.at("embedding"), cfg.embedding);
    if (j.contains("model")) parse_model(j.at("model"), cfg.model);
    if (j.contains("experiment")) parse_experiment(j.at("experiment"), cfg.experiment);
    if (j.contains("seeds")) parse_seeds(j.at("seeds"), cfg.seeds);
    read(j, "threads", cfg.threads, "config");
    if (cfg.threads < 1) throw ConfigError("threads must be >= 1");
    return cfg;
}

RunConfig RunConfig::from_json_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MissingArtifact("cannot open config " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return from_json_text(text);
}

std::string RunConfig::to_json_string() const {
    json j;
    j["paths"] = {{"out_dir", paths.out_dir},
                  {"locations", locations_path().string()},
                  {"measurements", measurements_path().string()},
                  {"graph", graph_path().string()},
                  {"embedding", embedding_path().string()},
                  {"model", model_path().string()},
                  {"forecast_pattern", paths.forecast_pattern.empty()
                                           ? (std::filesystem::path(paths.out_dir) /
                                              "forecast_h{H}.csv")
                                                 .string()
                                           : paths.forecast_pattern}};
    j["synth"] = {{"grid_rows", synth.grid_rows},
                  {"grid_cols", synth.grid_cols},
                  {"origin_lat", synth.origin_lat},
                  {"origin_lon", synth.origin_lon},
                  {"spacing_km", synth.spacing_km},
                  {"start", synth.start},
                  {"end", synth.end},
                  {"step_minutes", synth.step_minutes},
                  {"cloud_volatility",
                   {{"winter", synth.cloud_volatility[0]},
                    {"spring", synth.cloud_volatility[1]},
                    {"summer", synth.cloud_volatility[2]},
                    {"fall", synth.cloud_volatility[3]}}},
                  {"forecast_noise_per_hour", synth.forecast_noise_per_hour},
                  {"reference_meridian",
                   synth.reference_meridian ? json(*synth.reference_meridian)
                                            : json("grid-center")}};
    if (graph.kernel_sigma_km)
        j["graph"] = {{"kernel_sigma", *graph.kernel_sigma_km}, {"prune_frac", graph.prune_frac}};
    else
        j["graph"] = {{"kernel_sigma", "median"}, {"prune_frac", graph.prune_frac}};
    j["embedding"] = {{"dims", embedding.dims},
                      {"p", embedding.p},
                      {"q", embedding.q},
                      {"walk_length", embedding.walk_length},
                      {"walks_per_node", embedding.walks_per_node},
                      {"window", embedding.window},
                      {"negatives", embedding.negatives},
                      {"epochs", embedding.epochs},
                      {"lr_initial", embedding.lr_initial},
                      {"lr_final", embedding.lr_final}};
    j["model"] = {{"kind", model.kind},
                  {"trees", model.trees},
                  {"mtry", model.mtry},
                  {"min_leaf", model.min_leaf},
                  {"max_depth", model.max_depth},
                  {"bootstrap", model.bootstrap},
                  {"ridge_lambda", model.ridge_lambda},
                  {"features", model.features}};
    json ablations = json::array();
    for (const auto& spec : experiment.ablations) ablations.push_back(ablation_to_json(spec));
    j["experiment"] = {{"split", experiment.split},
                       {"train_months", experiment.train_months},
                       {"test_months", experiment.test_months},
                       {"splits", experiment.splits},
                       {"horizons", experiment.horizons},
                       {"ablations", std::move(ablations)}};
    j["seeds"] = {{"synth", seeds.synth},
                  {"walk", seeds.walk},
                  {"train", seeds.train},
                  {"forest", seeds.forest},
                  {"ablation", seeds.ablation}};
    j["threads"] = threads;
    return j.dump(2) + "\n";
}

}  // namespace helio
