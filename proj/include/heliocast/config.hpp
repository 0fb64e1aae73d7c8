#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "heliocast/dataset.hpp"
#include "heliocast/embedding.hpp"
#include "heliocast/eval.hpp"
#include "heliocast/synth.hpp"
#include "heliocast/walks.hpp"

namespace helio {

// Everything a run needs, resolvable from defaults, a JSON config file and
// command-line overrides (flags > config > defaults). Unknown keys are
// rejected so a typo cannot silently fall back to a default.
struct RunConfig {
    struct Paths {
        std::string out_dir = "out";
        std::string locations;         // default <out_dir>/locations.csv
        std::string measurements;      // default <out_dir>/measurements.csv
        std::string graph;             // default <out_dir>/graph.csv
        std::string embedding;         // default <out_dir>/embedding.csv
        std::string model;             // default <out_dir>/model.json
        std::string forecast_pattern;  // default <out_dir>/forecast_h{H}.csv
    } paths;

    struct Synth {
        int grid_rows = 4;
        int grid_cols = 6;
        double origin_lat = 29.25;
        double origin_lon = -98.75;
        double spacing_km = 3.0;
        std::string start = "2017-06-01";
        std::string end = "2017-10-01";
        int step_minutes = 60;
        std::array<double, 4> cloud_volatility = {0.30, 0.18, 0.10, 0.18};
        double forecast_noise_per_hour = 0.02;
        std::optional<double> reference_meridian;  // nullopt = grid centre
    } synth;

    struct Graph {
        std::optional<double> kernel_sigma_km;  // nullopt = median heuristic
        double prune_frac = 0.0;
    } graph;

    struct EmbeddingCfg {
        int dims = 32;
        double p = 1.0;
        double q = 1.0;
        int walk_length = 80;
        int walks_per_node = 10;
        int window = 10;
        int negatives = 5;
        int epochs = 5;
        double lr_initial = 0.025;
        double lr_final = 0.0001;
    } embedding;

    struct Model {
        std::string kind = "forest";  // forest | linear | ridge
        int trees = 100;
        int mtry = 0;  // 0 = p/3, -1 = all features
        int min_leaf = 5;
        int max_depth = 0;  // 0 = unlimited
        bool bootstrap = true;
        double ridge_lambda = 1.0;
        std::vector<std::string> features = default_weather_features();
    } model;

    struct Experiment {
        std::string split = "summer";
        std::vector<int> train_months;  // split == "custom" only
        std::vector<int> test_months;
        std::vector<std::string> splits = {"summer", "winter", "global"};  // sweep
        std::vector<int> horizons = {3};
        std::vector<AblationSpec> ablations;  // seeds filled from seeds.ablation
    } experiment;

    struct Seeds {
        std::uint64_t synth = 1;
        std::uint64_t walk = 2;
        std::uint64_t train = 3;
        std::uint64_t forest = 4;
        std::uint64_t ablation = 5;
    } seeds;

    int threads = 1;

    // --- resolution helpers ---
    std::filesystem::path locations_path() const;
    std::filesystem::path measurements_path() const;
    std::filesystem::path graph_path() const;
    std::filesystem::path embedding_path() const;
    std::filesystem::path model_path() const;
    std::filesystem::path forecast_path(int horizon) const;
    std::filesystem::path out_dir() const { return paths.out_dir; }

    SynthConfig synth_config() const;
    WalkConfig walk_config() const;
    TrainConfig train_config() const;
    ModelSpec model_spec() const;
    SplitSpec split_spec() const;

    // Derives all module seeds from one master seed.
    void apply_master_seed(std::uint64_t master);

    static RunConfig from_json_text(const std::string& text);  // ConfigError
    static RunConfig from_json_file(const std::filesystem::path& path);
    std::string to_json_string() const;  // resolved, reproduces this run verbatim
};

}  // namespace helio
