#include <CLI11.hpp>
#include <cstdint>
#include <iostream>

#include "heliocast/commands.hpp"
#include "heliocast/errors.hpp"

namespace {

constexpr const char* kVersion = "heliocast 1.0.0";

constexpr const char* kFooter =
    "Exit codes:\n"
    "  0  success\n"
    "  1  internal error\n"
    "  2  configuration error (bad config file, flag, or parameter)\n"
    "  3  missing artifact (input file not found)\n"
    "  4  data error (malformed or inconsistent data files)\n"
    "  5  model error (unfitted/singular model, bad model file)\n"
    "\n"
    "All randomness flows from the named seeds in the config; --seed K sets\n"
    "synth/walk/train/forest/ablation seeds to K..K+4.";

struct GlobalFlags {
    std::string config_path;
    std::string out_dir;
    int threads = 0;          // 0 = not given
    std::int64_t seed = -1;   // <0 = not given
    std::string split;
    std::string model_kind;
    int dims = 0;
};

helio::RunConfig resolve_config(const GlobalFlags& flags) {
    helio::RunConfig cfg;
    if (!flags.config_path.empty()) cfg = helio::RunConfig::from_json_file(flags.config_path);
    // flags win over the config file
    if (!flags.out_dir.empty()) cfg.paths.out_dir = flags.out_dir;
    if (flags.threads > 0) cfg.threads = flags.threads;
    if (flags.seed >= 0) cfg.apply_master_seed(static_cast<std::uint64_t>(flags.seed));
    if (!flags.split.empty()) cfg.experiment.split = flags.split;
    if (!flags.model_kind.empty()) cfg.model.kind = flags.model_kind;
    if (flags.dims > 0) cfg.embedding.dims = flags.dims;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"heliocast: GHI forecasting from spatial graph embeddings, temporal "
                 "embeddings and weather features"};
    app.set_version_flag("--version", kVersion);
    app.footer(kFooter);
    app.require_subcommand(1);

    GlobalFlags flags;
    app.add_option("--config", flags.config_path, "JSON config file")
        ->envname("HELIOCAST_CONFIG");
    app.add_option("--out", flags.out_dir, "output directory (overrides config)");
    app.add_option("--threads", flags.threads, "worker threads (overrides config)");
    app.add_option("--seed", flags.seed, "master seed; module seeds become K..K+4");

    using Command = void (*)(const helio::RunConfig&, std::ostream&);
    Command selected = nullptr;

    auto add_cmd = [&](const char* name, const char* help, Command fn) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->callback([&selected, fn] { selected = fn; });
        return sub;
    };

    add_cmd("synth", "generate synthetic locations, measurements and forecasts",
            helio::cmd_synth);
    add_cmd("graph", "build the weighted spatial graph from the locations file",
            helio::cmd_graph);
    CLI::App* embed =
        add_cmd("embed", "learn node embeddings from the graph", helio::cmd_embed);
    embed->add_option("--dims", flags.dims, "embedding dimensions (overrides config)");
    CLI::App* train =
        add_cmd("train", "fit the regression model on the split's training months",
                helio::cmd_train);
    train->add_option("--model-kind", flags.model_kind, "forest | linear | ridge");
    train->add_option("--split", flags.split, "winter | summer | global");
    CLI::App* eval = add_cmd(
        "eval", "evaluate the trained model on horizon-aligned test months", helio::cmd_eval);
    eval->add_option("--split", flags.split, "winter | summer | global");
    add_cmd("ablate", "rerun the experiment under the configured ablations",
            helio::cmd_ablate);
    add_cmd("sweep", "run every configured split at every configured horizon",
            helio::cmd_sweep);
    add_cmd("importance", "rank features by forest importance", helio::cmd_importance);

    CLI11_PARSE(app, argc, argv);

    try {
        const helio::RunConfig cfg = resolve_config(flags);
        selected(cfg, std::cout);
        return 0;
    } catch (const helio::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(e.category());
    } catch (const std::exception& e) {
        std::cerr << "error: internal: " << e.what() << "\n";
        return 1;
    }
}
