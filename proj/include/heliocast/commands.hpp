#pragma once

#include <iosfwd>

#include "heliocast/config.hpp"

namespace helio {

// Subcommand bodies behind the CLI; each prints the resolved config to
// `out` before doing anything, never mutates its inputs, and is idempotent
// for identical inputs and seeds. Failures surface as helio::Error.
void cmd_synth(const RunConfig& cfg, std::ostream& out);
void cmd_graph(const RunConfig& cfg, std::ostream& out);
void cmd_embed(const RunConfig& cfg, std::ostream& out);
void cmd_train(const RunConfig& cfg, std::ostream& out);
void cmd_eval(const RunConfig& cfg, std::ostream& out);
void cmd_ablate(const RunConfig& cfg, std::ostream& out);
void cmd_sweep(const RunConfig& cfg, std::ostream& out);
void cmd_importance(const RunConfig& cfg, std::ostream& out);

}  // namespace helio
