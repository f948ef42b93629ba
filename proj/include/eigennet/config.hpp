#pragma once

#include <string>

#include <json.hpp>

#include "eigennet/losses.hpp"
#include "eigennet/optimize.hpp"
#include "eigennet/sampling.hpp"

namespace eigennet {

/// Everything one experiment run needs, resolved against the defaults.
/// `problem` names a preset: fig1/fig2/fig3 are the known-lambda reference
/// problems (these fix domain, boundary data, lambda and the target
/// energy), `dirichlet` is the eigenpair problem on [0, pi], and `custom`
/// leaves every field to the config file.
struct RunConfig {
  std::string problem{"dirichlet"};
  ProblemSpec spec;
  LossWeights weights;
  NetConfig net;
  RunSettings run;
  LrSchedule lr;
  std::string outdir;
  int eval_grid_n{1000};
};

/// Builds a RunConfig from a JSON document. Unknown keys, out-of-range
/// values and conflicting mode selections raise ConfigError naming the
/// field. Fields not present fall back to the paper defaults.
RunConfig resolve_config(const nlohmann::json& j);

/// Reads and resolves a JSON config file.
RunConfig parse_config(const std::string& path);

/// Full resolved state; resolve_config(to_json(cfg)) reproduces cfg.
nlohmann::json to_json(const RunConfig& cfg);

std::string mode_name(Mode m);

}  // namespace eigennet
