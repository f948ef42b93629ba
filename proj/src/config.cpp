#include "eigennet/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <vector>

#include "eigennet/errors.hpp"
#include "eigennet/oracle.hpp"

namespace eigennet {

namespace {

using nlohmann::json;

constexpr double kPi = std::numbers::pi;

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path + ": expected an object");
  for (const auto& item : j.items())
    if (!allowed.contains(item.key()))
      throw ConfigError("unknown key: " + (path.empty() ? item.key() : path + "." + item.key()));
}

template <typename T>
void read(const json& j, const char* key, const std::string& path, T& target) {
  if (!j.contains(key)) return;
  try {
    target = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("bad value for " + (path.empty() ? key : path + "." + key));
  }
}

Mode parse_mode(const std::string& s) {
  if (s == "fixed-lambda") return Mode::FixedLambda;
  if (s == "single-pair") return Mode::SinglePair;
  if (s == "multi-pair") return Mode::MultiPair;
  throw ConfigError("mode: expected fixed-lambda, single-pair or multi-pair, got '" + s + "'");
}

struct Preset {
  ProblemSpec spec;
  double c;
  bool locked;  // fig presets fix the problem fields
};

Preset preset_for(const std::string& problem) {
  auto fixed = [](FixedCase which) {
    const AnalyticSolution s = analytic_fixed_lambda(which);
    Preset p;
    p.spec.a = s.a;
    p.spec.b = s.b;
    p.spec.bc = s.bc;
    p.spec.mode = Mode::FixedLambda;
    p.spec.lambda = s.lambda;
    p.spec.num_outputs = 1;
    p.c = s.true_energy;
    p.locked = true;
    return p;
  };
  if (problem == "fig1") return fixed(FixedCase::Fig1);
  if (problem == "fig2") return fixed(FixedCase::Fig2);
  if (problem == "fig3") return fixed(FixedCase::Fig3);
  if (problem == "dirichlet" || problem == "custom") {
    Preset p;
    p.spec.a = 0.0;
    p.spec.b = kPi;
    p.spec.bc = {{0.0, 0.0}, {kPi, 0.0}};
    p.spec.mode = Mode::SinglePair;
    p.spec.num_outputs = 1;
    p.c = 1.0;
    p.locked = false;
    return p;
  }
  throw ConfigError("problem: expected fig1, fig2, fig3, dirichlet or custom, got '" + problem + "'");
}

void reject_locked_mismatch(const json& j, const Preset& preset, const std::string& problem) {
  if (!preset.locked) return;
  if (j.contains("mode") && parse_mode(j.at("mode").get<std::string>()) != Mode::FixedLambda)
    throw ConfigError("mode: conflicts with problem preset '" + problem + "'");
  if (j.contains("m") && j.at("m").get<int>() != 1)
    throw ConfigError("m: conflicts with problem preset '" + problem + "'");
  if (j.contains("lambda") && j.at("lambda").get<double>() != preset.spec.lambda)
    throw ConfigError("lambda: conflicts with problem preset '" + problem + "'");
  if (j.contains("domain")) {
    const auto& d = j.at("domain");
    if (d.value("a", preset.spec.a) != preset.spec.a || d.value("b", preset.spec.b) != preset.spec.b)
      throw ConfigError("domain: conflicts with problem preset '" + problem + "'");
  }
  if (j.contains("bc")) {
    const auto parsed = j.at("bc");
    bool same = parsed.is_array() && parsed.size() == preset.spec.bc.size();
    for (std::size_t i = 0; same && i < preset.spec.bc.size(); ++i)
      same = parsed[i].value("x", 0.0) == preset.spec.bc[i].x &&
             parsed[i].value("value", 0.0) == preset.spec.bc[i].value;
    if (!same) throw ConfigError("bc: conflicts with problem preset '" + problem + "'");
  }
}

}  // namespace

std::string mode_name(Mode m) {
  switch (m) {
    case Mode::FixedLambda: return "fixed-lambda";
    case Mode::SinglePair: return "single-pair";
    case Mode::MultiPair: return "multi-pair";
  }
  return "?";
}

RunConfig resolve_config(const json& j) {
  check_keys(j, {"problem", "mode", "m", "domain", "lambda", "bc", "weights", "net", "train",
                 "lr", "output"},
             "");

  RunConfig cfg;
  read(j, "problem", "", cfg.problem);
  const Preset preset = preset_for(cfg.problem);
  reject_locked_mismatch(j, preset, cfg.problem);
  cfg.spec = preset.spec;
  cfg.weights.c = preset.c;

  read(j, "m", "", cfg.spec.num_outputs);
  if (j.contains("mode")) {
    cfg.spec.mode = parse_mode(j.at("mode").get<std::string>());
  } else if (cfg.spec.num_outputs > 1) {
    cfg.spec.mode = Mode::MultiPair;
  }
  if (j.contains("lambda")) {
    if (cfg.spec.mode != Mode::FixedLambda)
      throw ConfigError("lambda: only meaningful in fixed-lambda mode");
    cfg.spec.lambda = j.at("lambda").get<double>();
  }
  if (cfg.spec.mode == Mode::FixedLambda && !preset.locked && !j.contains("lambda"))
    throw ConfigError("lambda: required in fixed-lambda mode");

  if (j.contains("domain")) {
    const auto& d = j.at("domain");
    check_keys(d, {"a", "b"}, "domain");
    read(d, "a", "domain", cfg.spec.a);
    read(d, "b", "domain", cfg.spec.b);
  }
  if (j.contains("bc")) {
    const auto& arr = j.at("bc");
    if (!arr.is_array()) throw ConfigError("bc: expected an array");
    cfg.spec.bc.clear();
    for (const auto& e : arr) {
      check_keys(e, {"x", "value"}, "bc[]");
      BoundaryCondition c;
      read(e, "x", "bc[]", c.x);
      read(e, "value", "bc[]", c.value);
      cfg.spec.bc.push_back(c);
    }
  }

  const int m = cfg.spec.num_outputs;
  cfg.weights.gamma = LossWeights::defaults(m).gamma;
  if (j.contains("weights")) {
    const auto& w = j.at("weights");
    check_keys(w, {"alpha", "mu", "delta", "beta", "c", "nu", "reg", "top_k", "gamma",
                   "gamma_mode", "detach_rayleigh"},
               "weights");
    read(w, "alpha", "weights", cfg.weights.alpha);
    read(w, "mu", "weights", cfg.weights.mu);
    read(w, "delta", "weights", cfg.weights.delta);
    read(w, "beta", "weights", cfg.weights.beta);
    read(w, "c", "weights", cfg.weights.c);
    read(w, "nu", "weights", cfg.weights.nu);
    read(w, "reg", "weights", cfg.weights.reg);
    read(w, "top_k", "weights", cfg.weights.top_k);
    read(w, "detach_rayleigh", "weights", cfg.weights.detach_rayleigh);
    if (w.contains("gamma_mode")) {
      const auto mode = w.at("gamma_mode").get<std::string>();
      if (mode == "uniform")
        cfg.weights.gamma.assign(static_cast<std::size_t>(m), 1.0);
      else if (mode != "inverse-index")
        throw ConfigError("weights.gamma_mode: expected inverse-index or uniform");
    }
    if (w.contains("gamma")) {
      if (w.contains("gamma_mode"))
        throw ConfigError("weights.gamma: give either gamma or gamma_mode, not both");
      read(w, "gamma", "weights", cfg.weights.gamma);
    }
  }

  if (j.contains("net")) {
    const auto& n = j.at("net");
    check_keys(n, {"hidden"}, "net");
    read(n, "hidden", "net", cfg.net.hidden);
    if (cfg.net.hidden.empty()) throw ConfigError("net.hidden: need at least one hidden layer");
  }

  if (j.contains("train")) {
    const auto& t = j.at("train");
    check_keys(t, {"epochs", "batches_per_epoch", "interior_batch", "boundary_batch", "seed",
                   "snapshot_epochs", "grad_clip"},
               "train");
    read(t, "epochs", "train", cfg.run.epochs);
    read(t, "batches_per_epoch", "train", cfg.run.batches_per_epoch);
    read(t, "interior_batch", "train", cfg.run.interior_batch);
    read(t, "boundary_batch", "train", cfg.run.boundary_batch);
    read(t, "seed", "train", cfg.run.seed);
    read(t, "snapshot_epochs", "train", cfg.run.snapshot_epochs);
    read(t, "grad_clip", "train", cfg.run.grad_clip);
  }

  if (j.contains("lr")) {
    const auto& l = j.at("lr");
    check_keys(l, {"lr0", "decay", "period", "min"}, "lr");
    read(l, "lr0", "lr", cfg.lr.lr0);
    read(l, "decay", "lr", cfg.lr.decay);
    read(l, "period", "lr", cfg.lr.period);
    read(l, "min", "lr", cfg.lr.lr_min);
  }

  cfg.outdir = "runs/" + cfg.problem;
  if (j.contains("output")) {
    const auto& o = j.at("output");
    check_keys(o, {"dir", "eval_grid"}, "output");
    read(o, "dir", "output", cfg.outdir);
    read(o, "eval_grid", "output", cfg.eval_grid_n);
  }

  cfg.spec.validate();
  cfg.weights.validate(m);
  if (cfg.run.epochs < 0) throw ConfigError("train.epochs: must be >= 0");
  if (cfg.run.batches_per_epoch < 1) throw ConfigError("train.batches_per_epoch: must be >= 1");
  if (cfg.run.interior_batch < 1) throw ConfigError("train.interior_batch: must be >= 1");
  if (cfg.run.boundary_batch < 1) throw ConfigError("train.boundary_batch: must be >= 1");
  if (cfg.weights.top_k > cfg.run.interior_batch)
    throw ConfigError("weights.top_k: exceeds train.interior_batch");
  if (!(cfg.lr.lr0 > 0) || !(cfg.lr.lr_min > 0) || !(cfg.lr.decay > 0) || cfg.lr.decay > 1)
    throw ConfigError("lr: need lr0, min > 0 and decay in (0, 1]");
  if (cfg.lr.period < 1) throw ConfigError("lr.period: must be >= 1");
  if (cfg.run.grad_clip < 0) throw ConfigError("train.grad_clip: must be >= 0");
  if (cfg.eval_grid_n < 2) throw ConfigError("output.eval_grid: must be >= 2");
  for (int h : cfg.net.hidden)
    if (h < 1) throw ConfigError("net.hidden: widths must be positive");
  return cfg;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config parse error in " + path + ": " + e.what());
  }
  return resolve_config(j);
}

json to_json(const RunConfig& cfg) {
  json j;
  j["problem"] = cfg.problem;
  j["mode"] = mode_name(cfg.spec.mode);
  j["m"] = cfg.spec.num_outputs;
  j["domain"] = {{"a", cfg.spec.a}, {"b", cfg.spec.b}};
  if (cfg.spec.mode == Mode::FixedLambda) j["lambda"] = cfg.spec.lambda;
  j["bc"] = json::array();
  for (const auto& c : cfg.spec.bc) j["bc"].push_back({{"x", c.x}, {"value", c.value}});
  j["weights"] = {{"alpha", cfg.weights.alpha},
                  {"mu", cfg.weights.mu},
                  {"delta", cfg.weights.delta},
                  {"beta", cfg.weights.beta},
                  {"c", cfg.weights.c},
                  {"nu", cfg.weights.nu},
                  {"reg", cfg.weights.reg},
                  {"top_k", cfg.weights.top_k},
                  {"gamma", cfg.weights.gamma},
                  {"detach_rayleigh", cfg.weights.detach_rayleigh}};
  j["net"] = {{"hidden", cfg.net.hidden}};
  j["train"] = {{"epochs", cfg.run.epochs},
                {"batches_per_epoch", cfg.run.batches_per_epoch},
                {"interior_batch", cfg.run.interior_batch},
                {"boundary_batch", cfg.run.boundary_batch},
                {"seed", cfg.run.seed},
                {"snapshot_epochs", cfg.run.snapshot_epochs},
                {"grad_clip", cfg.run.grad_clip}};
  j["lr"] = {{"lr0", cfg.lr.lr0}, {"decay", cfg.lr.decay}, {"period", cfg.lr.period},
             {"min", cfg.lr.lr_min}};
  j["output"] = {{"dir", cfg.outdir}, {"eval_grid", cfg.eval_grid_n}};
  return j;
}

}  // namespace eigennet
