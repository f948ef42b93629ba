#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "eigennet/config.hpp"
#include "eigennet/errors.hpp"
#include "eigennet/experiment.hpp"

namespace {

using nlohmann::json;

struct RunFlags {
  std::string config_path;
  std::optional<std::string> problem, mode, outdir;
  std::optional<int> m, epochs, batches_per_epoch, interior_batch, boundary_batch, eval_grid;
  std::optional<std::uint64_t> seed;
  std::optional<double> lambda, lr0, c, grad_clip;
  std::optional<bool> detach_rayleigh;
  std::optional<std::vector<int>> hidden;
};

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw eigennet::ConfigError("cannot open config file: " + path);
  json j;
  in >> j;
  return j;
}

// Command-line flags win over file values.
json apply_flags(json j, const RunFlags& f) {
  if (f.problem) j["problem"] = *f.problem;
  if (f.mode) j["mode"] = *f.mode;
  if (f.m) j["m"] = *f.m;
  if (f.lambda) j["lambda"] = *f.lambda;
  if (f.epochs) j["train"]["epochs"] = *f.epochs;
  if (f.batches_per_epoch) j["train"]["batches_per_epoch"] = *f.batches_per_epoch;
  if (f.interior_batch) j["train"]["interior_batch"] = *f.interior_batch;
  if (f.boundary_batch) j["train"]["boundary_batch"] = *f.boundary_batch;
  if (f.seed) j["train"]["seed"] = *f.seed;
  if (f.grad_clip) j["train"]["grad_clip"] = *f.grad_clip;
  if (f.lr0) j["lr"]["lr0"] = *f.lr0;
  if (f.c) j["weights"]["c"] = *f.c;
  if (f.detach_rayleigh) j["weights"]["detach_rayleigh"] = *f.detach_rayleigh;
  if (f.hidden) j["net"]["hidden"] = *f.hidden;
  if (f.outdir) j["output"]["dir"] = *f.outdir;
  if (f.eval_grid) j["output"]["eval_grid"] = *f.eval_grid;
  return j;
}

int print_verify(const eigennet::VerifyReport& rep) {
  for (const auto& c : rep.checks)
    std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << "  " << c.detail << '\n';
  std::cout << (rep.all_pass() ? "verify: all checks passed\n" : "verify: FAILURES\n");
  return rep.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Neural eigenpair solver for 1-D self-adjoint operators"};
  app.require_subcommand(1);

  RunFlags flags;
  auto* run = app.add_subcommand("run", "Train a configuration and write run artifacts");
  run->add_option("config", flags.config_path, "JSON config file (omit to use pure defaults)");
  run->add_option("--problem", flags.problem, "fig1|fig2|fig3|dirichlet|custom");
  run->add_option("--mode", flags.mode, "fixed-lambda|single-pair|multi-pair");
  run->add_option("--m", flags.m, "Number of eigenpairs (multi-pair)");
  run->add_option("--lambda", flags.lambda, "Known eigenvalue (fixed-lambda custom runs)");
  run->add_option("--epochs", flags.epochs, "Training epochs");
  run->add_option("--batches-per-epoch", flags.batches_per_epoch, "Batches per epoch");
  run->add_option("--interior-batch", flags.interior_batch, "Interior points per batch");
  run->add_option("--boundary-batch", flags.boundary_batch, "Boundary points per batch");
  run->add_option("--seed", flags.seed, "Run seed");
  run->add_option("--grad-clip", flags.grad_clip, "Global-norm gradient clip (0 = off)");
  run->add_option("--lr0", flags.lr0, "Starting learning rate");
  run->add_option("--energy", flags.c, "Target energy c");
  run->add_option("--hidden", flags.hidden, "Hidden layer widths")->delimiter(',');
  run->add_flag("--detach-rayleigh{true}", flags.detach_rayleigh,
                "Stop gradients through the Rayleigh quotient");
  run->add_option("--outdir", flags.outdir, "Output directory");
  run->add_option("--eval-grid", flags.eval_grid, "Evaluation grid size");

  std::uint64_t verify_seed = 0;
  auto* verify = app.add_subcommand("verify", "Run the training-free oracle checks");
  verify->add_option("--seed", verify_seed, "Seed for the randomized checks");

  std::string oracle_problem;
  int oracle_grid = 1000;
  std::string oracle_out;
  auto* dump = app.add_subcommand("dump-oracle", "Write an analytic solution as CSV");
  dump->add_option("problem", oracle_problem, "fig1|fig2|fig3|eigen:<k>")->required();
  dump->add_option("--grid", oracle_grid, "Number of grid points");
  dump->add_option("--out", oracle_out, "Output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      json j = flags.config_path.empty() ? json::object() : load_json(flags.config_path);
      const eigennet::RunConfig cfg = eigennet::resolve_config(apply_flags(std::move(j), flags));
      return eigennet::run_experiment(cfg);
    }
    if (verify->parsed()) return print_verify(eigennet::run_verify(verify_seed));
    if (dump->parsed()) {
      if (oracle_out.empty()) {
        eigennet::dump_oracle(oracle_problem, oracle_grid, std::cout);
      } else {
        std::ofstream f(oracle_out);
        if (!f) throw eigennet::ConfigError("cannot open output file: " + oracle_out);
        eigennet::dump_oracle(oracle_problem, oracle_grid, f);
      }
      return 0;
    }
  } catch (const eigennet::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
