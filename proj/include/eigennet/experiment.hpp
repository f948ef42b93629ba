#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "eigennet/config.hpp"
#include "eigennet/oracle.hpp"
#include "eigennet/optimize.hpp"

namespace eigennet {

/// Reference solutions for the configured problem, one per output when the
/// problem is one the oracle knows (fig presets, Dirichlet eigenpairs on
/// the configured interval); empty for custom problems.
std::vector<AnalyticSolution> reference_solutions(const RunConfig& cfg);

/// Final-state evaluation on the uniform grid: eigenvalue estimates from
/// the grid Rayleigh quotient, sorted ascending, plus errors against the
/// reference when one exists.
struct RunSummary {
  std::vector<double> lambda;           // per output, sorted ascending
  std::vector<double> l2_err;           // unit-energy sign-invariant; NaN without reference
  std::vector<double> max_abs_err;      // sign-invariant max-abs; NaN without reference
  std::optional<double> ortho_max_abs;  // multi-pair only: max |<u_i, u_j>| over pairs
  double wall_clock_s{0};
};

RunSummary summarize_run(const RunConfig& cfg, const MlpParams& params, double wall_clock_s);

/// Resolves the output directory: relative paths land under the
/// EIGENNET_OUTPUT_ROOT environment variable when it is set.
std::filesystem::path resolve_outdir(const RunConfig& cfg);

/// Full experiment: writes config.resolved, metrics.csv, the
/// functions_epochN.csv snapshots, summary.csv and params.json into the
/// run directory. Returns 0 on success, 1 on an aborted run (partial
/// metrics are still written).
int run_experiment(const RunConfig& cfg);

void write_metrics_csv(const TrainRecord& record, int m, std::ostream& out);

/// Training-free self check of the numerical machinery: derivative
/// exactness vs finite differences, quadrature laws, Rayleigh identities,
/// the discrete-Laplacian spectrum and the analytic solutions.
struct VerifyCheck {
  std::string name;
  bool pass{};
  std::string detail;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  bool all_pass() const;
};

VerifyReport run_verify(std::uint64_t seed);

/// CSV dump (x, u, du, d2u) of a named reference solution:
/// fig1 | fig2 | fig3 | eigen:<k>.
void dump_oracle(const std::string& problem, int grid_n, std::ostream& out);

}  // namespace eigennet
