#include "eigennet/sampling.hpp"

#include <cmath>
#include <stdexcept>

#include "eigennet/errors.hpp"

namespace eigennet {

void ProblemSpec::validate() const {
  if (!(a < b)) throw ConfigError("domain: need a < b");
  if (!std::isfinite(a) || !std::isfinite(b)) throw ConfigError("domain: endpoints must be finite");
  if (num_outputs < 1) throw ConfigError("m: need at least one output");
  if (mode != Mode::MultiPair && num_outputs != 1)
    throw ConfigError("m: only multi-pair mode may have m > 1");
  if (mode == Mode::FixedLambda && !std::isfinite(lambda))
    throw ConfigError("lambda: must be finite in fixed-lambda mode");
  for (const auto& c : bc)
    if (c.x != a && c.x != b)
      throw ConfigError("bc: boundary points must sit on an endpoint of [a, b]");
}

Eigen::VectorXd sample_interior(const ProblemSpec& spec, int n, std::mt19937_64& rng) {
  if (n < 1) throw std::invalid_argument("sample_interior: n must be >= 1");
  std::uniform_real_distribution<double> uniform(spec.a, spec.b);
  Eigen::VectorXd xs(n);
  for (int i = 0; i < n; ++i) {
    double x = uniform(rng);
    while (x <= spec.a || x >= spec.b) x = uniform(rng);  // keep strictly interior
    xs[i] = x;
  }
  return xs;
}

void sample_boundary(const ProblemSpec& spec, int n, std::mt19937_64& rng, Eigen::VectorXd& xs,
                     Eigen::VectorXd& targets) {
  if (n < 1) throw std::invalid_argument("sample_boundary: n must be >= 1");
  if (spec.bc.empty()) throw ConfigError("bc: need at least one boundary condition");
  std::uniform_int_distribution<std::size_t> pick(0, spec.bc.size() - 1);
  xs.resize(n);
  targets.resize(n);
  for (int i = 0; i < n; ++i) {
    const auto& c = spec.bc[pick(rng)];
    xs[i] = c.x;
    targets[i] = c.value;
  }
}

Batch sample_batch(const ProblemSpec& spec, int n_interior, int n_boundary, std::mt19937_64& rng) {
  Batch batch;
  batch.interior = sample_interior(spec, n_interior, rng);
  sample_boundary(spec, n_boundary, rng, batch.boundary_x, batch.boundary_target);
  return batch;
}

double mc_inner(const Eigen::VectorXd& f_vals, const Eigen::VectorXd& g_vals, double a, double b) {
  if (f_vals.size() != g_vals.size()) throw std::invalid_argument("mc_inner: length mismatch");
  if (f_vals.size() == 0) throw std::invalid_argument("mc_inner: empty sample");
  return (b - a) / static_cast<double>(f_vals.size()) * f_vals.dot(g_vals);
}

double energy(const Eigen::VectorXd& u_vals, double a, double b) {
  return mc_inner(u_vals, u_vals, a, b);
}

Eigen::VectorXd eval_grid(double a, double b, int n) {
  if (n < 2) throw std::invalid_argument("eval_grid: need at least two points");
  return Eigen::VectorXd::LinSpaced(n, a, b);
}

}  // namespace eigennet
