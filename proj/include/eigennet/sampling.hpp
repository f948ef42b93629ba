#pragma once

#include <Eigen/Dense>
#include <random>
#include <vector>

namespace eigennet {

enum class Mode { FixedLambda, SinglePair, MultiPair };

struct BoundaryCondition {
  double x{};
  double value{};
};

/// Interval, boundary conditions and which experiment family is being run.
struct ProblemSpec {
  double a{0.0};
  double b{1.0};
  std::vector<BoundaryCondition> bc;
  Mode mode{Mode::SinglePair};
  double lambda{0.0};   // used by Mode::FixedLambda only
  int num_outputs{1};   // m

  /// Throws ConfigError when an invariant is violated (a >= b, boundary
  /// point off the endpoints, m < 1, ...).
  void validate() const;
};

struct Batch {
  Eigen::VectorXd interior;
  Eigen::VectorXd boundary_x;
  Eigen::VectorXd boundary_target;
};

/// n i.i.d. uniform draws on the open interval (a, b).
Eigen::VectorXd sample_interior(const ProblemSpec& spec, int n, std::mt19937_64& rng);

/// n draws with repetition from the spec's boundary conditions; repetition
/// is the intended weighting of the two endpoints.
void sample_boundary(const ProblemSpec& spec, int n, std::mt19937_64& rng,
                     Eigen::VectorXd& xs, Eigen::VectorXd& targets);

Batch sample_batch(const ProblemSpec& spec, int n_interior, int n_boundary, std::mt19937_64& rng);

/// Monte Carlo inner product: (b-a)/N * sum f(x_i) g(x_i) over common points.
double mc_inner(const Eigen::VectorXd& f_vals, const Eigen::VectorXd& g_vals, double a, double b);

/// Quadrature of the squared function, i.e. mc_inner(u, u).
double energy(const Eigen::VectorXd& u_vals, double a, double b);

/// Uniform grid of n points including both endpoints, for evaluation dumps.
Eigen::VectorXd eval_grid(double a, double b, int n);

}  // namespace eigennet
