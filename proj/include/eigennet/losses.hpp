#pragma once

#include <Eigen/Dense>
#include <vector>

#include "eigennet/mlp.hpp"
#include "eigennet/sampling.hpp"

namespace eigennet {

/// Scalar coefficients of the composite objective. `gamma` has one entry
/// per network output. `detach_rayleigh` stops gradient flow through the
/// Rayleigh quotient while keeping its value in the loss.
struct LossWeights {
  double alpha{0.1};
  double mu{0.1};
  double delta{0.5};
  double beta{1.5};
  double c{1.0};
  std::vector<double> gamma;
  double nu{2.0};
  double reg{1e-8};
  int top_k{40};
  bool detach_rayleigh{false};

  /// Paper defaults with gamma_i = 1/i for i = 1..m.
  static LossWeights defaults(int m);
  void validate(int m) const;
};

/// One evaluation of the composite objective. residual_l2, residual_inf
/// and boundary are the raw per-output sums (their alpha/mu/delta weights
/// enter only in total); energy_pen, rayleigh_pen, ortho and reg carry
/// their weights the way the corresponding operations define them.
/// `rayleigh` holds the per-output quotient values of this batch (NaN when
/// the function is numerically zero in fixed-lambda mode, where the
/// quotient is only logged, never optimized).
struct LossBreakdown {
  double residual_l2{};
  double residual_inf{};
  double boundary{};
  double energy_pen{};
  double ortho{};
  double reg{};
  double total{};
  Eigen::VectorXd rayleigh;
  Eigen::VectorXd rayleigh_pen;

  double rayleigh_pen_sum() const { return rayleigh_pen.size() ? rayleigh_pen.sum() : 0.0; }
};

/// Pointwise operator residual u'' + lambda u.
Eigen::VectorXd residual(const Eigen::VectorXd& u, const Eigen::VectorXd& u_xx, double lambda);
Eigen::VectorXd residual(const std::vector<Jet2>& jets, double lambda);

/// Quadrature-weighted squared L2 norm of the residual (weight applied by
/// the caller).
double residual_l2(const Eigen::VectorXd& r, double a, double b);

/// Sup-norm surrogate: mean of the k largest |r| values.
double residual_inf_topk(const Eigen::VectorXd& r, int k);

/// Mean absolute boundary error.
double boundary_l1(const Eigen::VectorXd& preds, const Eigen::VectorXd& targets);

/// beta * | energy - c |.
double energy_penalty(double e, double beta, double c);

/// Rayleigh quotient -<Lap u, u> / <u, u> under the Monte Carlo inner
/// product. Throws DegenerateFunctionError when <u, u> underflows the
/// denominator guard.
double rayleigh(const Eigen::VectorXd& u_vals, const Eigen::VectorXd& lap_vals, double a, double b);

/// Residual with the learned eigenvalue substituted: u'' + R u.
Eigen::VectorXd rayleigh_residual(const Eigen::VectorXd& u, const Eigen::VectorXd& u_xx, double r);
Eigen::VectorXd rayleigh_residual(const std::vector<Jet2>& jets, double r);

/// nu * sum over pairs i < j of <u_i, u_j>^2. Rows of `outputs` are the
/// per-output sample values.
double ortho_penalty(const Eigen::MatrixXd& outputs, double nu, double a, double b);

/// w * sum of squared weight entries (biases excluded).
double param_reg(const MlpParams& params, double w);

/// Assembles every term of the objective on one batch. Fixed-lambda mode
/// uses the spec's lambda in the residual; the pair modes substitute the
/// per-output Rayleigh quotient and add the Rayleigh magnitude and
/// orthogonality penalties.
LossBreakdown composite_loss(const MlpParams& params, const Batch& batch, const ProblemSpec& spec,
                             const LossWeights& weights);

/// Same evaluation, plus the exact parameter gradient accumulated into
/// `grad` (which must be shape-congruent and zeroed by the caller when a
/// fresh gradient is wanted).
LossBreakdown composite_loss_grad(const MlpParams& params, const Batch& batch,
                                  const ProblemSpec& spec, const LossWeights& weights,
                                  ParamGrad& grad);

}  // namespace eigennet
