#include "eigennet/losses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "eigennet/errors.hpp"

namespace eigennet {

namespace {

constexpr double kEnergyGuard = 1e-12;

double sign(double x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); }

std::vector<int> topk_indices(const Eigen::VectorXd& r, int k) {
  std::vector<int> idx(static_cast<std::size_t>(r.size()));
  std::iota(idx.begin(), idx.end(), 0);
  std::nth_element(idx.begin(), idx.begin() + (k - 1), idx.end(),
                   [&](int i, int j) { return std::abs(r[i]) > std::abs(r[j]); });
  idx.resize(static_cast<std::size_t>(k));
  return idx;
}

Eigen::VectorXd jet_values(const std::vector<Jet2>& jets) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(jets.size()));
  for (std::size_t i = 0; i < jets.size(); ++i) v[static_cast<Eigen::Index>(i)] = jets[i].v;
  return v;
}

Eigen::VectorXd jet_second(const std::vector<Jet2>& jets) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(jets.size()));
  for (std::size_t i = 0; i < jets.size(); ++i) v[static_cast<Eigen::Index>(i)] = jets[i].d2;
  return v;
}

}  // namespace

LossWeights LossWeights::defaults(int m) {
  LossWeights w;
  w.gamma.resize(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) w.gamma[static_cast<std::size_t>(i)] = 1.0 / (i + 1);
  return w;
}

void LossWeights::validate(int m) const {
  if (alpha < 0 || mu < 0 || delta < 0 || beta < 0 || nu < 0 || reg < 0)
    throw ConfigError("weights: all loss weights must be >= 0");
  if (!(c > 0)) throw ConfigError("weights.c: target energy must be > 0");
  if (top_k < 1) throw ConfigError("weights.top_k: must be >= 1");
  if (static_cast<int>(gamma.size()) != m)
    throw ConfigError("weights.gamma: need one entry per output");
  for (double g : gamma)
    if (g < 0) throw ConfigError("weights.gamma: entries must be >= 0");
}

Eigen::VectorXd residual(const Eigen::VectorXd& u, const Eigen::VectorXd& u_xx, double lambda) {
  if (u.size() != u_xx.size()) throw std::invalid_argument("residual: length mismatch");
  return u_xx + lambda * u;
}

Eigen::VectorXd residual(const std::vector<Jet2>& jets, double lambda) {
  return residual(jet_values(jets), jet_second(jets), lambda);
}

double residual_l2(const Eigen::VectorXd& r, double a, double b) { return mc_inner(r, r, a, b); }

double residual_inf_topk(const Eigen::VectorXd& r, int k) {
  if (k < 1 || k > r.size()) throw std::invalid_argument("residual_inf_topk: need 1 <= k <= len(r)");
  const auto idx = topk_indices(r, k);
  double s = 0;
  for (int i : idx) s += std::abs(r[i]);
  return s / static_cast<double>(k);
}

double boundary_l1(const Eigen::VectorXd& preds, const Eigen::VectorXd& targets) {
  if (preds.size() != targets.size()) throw std::invalid_argument("boundary_l1: length mismatch");
  if (preds.size() == 0) throw std::invalid_argument("boundary_l1: empty batch");
  return (preds - targets).cwiseAbs().mean();
}

double energy_penalty(double e, double beta, double c) { return beta * std::abs(e - c); }

double rayleigh(const Eigen::VectorXd& u_vals, const Eigen::VectorXd& lap_vals, double a, double b) {
  const double denom = mc_inner(u_vals, u_vals, a, b);
  if (denom < kEnergyGuard)
    throw DegenerateFunctionError("rayleigh: <u,u> below denominator guard");
  return -mc_inner(lap_vals, u_vals, a, b) / denom;
}

Eigen::VectorXd rayleigh_residual(const Eigen::VectorXd& u, const Eigen::VectorXd& u_xx, double r) {
  return residual(u, u_xx, r);
}

Eigen::VectorXd rayleigh_residual(const std::vector<Jet2>& jets, double r) {
  return residual(jets, r);
}

double ortho_penalty(const Eigen::MatrixXd& outputs, double nu, double a, double b) {
  const Eigen::Index m = outputs.rows();
  const double scale = (b - a) / static_cast<double>(outputs.cols());
  double s = 0;
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = i + 1; j < m; ++j) {
      const double inner = scale * outputs.row(i).dot(outputs.row(j));
      s += inner * inner;
    }
  return nu * s;
}

double param_reg(const MlpParams& params, double w) {
  double s = 0;
  for (const auto& mat : params.weights) s += mat.squaredNorm();
  return w * s;
}

namespace {

LossBreakdown composite_impl(const MlpParams& params, const Batch& batch, const ProblemSpec& spec,
                             const LossWeights& weights, ParamGrad* grad) {
  spec.validate();
  const int m = spec.num_outputs;
  weights.validate(m);
  if (params.output_dim() != m) throw ConfigError("network output count does not match spec m");

  const Eigen::Index n = batch.interior.size();
  const Eigen::Index nb = batch.boundary_x.size();
  if (n == 0 || nb == 0) throw std::invalid_argument("composite_loss: empty batch");
  if (weights.top_k > n) throw std::invalid_argument("composite_loss: top_k exceeds batch size");
  const double quad = (spec.b - spec.a) / static_cast<double>(n);
  const bool pair_mode = spec.mode != Mode::FixedLambda;

  ForwardTrace trace_in, trace_bd;
  const JetBatch out = forward_batch(params, batch.interior, grad ? &trace_in : nullptr);
  const JetBatch bout = forward_batch(params, batch.boundary_x, grad ? &trace_bd : nullptr);

  LossBreakdown lb;
  lb.rayleigh = Eigen::VectorXd::Constant(m, std::numeric_limits<double>::quiet_NaN());
  lb.rayleigh_pen = Eigen::VectorXd::Zero(m);

  // Per-point cotangents of the interior/boundary output jets, filled while
  // the terms are assembled and pushed through the network afterwards.
  JetBatch cot_in, cot_bd;
  if (grad) {
    cot_in = JetBatch::zeros(m, n);
    cot_bd = JetBatch::zeros(m, nb);
  }

  for (int i = 0; i < m; ++i) {
    const Eigen::VectorXd v = out.v.row(i).transpose();
    const Eigen::VectorXd d2 = out.d2.row(i).transpose();
    const double e_i = quad * v.squaredNorm();

    double lam = spec.lambda;
    double r_quot = std::numeric_limits<double>::quiet_NaN();
    if (pair_mode) {
      if (e_i < kEnergyGuard)
        throw DegenerateFunctionError("composite_loss: output " + std::to_string(i + 1) +
                                      " is numerically zero");
      r_quot = -(quad * d2.dot(v)) / e_i;
      lam = r_quot;
      lb.rayleigh_pen[i] = weights.gamma[static_cast<std::size_t>(i)] * r_quot * r_quot;
    } else if (e_i >= kEnergyGuard) {
      r_quot = -(quad * d2.dot(v)) / e_i;  // logged only
    }
    lb.rayleigh[i] = r_quot;

    const Eigen::VectorXd r = d2 + lam * v;
    const double res2 = quad * r.squaredNorm();
    const auto top = topk_indices(r, weights.top_k);
    double inf_sum = 0;
    for (int p : top) inf_sum += std::abs(r[p]);
    const double res_inf = inf_sum / static_cast<double>(weights.top_k);

    const Eigen::VectorXd bv = bout.v.row(i).transpose();
    const double bnd = (bv - batch.boundary_target).cwiseAbs().mean();

    lb.residual_l2 += res2;
    lb.residual_inf += res_inf;
    lb.boundary += bnd;
    lb.energy_pen += weights.beta * std::abs(e_i - weights.c);

    if (grad) {
      // d(loss)/dr per point: the L2 term plus the top-K subgradient.
      Eigen::VectorXd g_r = (2.0 * weights.alpha * quad) * r;
      for (int p : top)
        g_r[p] += weights.mu / static_cast<double>(weights.top_k) * sign(r[p]);

      cot_in.d2.row(i) += g_r.transpose();
      cot_in.v.row(i) += lam * g_r.transpose();

      // Energy penalty: d|e - c|/dv_p = sign(e - c) * 2 quad v_p.
      cot_in.v.row(i) +=
          (weights.beta * sign(e_i - weights.c) * 2.0 * quad) * v.transpose();

      // Boundary L1.
      for (Eigen::Index q = 0; q < nb; ++q)
        cot_bd.v(i, q) += weights.delta / static_cast<double>(nb) * sign(bv[q] - batch.boundary_target[q]);

      if (pair_mode && !weights.detach_rayleigh) {
        // R feeds the residual (via lambda) and the magnitude penalty.
        double r_bar = g_r.dot(v);
        r_bar += 2.0 * weights.gamma[static_cast<std::size_t>(i)] * r_quot;
        // R = -A/B with A = quad d2.v, B = quad v.v:
        //   dR/d(d2_p) = -quad v_p / B
        //   dR/d(v_p)  = -quad (d2_p + 2 R v_p) / B
        const double coeff = -r_bar * quad / e_i;
        cot_in.d2.row(i) += coeff * v.transpose();
        cot_in.v.row(i) += coeff * (d2 + 2.0 * r_quot * v).transpose();
      }
    }
  }

  if (pair_mode && m > 1) {
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) {
        const double inner = quad * out.v.row(i).dot(out.v.row(j));
        lb.ortho += weights.nu * inner * inner;
        if (grad) {
          const double g_s = 2.0 * weights.nu * inner * quad;
          cot_in.v.row(i) += g_s * out.v.row(j);
          cot_in.v.row(j) += g_s * out.v.row(i);
        }
      }
  }

  lb.reg = param_reg(params, weights.reg);
  lb.total = weights.alpha * lb.residual_l2 + weights.mu * lb.residual_inf +
             weights.delta * lb.boundary + lb.energy_pen + lb.rayleigh_pen.sum() + lb.ortho +
             lb.reg;
  if (!std::isfinite(lb.total)) throw NumericError("non-finite loss", "composite_loss");

  if (grad) {
    backward_into(params, trace_in, cot_in, *grad);
    backward_into(params, trace_bd, cot_bd, *grad);
    for (std::size_t l = 0; l < params.weights.size(); ++l)
      grad->weights[l] += (2.0 * weights.reg) * params.weights[l];
  }
  return lb;
}

}  // namespace

LossBreakdown composite_loss(const MlpParams& params, const Batch& batch, const ProblemSpec& spec,
                             const LossWeights& weights) {
  return composite_impl(params, batch, spec, weights, nullptr);
}

LossBreakdown composite_loss_grad(const MlpParams& params, const Batch& batch,
                                  const ProblemSpec& spec, const LossWeights& weights,
                                  ParamGrad& grad) {
  return composite_impl(params, batch, spec, weights, &grad);
}

}  // namespace eigennet
