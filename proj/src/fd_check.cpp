#include "eigennet/fd_check.hpp"

#include <algorithm>
#include <cmath>

namespace eigennet {

double rel_err(double x, double y, double tiny_abs) {
  const double diff = std::abs(x - y);
  if (diff < tiny_abs) return 0.0;
  return diff / std::max(std::abs(x), std::abs(y));
}

Jet2 fd_jet(const MlpParams& params, int output, double x, double step) {
  auto value = [&](double at) { return forward_jet(params, at)[static_cast<std::size_t>(output)].v; };
  const double fp = value(x + step);
  const double fm = value(x - step);
  const double f0 = value(x);
  Jet2 j;
  j.v = f0;
  j.d1 = (fp - fm) / (2.0 * step);
  j.d2 = (fp - 2.0 * f0 + fm) / (step * step);
  return j;
}

ParamGrad fd_param_grad(const MlpParams& params, const std::function<double(const MlpParams&)>& f,
                        double step) {
  MlpParams probe = params;
  ParamGrad g = ParamGrad::zeros_like(params);
  auto central = [&](double& theta, double& slot) {
    const double saved = theta;
    const double h = step * std::max(1.0, std::abs(saved));
    theta = saved + h;
    const double fp = f(probe);
    theta = saved - h;
    const double fm = f(probe);
    theta = saved;
    slot = (fp - fm) / (2.0 * h);
  };
  for (std::size_t l = 0; l < params.weights.size(); ++l) {
    for (Eigen::Index i = 0; i < probe.weights[l].size(); ++i)
      central(probe.weights[l].data()[i], g.weights[l].data()[i]);
    for (Eigen::Index i = 0; i < probe.biases[l].size(); ++i)
      central(probe.biases[l].data()[i], g.biases[l].data()[i]);
  }
  return g;
}

double max_grad_rel_err(const ParamGrad& g1, const ParamGrad& g2, double tiny_abs) {
  double worst = 0.0;
  for (std::size_t l = 0; l < g1.weights.size(); ++l) {
    for (Eigen::Index i = 0; i < g1.weights[l].size(); ++i)
      worst = std::max(worst, rel_err(g1.weights[l].data()[i], g2.weights[l].data()[i], tiny_abs));
    for (Eigen::Index i = 0; i < g1.biases[l].size(); ++i)
      worst = std::max(worst, rel_err(g1.biases[l].data()[i], g2.biases[l].data()[i], tiny_abs));
  }
  return worst;
}

}  // namespace eigennet
