#pragma once

#include <functional>

#include "eigennet/mlp.hpp"

namespace eigennet {

/// Relative disagreement with an absolute floor: values closer than
/// `tiny_abs` count as equal regardless of scale.
double rel_err(double x, double y, double tiny_abs = 1e-8);

/// Central finite differences of the network's forward values at x,
/// assembled into a jet for comparison against forward_jet.
Jet2 fd_jet(const MlpParams& params, int output, double x, double step = 1e-4);

/// Central finite differences of an arbitrary scalar functional of the
/// parameters, one entry per parameter. Steps scale with |theta|.
ParamGrad fd_param_grad(const MlpParams& params,
                        const std::function<double(const MlpParams&)>& f, double step = 1e-4);

/// Largest rel_err over all parameter entries of two gradients.
double max_grad_rel_err(const ParamGrad& g1, const ParamGrad& g2, double tiny_abs = 1e-8);

}  // namespace eigennet
