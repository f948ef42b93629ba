#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "eigennet/jet.hpp"

namespace eigennet {

/// Weights and biases of the 1-input, m-output tanh MLP. Hidden layers use
/// tanh, the final layer is linear. Layer l maps widths[l] -> widths[l+1].
struct MlpParams {
  std::vector<Eigen::MatrixXd> weights;  // each out x in
  std::vector<Eigen::VectorXd> biases;   // each out

  int layer_count() const { return static_cast<int>(weights.size()); }
  int input_dim() const { return static_cast<int>(weights.front().cols()); }
  int output_dim() const { return static_cast<int>(weights.back().rows()); }
  std::vector<int> widths() const;

  /// Throws ConfigError on shape mismatch, NumericError on non-finite entry.
  void validate() const;
};

/// Gradient (or moment) buffer shape-congruent with an MlpParams.
struct ParamGrad {
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;

  static ParamGrad zeros_like(const MlpParams& p);
  ParamGrad& operator+=(const ParamGrad& other);
  ParamGrad& operator*=(double s);
  void set_zero();
  bool all_finite() const;
  double squared_norm() const;
};

/// Gaussian N(0,1) weights from the seeded generator, zero biases.
/// widths must start at 1 and have at least three entries.
MlpParams init_gaussian(const std::vector<int>& widths, std::uint64_t seed);

/// Value / first / second derivative of every output at every sample point.
/// Rows index outputs, columns index points.
struct JetBatch {
  Eigen::MatrixXd v, d1, d2;

  static JetBatch zeros(Eigen::Index outputs, Eigen::Index points);
};

/// Per-layer jets cached by the forward pass so the backward pass can run
/// without recomputation. post[l] holds the layer-l activations (post[0] is
/// the input jet), pre[l] the pre-activation jets of layer l+1.
struct ForwardTrace {
  std::vector<JetBatch> post;
  std::vector<JetBatch> pre;
};

/// Propagates (x, 1, 0) jets through the network for a whole batch of
/// inputs. When trace is non-null the intermediate states are recorded for
/// backward(). Throws NumericError naming the layer if a non-finite value
/// appears.
JetBatch forward_batch(const MlpParams& params, const Eigen::VectorXd& xs,
                       ForwardTrace* trace = nullptr);

/// Single-point convenience wrapper: the m output jets at x.
std::vector<Jet2> forward_jet(const MlpParams& params, double x);

/// Reverse pass: given d(loss)/d(output jets) for every point in the traced
/// batch, accumulates exact d(loss)/d(parameter) into grad. Cotangent paths
/// through d1 and d2 are included. Throws NumericError naming the parameter
/// block if a gradient entry is non-finite.
void backward_into(const MlpParams& params, const ForwardTrace& trace,
                   const JetBatch& cotangent, ParamGrad& grad);

ParamGrad backward(const MlpParams& params, const ForwardTrace& trace,
                   const JetBatch& cotangent);

}  // namespace eigennet
