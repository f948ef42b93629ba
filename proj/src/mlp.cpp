#include "eigennet/mlp.hpp"

#include <random>
#include <stdexcept>
#include <string>

#include "eigennet/errors.hpp"

namespace eigennet {

namespace {

std::string layer_tag(const char* block, int layer) {
  return std::string(block) + " layer " + std::to_string(layer);
}

}  // namespace

std::vector<int> MlpParams::widths() const {
  std::vector<int> w;
  w.reserve(weights.size() + 1);
  w.push_back(input_dim());
  for (const auto& m : weights) w.push_back(static_cast<int>(m.rows()));
  return w;
}

void MlpParams::validate() const {
  if (weights.empty() || weights.size() != biases.size())
    throw ConfigError("network needs matching weight/bias lists");
  for (std::size_t l = 0; l < weights.size(); ++l) {
    if (biases[l].size() != weights[l].rows())
      throw ConfigError("bias length mismatch at layer " + std::to_string(l));
    if (l + 1 < weights.size() && weights[l + 1].cols() != weights[l].rows())
      throw ConfigError("layer shapes do not chain at layer " + std::to_string(l));
    if (!weights[l].allFinite() || !biases[l].allFinite())
      throw NumericError("non-finite parameter", layer_tag("params", static_cast<int>(l)));
  }
}

ParamGrad ParamGrad::zeros_like(const MlpParams& p) {
  ParamGrad g;
  g.weights.reserve(p.weights.size());
  g.biases.reserve(p.biases.size());
  for (const auto& w : p.weights) g.weights.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
  for (const auto& b : p.biases) g.biases.push_back(Eigen::VectorXd::Zero(b.size()));
  return g;
}

ParamGrad& ParamGrad::operator+=(const ParamGrad& other) {
  for (std::size_t l = 0; l < weights.size(); ++l) {
    weights[l] += other.weights[l];
    biases[l] += other.biases[l];
  }
  return *this;
}

ParamGrad& ParamGrad::operator*=(double s) {
  for (auto& w : weights) w *= s;
  for (auto& b : biases) b *= s;
  return *this;
}

void ParamGrad::set_zero() {
  for (auto& w : weights) w.setZero();
  for (auto& b : biases) b.setZero();
}

bool ParamGrad::all_finite() const {
  for (const auto& w : weights)
    if (!w.allFinite()) return false;
  for (const auto& b : biases)
    if (!b.allFinite()) return false;
  return true;
}

double ParamGrad::squared_norm() const {
  double s = 0;
  for (const auto& w : weights) s += w.squaredNorm();
  for (const auto& b : biases) s += b.squaredNorm();
  return s;
}

MlpParams init_gaussian(const std::vector<int>& widths, std::uint64_t seed) {
  if (widths.size() < 3) throw ConfigError("need at least one hidden layer (widths must have >= 3 entries)");
  if (widths.front() != 1) throw ConfigError("input width must be 1");
  for (int w : widths)
    if (w <= 0) throw ConfigError("widths must be positive");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  MlpParams p;
  const std::size_t layers = widths.size() - 1;
  p.weights.reserve(layers);
  p.biases.reserve(layers);
  for (std::size_t l = 0; l < layers; ++l) {
    Eigen::MatrixXd w(widths[l + 1], widths[l]);
    for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = normal(rng);
    p.weights.push_back(std::move(w));
    p.biases.push_back(Eigen::VectorXd::Zero(widths[l + 1]));
  }
  return p;
}

JetBatch JetBatch::zeros(Eigen::Index outputs, Eigen::Index points) {
  return {Eigen::MatrixXd::Zero(outputs, points), Eigen::MatrixXd::Zero(outputs, points),
          Eigen::MatrixXd::Zero(outputs, points)};
}

JetBatch forward_batch(const MlpParams& params, const Eigen::VectorXd& xs, ForwardTrace* trace) {
  if (xs.size() == 0) throw std::invalid_argument("forward_batch: empty input batch");
  if (!xs.allFinite()) throw std::invalid_argument("forward_batch: non-finite input");

  const int layers = params.layer_count();
  const Eigen::Index n = xs.size();

  // Jet of the identity input: value x, slope 1, curvature 0.
  JetBatch a;
  a.v = xs.transpose();
  a.d1 = Eigen::MatrixXd::Ones(1, n);
  a.d2 = Eigen::MatrixXd::Zero(1, n);

  if (trace) {
    trace->post.assign(1, a);
    trace->pre.clear();
    trace->post.reserve(layers + 1);
    trace->pre.reserve(layers);
  }

  for (int l = 0; l < layers; ++l) {
    const Eigen::MatrixXd& w = params.weights[l];
    JetBatch z;
    z.v = (w * a.v).colwise() + params.biases[l];
    z.d1 = w * a.d1;
    z.d2 = w * a.d2;
    if (!z.v.allFinite() || !z.d1.allFinite() || !z.d2.allFinite())
      throw NumericError("non-finite activation", layer_tag("forward", l));
    if (trace) trace->pre.push_back(z);

    if (l + 1 < layers) {
      // t = tanh(u), s = sech^2(u); jet chain rule for the activation:
      //   d1 -> s * u', d2 -> s * u'' - 2 t s * u'^2
      JetBatch act;
      act.v = z.v.array().tanh();
      Eigen::ArrayXXd s = 1.0 - act.v.array().square();
      act.d1 = s * z.d1.array();
      act.d2 = s * z.d2.array() - 2.0 * act.v.array() * s * z.d1.array().square();
      a = std::move(act);
    } else {
      a = std::move(z);
    }
    if (trace) trace->post.push_back(a);
  }
  return a;
}

std::vector<Jet2> forward_jet(const MlpParams& params, double x) {
  Eigen::VectorXd xs(1);
  xs[0] = x;
  const JetBatch out = forward_batch(params, xs);
  std::vector<Jet2> jets(params.output_dim());
  for (int i = 0; i < params.output_dim(); ++i)
    jets[i] = Jet2{out.v(i, 0), out.d1(i, 0), out.d2(i, 0)};
  return jets;
}

void backward_into(const MlpParams& params, const ForwardTrace& trace, const JetBatch& cotangent,
                   ParamGrad& grad) {
  const int layers = params.layer_count();
  if (static_cast<int>(trace.pre.size()) != layers)
    throw std::invalid_argument("backward_into: trace does not match network depth");

  // Cotangents of the current activation jets, seeded at the output.
  Eigen::MatrixXd av = cotangent.v, ad1 = cotangent.d1, ad2 = cotangent.d2;

  for (int l = layers - 1; l >= 0; --l) {
    Eigen::MatrixXd zv, zd1, zd2;
    if (l == layers - 1) {
      // Final layer is linear; activation cotangent is the pre-activation one.
      zv = std::move(av);
      zd1 = std::move(ad1);
      zd2 = std::move(ad2);
    } else {
      // Adjoint of the tanh jet map. With t = tanh(u), s = 1 - t^2 and
      // input jets (u, p, q):
      //   value:  t             -> dt/du = s
      //   first:  s p           -> d/du = -2 t s p,           d/dp = s
      //   second: s q - 2 t s p^2
      //           -> d/du = -2 t s q - 2 s (s - 2 t^2) p^2,
      //              d/dp = -4 t s p,  d/dq = s
      const auto t = trace.post[l + 1].v.array();
      const auto p = trace.pre[l].d1.array();
      const auto q = trace.pre[l].d2.array();
      Eigen::ArrayXXd s = 1.0 - t.square();
      Eigen::ArrayXXd ts = t * s;
      zv = s * av.array() - 2.0 * ts * p * ad1.array() -
           (2.0 * ts * q + 2.0 * s * (s - 2.0 * t.square()) * p.square()) * ad2.array();
      zd1 = s * ad1.array() - 4.0 * ts * p * ad2.array();
      zd2 = s * ad2.array();
    }

    // Linear layer adjoint: all three jet streams feed the weight gradient.
    const JetBatch& in = trace.post[l];
    grad.weights[l].noalias() += zv * in.v.transpose();
    grad.weights[l].noalias() += zd1 * in.d1.transpose();
    grad.weights[l].noalias() += zd2 * in.d2.transpose();
    grad.biases[l] += zv.rowwise().sum();
    if (!grad.weights[l].allFinite() || !grad.biases[l].allFinite())
      throw NumericError("non-finite gradient", layer_tag("backward", l));

    if (l > 0) {
      const Eigen::MatrixXd& w = params.weights[l];
      av.noalias() = w.transpose() * zv;
      ad1.noalias() = w.transpose() * zd1;
      ad2.noalias() = w.transpose() * zd2;
    }
  }
}

ParamGrad backward(const MlpParams& params, const ForwardTrace& trace, const JetBatch& cotangent) {
  ParamGrad grad = ParamGrad::zeros_like(params);
  backward_into(params, trace, cotangent, grad);
  return grad;
}

}  // namespace eigennet
