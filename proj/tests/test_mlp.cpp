#include <doctest.h>

#include <Eigen/Dense>
#include <random>

#include "eigennet/errors.hpp"
#include "eigennet/fd_check.hpp"
#include "eigennet/mlp.hpp"

using namespace eigennet;

TEST_SUITE_BEGIN("mlp");

TEST_CASE("init_gaussian shapes and determinism") {
  const std::vector<int> widths{1, 26, 40, 50, 40, 26, 1};
  const MlpParams p1 = init_gaussian(widths, 7);
  const MlpParams p2 = init_gaussian(widths, 7);
  REQUIRE(p1.layer_count() == 6);
  CHECK(p1.widths() == widths);
  for (int l = 0; l < 6; ++l) {
    CHECK(p1.weights[l] == p2.weights[l]);  // bit-identical per seed
    CHECK(p1.biases[l].isZero(0.0));
  }
  const MlpParams shallow = init_gaussian({1, 50, 3}, 0);
  CHECK(shallow.layer_count() == 2);
  CHECK(shallow.output_dim() == 3);
}

TEST_CASE("init_gaussian rejects bad widths") {
  CHECK_THROWS_AS(init_gaussian({1, 8}, 0), ConfigError);
  CHECK_THROWS_AS(init_gaussian({2, 8, 1}, 0), ConfigError);
  CHECK_THROWS_AS(init_gaussian({1, 0, 1}, 0), ConfigError);
  CHECK_THROWS_AS(init_gaussian({}, 0), ConfigError);
}

TEST_CASE("init_gaussian draws N(0,1) weights") {
  const MlpParams p = init_gaussian({1, 100, 100, 1}, 42);
  double sum = 0, sum2 = 0;
  long n = 0;
  for (const auto& w : p.weights) {
    sum += w.sum();
    sum2 += w.squaredNorm();
    n += w.size();
  }
  REQUIRE(n > 10000);
  const double mean = sum / n;
  const double stddev = std::sqrt(sum2 / n - mean * mean);
  CHECK(mean > -0.05);
  CHECK(mean < 0.05);
  CHECK(stddev > 0.95);
  CHECK(stddev < 1.05);
}

TEST_CASE("constant network: zero weights, output bias") {
  MlpParams p = init_gaussian({1, 8, 8, 1}, 3);
  for (auto& w : p.weights) w.setZero();
  p.biases.back()[0] = 2.5;
  for (double x : {-1.0, 0.0, 3.0}) {
    const auto jets = forward_jet(p, x);
    CHECK(jets[0].v == 2.5);
    CHECK(jets[0].d1 == 0.0);
    CHECK(jets[0].d2 == 0.0);
  }
}

TEST_CASE("single linear layer is affine") {
  MlpParams p;
  p.weights.push_back(Eigen::MatrixXd::Constant(1, 1, -1.7));
  p.biases.push_back(Eigen::VectorXd::Constant(1, 0.4));
  const auto jets = forward_jet(p, 2.0);
  CHECK(jets[0].v == doctest::Approx(-1.7 * 2.0 + 0.4));
  CHECK(jets[0].d1 == -1.7);
  CHECK(jets[0].d2 == 0.0);
}

TEST_CASE("jet consistency with finite differences at 100 points") {
  const MlpParams p = init_gaussian({1, 8, 8, 1}, 11);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> xs(-2.0, 2.0);
  for (int t = 0; t < 100; ++t) {
    const double x = xs(rng);
    const Jet2 ad = forward_jet(p, x)[0];
    const Jet2 fd = fd_jet(p, 0, x);
    CHECK(rel_err(ad.d1, fd.d1) < 1e-6);
    CHECK(rel_err(ad.d2, fd.d2) < 1e-6);
  }
}

TEST_CASE("forward is deterministic and batch matches scalar path") {
  const MlpParams p = init_gaussian({1, 10, 12, 2}, 9);
  const auto j1 = forward_jet(p, 0.37);
  const auto j2 = forward_jet(p, 0.37);
  for (int i = 0; i < 2; ++i) {
    CHECK(j1[i].v == j2[i].v);
    CHECK(j1[i].d1 == j2[i].d1);
    CHECK(j1[i].d2 == j2[i].d2);
  }
  Eigen::VectorXd xs(3);
  xs << -0.5, 0.37, 1.1;
  const JetBatch out = forward_batch(p, xs);
  for (int i = 0; i < 2; ++i) {
    CHECK(out.v(i, 1) == j1[i].v);
    CHECK(out.d1(i, 1) == j1[i].d1);
    CHECK(out.d2(i, 1) == j1[i].d2);
  }
}

TEST_CASE("block-diagonal network sums the head jets") {
  // Stack two independent nets: hidden layers block-diagonal, final layer
  // the concatenation of both heads. The combined output is then the sum of
  // the two original outputs, and so are its jets.
  const MlpParams a = init_gaussian({1, 6, 5, 1}, 21);
  const MlpParams b = init_gaussian({1, 4, 7, 1}, 22);
  MlpParams c;

  Eigen::MatrixXd w0(a.weights[0].rows() + b.weights[0].rows(), 1);
  w0 << a.weights[0], b.weights[0];
  c.weights.push_back(w0);

  Eigen::MatrixXd w1 = Eigen::MatrixXd::Zero(a.weights[1].rows() + b.weights[1].rows(),
                                             a.weights[1].cols() + b.weights[1].cols());
  w1.topLeftCorner(a.weights[1].rows(), a.weights[1].cols()) = a.weights[1];
  w1.bottomRightCorner(b.weights[1].rows(), b.weights[1].cols()) = b.weights[1];
  c.weights.push_back(w1);

  Eigen::MatrixXd w2(1, a.weights[2].cols() + b.weights[2].cols());
  w2 << a.weights[2], b.weights[2];
  c.weights.push_back(w2);

  for (int l = 0; l < 2; ++l) {
    Eigen::VectorXd bias(a.biases[l].size() + b.biases[l].size());
    bias << a.biases[l], b.biases[l];
    c.biases.push_back(bias);
  }
  c.biases.push_back(Eigen::VectorXd::Constant(1, a.biases[2][0] + b.biases[2][0]));
  c.validate();

  for (double x : {-0.9, 0.1, 1.4}) {
    const Jet2 ja = forward_jet(a, x)[0];
    const Jet2 jb = forward_jet(b, x)[0];
    const Jet2 jc = forward_jet(c, x)[0];
    CHECK(jc.v == doctest::Approx(ja.v + jb.v).epsilon(1e-14));
    CHECK(jc.d1 == doctest::Approx(ja.d1 + jb.d1).epsilon(1e-14));
    CHECK(jc.d2 == doctest::Approx(ja.d2 + jb.d2).epsilon(1e-13));
  }
}

TEST_CASE("backward: loss u(x0)^2 on zero-output network") {
  MlpParams p = init_gaussian({1, 8, 8, 1}, 17);
  p.weights.back().setZero();  // u == 0 but hidden features nonzero
  Eigen::VectorXd xs(1);
  xs << 0.3;
  ForwardTrace trace;
  const JetBatch out = forward_batch(p, xs, &trace);
  JetBatch cot = JetBatch::zeros(1, 1);
  cot.v(0, 0) = 2.0 * out.v(0, 0);  // d(u^2)/du
  const ParamGrad g = backward(p, trace, cot);
  CHECK(g.weights.back().isZero(0.0));  // d(u^2)/dW_last = 2u * a = 0
}

TEST_CASE("backward: affine layer gradient") {
  MlpParams p;
  p.weights.push_back(Eigen::MatrixXd::Constant(1, 1, 0.8));
  p.biases.push_back(Eigen::VectorXd::Constant(1, -0.2));
  Eigen::VectorXd xs(1);
  xs << 1.9;
  ForwardTrace trace;
  forward_batch(p, xs, &trace);
  JetBatch cot = JetBatch::zeros(1, 1);
  cot.v(0, 0) = 1.0;  // loss = u(x0)
  const ParamGrad g = backward(p, trace, cot);
  CHECK(g.weights[0](0, 0) == doctest::Approx(1.9));
  CHECK(g.biases[0][0] == doctest::Approx(1.0));
}

TEST_CASE("backward matches finite differences through u'' paths") {
  const MlpParams p = init_gaussian({1, 8, 8, 1}, 23);
  const double x0 = 0.45;

  auto loss = [&](const MlpParams& q) {
    const Jet2 j = forward_jet(q, x0)[0];
    const double r = j.d2 + 4.0 * j.v;
    return r * r;
  };

  Eigen::VectorXd xs(1);
  xs << x0;
  ForwardTrace trace;
  const JetBatch out = forward_batch(p, xs, &trace);
  const double r = out.d2(0, 0) + 4.0 * out.v(0, 0);
  JetBatch cot = JetBatch::zeros(1, 1);
  cot.v(0, 0) = 2.0 * r * 4.0;
  cot.d2(0, 0) = 2.0 * r;
  const ParamGrad ad = backward(p, trace, cot);
  const ParamGrad fd = fd_param_grad(p, loss);
  CHECK(max_grad_rel_err(ad, fd) < 1e-5);
}

TEST_CASE("backward matches finite differences through u' paths") {
  const MlpParams p = init_gaussian({1, 6, 6, 1}, 29);
  const double x0 = -0.8;
  auto loss = [&](const MlpParams& q) {
    const Jet2 j = forward_jet(q, x0)[0];
    return j.d1 * j.d1;
  };
  Eigen::VectorXd xs(1);
  xs << x0;
  ForwardTrace trace;
  const JetBatch out = forward_batch(p, xs, &trace);
  JetBatch cot = JetBatch::zeros(1, 1);
  cot.d1(0, 0) = 2.0 * out.d1(0, 0);
  const ParamGrad ad = backward(p, trace, cot);
  const ParamGrad fd = fd_param_grad(p, loss);
  CHECK(max_grad_rel_err(ad, fd) < 1e-5);
}

TEST_CASE("forward rejects non-finite inputs and flags overflow by layer") {
  const MlpParams p = init_gaussian({1, 8, 8, 1}, 31);
  Eigen::VectorXd xs(1);
  xs << std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(forward_batch(p, xs), std::invalid_argument);

  MlpParams huge = p;
  huge.weights[1].setConstant(1e200);
  huge.weights[2].setConstant(1e200);
  Eigen::VectorXd ok(1);
  ok << 0.5;
  CHECK_THROWS_AS(forward_batch(huge, ok), NumericError);
}

TEST_SUITE_END();
