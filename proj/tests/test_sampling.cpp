#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "eigennet/errors.hpp"
#include "eigennet/sampling.hpp"

using namespace eigennet;

namespace {
constexpr double kPi = std::numbers::pi;

ProblemSpec dirichlet_pi() {
  ProblemSpec s;
  s.a = 0.0;
  s.b = kPi;
  s.bc = {{0.0, 0.0}, {kPi, 0.0}};
  s.mode = Mode::SinglePair;
  return s;
}
}  // namespace

TEST_SUITE_BEGIN("sampling");

TEST_CASE("spec validation") {
  ProblemSpec s = dirichlet_pi();
  CHECK_NOTHROW(s.validate());
  s.b = -1;
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s = dirichlet_pi();
  s.bc.push_back({1.0, 0.0});  // off-endpoint
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s = dirichlet_pi();
  s.num_outputs = 3;  // m > 1 needs multi-pair mode
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s.mode = Mode::MultiPair;
  CHECK_NOTHROW(s.validate());
}

TEST_CASE("interior sampling is in-range and seed-deterministic") {
  const ProblemSpec s = dirichlet_pi();
  std::mt19937_64 r1(1), r2(1);
  const Eigen::VectorXd a = sample_interior(s, 5, r1);
  const Eigen::VectorXd b = sample_interior(s, 5, r2);
  CHECK(a == b);
  for (int i = 0; i < 5; ++i) {
    CHECK(a[i] > 0.0);
    CHECK(a[i] < kPi);
  }
  std::mt19937_64 r3(9);
  const Eigen::VectorXd one = sample_interior(s, 1, r3);
  CHECK(one.size() == 1);
}

TEST_CASE("interior sample mean matches the uniform law") {
  const ProblemSpec s = dirichlet_pi();
  std::mt19937_64 rng(123);
  const Eigen::VectorXd xs = sample_interior(s, 45000, rng);
  const double sigma = (kPi / std::sqrt(12.0)) / std::sqrt(45000.0);
  CHECK(std::abs(xs.mean() - kPi / 2) < 3 * sigma);
}

TEST_CASE("boundary sampling draws from the condition set") {
  ProblemSpec s = dirichlet_pi();
  s.bc = {{0.0, 0.0}, {kPi, 1.0}};
  std::mt19937_64 rng(7);
  Eigen::VectorXd xs, targets;
  sample_boundary(s, 1200, rng, xs, targets);
  int at_a = 0;
  for (int i = 0; i < 1200; ++i) {
    const bool is_a = xs[i] == 0.0 && targets[i] == 0.0;
    const bool is_b = xs[i] == kPi && targets[i] == 1.0;
    CHECK((is_a || is_b));
    at_a += is_a;
  }
  // Binomial(1200, 1/2): 3 sigma around 600.
  const double sigma = std::sqrt(1200 * 0.25);
  CHECK(std::abs(at_a - 600.0) < 3 * sigma);

  s.bc = {{0.0, 0.0}};
  sample_boundary(s, 3, rng, xs, targets);
  CHECK(xs.size() == 3);
  CHECK(xs.isZero(0.0));

  s.bc.clear();
  CHECK_THROWS_AS(sample_boundary(s, 3, rng, xs, targets), ConfigError);
}

TEST_CASE("mc_inner basics") {
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(137);
  CHECK(mc_inner(ones, ones, 0.0, kPi) == doctest::Approx(kPi).epsilon(1e-14));
  CHECK(energy(ones, 0.0, kPi) == doctest::Approx(kPi).epsilon(1e-14));
  CHECK(energy(Eigen::VectorXd::Zero(10), 0.0, kPi) == 0.0);

  Eigen::VectorXd a(2), b(3);
  CHECK_THROWS_AS(mc_inner(a, b, 0.0, 1.0), std::invalid_argument);
  Eigen::VectorXd empty;
  CHECK_THROWS_AS(energy(empty, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("mc_inner against analytic integrals") {
  const ProblemSpec s = dirichlet_pi();
  std::mt19937_64 rng(2024);
  const Eigen::VectorXd xs = sample_interior(s, 10000, rng);
  const Eigen::VectorXd s1 = xs.array().sin();
  const Eigen::VectorXd s2 = (2.0 * xs.array()).sin();
  CHECK(std::abs(mc_inner(s1, s2, 0.0, kPi)) < 0.05);                 // orthogonal pair
  CHECK(mc_inner(s1, s1, 0.0, kPi) == doctest::Approx(kPi / 2).epsilon(0.05 / (kPi / 2)));
  const Eigen::VectorXd unit = std::sqrt(2.0 / kPi) * s1.array();
  CHECK(energy(unit, 0.0, kPi) == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("mc_inner is symmetric and bilinear") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n(0, 1);
  Eigen::VectorXd f(64), g(64), h(64);
  for (int i = 0; i < 64; ++i) {
    f[i] = n(rng);
    g[i] = n(rng);
    h[i] = n(rng);
  }
  const double afg = mc_inner(f, g, -1.0, 2.0);
  CHECK(afg == doctest::Approx(mc_inner(g, f, -1.0, 2.0)).epsilon(1e-14));
  const double lhs = mc_inner(2.5 * f + h, g, -1.0, 2.0);
  CHECK(lhs == doctest::Approx(2.5 * afg + mc_inner(h, g, -1.0, 2.0)).epsilon(1e-12));
}

TEST_CASE("energy scales quadratically under dilation") {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> n(0, 1);
  Eigen::VectorXd u(33);
  for (int i = 0; i < 33; ++i) u[i] = n(rng);
  for (double alpha : {0.5, -3.0, 7.25}) {
    CHECK(energy(alpha * u, 0.0, 1.0) ==
          doctest::Approx(alpha * alpha * energy(u, 0.0, 1.0)).epsilon(1e-12));
  }
}

TEST_CASE("quadrature error decays like 1/sqrt(N)") {
  const ProblemSpec s = dirichlet_pi();
  std::mt19937_64 rng(31);
  const double exact = kPi / 2;  // integral of sin^2 over [0, pi]
  double rms[3] = {0, 0, 0};
  const int ns[3] = {100, 10000, 1000000};
  const int reps = 12;
  for (int t = 0; t < 3; ++t) {
    double acc = 0;
    for (int rep = 0; rep < reps; ++rep) {
      const Eigen::VectorXd xs = sample_interior(s, ns[t], rng);
      const Eigen::VectorXd sv = xs.array().sin();
      const double err = mc_inner(sv, sv, 0.0, kPi) - exact;
      acc += err * err;
    }
    rms[t] = std::sqrt(acc / reps);
  }
  // Each factor-100 increase in N should shrink the RMS error about 10x.
  CHECK(rms[0] / rms[1] > 3.0);
  CHECK(rms[0] / rms[1] < 33.0);
  CHECK(rms[1] / rms[2] > 3.0);
  CHECK(rms[1] / rms[2] < 33.0);
}

TEST_CASE("eval_grid spans the interval inclusively") {
  const Eigen::VectorXd g = eval_grid(0.0, kPi, 11);
  CHECK(g.size() == 11);
  CHECK(g[0] == 0.0);
  CHECK(g[10] == doctest::Approx(kPi).epsilon(1e-15));
  CHECK_THROWS_AS(eval_grid(0.0, 1.0, 1), std::invalid_argument);
}

TEST_SUITE_END();
