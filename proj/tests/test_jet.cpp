#include <doctest.h>

#include <cmath>

#include "eigennet/jet.hpp"

using eigennet::Jet2;

TEST_SUITE_BEGIN("jet");

TEST_CASE("identity jet") {
  const Jet2 x = Jet2::variable(0.7);
  CHECK(x.v == 0.7);
  CHECK(x.d1 == 1.0);
  CHECK(x.d2 == 0.0);
}

TEST_CASE("chain rule to second order through composition") {
  // h(x) = tanh(sin(x)^2); compare against hand-differentiated forms.
  const double x = 0.43;
  const Jet2 f = sin(Jet2::variable(x)) * sin(Jet2::variable(x));
  const Jet2 h = tanh(f);

  const double s = std::sin(x), c = std::cos(x);
  const double fv = s * s;
  const double f1 = 2 * s * c;
  const double f2 = 2 * (c * c - s * s);
  const double t = std::tanh(fv);
  const double tp = 1 - t * t;
  const double tpp = -2 * t * tp;
  CHECK(h.v == doctest::Approx(t).epsilon(1e-14));
  CHECK(h.d1 == doctest::Approx(tp * f1).epsilon(1e-14));
  CHECK(h.d2 == doctest::Approx(tpp * f1 * f1 + tp * f2).epsilon(1e-14));
}

TEST_CASE("product and quotient rules") {
  const Jet2 x = Jet2::variable(1.3);
  const Jet2 p = sin(x) * cos(x);
  // sin cos = sin(2x)/2
  CHECK(p.v == doctest::Approx(0.5 * std::sin(2.6)).epsilon(1e-14));
  CHECK(p.d1 == doctest::Approx(std::cos(2.6)).epsilon(1e-14));
  CHECK(p.d2 == doctest::Approx(-2 * std::sin(2.6)).epsilon(1e-14));

  const Jet2 q = sin(x) / cos(x);  // tan
  const double sec2 = 1.0 / (std::cos(1.3) * std::cos(1.3));
  CHECK(q.v == doctest::Approx(std::tan(1.3)).epsilon(1e-14));
  CHECK(q.d1 == doctest::Approx(sec2).epsilon(1e-14));
  CHECK(q.d2 == doctest::Approx(2 * std::tan(1.3) * sec2).epsilon(1e-13));
}

TEST_CASE("hyperbolic jets solve u'' = u") {
  for (double x : {-1.2, 0.0, 0.8, 2.0}) {
    const Jet2 u = sinh(Jet2::variable(x));
    CHECK(u.d2 == doctest::Approx(u.v).epsilon(1e-14));
    const Jet2 w = cosh(Jet2::variable(x));
    CHECK(w.d2 == doctest::Approx(w.v).epsilon(1e-14));
  }
}

TEST_CASE("scalar mixing and exp/sqrt") {
  const Jet2 x = Jet2::variable(0.9);
  const Jet2 g = 2.0 * exp(x) - 1.0;
  CHECK(g.v == doctest::Approx(2 * std::exp(0.9) - 1).epsilon(1e-14));
  CHECK(g.d1 == doctest::Approx(2 * std::exp(0.9)).epsilon(1e-14));
  CHECK(g.d2 == doctest::Approx(2 * std::exp(0.9)).epsilon(1e-14));

  const Jet2 r = sqrt(x);
  CHECK(r.d1 == doctest::Approx(0.5 / std::sqrt(0.9)).epsilon(1e-14));
  CHECK(r.d2 == doctest::Approx(-0.25 * std::pow(0.9, -1.5)).epsilon(1e-14));
}

TEST_SUITE_END();
