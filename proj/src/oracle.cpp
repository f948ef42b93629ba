#include "eigennet/oracle.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "eigennet/errors.hpp"

namespace eigennet {

namespace {
constexpr double kPi = std::numbers::pi;
}

Eigen::VectorXd AnalyticSolution::values(const Eigen::VectorXd& xs) const {
  Eigen::VectorXd v(xs.size());
  for (Eigen::Index i = 0; i < xs.size(); ++i) v[i] = eval(xs[i]).v;
  return v;
}

AnalyticSolution analytic_eigenpair(int k, double a, double b) {
  if (k < 1) throw ConfigError("analytic_eigenpair: k must be >= 1");
  if (!(a < b)) throw ConfigError("analytic_eigenpair: need a < b");
  const double len = b - a;
  const double freq = k * kPi / len;
  const double amp = std::sqrt(2.0 / len);
  AnalyticSolution s;
  s.name = "dirichlet_eigen_k" + std::to_string(k);
  s.a = a;
  s.b = b;
  s.lambda = freq * freq;
  s.eval = [a, freq, amp](double x) { return amp * sin(freq * (Jet2::variable(x) - a)); };
  s.ode_residual = [lam = s.lambda](const Jet2& u) { return u.d2 + lam * u.v; };
  s.bc = {{a, 0.0}, {b, 0.0}};
  s.stated_energy = 1.0;
  s.true_energy = 1.0;
  return s;
}

AnalyticSolution analytic_fixed_lambda(FixedCase which) {
  AnalyticSolution s;
  s.a = 0.0;
  s.b = kPi / 2.0;
  switch (which) {
    case FixedCase::Fig1:
      s.name = "fig1";
      s.lambda = 4.0;
      s.eval = [](double x) { return sin(2.0 * Jet2::variable(x)); };
      s.ode_residual = [](const Jet2& u) { return u.d2 + 4.0 * u.v; };
      s.bc = {{0.0, 0.0}, {kPi / 2.0, 0.0}};
      s.stated_energy = 1.0;
      s.true_energy = kPi / 4.0;  // int_0^{pi/2} sin^2(2x) dx
      break;
    case FixedCase::Fig2:
      s.name = "fig2";
      s.lambda = 0.0;
      s.eval = [](double x) { return (2.0 / kPi) * Jet2::variable(x); };
      s.ode_residual = [](const Jet2& u) { return u.d2; };
      s.bc = {{0.0, 0.0}, {kPi / 2.0, 1.0}};
      s.stated_energy = kPi / 4.0;
      s.true_energy = kPi / 6.0;  // int_0^{pi/2} (2x/pi)^2 dx
      break;
    case FixedCase::Fig3: {
      s.name = "fig3";
      s.lambda = -1.0;
      const double sh = std::sinh(kPi / 2.0);
      s.eval = [sh](double x) { return sinh(Jet2::variable(x)) / sh; };
      s.ode_residual = [](const Jet2& u) { return u.d2 - u.v; };
      s.bc = {{0.0, 0.0}, {kPi / 2.0, 1.0}};
      s.stated_energy = std::tanh(kPi / 4.0);
      // int_0^L sinh^2 = (sinh L cosh L - L)/2, normalized by sinh^2(L)
      s.true_energy =
          (sh * std::cosh(kPi / 2.0) - kPi / 2.0) / (2.0 * sh * sh);
      break;
    }
  }
  return s;
}

std::vector<double> fd_eigenvalues(int n, double a, double b) {
  if (n < 1) throw std::invalid_argument("fd_eigenvalues: n must be >= 1");
  if (!(a < b)) throw std::invalid_argument("fd_eigenvalues: need a < b");
  const double h = (b - a) / (n + 1);
  std::vector<double> lam(static_cast<std::size_t>(n));
  for (int j = 1; j <= n; ++j)
    lam[static_cast<std::size_t>(j - 1)] =
        2.0 / (h * h) * (1.0 - std::cos(j * kPi * h / (b - a)));
  return lam;  // already ascending in j
}

double sign_invariant_l2_error(const Eigen::VectorXd& u_pred, const Eigen::VectorXd& u_ref,
                               double a, double b) {
  const double plus = mc_inner(u_pred - u_ref, u_pred - u_ref, a, b);
  const double minus = mc_inner(-u_pred - u_ref, -u_pred - u_ref, a, b);
  return std::sqrt(std::min(plus, minus));
}

double normalized_sign_invariant_error(const Eigen::VectorXd& u_pred, const Eigen::VectorXd& u_ref,
                                       double a, double b) {
  const double ep = energy(u_pred, a, b);
  const double er = energy(u_ref, a, b);
  if (ep < 1e-12 || er < 1e-12)
    throw DegenerateFunctionError("normalized comparison of a numerically zero function");
  return sign_invariant_l2_error(u_pred / std::sqrt(ep), u_ref / std::sqrt(er), a, b);
}

double sign_invariant_max_abs_error(const Eigen::VectorXd& u_pred, const Eigen::VectorXd& u_ref) {
  if (u_pred.size() != u_ref.size())
    throw std::invalid_argument("sign_invariant_max_abs_error: length mismatch");
  const double plus = (u_pred - u_ref).cwiseAbs().maxCoeff();
  const double minus = (u_pred + u_ref).cwiseAbs().maxCoeff();
  return std::min(plus, minus);
}

}  // namespace eigennet
