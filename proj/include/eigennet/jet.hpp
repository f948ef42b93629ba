#pragma once

#include <cmath>

namespace eigennet {

/// Second-order jet: a function value together with its first and second
/// derivative with respect to one scalar variable. Arithmetic propagates
/// both derivatives exactly, so u(x), u'(x), u''(x) come out of a single
/// evaluation with no finite differences.
template <typename T>
struct Jet2T {
  T v{};   // value
  T d1{};  // d/dx
  T d2{};  // d^2/dx^2

  constexpr Jet2T() = default;
  constexpr Jet2T(T v_, T d1_, T d2_) : v(v_), d1(d1_), d2(d2_) {}

  /// Jet of the independent variable x itself: (x, 1, 0).
  static constexpr Jet2T variable(T x) { return {x, T(1), T(0)}; }
  /// Jet of a constant: both derivatives vanish.
  static constexpr Jet2T constant(T c) { return {c, T(0), T(0)}; }

  constexpr Jet2T operator-() const { return {-v, -d1, -d2}; }
};

using Jet2 = Jet2T<double>;

template <typename T>
constexpr Jet2T<T> operator+(const Jet2T<T>& a, const Jet2T<T>& b) {
  return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2};
}

template <typename T>
constexpr Jet2T<T> operator-(const Jet2T<T>& a, const Jet2T<T>& b) {
  return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2};
}

template <typename T>
constexpr Jet2T<T> operator*(const Jet2T<T>& a, const Jet2T<T>& b) {
  // (fg)'' = f''g + 2 f'g' + f g''
  return {a.v * b.v, a.d1 * b.v + a.v * b.d1,
          a.d2 * b.v + T(2) * a.d1 * b.d1 + a.v * b.d2};
}

template <typename T>
constexpr Jet2T<T> operator/(const Jet2T<T>& a, const Jet2T<T>& b) {
  // From f = h g: h' = (f' - h g')/g, h'' = (f'' - 2 h'g' - h g'')/g
  const T h = a.v / b.v;
  const T h1 = (a.d1 - h * b.d1) / b.v;
  const T h2 = (a.d2 - T(2) * h1 * b.d1 - h * b.d2) / b.v;
  return {h, h1, h2};
}

template <typename T>
constexpr Jet2T<T> operator+(const Jet2T<T>& a, T b) { return {a.v + b, a.d1, a.d2}; }
template <typename T>
constexpr Jet2T<T> operator+(T a, const Jet2T<T>& b) { return b + a; }
template <typename T>
constexpr Jet2T<T> operator-(const Jet2T<T>& a, T b) { return {a.v - b, a.d1, a.d2}; }
template <typename T>
constexpr Jet2T<T> operator-(T a, const Jet2T<T>& b) { return {a - b.v, -b.d1, -b.d2}; }
template <typename T>
constexpr Jet2T<T> operator*(const Jet2T<T>& a, T b) { return {a.v * b, a.d1 * b, a.d2 * b}; }
template <typename T>
constexpr Jet2T<T> operator*(T a, const Jet2T<T>& b) { return b * a; }
template <typename T>
constexpr Jet2T<T> operator/(const Jet2T<T>& a, T b) { return {a.v / b, a.d1 / b, a.d2 / b}; }

/// Chain rule through a scalar function given its value and first two
/// derivatives at f.v: h.d2 = g''(f.v) f.d1^2 + g'(f.v) f.d2.
template <typename T>
constexpr Jet2T<T> compose(T gv, T gd1, T gd2, const Jet2T<T>& f) {
  return {gv, gd1 * f.d1, gd2 * f.d1 * f.d1 + gd1 * f.d2};
}

template <typename T>
Jet2T<T> tanh(const Jet2T<T>& f) {
  using std::tanh;
  const T t = tanh(f.v);
  const T s = T(1) - t * t;  // sech^2
  return compose(t, s, T(-2) * t * s, f);
}

template <typename T>
Jet2T<T> sin(const Jet2T<T>& f) {
  using std::cos, std::sin;
  const T sv = sin(f.v);
  return compose(sv, cos(f.v), -sv, f);
}

template <typename T>
Jet2T<T> cos(const Jet2T<T>& f) {
  using std::cos, std::sin;
  const T cv = cos(f.v);
  return compose(cv, -sin(f.v), -cv, f);
}

template <typename T>
Jet2T<T> exp(const Jet2T<T>& f) {
  using std::exp;
  const T e = exp(f.v);
  return compose(e, e, e, f);
}

template <typename T>
Jet2T<T> sinh(const Jet2T<T>& f) {
  using std::cosh, std::sinh;
  const T sh = sinh(f.v);
  return compose(sh, cosh(f.v), sh, f);
}

template <typename T>
Jet2T<T> cosh(const Jet2T<T>& f) {
  using std::cosh, std::sinh;
  const T ch = cosh(f.v);
  return compose(ch, sinh(f.v), ch, f);
}

template <typename T>
Jet2T<T> sqrt(const Jet2T<T>& f) {
  using std::sqrt;
  const T r = sqrt(f.v);
  return compose(r, T(1) / (T(2) * r), T(-1) / (T(4) * r * r * r), f);
}

}  // namespace eigennet
