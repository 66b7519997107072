#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>

#include "sigflip/errors.hpp"

namespace sigflip {

// Forward-mode dual number carrying a full gradient. An empty gradient means
// "exact zero gradient of whatever dimension the context has" so that
// constants can be built without knowing the chart dimension; any binary op
// with a sized operand promotes the result to that size. Seeded variables
// always carry a full-size gradient, so every value derived from at least one
// variable does too.
class DualScalar {
public:
  DualScalar() = default;
  explicit DualScalar(double value) : v(value) {}
  DualScalar(double value, Eigen::VectorXd grad) : v(value), g(std::move(grad)) {}

  // i-th coordinate of an n-dimensional chart, seeded with unit gradient.
  static DualScalar variable(double value, int i, int n) {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(n);
    g[i] = 1.0;
    return DualScalar(value, std::move(g));
  }

  bool has_grad() const { return g.size() > 0; }
  bool grad_is_zero() const { return g.size() == 0 || (g.array() == 0.0).all(); }

  // Gradient as a definite n-vector (empty promotes to zeros).
  Eigen::VectorXd grad(int n) const {
    if (g.size() == 0) return Eigen::VectorXd::Zero(n);
    return g;
  }

  double v = 0.0;
  Eigen::VectorXd g;
};

namespace detail {

inline Eigen::VectorXd combine(const Eigen::VectorXd& a, double ca,
                               const Eigen::VectorXd& b, double cb) {
  if (a.size() == 0 && b.size() == 0) return {};
  if (a.size() == 0) return cb * b;
  if (b.size() == 0) return ca * a;
  return ca * a + cb * b;
}

inline Eigen::VectorXd chain(const Eigen::VectorXd& g, double c) {
  if (g.size() == 0) return {};
  return c * g;
}

}  // namespace detail

inline DualScalar operator+(const DualScalar& a, const DualScalar& b) {
  return {a.v + b.v, detail::combine(a.g, 1.0, b.g, 1.0)};
}
inline DualScalar operator-(const DualScalar& a, const DualScalar& b) {
  return {a.v - b.v, detail::combine(a.g, 1.0, b.g, -1.0)};
}
inline DualScalar operator*(const DualScalar& a, const DualScalar& b) {
  return {a.v * b.v, detail::combine(a.g, b.v, b.g, a.v)};
}
inline DualScalar operator-(const DualScalar& a) {
  return {-a.v, detail::chain(a.g, -1.0)};
}
inline DualScalar operator/(const DualScalar& a, const DualScalar& b) {
  if (b.v == 0.0) throw DomainError("division by zero");
  return {a.v / b.v, detail::combine(a.g, 1.0 / b.v, b.g, -a.v / (b.v * b.v))};
}

inline DualScalar operator+(const DualScalar& a, double b) { return {a.v + b, a.g}; }
inline DualScalar operator+(double a, const DualScalar& b) { return {a + b.v, b.g}; }
inline DualScalar operator-(const DualScalar& a, double b) { return {a.v - b, a.g}; }
inline DualScalar operator-(double a, const DualScalar& b) {
  return {a - b.v, detail::chain(b.g, -1.0)};
}
inline DualScalar operator*(const DualScalar& a, double b) {
  return {a.v * b, detail::chain(a.g, b)};
}
inline DualScalar operator*(double a, const DualScalar& b) {
  return {a * b.v, detail::chain(b.g, a)};
}
inline DualScalar operator/(const DualScalar& a, double b) {
  if (b == 0.0) throw DomainError("division by zero");
  return {a.v / b, detail::chain(a.g, 1.0 / b)};
}
inline DualScalar operator/(double a, const DualScalar& b) {
  if (b.v == 0.0) throw DomainError("division by zero");
  return {a / b.v, detail::chain(b.g, -a / (b.v * b.v))};
}

namespace detail {

// Blocks the compiler from pairing an adjacent sin+cos of the same argument
// into one sincos() call: glibc's sincos differs from the separate calls by
// an ulp at some arguments, which would break the bit-identical agreement
// between the plain and dual evaluation channels.
inline double unpaired(double x) {
  volatile double v = x;
  return v;
}

}  // namespace detail

inline DualScalar sin(const DualScalar& a) {
  return {std::sin(a.v), detail::chain(a.g, std::cos(detail::unpaired(a.v)))};
}
inline DualScalar cos(const DualScalar& a) {
  return {std::cos(a.v), detail::chain(a.g, -std::sin(detail::unpaired(a.v)))};
}
inline DualScalar exp(const DualScalar& a) {
  double e = std::exp(a.v);
  return {e, detail::chain(a.g, e)};
}
inline DualScalar tanh(const DualScalar& a) {
  double t = std::tanh(a.v);
  return {t, detail::chain(a.g, 1.0 - t * t)};
}
inline DualScalar sqrt(const DualScalar& a) {
  if (a.v < 0.0) throw DomainError("sqrt of negative value");
  if (a.v == 0.0) {
    if (!a.grad_is_zero())
      throw DomainError("sqrt derivative singular at zero");
    return DualScalar(0.0);
  }
  double r = std::sqrt(a.v);
  return {r, detail::chain(a.g, 0.5 / r)};
}
inline DualScalar abs(const DualScalar& a) {
  // subgradient convention: d|x|/dx = 0 at x = 0
  double s = a.v > 0.0 ? 1.0 : (a.v < 0.0 ? -1.0 : 0.0);
  return {std::abs(a.v), detail::chain(a.g, s)};
}

// pow semantics are decided by the exponent's *value*: integer-valued
// exponents work for any base (so x^2 is fine at x < 0 and both evaluation
// channels agree on values); non-integer exponents require base > 0, with
// base == 0 allowed when exponent > 0. Dual-only DomainErrors mark points
// where the value exists but the derivative does not.
inline bool is_integral_exponent(double e) {
  return std::abs(e) <= 2147483647.0 && std::nearbyint(e) == e;
}

inline DualScalar pow(const DualScalar& a, const DualScalar& b) {
  if (is_integral_exponent(b.v)) {
    if (a.v == 0.0 && b.v < 0.0)
      throw DomainError("zero base with negative exponent");
    double v = std::pow(a.v, b.v);
    Eigen::VectorXd ga =
        b.v == 0.0 ? Eigen::VectorXd()
                   : detail::chain(a.g, b.v * std::pow(a.v, b.v - 1.0));
    Eigen::VectorXd gb;
    if (!b.grad_is_zero()) {
      if (a.v <= 0.0)
        throw DomainError("pow derivative undefined: varying exponent over "
                          "non-positive base");
      gb = detail::chain(b.g, v * std::log(a.v));
    }
    return {v, detail::combine(ga, 1.0, gb, 1.0)};
  }
  if (a.v < 0.0)
    throw DomainError("negative base with non-integer exponent");
  if (a.v == 0.0) {
    if (b.v <= 0.0) throw DomainError("zero base with non-positive exponent");
    if (b.v < 1.0 && !a.grad_is_zero())
      throw DomainError("pow derivative singular at zero base");
    if (!b.grad_is_zero())
      throw DomainError("pow derivative undefined: varying exponent at zero "
                        "base");
    return DualScalar(0.0);
  }
  double v = std::pow(a.v, b.v);
  return {v, detail::combine(detail::chain(a.g, b.v * v / a.v), 1.0,
                             detail::chain(b.g, v * std::log(a.v)), 1.0)};
}

// Same rules for the plain-double channel, so value semantics never depend on
// which channel evaluated the expression.
inline double pow_checked(double a, double b) {
  if (is_integral_exponent(b)) {
    if (a == 0.0 && b < 0.0)
      throw DomainError("zero base with negative exponent");
    return std::pow(a, b);
  }
  if (a < 0.0) throw DomainError("negative base with non-integer exponent");
  if (a == 0.0 && b <= 0.0)
    throw DomainError("zero base with non-positive exponent");
  return std::pow(a, b);
}

inline double sqrt_checked(double a) {
  if (a < 0.0) throw DomainError("sqrt of negative value");
  return std::sqrt(a);
}

inline double div_checked(double a, double b) {
  if (b == 0.0) throw DomainError("division by zero");
  return a / b;
}

// Uniform value accessor so numeric kernels can template over double/dual.
inline double value_of(double x) { return x; }
inline double value_of(const DualScalar& x) { return x.v; }

}  // namespace sigflip
