#pragma once

#include <cmath>

namespace elastowave {

/// Truncated Taylor jet carrying f, f', f'' of a univariate function.
/// Used to differentiate the radial symbols exactly in the bound scans.
struct Jet2 {
  double v = 0.0;
  double d = 0.0;
  double dd = 0.0;

  constexpr Jet2() = default;
  constexpr Jet2(double value) : v(value) {}  // NOLINT: implicit on purpose
  constexpr Jet2(double value, double first, double second) : v(value), d(first), dd(second) {}

  static constexpr Jet2 variable(double x) { return {x, 1.0, 0.0}; }

  Jet2& operator+=(const Jet2& o) { v += o.v; d += o.d; dd += o.dd; return *this; }
  Jet2& operator-=(const Jet2& o) { v -= o.v; d -= o.d; dd -= o.dd; return *this; }
  Jet2& operator*=(const Jet2& o) {
    *this = Jet2{v * o.v, d * o.v + v * o.d, dd * o.v + 2.0 * d * o.d + v * o.dd};
    return *this;
  }
  Jet2& operator/=(const Jet2& o) {
    const double inv = 1.0 / o.v;
    const Jet2 r{inv, -o.d * inv * inv, 2.0 * o.d * o.d * inv * inv * inv - o.dd * inv * inv};
    return *this *= r;
  }
};

inline Jet2 operator-(const Jet2& a) { return {-a.v, -a.d, -a.dd}; }
inline Jet2 operator+(Jet2 a, const Jet2& b) { return a += b; }
inline Jet2 operator-(Jet2 a, const Jet2& b) { return a -= b; }
inline Jet2 operator*(Jet2 a, const Jet2& b) { return a *= b; }
inline Jet2 operator/(Jet2 a, const Jet2& b) { return a /= b; }

namespace detail {
// Chain rule for f(a) given f(a.v), f'(a.v), f''(a.v).
inline Jet2 compose(const Jet2& a, double f, double f1, double f2) {
  return {f, f1 * a.d, f2 * a.d * a.d + f1 * a.dd};
}
}  // namespace detail

inline Jet2 sin(const Jet2& a) {
  const double s = std::sin(a.v), c = std::cos(a.v);
  return detail::compose(a, s, c, -s);
}
inline Jet2 cos(const Jet2& a) {
  const double s = std::sin(a.v), c = std::cos(a.v);
  return detail::compose(a, c, -s, -c);
}
inline Jet2 exp(const Jet2& a) {
  const double e = std::exp(a.v);
  return detail::compose(a, e, e, e);
}
inline Jet2 expm1(const Jet2& a) {
  const double e = std::exp(a.v);
  return detail::compose(a, std::expm1(a.v), e, e);
}
inline Jet2 sinh(const Jet2& a) {
  return detail::compose(a, std::sinh(a.v), std::cosh(a.v), std::sinh(a.v));
}
inline Jet2 cosh(const Jet2& a) {
  return detail::compose(a, std::cosh(a.v), std::sinh(a.v), std::cosh(a.v));
}
inline Jet2 sqrt(const Jet2& a) {
  const double s = std::sqrt(a.v);
  return detail::compose(a, s, 0.5 / s, -0.25 / (s * a.v));
}

inline double value_of(double x) { return x; }
inline double value_of(const Jet2& x) { return x.v; }

}  // namespace elastowave
