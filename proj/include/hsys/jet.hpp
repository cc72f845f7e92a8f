#pragma once

// Second-order forward-mode jets in one variable: (value, first, second
// derivative). Radial profiles are written once as templates and evaluated on
// Jet2 to obtain their derivatives to rounding accuracy.

namespace hsys {

struct Jet2 {
  double v = 0.0;
  double d = 0.0;
  double dd = 0.0;

  constexpr Jet2() = default;
  constexpr Jet2(double value) : v(value) {}  // NOLINT(google-explicit-constructor)
  constexpr Jet2(double value, double d1, double d2) : v(value), d(d1), dd(d2) {}

  static constexpr Jet2 variable(double x) { return {x, 1.0, 0.0}; }

  friend constexpr Jet2 operator+(const Jet2& a, const Jet2& b) { return {a.v + b.v, a.d + b.d, a.dd + b.dd}; }
  friend constexpr Jet2 operator-(const Jet2& a, const Jet2& b) { return {a.v - b.v, a.d - b.d, a.dd - b.dd}; }
  friend constexpr Jet2 operator-(const Jet2& a) { return {-a.v, -a.d, -a.dd}; }
  friend constexpr Jet2 operator*(const Jet2& a, const Jet2& b) {
    return {a.v * b.v, a.d * b.v + a.v * b.d, a.dd * b.v + 2.0 * a.d * b.d + a.v * b.dd};
  }
  friend constexpr Jet2 operator/(const Jet2& a, const Jet2& b) {
    const double q = a.v / b.v;
    const double dq = (a.d - q * b.d) / b.v;
    const double ddq = (a.dd - 2.0 * dq * b.d - q * b.dd) / b.v;
    return {q, dq, ddq};
  }
};

/// x^n for integer n >= 0 by repeated multiplication (defined at x = 0).
template <class T>
constexpr T ipow(const T& x, int n) {
  T r(1.0);
  for (int k = 0; k < n; ++k) r = r * x;
  return r;
}

}  // namespace hsys
