#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace hsys {

/// Errors caused by invalid user input or violated preconditions.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Errors raised by numerical procedures (non-convergence, step failure, ...).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Chart { RChart, KelvinTChart };

inline const char* chart_name(Chart c) { return c == Chart::RChart ? "r" : "kelvin-t"; }

inline constexpr double kPi = 3.14159265358979323846;

struct Vec3 {
  std::array<double, 3> v{0.0, 0.0, 0.0};

  constexpr Vec3() = default;
  constexpr Vec3(double x, double y, double z) : v{x, y, z} {}

  constexpr double& operator[](std::size_t i) { return v[i]; }
  constexpr double operator[](std::size_t i) const { return v[i]; }

  constexpr Vec3& operator+=(const Vec3& o) {
    for (std::size_t i = 0; i < 3; ++i) v[i] += o.v[i];
    return *this;
  }
  constexpr Vec3& operator-=(const Vec3& o) {
    for (std::size_t i = 0; i < 3; ++i) v[i] -= o.v[i];
    return *this;
  }
  constexpr Vec3& operator*=(double s) {
    for (auto& x : v) x *= s;
    return *this;
  }
  friend constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
  friend constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
  friend constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
  friend constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
  friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
constexpr double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline double max_abs(const Vec3& a) {
  return std::max({std::abs(a[0]), std::abs(a[1]), std::abs(a[2])});
}

/// A point z = (x, y) of the plane.
class PlanarPoint {
 public:
  PlanarPoint(double x, double y) : x_(x), y_(y) {
    if (!std::isfinite(x) || !std::isfinite(y)) {
      throw ConfigError("planar point has non-finite coordinates");
    }
  }
  static PlanarPoint polar(double r, double theta) { return {r * std::cos(theta), r * std::sin(theta)}; }

  double x() const { return x_; }
  double y() const { return y_; }
  double r() const { return std::hypot(x_, y_); }
  double theta() const { return std::atan2(y_, x_); }

 private:
  double x_;
  double y_;
};

/// Value, first partials and Laplacian of a 3-vector field at one point.
struct FieldJet {
  Vec3 value;
  Vec3 dx;
  Vec3 dy;
  Vec3 lap;
};

}  // namespace hsys
