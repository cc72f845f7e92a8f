#include "hsys/corotational.hpp"

#include <algorithm>
#include <ostream>
#include <limits>
#include <string>

#include "hsys/format.hpp"
#include "hsys/linearized.hpp"

namespace hsys::corotational {

namespace {
double chart_sign(Chart c) { return c == Chart::RChart ? 1.0 : -1.0; }
}  // namespace

RadialSystem::RadialSystem(int m, double lambda, Chart chart)
    : m_(m), lambda_(lambda), chart_(chart), profile_(m, chart) {
  if (!std::isfinite(lambda)) throw ConfigError("spectral parameter must be finite");
}

Coefficients RadialSystem::coefficients(double x) const {
  if (!(x >= 0.0)) throw ConfigError("radial coefficient requested at negative or NaN coordinate");
  const double s = chart_sign(chart_);
  const double tm = 2.0 * m_;
  Coefficients c;
  const double d = 1.0 + x * x;
  c.weight = std::isinf(x) ? 0.0 : 4.0 / (d * d);
  if (x == 0.0) {
    const double F_over_x = m_ == 1 ? 2.0 : 0.0;
    const double dF_over_x = m_ == 1 ? std::numeric_limits<double>::infinity() : (m_ == 2 ? 4.0 : 0.0);
    c.p1 = s * tm * F_over_x;
    c.p2 = m_ == 1 ? 8.0 : 0.0;
    c.q1 = -s * tm * F_over_x;
    c.q2 = -s * tm * dF_over_x;
    return c;
  }
  const auto [F, G] = profile_.jet(x);
  c.p1 = s * tm * F.v / x;
  c.p2 = s * tm * G.d / x;
  c.q1 = -s * tm * F.v / x;
  c.q2 = -s * tm * F.d / x;
  return c;
}

std::pair<double, double> RadialSystem::residual(double x, const Jet2& f, const Jet2& g) const {
  const Coefficients c = coefficients(x);
  const double m2 = static_cast<double>(m_) * m_;
  const double rf = f.dd + f.d / x - m2 * f.v / (x * x) + c.p1 * g.d + c.p2 * f.v - lambda_ * c.weight * f.v;
  const double rg = g.dd + g.d / x + c.q1 * f.d + c.q2 * f.v - lambda_ * c.weight * g.v;
  return {rf, rg};
}

RadialSystem reduce_to_radial(int m, double lambda, Chart chart) { return RadialSystem(m, lambda, chart); }

RadialSystem kelvin_transform(const RadialSystem& sys) {
  return RadialSystem(sys.degree(), sys.lambda(),
                      sys.chart() == Chart::RChart ? Chart::KelvinTChart : Chart::RChart);
}

RadialMode kelvin_transform(const RadialMode& mode) { return mode.kelvin(); }

AnalyticMode zero_mode_analytic(int m, Chart chart) {
  AnalyticMode mode;
  mode.m = m;
  mode.chart = chart;
  // f0(1/r) = -f0(r) and g0(1/r) = g0(r), so the Kelvin image is (-f0, g0).
  const double sign = chart_sign(chart);
  mode.f = [m, sign](double x) { return sign * linearized::zero_mode_f(m, x); };
  mode.g = [m](double x) { return linearized::zero_mode_g(m, x); };
  return mode;
}

double radial_residual(const AnalyticMode& mode, const RadialSystem& sys, std::span<const double> nodes) {
  if (mode.m != sys.degree() || mode.chart != sys.chart()) {
    throw ConfigError("mode and radial system differ in degree or chart");
  }
  double worst = 0.0;
  for (double x : nodes) {
    if (!(x >= kResidualCutoff) || !std::isfinite(x)) continue;
    const auto [rf, rg] = sys.residual(x, mode.f(x), mode.g(x));
    worst = std::max({worst, std::abs(rf), std::abs(rg)});
  }
  return worst;
}

std::array<std::vector<double>, 3> fd_weights(double x0, std::span<const double> xs) {
  const std::size_t n = xs.size();
  constexpr int kMaxDeriv = 2;
  std::array<std::vector<double>, 3> c;
  for (auto& row : c) row.assign(n, 0.0);
  if (n == 0) return c;
  double c1 = 1.0;
  double c4 = xs[0] - x0;
  c[0][0] = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    const int mn = std::min<int>(static_cast<int>(i), kMaxDeriv);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = xs[i] - x0;
    for (std::size_t j = 0; j < i; ++j) {
      const double c3 = xs[i] - xs[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) {
          c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
        }
        c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
      }
      for (int k = mn; k >= 1; --k) c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
      c[0][j] = c4 * c[0][j] / c3;
    }
    c1 = c2;
  }
  return c;
}

std::vector<std::pair<double, double>> radial_residual_profile(const RadialMode& mode, const RadialSystem& sys) {
  if (mode.degree() != sys.degree() || mode.chart() != sys.chart()) {
    throw ConfigError("mode and radial system differ in degree or chart");
  }
  constexpr std::size_t kStencil = 5;
  const auto& x = mode.coord();
  std::size_t finite = 0;
  while (finite < x.size() && std::isfinite(x[finite])) ++finite;
  if (finite < kStencil) {
    throw ConfigError("grid too coarse for the five-point stencil: " + std::to_string(finite) + " finite nodes");
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::pair<double, double>> out(x.size(), {nan, nan});
  for (std::size_t i = 0; i < finite; ++i) {
    if (!(x[i] >= kResidualCutoff)) continue;
    const std::size_t start = std::min(i >= 2 ? i - 2 : 0, finite - kStencil);
    const std::span<const double> xs(x.data() + start, kStencil);
    const auto w = fd_weights(x[i], xs);
    Jet2 f;
    Jet2 g;
    for (std::size_t j = 0; j < kStencil; ++j) {
      const double fj = mode.f()[start + j];
      const double gj = mode.g()[start + j];
      f.v += w[0][j] * fj;
      f.d += w[1][j] * fj;
      f.dd += w[2][j] * fj;
      g.v += w[0][j] * gj;
      g.d += w[1][j] * gj;
      g.dd += w[2][j] * gj;
    }
    out[i] = sys.residual(x[i], f, g);
  }
  return out;
}

double radial_residual(const RadialMode& mode, const RadialSystem& sys) {
  double worst = 0.0;
  for (const auto& [rf, rg] : radial_residual_profile(mode, sys)) {
    if (std::isnan(rf)) continue;
    worst = std::max({worst, std::abs(rf), std::abs(rg)});
  }
  return worst;
}

std::pair<Vec3, Vec3> cross_terms_cartesian_polar(int m, const PlanarPoint& p, const Jet2& f, const Jet2& g) {
  const double r = p.r();
  if (r == 0.0) throw ConfigError("polar form is undefined at the origin");
  const double th = p.theta();
  const FieldJet w = linearized::corotational_jet(m, r, th, f, g);
  const FieldJet u = bubbles::bubble_jet(m, p);
  const Vec3 cart = 2.0 * (cross(w.dx, u.dy) + cross(u.dx, w.dy));

  const auto [F, G] = bubbles::BubbleProfile(m).jet(r);
  const Vec3 er{std::cos(m * th), std::sin(m * th), 0.0};
  const Vec3 eth{-std::sin(m * th), std::cos(m * th), 0.0};
  const Vec3 e3{0.0, 0.0, 1.0};
  const Vec3 w_r = f.d * er + g.d * e3;
  const Vec3 w_th = (m * f.v) * eth;
  const Vec3 u_r = F.d * er + G.d * e3;
  const Vec3 u_th = (m * F.v) * eth;
  const Vec3 polar = (2.0 / r) * (cross(w_r, u_th) + cross(u_r, w_th));
  return {cart, polar};
}

double polar_identity_defect(const AnalyticMode& mode, std::span<const PlanarPoint> points) {
  if (mode.chart != Chart::RChart) throw ConfigError("polar identity is evaluated in the r-chart");
  double worst = 0.0;
  for (const auto& p : points) {
    const double r = p.r();
    const auto [cart, polar] = cross_terms_cartesian_polar(mode.m, p, mode.f(r), mode.g(r));
    worst = std::max(worst, max_abs(cart - polar));
  }
  return worst;
}

void write_mode_csv(std::ostream& os, const RadialMode& mode) {
  os << "r,f,g\n";
  for (std::size_t i = 0; i < mode.size(); ++i) {
    os << format_double(mode.radius(i)) << ',' << format_double(mode.f()[i]) << ',' << format_double(mode.g()[i])
       << '\n';
  }
}

}  // namespace hsys::corotational
