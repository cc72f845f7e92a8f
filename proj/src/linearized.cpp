#include "hsys/linearized.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace hsys::linearized {

namespace {

template <class T>
T zero_f_small(const T& q, int m) {
  const T qm = ipow(q, m);
  const T q2m = qm * qm;
  const T den = T(1.0) + q2m;
  return T(2.0 * m) * qm * (T(1.0) - q2m) / (den * den);
}

template <class T>
T zero_g_small(const T& q, int m, double factor) {
  const T q2m = ipow(q, 2 * m);
  const T den = T(1.0) + q2m;
  return T(factor * m) * q2m / (den * den);
}

// Jet of the folded variable: q = r for r <= 1, q = 1/r otherwise.
Jet2 folded(double r) {
  if (r <= 1.0) return Jet2::variable(r);
  const double q = 1.0 / r;
  return {q, -q * q, 2.0 * q * q * q};
}

void require_degree(int m) {
  if (m < 1) throw ConfigError("degree must be >= 1, got " + std::to_string(m));
}

}  // namespace

DilationFamily::DilationFamily(int m, double delta) : m_(m), delta_(delta) {
  require_degree(m);
  if (!(delta > 0.0) || !std::isfinite(delta)) throw ConfigError("dilation parameter must be positive");
}

Vec3 dilated_bubble(const DilationFamily& fam, const PlanarPoint& p) {
  return bubbles::bubble_eval(fam.degree(), PlanarPoint(fam.delta() * p.x(), fam.delta() * p.y()));
}

FieldJet dilated_jet(const DilationFamily& fam, const PlanarPoint& p) {
  const double d = fam.delta();
  FieldJet j = bubbles::bubble_jet(fam.degree(), PlanarPoint(d * p.x(), d * p.y()));
  j.dx *= d;
  j.dy *= d;
  j.lap *= d * d;
  return j;
}

bubbles::Field dilated_field(const DilationFamily& fam) {
  return [fam](const PlanarPoint& p) { return dilated_jet(fam, p); };
}

Jet2 zero_mode_f(int m, double r) {
  require_degree(m);
  const Jet2 f = zero_f_small(folded(r), m);
  return r <= 1.0 ? f : -f;
}

Jet2 zero_mode_g(int m, double r, ZeroModeVariant variant) {
  require_degree(m);
  return zero_g_small(folded(r), m, variant == ZeroModeVariant::Corrected ? 4.0 : 2.0);
}

FieldJet corotational_jet(int m, double r, double theta, const Jet2& f, const Jet2& g) {
  FieldJet j;
  if (r == 0.0) {
    // Smooth co-rotational fields have f = O(r^m) and g even in r.
    j.value = {0.0, 0.0, g.v};
    if (m == 1) {
      j.dx = {f.d, 0.0, 0.0};
      j.dy = {0.0, f.d, 0.0};
    }
    j.lap = {0.0, 0.0, 2.0 * g.dd};
    return j;
  }
  const double c = std::cos(m * theta);
  const double s = std::sin(m * theta);
  const Vec3 er{c, s, 0.0};
  const Vec3 eth{-s, c, 0.0};
  const Vec3 e3{0.0, 0.0, 1.0};
  const Vec3 w_r = f.d * er + g.d * e3;
  const Vec3 w_th = (m * f.v) * eth;
  const double ct = std::cos(theta);
  const double st = std::sin(theta);
  j.value = f.v * er + g.v * e3;
  j.dx = ct * w_r - (st / r) * w_th;
  j.dy = st * w_r + (ct / r) * w_th;
  j.lap = (f.dd + f.d / r - m * m * f.v / (r * r)) * er + (g.dd + g.d / r) * e3;
  return j;
}

Vec3 zero_mode_eval(int m, const PlanarPoint& p, ZeroModeVariant variant) {
  const double r = p.r();
  if (r == 0.0) return {0.0, 0.0, zero_mode_g(m, 0.0, variant).v};
  const double f = zero_mode_f(m, r).v;
  const double th = p.theta();
  return {f * std::cos(m * th), f * std::sin(m * th), zero_mode_g(m, r, variant).v};
}

FieldJet zero_mode_jet(int m, const PlanarPoint& p, ZeroModeVariant variant) {
  const double r = p.r();
  return corotational_jet(m, r, p.theta(), zero_mode_f(m, r), zero_mode_g(m, r, variant));
}

bubbles::Field zero_mode_field(int m, ZeroModeVariant variant) {
  require_degree(m);
  return [m, variant](const PlanarPoint& p) { return zero_mode_jet(m, p, variant); };
}

double linearized_residual(int m, double lambda, const bubbles::Field& w, std::span<const PlanarPoint> points) {
  require_degree(m);
  double worst = 0.0;
  for (const auto& p : points) {
    const FieldJet u = bubbles::bubble_jet(m, p);
    const FieldJet wj = w(p);
    const double r = p.r();
    const Vec3 res = wj.lap - 2.0 * (cross(wj.dx, u.dy) + cross(u.dx, wj.dy)) -
                     (lambda * conformal_weight(r)) * wj.value;
    worst = std::max(worst, max_abs(res));
  }
  return worst;
}

double truncated_l2(const RadialMode& mode_in, double R) {
  if (!(R > 0.0)) throw ConfigError("truncation radius must be positive");
  const RadialMode mode = mode_in.in_r_chart();
  const auto& r = mode.coord();
  const auto& f = mode.f();
  const auto& g = mode.g();
  if (mode.size() < 2) throw ConfigError("mode has too few samples for quadrature");
  double r_last_finite = 0.0;
  for (double x : r) {
    if (std::isfinite(x)) r_last_finite = x;
  }
  if (r_last_finite < R) {
    throw ConfigError("insufficient sample range: samples reach r = " + std::to_string(r_last_finite) +
                      " but R = " + std::to_string(R) + " is required");
  }
  auto density = [&](std::size_t i) { return (f[i] * f[i] + g[i] * g[i]) * r[i]; };
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < r.size() && r[i] < R; ++i) {
    if (r[i + 1] <= R) {
      sum += 0.5 * (r[i + 1] - r[i]) * (density(i) + density(i + 1));
    } else {
      const double w = (R - r[i]) / (r[i + 1] - r[i]);
      const double fR = (1.0 - w) * f[i] + w * f[i + 1];
      const double gR = (1.0 - w) * g[i] + w * g[i + 1];
      sum += 0.5 * (R - r[i]) * (density(i) + (fR * fR + gR * gR) * R);
    }
  }
  return 2.0 * kPi * sum;
}

RadialMode zero_mode_radial(int m, std::span<const double> r_nodes) {
  std::vector<double> r(r_nodes.begin(), r_nodes.end());
  std::vector<double> f(r.size());
  std::vector<double> g(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    f[i] = zero_mode_f(m, r[i]).v;
    g[i] = zero_mode_g(m, r[i]).v;
  }
  return RadialMode(m, Chart::RChart, std::move(r), std::move(f), std::move(g));
}

std::vector<double> geometric_nodes(double r_min, double r_max, int per_decade) {
  if (!(r_min > 0.0) || !(r_max > r_min) || per_decade < 1) throw ConfigError("invalid geometric node range");
  const double decades = std::log10(r_max / r_min);
  const auto count = static_cast<std::size_t>(std::ceil(decades * per_decade));
  std::vector<double> r{0.0};
  r.reserve(count + 2);
  for (std::size_t k = 0; k <= count; ++k) {
    r.push_back(r_min * std::pow(10.0, decades * static_cast<double>(k) / static_cast<double>(count)));
  }
  r.back() = r_max;
  return r;
}

namespace {
double zero_mode_magnitude(int m, double r) {
  return std::hypot(zero_mode_f(m, r).v, zero_mode_g(m, r).v);
}
}  // namespace

DecayConstants fit_decay_constants(int m, double r_lo, double r_hi, int samples) {
  require_degree(m);
  if (!(r_hi > r_lo) || !(r_lo > 0.0) || samples < 2) throw ConfigError("invalid decay fit window");
  std::vector<double> y(static_cast<std::size_t>(samples));
  DecayConstants out;
  out.c1 = 0.0;
  out.c2 = std::numeric_limits<double>::infinity();
  for (int k = 0; k < samples; ++k) {
    const double r = r_lo * std::pow(r_hi / r_lo, static_cast<double>(k) / (samples - 1));
    const double mag = zero_mode_magnitude(m, r);
    y[static_cast<std::size_t>(k)] = std::log(mag) + m * std::log(r);
    out.c1 = std::max(out.c1, mag * std::pow(1.0 + r, m));
    out.c2 = std::min(out.c2, mag * std::pow(r, m));
  }
  // Slope is fixed at -m; the least-squares intercept is the mean.
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= samples;
  double ss = 0.0;
  for (double v : y) ss += (v - mean) * (v - mean);
  out.log_fit_intercept = mean;
  out.log_fit_residual = std::sqrt(ss / samples);
  return out;
}

bool decay_sandwich_holds(int m, const DecayConstants& c, double r_lo, double r_hi, int samples) {
  for (int k = 0; k < samples; ++k) {
    const double r = r_lo * std::pow(r_hi / r_lo, static_cast<double>(k) / (samples - 1));
    const double mag = zero_mode_magnitude(m, r);
    constexpr double kSlack = 1e-12;
    if (mag > c.c1 * std::pow(1.0 + r, -m) * (1.0 + kSlack)) return false;
    if (mag < c.c2 * std::pow(r, -m) * (1.0 - kSlack)) return false;
  }
  return true;
}

}  // namespace hsys::linearized
