#include "hsys/bubbles.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <complex>
#include <random>
#include <string>

namespace hsys::bubbles {

namespace {

void require_degree(int m) {
  if (m < 1) throw ConfigError("bubble degree must be >= 1, got " + std::to_string(m));
}

using cplx = std::complex<double>;

cplx cpow(cplx z, int n) {
  cplx r(1.0, 0.0);
  for (int k = 0; k < n; ++k) r *= z;
  return r;
}

}  // namespace

BubbleProfile::BubbleProfile(int m, Chart chart) : m_(m), chart_(chart) { require_degree(m); }

std::pair<Jet2, Jet2> BubbleProfile::jet(double x) const {
  if (!(x >= 0.0)) throw ConfigError("profile evaluated at negative or NaN radius");
  Jet2 F;
  Jet2 G;
  if (x <= 1.0) {
    const Jet2 q = Jet2::variable(x);
    F = profile_F_small(q, m_);
    G = profile_G_small(q, m_);
  } else {
    // q = 1/x carries dq/dx = -q^2 and d2q/dx2 = 2 q^3; x = +inf gives q = 0.
    const double qv = 1.0 / x;
    const Jet2 q{qv, -qv * qv, 2.0 * qv * qv * qv};
    F = profile_F_small(q, m_);
    G = -profile_G_small(q, m_);
  }
  if (chart_ == Chart::KelvinTChart) G = -G;
  return {F, G};
}

Vec3 bubble_eval(int m, const PlanarPoint& p) {
  require_degree(m);
  const double r = p.r();
  const double theta = p.theta();
  const BubbleProfile prof(m);
  const auto [F, G] = prof.jet(r);
  return {F.v * std::cos(m * theta), F.v * std::sin(m * theta), G.v};
}

FieldJet bubble_jet(int m, const PlanarPoint& p) {
  require_degree(m);
  const cplx z(p.x(), p.y());
  const cplx I(0.0, 1.0);
  const cplx P = cpow(z, m);
  const cplx P1 = static_cast<double>(m) * cpow(z, m - 1);
  const double s = std::norm(P);
  const double h = 1.0 / (1.0 + s);
  const double sx = 2.0 * std::real(std::conj(P) * P1);
  const double sy = -2.0 * std::imag(std::conj(P) * P1);
  const double hx = -h * h * sx;
  const double hy = -h * h * sy;
  const double lap_s = 4.0 * std::norm(P1);
  const double lap_h = -h * h * lap_s + 2.0 * h * h * h * (sx * sx + sy * sy);

  const cplx u12 = 2.0 * P * h;
  const cplx u12x = 2.0 * (P1 * h + P * hx);
  const cplx u12y = 2.0 * (I * P1 * h + P * hy);
  const cplx u12lap = 2.0 * (2.0 * (P1 * hx + I * P1 * hy) + P * lap_h);

  FieldJet j;
  j.value = {u12.real(), u12.imag(), 1.0 - 2.0 * h};
  j.dx = {u12x.real(), u12x.imag(), -2.0 * hx};
  j.dy = {u12y.real(), u12y.imag(), -2.0 * hy};
  j.lap = {u12lap.real(), u12lap.imag(), -2.0 * lap_h};
  return j;
}

std::pair<Vec3, Vec3> bubble_derivatives(int m, const PlanarPoint& p) {
  const FieldJet j = bubble_jet(m, p);
  return {j.dx, j.dy};
}

Field bubble_field(int m) {
  require_degree(m);
  return [m](const PlanarPoint& p) { return bubble_jet(m, p); };
}

double hsystem_residual(const Field& field, std::span<const PlanarPoint> points) {
  double worst = 0.0;
  for (const auto& p : points) {
    const FieldJet j = field(p);
    worst = std::max(worst, max_abs(j.lap - 2.0 * cross(j.dx, j.dy)));
  }
  return worst;
}

double hsystem_residual(int m, std::span<const PlanarPoint> points) {
  return hsystem_residual(bubble_field(m), points);
}

double hsystem_residual_fd(const ValueField& field, std::span<const PlanarPoint> points, double h) {
  double worst = 0.0;
  for (const auto& p : points) {
    const double x = p.x();
    const double y = p.y();
    auto at = [&](double dx, double dy) { return field(PlanarPoint(x + dx, y + dy)); };
    const Vec3 c = at(0, 0);
    const Vec3 xp1 = at(h, 0), xm1 = at(-h, 0), xp2 = at(2 * h, 0), xm2 = at(-2 * h, 0);
    const Vec3 yp1 = at(0, h), ym1 = at(0, -h), yp2 = at(0, 2 * h), ym2 = at(0, -2 * h);
    const Vec3 ux = (1.0 / (12.0 * h)) * (xm2 - xp2 + 8.0 * (xp1 - xm1));
    const Vec3 uy = (1.0 / (12.0 * h)) * (ym2 - yp2 + 8.0 * (yp1 - ym1));
    const Vec3 uxx = (1.0 / (12.0 * h * h)) * (16.0 * (xp1 + xm1) - (xp2 + xm2) - 30.0 * c);
    const Vec3 uyy = (1.0 / (12.0 * h * h)) * (16.0 * (yp1 + ym1) - (yp2 + ym2) - 30.0 * c);
    worst = std::max(worst, max_abs(uxx + uyy - 2.0 * cross(ux, uy)));
  }
  return worst;
}

double energy_density(int m, double r) {
  require_degree(m);
  const BubbleProfile prof(m);
  const auto [F, G] = prof.jet(r);
  // F / r through the folded variable so r = 0 and large r stay finite.
  double F_over_r;
  if (r <= 1.0) {
    const double rm1 = ipow(r, m - 1);
    F_over_r = 2.0 * rm1 / (1.0 + rm1 * rm1 * r * r);
  } else {
    const double q = 1.0 / r;
    const double qm = ipow(q, m);
    F_over_r = 2.0 * qm * q / (1.0 + qm * qm);
  }
  return F.d * F.d + G.d * G.d + m * m * F_over_r * F_over_r;
}

namespace {

EnergyResult integrate_energy(int m, double s_max) {
  constexpr double kAbsTol = 1e-9;
  auto integrand = [m](double s) {
    if (s <= 0.0 || s >= 1.0) return 0.0;
    const double one_minus = 1.0 - s;
    const double r = s / one_minus;
    const double jac = 1.0 / (one_minus * one_minus);
    return 2.0 * kPi * energy_density(m, r) * r * jac;
  };
  double err = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, 0.0, s_max,
                                                                                     20, 1e-13, &err);
  if (!(err <= kAbsTol)) {
    throw NumericalError("energy quadrature did not converge: error estimate " + std::to_string(err));
  }
  return {value, err};
}

}  // namespace

EnergyResult bubble_energy(int m) {
  require_degree(m);
  return integrate_energy(m, 1.0);
}

EnergyResult bubble_energy_truncated(int m, double R) {
  require_degree(m);
  if (!(R >= 0.0)) throw ConfigError("truncation radius must be >= 0");
  if (std::isinf(R)) return integrate_energy(m, 1.0);
  return integrate_energy(m, R / (1.0 + R));
}

std::vector<PlanarPoint> random_disc_points(std::size_t count, double radius, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<PlanarPoint> pts;
  pts.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double r = radius * std::sqrt(unit(rng));
    const double th = 2.0 * kPi * unit(rng);
    pts.push_back(PlanarPoint::polar(r, th));
  }
  return pts;
}

}  // namespace hsys::bubbles
