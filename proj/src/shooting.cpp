#include "hsys/shooting.hpp"

#include <Eigen/Dense>
#include <boost/math/tools/minima.hpp>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <map>
#include <sstream>

#include "hsys/corotational.hpp"
#include "hsys/frobenius.hpp"
#include "hsys/types.hpp"

namespace hsys::spectral {

namespace {

using State = std::array<double, 4>;

// (f, f', g, g') at x0 from the chart expansion with the given seeds.
State series_seed(int m, double lambda, Chart chart, double a_m, double b_0) {
  const int sign = chart == Chart::RChart ? 1 : -1;
  const auto sys = frobenius::corotational_system<double>(m, lambda, sign);
  const std::map<int, double> sa{{m, a_m}};
  const std::map<int, double> sb{{0, b_0}};
  const auto ex = frobenius::expand(sys, sa, sb, kSeriesOrder);
  State y{0.0, 0.0, 0.0, 0.0};
  const double x = kSeriesRadius;
  // Horner in reverse for values and derivatives.
  for (int k = kSeriesOrder; k >= 0; --k) {
    y[0] = y[0] * x + ex.a[static_cast<std::size_t>(k)];
    y[2] = y[2] * x + ex.b[static_cast<std::size_t>(k)];
  }
  for (int k = kSeriesOrder; k >= 1; --k) {
    y[1] = y[1] * x + k * ex.a[static_cast<std::size_t>(k)];
    y[3] = y[3] * x + k * ex.b[static_cast<std::size_t>(k)];
  }
  return y;
}

State integrate_to_junction(const corotational::RadialSystem& sys, State y) {
  namespace ode = boost::numeric::odeint;
  const double m2 = static_cast<double>(sys.degree()) * sys.degree();
  const double lambda = sys.lambda();
  auto rhs = [&](const State& s, State& ds, double x) {
    const auto c = sys.coefficients(x);
    ds[0] = s[1];
    ds[1] = -s[1] / x + m2 * s[0] / (x * x) - c.p1 * s[3] - c.p2 * s[0] + lambda * c.weight * s[0];
    ds[2] = s[3];
    ds[3] = -s[3] / x - c.q1 * s[1] - c.q2 * s[0] + lambda * c.weight * s[2];
  };
  auto stepper = ode::make_controlled(1e-13, 1e-13, ode::runge_kutta_dopri5<State>());
  double x_reached = kSeriesRadius;
  auto observer = [&](const State&, double x) { x_reached = x; };
  try {
    ode::integrate_adaptive(stepper, rhs, y, kSeriesRadius, 1.0, 1e-3, observer);
  } catch (const std::exception& e) {
    std::ostringstream msg;
    msg << "integration failed in the " << chart_name(sys.chart()) << "-chart near x = " << x_reached << ": "
        << e.what();
    throw NumericalError(msg.str());
  }
  for (double v : y) {
    if (!std::isfinite(v)) {
      std::ostringstream msg;
      msg << "integration produced non-finite values in the " << chart_name(sys.chart()) << "-chart";
      throw NumericalError(msg.str());
    }
  }
  return y;
}

double block_norm(double a, double b) { return std::hypot(a, b); }

double wronskian_sine(double u, double du, double v, double dv) {
  const double den = block_norm(u, du) * block_norm(v, dv);
  if (den == 0.0) return 1.0;
  return (u * dv - du * v) / den;
}

Eigen::Vector4d as_vector(const JunctionData& d) { return {d[0], d[1], d[2], d[3]}; }

}  // namespace

Junction shoot_junction(int m, double lambda) {
  if (m < 1) throw ConfigError("degree must be >= 1");
  if (!std::isfinite(lambda)) throw ConfigError("spectral parameter must be finite");
  const corotational::RadialSystem inner(m, lambda, Chart::RChart);
  const corotational::RadialSystem outer(m, lambda, Chart::KelvinTChart);
  Junction j;
  j.inner_f = integrate_to_junction(inner, series_seed(m, lambda, Chart::RChart, 1.0, 0.0));
  j.inner_g = integrate_to_junction(inner, series_seed(m, lambda, Chart::RChart, 0.0, 1.0));
  const State t = integrate_to_junction(outer, series_seed(m, lambda, Chart::KelvinTChart, 1.0, 0.0));
  // f(r) = f~(1/r): at r = t = 1 the values agree and d/dr = -d/dt.
  j.outer = {t[0], -t[1], t[2], -t[3]};
  return j;
}

std::array<double, 2> shoot_mismatch(int m, double lambda, double g0) {
  const Junction j = shoot_junction(m, lambda);
  JunctionData in;
  for (std::size_t i = 0; i < 4; ++i) in[i] = j.inner_f[i] + g0 * j.inner_g[i];
  if (m == 1) {
    // f~ ~ t is not square integrable in the plane, so the decaying branch is {0}.
    const double total = std::sqrt(in[0] * in[0] + in[1] * in[1] + in[2] * in[2] + in[3] * in[3]);
    if (total == 0.0) return {0.0, 0.0};
    return {block_norm(in[0], in[1]) / total, block_norm(in[2], in[3]) / total};
  }
  return {wronskian_sine(in[0], in[1], j.outer[0], j.outer[1]), wronskian_sine(in[2], in[3], j.outer[2], j.outer[3])};
}

double shoot_defect(int m, double lambda, double* g0) {
  if (m == 1) {
    if (g0 != nullptr) *g0 = 0.0;
    return 1.0;
  }
  const Junction j = shoot_junction(m, lambda);
  Eigen::Matrix<double, 4, 3> M;
  const Eigen::Vector4d c0 = as_vector(j.inner_f);
  const Eigen::Vector4d c1 = as_vector(j.inner_g);
  const Eigen::Vector4d c2 = as_vector(j.outer);
  M.col(0) = c0 / c0.norm();
  M.col(1) = c1 / c1.norm();
  M.col(2) = c2 / c2.norm();
  Eigen::JacobiSVD<Eigen::Matrix<double, 4, 3>> svd(M, Eigen::ComputeFullV);
  const Eigen::Vector3d v = svd.matrixV().col(2);
  const Eigen::Vector3d sv = svd.singularValues();
  if (g0 != nullptr) {
    const double a = v[0] / c0.norm();
    *g0 = a != 0.0 ? (v[1] / c1.norm()) / a : std::numeric_limits<double>::infinity();
  }
  return sv[2];
}

ShootRefinement shoot_refine(int m, double lambda_guess, double half_width) {
  ShootRefinement out;
  if (m == 1) {
    out.branch_exists = false;
    out.lambda = lambda_guess;
    out.defect = 1.0;
    return out;
  }
  if (!(half_width > 0.0)) throw ConfigError("refinement half width must be positive");
  out.branch_exists = true;
  auto objective = [m](double lam) {
    const double d = shoot_defect(m, lam);
    return d * d;
  };
  std::uintmax_t iters = 200;
  const auto best = boost::math::tools::brent_find_minima(objective, lambda_guess - half_width,
                                                          lambda_guess + half_width, 40, iters);
  out.lambda = best.first;
  out.defect = shoot_defect(m, out.lambda, &out.g0);
  return out;
}

}  // namespace hsys::spectral
