#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "hsys/bubbles.hpp"
#include "hsys/jet.hpp"
#include "hsys/radial_mode.hpp"
#include "hsys/types.hpp"

namespace hsys::corotational {

/// Coefficients of the co-rotational pair written in the chart variable x:
///   f'' + f'/x - m^2 f/x^2 + p1 g' + p2 f - lambda w f = 0
///   g'' + g'/x            + q1 f' + q2 f - lambda w g = 0
struct Coefficients {
  double p1 = 0.0;
  double p2 = 0.0;
  double q1 = 0.0;
  double q2 = 0.0;
  double weight = 0.0;
};

/// The radial system in either chart. In the Kelvin chart the equations are
/// the r-chart ones divided by t^4; they coincide with the r-chart system
/// after f -> -f, which is how the coupling signs are fixed.
class RadialSystem {
 public:
  RadialSystem(int m, double lambda, Chart chart);

  int degree() const { return m_; }
  double lambda() const { return lambda_; }
  Chart chart() const { return chart_; }

  /// Coefficients at x >= 0. At x = 0 the limits are returned; q2 is
  /// unbounded there when m = 1 (q2 f stays bounded because f = O(x)).
  Coefficients coefficients(double x) const;

  /// (f-residual, g-residual) at x > 0 from jets of f and g.
  std::pair<double, double> residual(double x, const Jet2& f, const Jet2& g) const;

 private:
  int m_;
  double lambda_;
  Chart chart_;
  bubbles::BubbleProfile profile_;
};

RadialSystem reduce_to_radial(int m, double lambda, Chart chart);

/// Same system in the other chart.
RadialSystem kelvin_transform(const RadialSystem& sys);
/// f~(t) = f(1/t), g~(t) = g(1/t); an exact involution.
RadialMode kelvin_transform(const RadialMode& mode);

/// A co-rotational mode given by closed-form profiles with two derivatives.
struct AnalyticMode {
  int m = 1;
  Chart chart = Chart::RChart;
  std::function<Jet2(double)> f;
  std::function<Jet2(double)> g;
};

/// Dilation zero mode as an analytic mode in either chart.
AnalyticMode zero_mode_analytic(int m, Chart chart);

/// Smallest chart coordinate included in residual sampling.
inline constexpr double kResidualCutoff = 1e-3;

/// Max of both residuals over the given chart nodes (nodes below the cutoff
/// are skipped).
double radial_residual(const AnalyticMode& mode, const RadialSystem& sys, std::span<const double> nodes);

/// Max of both residuals from five-point finite-difference derivatives of
/// the sampled profiles (one-sided near the ends of the finite node range).
double radial_residual(const RadialMode& mode, const RadialSystem& sys);

/// Pointwise residual pair of a sampled mode (NaN where not evaluated).
std::vector<std::pair<double, double>> radial_residual_profile(const RadialMode& mode, const RadialSystem& sys);

/// Finite-difference weights for derivatives 0..2 at x0 from nodes xs
/// (Fornberg's recursion). Returned as weights[k][j] for derivative k.
std::array<std::vector<double>, 3> fd_weights(double x0, std::span<const double> xs);

/// Cartesian cross term 2 (w_x ^ u_y + u_x ^ w_y) and the polar form
/// (2/r)(w_r ^ u_theta + u_r ^ w_theta) for the co-rotational field with
/// profiles (f, g) around the degree-m bubble.
std::pair<Vec3, Vec3> cross_terms_cartesian_polar(int m, const PlanarPoint& p, const Jet2& f, const Jet2& g);

/// Max difference of the two forms over the points for the given profiles.
double polar_identity_defect(const AnalyticMode& mode, std::span<const PlanarPoint> points);

/// CSV with header `r,f,g`, one row per node; r is the radius |z|.
void write_mode_csv(std::ostream& os, const RadialMode& mode);

}  // namespace hsys::corotational
