#pragma once

#include <functional>
#include <span>
#include <vector>

#include "hsys/jet.hpp"
#include "hsys/types.hpp"

namespace hsys::bubbles {

/// Radial profiles of the degree-m bubble
///   u = (F(r) cos m theta, F(r) sin m theta, G(r)).
/// In the Kelvin chart (t = 1/r, theta -> -theta) the same object is described
/// by F(t) = 2 t^m / (1 + t^2m) and G(t) = (1 - t^2m) / (1 + t^2m).
class BubbleProfile {
 public:
  explicit BubbleProfile(int m, Chart chart = Chart::RChart);

  int degree() const { return m_; }
  Chart chart() const { return chart_; }

  double F(double x) const { return jet(x).first.v; }
  double G(double x) const { return jet(x).second.v; }
  double dF(double x) const { return jet(x).first.d; }
  double dG(double x) const { return jet(x).second.d; }

  /// (F, G) with first and second derivatives in the chart variable. Valid
  /// for x in [0, +inf]; the endpoints are evaluated as limits.
  std::pair<Jet2, Jet2> jet(double x) const;

 private:
  int m_;
  Chart chart_;
};

/// The bubble profiles written as templates so any jet type can be threaded
/// through them. `x` must lie in [0, 1]; callers fold larger radii via q = 1/r.
template <class T>
T profile_F_small(const T& q, int m) {
  const T qm = ipow(q, m);
  return T(2.0) * qm / (T(1.0) + qm * qm);
}
template <class T>
T profile_G_small(const T& q, int m) {
  const T q2m = ipow(q, 2 * m);
  return (q2m - T(1.0)) / (q2m + T(1.0));
}

/// u_m(z) = (2 Re z^m, 2 Im z^m, |z|^2m - 1) / (1 + |z|^2m).
Vec3 bubble_eval(int m, const PlanarPoint& p);

/// Closed-form first partials (u_x, u_y).
std::pair<Vec3, Vec3> bubble_derivatives(int m, const PlanarPoint& p);

/// Value, first partials and Laplacian from closed-form formulas.
FieldJet bubble_jet(int m, const PlanarPoint& p);

using Field = std::function<FieldJet(const PlanarPoint&)>;
using ValueField = std::function<Vec3(const PlanarPoint&)>;

Field bubble_field(int m);

/// max over points of |Delta u - 2 u_x ^ u_y| using analytic jets.
double hsystem_residual(const Field& field, std::span<const PlanarPoint> points);
double hsystem_residual(int m, std::span<const PlanarPoint> points);

/// Fallback mode: derivatives from fourth-order central differences of the
/// values only, with step h.
double hsystem_residual_fd(const ValueField& field, std::span<const PlanarPoint> points, double h = 1e-3);

struct EnergyResult {
  double value = 0.0;
  double error_estimate = 0.0;
};

/// Dirichlet energy of u_m over the whole plane, integrated in s = r/(1+r).
EnergyResult bubble_energy(int m);

/// Dirichlet energy over the disc |z| <= R.
EnergyResult bubble_energy_truncated(int m, double R);

/// Energy density |grad u|^2 of the degree-m bubble at radius r (radial form).
double energy_density(int m, double r);

/// Deterministic pseudo-random sample of points with |z| <= radius.
std::vector<PlanarPoint> random_disc_points(std::size_t count, double radius, unsigned seed);

}  // namespace hsys::bubbles
