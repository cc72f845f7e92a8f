#pragma once

#include <span>
#include <vector>

#include "hsys/bubbles.hpp"
#include "hsys/jet.hpp"
#include "hsys/radial_mode.hpp"
#include "hsys/types.hpp"

namespace hsys::linearized {

/// Dilated bubbles u^delta(z) = u_m(delta z), delta > 0.
class DilationFamily {
 public:
  DilationFamily(int m, double delta);
  int degree() const { return m_; }
  double delta() const { return delta_; }

 private:
  int m_;
  double delta_;
};

Vec3 dilated_bubble(const DilationFamily& fam, const PlanarPoint& p);
FieldJet dilated_jet(const DilationFamily& fam, const PlanarPoint& p);
bubbles::Field dilated_field(const DilationFamily& fam);

/// Which third component to use for the dilation mode. `AsPrinted` carries
/// 2m |z|^2m / (1+|z|^2m)^2, half of the delta-derivative; it is kept only so
/// tests can show that it fails the linearized equation.
enum class ZeroModeVariant { Corrected, AsPrinted };

/// f0(r) = 2m r^m (1 - r^2m)/(1 + r^2m)^2 with two derivatives.
Jet2 zero_mode_f(int m, double r);
/// g0(r) = 4m r^2m/(1 + r^2m)^2 (Corrected) or half of it (AsPrinted).
Jet2 zero_mode_g(int m, double r, ZeroModeVariant variant = ZeroModeVariant::Corrected);

/// w = d/d delta u^delta at delta = 1.
Vec3 zero_mode_eval(int m, const PlanarPoint& p, ZeroModeVariant variant = ZeroModeVariant::Corrected);
FieldJet zero_mode_jet(int m, const PlanarPoint& p, ZeroModeVariant variant = ZeroModeVariant::Corrected);
bubbles::Field zero_mode_field(int m, ZeroModeVariant variant = ZeroModeVariant::Corrected);

/// Cartesian jet of (f cos m theta, f sin m theta, g) from radial jets.
/// Requires f(0) = 0 when r = 0 (the limit is taken explicitly there).
FieldJet corotational_jet(int m, double r, double theta, const Jet2& f, const Jet2& g);

/// Conformal weight 4 / (1 + |z|^2)^2.
inline double conformal_weight(double r) {
  const double d = 1.0 + r * r;
  return 4.0 / (d * d);
}

/// max |Delta w - 2 (w_x ^ u_y + u_x ^ w_y) - 4 lambda (1+|z|^2)^-2 w|.
double linearized_residual(int m, double lambda, const bubbles::Field& w, std::span<const PlanarPoint> points);

/// Flat L2 norm squared over |z| <= R: 2 pi int_0^R (f^2 + g^2) r dr.
double truncated_l2(const RadialMode& mode, double R);

/// Zero mode sampled on the given r-chart nodes.
RadialMode zero_mode_radial(int m, std::span<const double> r_nodes);

/// Geometric nodes {0} U [r_min, r_max] with `per_decade` points per decade.
std::vector<double> geometric_nodes(double r_min, double r_max, int per_decade);

struct DecayConstants {
  double c1 = 0.0;  ///< |w| <= c1 (1+r)^-m
  double c2 = 0.0;  ///< c2 r^-m <= |w|
  double log_fit_intercept = 0.0;
  double log_fit_residual = 0.0;  ///< RMS of log|w| + m log r - intercept on the fit window
};

/// Least-squares fit of log|w| + m log r over [r_lo, r_hi]; c1 and c2 are the
/// tightest constants valid on that window.
DecayConstants fit_decay_constants(int m, double r_lo = 10.0, double r_hi = 1e3, int samples = 200);

/// True when c2 r^-m <= |w(r)| <= c1 (1+r)^-m on log-spaced samples of [r_lo, r_hi].
bool decay_sandwich_holds(int m, const DecayConstants& c, double r_lo, double r_hi, int samples = 400);

}  // namespace hsys::linearized
