#include <cmath>

#include "hsys/kernels.hpp"

namespace hsys::kernels {
namespace {

// Profiles are evaluated through q = min(r, 1/r) so that both chart endpoints
// (r = 0 and r = +inf) reduce to q = 0 without special cases. The operation
// order here is the reference the vector variants reproduce.
void bubble_profiles_scalar(int m, std::span<const double> r, std::span<double> F, std::span<double> G,
                            std::span<double> dF, std::span<double> dG) {
  const double two_m = 2.0 * m;
  const double four_m = 4.0 * m;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double ri = r[i];
    const bool big = ri > 1.0;
    const double inv = 1.0 / ri;
    const double q = big ? inv : ri;
    double qm1 = 1.0;
    for (int k = 1; k < m; ++k) qm1 *= q;
    const double qm = qm1 * q;
    const double q2m = qm * qm;
    const double den = 1.0 + q2m;
    const double den2 = den * den;
    const double one_minus = 1.0 - q2m;
    F[i] = (2.0 * qm) / den;
    const double g = one_minus / den;
    G[i] = big ? g : -g;
    dF[i] = big ? -((two_m * (qm * q)) * one_minus) / den2 : ((two_m * qm1) * one_minus) / den2;
    dG[i] = big ? (four_m * (q2m * q)) / den2 : (four_m * (qm1 * qm)) / den2;
  }
}

double weighted_dot_scalar(std::span<const double> w, std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * x[i] * y[i];
  return s;
}

double dot_scalar(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

void axpy_scalar(double a, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

double max_abs_scalar(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) {
    const double a = std::abs(v);
    if (a > m || std::isnan(a)) m = a;
  }
  return m;
}

}  // namespace

namespace detail {
const KernelTable kScalarTable{Isa::Scalar, &bubble_profiles_scalar, &weighted_dot_scalar, &dot_scalar,
                               &axpy_scalar, &max_abs_scalar};
}

}  // namespace hsys::kernels
