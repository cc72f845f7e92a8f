#pragma once

#include <array>

namespace hsys::spectral {

/// Solution data (f, df/dr, g, dg/dr) at the junction radius r = 1.
using JunctionData = std::array<double, 4>;

struct Junction {
  JunctionData inner_f;  ///< regular at r = 0, f ~ r^m, g(0) = 0
  JunctionData inner_g;  ///< regular at r = 0, f = o(r^m), g(0) = 1
  JunctionData outer;    ///< decaying at infinity, f~ ~ t^m, g~(0) = 0
};

/// Start of the series region in either chart; the expansions have radius
/// of convergence 1.
inline constexpr double kSeriesRadius = 0.3;
inline constexpr int kSeriesOrder = 60;

/// Integrates both sides to r = t = 1 with an adaptive Dormand-Prince scheme.
/// Throws NumericalError on step failure, naming the chart and position.
Junction shoot_junction(int m, double lambda);

/// Blockwise matching defect of the inner solution with g(0) = g0 against the
/// decaying outer branch: normalized Wronskian sines of the (f, f') and
/// (g, g') blocks. For m = 1 no flat-L2 outer branch exists and the entries
/// are the relative sizes of the two inner blocks.
std::array<double, 2> shoot_mismatch(int m, double lambda, double g0);

/// Smallest singular value of the column-normalized 4x3 matrix
/// [inner_f, inner_g, outer]: zero exactly when some inner regular solution
/// continues into the decaying branch. Writes the matching g0 if requested.
/// Returns 1 for m = 1 (no decaying branch).
double shoot_defect(int m, double lambda, double* g0 = nullptr);

struct ShootRefinement {
  bool branch_exists = false;
  double lambda = 0.0;
  double g0 = 0.0;
  double defect = 0.0;
};

/// Minimizes shoot_defect over [guess - half_width, guess + half_width].
ShootRefinement shoot_refine(int m, double lambda_guess, double half_width = 0.05);

}  // namespace hsys::spectral
