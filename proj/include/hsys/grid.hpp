#pragma once

#include <functional>
#include <string>
#include <vector>

namespace hsys::spectral {

/// Compactification of [0, inf] onto s in [0, 1].
enum class GridMap { Rational, Stereographic };

const char* grid_map_name(GridMap map);
GridMap parse_grid_map(const std::string& name);

/// r(s) for s in [0, 1]; r(1) = +inf.
double map_radius(GridMap map, double s);
/// dr/ds for s in [0, 1).
double map_jacobian(GridMap map, double s);
/// Round-sphere area density in s: 2 pi r rho(r) dr/ds, finite on [0, 1].
double sphere_density(GridMap map, double s);

/// Uniform grid in s with lumped sphere-area weights. The plane measure
/// 2 pi r dr equals (sphere weight)/rho, so the plane quadrature weight of
/// node i is weights[i] / rho(r_i); the last node is the point at infinity.
struct RadialGrid {
  int N = 0;
  GridMap map = GridMap::Rational;
  std::vector<double> s;
  std::vector<double> r;
  std::vector<double> weights;

  /// Largest finite radius (the node just before infinity).
  double r_max() const { return r[r.size() - 2]; }
};

RadialGrid build_grid(int N, GridMap map);

/// Approximates int_0^inf h(r) 2 pi r dr. The infinity node uses h/rho from
/// the last finite node.
double integrate_plane(const RadialGrid& grid, const std::function<double(double)>& h);

}  // namespace hsys::spectral
