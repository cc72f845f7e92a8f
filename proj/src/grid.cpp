#include "hsys/grid.hpp"

#include <cmath>
#include <limits>

#include "hsys/linearized.hpp"
#include "hsys/types.hpp"

namespace hsys::spectral {

const char* grid_map_name(GridMap map) { return map == GridMap::Rational ? "rational" : "stereographic"; }

GridMap parse_grid_map(const std::string& name) {
  if (name == "rational") return GridMap::Rational;
  if (name == "stereographic") return GridMap::Stereographic;
  throw ConfigError("unknown grid map '" + name + "' (expected rational or stereographic)");
}

double map_radius(GridMap map, double s) {
  if (s >= 1.0) return std::numeric_limits<double>::infinity();
  if (map == GridMap::Rational) return s / (1.0 - s);
  return std::tan(0.5 * kPi * s);
}

double map_jacobian(GridMap map, double s) {
  if (map == GridMap::Rational) {
    const double u = 1.0 - s;
    return 1.0 / (u * u);
  }
  const double c = std::cos(0.5 * kPi * s);
  return 0.5 * kPi / (c * c);
}

double sphere_density(GridMap map, double s) {
  if (map == GridMap::Rational) {
    const double u = 1.0 - s;
    const double d = u * u + s * s;
    return 2.0 * kPi * 4.0 * s * u / (d * d);
  }
  return 2.0 * kPi * kPi * std::sin(kPi * s);
}

RadialGrid build_grid(int N, GridMap map) {
  if (N < 16) throw ConfigError("grid needs N >= 16 nodes, got " + std::to_string(N));
  RadialGrid g;
  g.N = N;
  g.map = map;
  g.s.resize(N);
  g.r.resize(N);
  g.weights.assign(N, 0.0);
  const double h = 1.0 / (N - 1);
  for (int i = 0; i < N; ++i) {
    g.s[i] = i == N - 1 ? 1.0 : i * h;
    g.r[i] = map_radius(map, g.s[i]);
  }
  // Midpoint rule per element, half of the element area to each end node.
  for (int e = 0; e + 1 < N; ++e) {
    const double area = (g.s[e + 1] - g.s[e]) * sphere_density(map, 0.5 * (g.s[e] + g.s[e + 1]));
    g.weights[e] += 0.5 * area;
    g.weights[e + 1] += 0.5 * area;
  }
  return g;
}

double integrate_plane(const RadialGrid& grid, const std::function<double(double)>& h) {
  double sum = 0.0;
  const std::size_t n = grid.r.size();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    sum += grid.weights[i] * h(grid.r[i]) / linearized::conformal_weight(grid.r[i]);
  }
  const double r_last = grid.r[n - 2];
  sum += grid.weights[n - 1] * h(r_last) / linearized::conformal_weight(r_last);
  return sum;
}

}  // namespace hsys::spectral
