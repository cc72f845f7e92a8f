#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "gen.hpp"
#include "hsys/grid.hpp"

using namespace hsys;
using namespace hsys::spectral;

TEST_CASE("maps send [0,1] onto [0,inf] monotonically") {
  for (GridMap map : {GridMap::Rational, GridMap::Stereographic}) {
    CHECK(map_radius(map, 0.0) == 0.0);
    CHECK(std::isinf(map_radius(map, 1.0)));
    CHECK(map_radius(map, 0.5) == doctest::Approx(1.0));
    double prev = 0.0;
    for (int k = 1; k < 100; ++k) {
      const double r = map_radius(map, k / 100.0);
      CHECK(r > prev);
      prev = r;
    }
  }
}

TEST_CASE("jacobian matches a central difference") {
  testing::Gen gen(4);
  for (GridMap map : {GridMap::Rational, GridMap::Stereographic}) {
    for (int k = 0; k < 50; ++k) {
      const double s = gen.uniform(0.02, 0.98);
      const double h = 1e-6;
      const double fd = (map_radius(map, s + h) - map_radius(map, s - h)) / (2 * h);
      CHECK(map_jacobian(map, s) == doctest::Approx(fd).epsilon(1e-6));
    }
  }
}

TEST_CASE("sphere density integrates to the sphere area") {
  using boost::math::quadrature::gauss_kronrod;
  for (GridMap map : {GridMap::Rational, GridMap::Stereographic}) {
    const double area = gauss_kronrod<double, 61>::integrate([map](double s) { return sphere_density(map, s); }, 0.0, 1.0);
    CHECK(area == doctest::Approx(4.0 * kPi).epsilon(1e-10));
  }
}

TEST_CASE("lumped weights converge to the sphere area at second order") {
  for (GridMap map : {GridMap::Rational, GridMap::Stereographic}) {
    double prev_err = 0.0;
    for (int N : {250, 500, 1000, 2000}) {
      const RadialGrid g = build_grid(N, map);
      CHECK(g.r.size() == static_cast<std::size_t>(N));
      CHECK(std::isinf(g.r.back()));
      double total = 0.0;
      for (double w : g.weights) {
        CHECK(w >= 0.0);
        total += w;
      }
      const double err = std::abs(total - 4.0 * kPi);
      if (prev_err > 0.0) CHECK(prev_err / err == doctest::Approx(4.0).epsilon(0.05));
      prev_err = err;
    }
  }
}

TEST_CASE("plane integration against closed forms") {
  const RadialGrid g = build_grid(2000, GridMap::Rational);
  // 2 pi int r e^{-r^2} dr = pi
  CHECK(integrate_plane(g, [](double r) { return std::exp(-r * r); }) == doctest::Approx(kPi).epsilon(1e-5));
  // 2 pi int r / (1 + r^2)^3 dr = pi / 2
  CHECK(integrate_plane(g, [](double r) { return 1.0 / std::pow(1 + r * r, 3); }) ==
        doctest::Approx(kPi / 2).epsilon(1e-5));
}

TEST_CASE("grid configuration errors") {
  CHECK_THROWS_AS(build_grid(8, GridMap::Rational), ConfigError);
  CHECK_THROWS_AS(parse_grid_map("polar"), ConfigError);
  CHECK(parse_grid_map("stereographic") == GridMap::Stereographic);
  CHECK(std::string(grid_map_name(GridMap::Rational)) == "rational");
}
