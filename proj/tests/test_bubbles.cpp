#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>

#include "gen.hpp"
#include "hsys/bubbles.hpp"

using namespace hsys;
using namespace hsys::bubbles;

namespace {

// Degree-m bubble written directly as inverse stereographic projection of z^m.
Vec3 bubble_reference(int m, double x, double y) {
  const std::complex<double> w = std::pow(std::complex<double>(x, y), m);
  const double n2 = std::norm(w);
  return {2.0 * w.real() / (1.0 + n2), 2.0 * w.imag() / (1.0 + n2), (n2 - 1.0) / (n2 + 1.0)};
}

}  // namespace

TEST_CASE("bubble matches stereographic projection of z^m") {
  testing::Gen gen(11);
  for (int m = 1; m <= 4; ++m) {
    for (int k = 0; k < 100; ++k) {
      const PlanarPoint p = gen.point(1e-2, 1e2);
      const Vec3 u = bubble_eval(m, p);
      const Vec3 ref = bubble_reference(m, p.x(), p.y());
      CHECK(max_abs(u - ref) < 1e-13);
      CHECK(std::abs(norm(u) - 1.0) < 1e-14);
    }
  }
}

TEST_CASE("bubble solves the H-system") {
  const auto pts = random_disc_points(200, 10.0, 7);
  for (int m = 1; m <= 4; ++m) CHECK(hsystem_residual(m, pts) <= 1e-10);
}

TEST_CASE("finite-difference residual agrees with the analytic one") {
  const auto pts = random_disc_points(50, 2.0, 3);
  for (int m = 1; m <= 3; ++m) {
    const ValueField u = [m](const PlanarPoint& p) { return bubble_eval(m, p); };
    CHECK(hsystem_residual_fd(u, pts) < 1e-4);
  }
  // u = (x, y, 0) is harmonic but u_x ^ u_y = e3.
  const ValueField plane = [](const PlanarPoint& p) { return Vec3(p.x(), p.y(), 0.0); };
  CHECK(hsystem_residual_fd(plane, pts) == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("analytic derivatives match central differences") {
  testing::Gen gen(5);
  const double h = 1e-5;
  for (int m = 1; m <= 4; ++m) {
    for (int k = 0; k < 40; ++k) {
      const PlanarPoint p = gen.point(0.1, 5.0);
      const auto [ux, uy] = bubble_derivatives(m, p);
      const Vec3 fx = (bubble_eval(m, {p.x() + h, p.y()}) - bubble_eval(m, {p.x() - h, p.y()})) * (0.5 / h);
      const Vec3 fy = (bubble_eval(m, {p.x(), p.y() + h}) - bubble_eval(m, {p.x(), p.y() - h})) * (0.5 / h);
      const double scale = 1.0 + max_abs(ux) + max_abs(uy);
      CHECK(max_abs(ux - fx) < 1e-7 * scale);
      CHECK(max_abs(uy - fy) < 1e-7 * scale);
      const FieldJet j = bubble_jet(m, p);
      CHECK(max_abs(j.value - bubble_eval(m, p)) < 1e-15);
    }
  }
}

TEST_CASE("energy is quantized") {
  for (int m = 1; m <= 4; ++m) {
    const EnergyResult e = bubble_energy(m);
    CHECK(std::abs(e.value - 8.0 * kPi * m) <= 1e-6 * 8.0 * kPi * m);
  }
}

TEST_CASE("energy density is |grad u|^2 and truncated energy has a closed form") {
  testing::Gen gen(17);
  const double h = 1e-5;
  for (int m = 1; m <= 4; ++m) {
    for (int k = 0; k < 20; ++k) {
      const double r = gen.radius(0.05, 20.0);
      const PlanarPoint p(r, 0.0);
      const auto [ux, uy] = bubble_derivatives(m, p);
      CHECK(energy_density(m, r) == doctest::Approx(dot(ux, ux) + dot(uy, uy)).epsilon(1e-12));
      const Vec3 fd = (bubble_eval(m, {r + h, 0.0}) - bubble_eval(m, {r - h, 0.0})) * (0.5 / h);
      // Conformality: |u_theta / r| = |u_r|.
      CHECK(energy_density(m, r) == doctest::Approx(2.0 * dot(fd, fd)).epsilon(1e-7));
    }
    for (double R : {0.5, 1.0, 3.0, 10.0}) {
      const double R2m = std::pow(R, 2 * m);
      const double exact = 8.0 * kPi * m * R2m / (1.0 + R2m);
      CHECK(bubble_energy_truncated(m, R).value == doctest::Approx(exact).epsilon(1e-9));
    }
  }
}

TEST_CASE("random disc points are deterministic and inside the disc") {
  const auto a = random_disc_points(200, 10.0, 42);
  const auto b = random_disc_points(200, 10.0, 42);
  REQUIRE(a.size() == 200);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].x() == b[i].x());
    CHECK(a[i].y() == b[i].y());
    CHECK(a[i].r() <= 10.0);
  }
}

TEST_CASE("invalid inputs are rejected") {
  CHECK_THROWS_AS(PlanarPoint(std::nan(""), 0.0), ConfigError);
  CHECK_THROWS_AS(BubbleProfile(0), ConfigError);
}

TEST_CASE("Kelvin chart profiles are the r-chart profiles at 1/t") {
  testing::Gen gen(23);
  for (int m = 1; m <= 4; ++m) {
    const BubbleProfile R(m, Chart::RChart);
    const BubbleProfile K(m, Chart::KelvinTChart);
    for (int k = 0; k < 50; ++k) {
      const double t = gen.radius(1e-3, 1e3);
      CHECK(K.F(t) == doctest::Approx(R.F(1.0 / t)).epsilon(1e-14));
      CHECK(std::abs(K.G(t) - R.G(1.0 / t)) < 1e-14);
      CHECK(K.G(t) == -R.G(t));
    }
  }
}
