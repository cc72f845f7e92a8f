#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "gen.hpp"
#include "hsys/frobenius.hpp"
#include "hsys/series.hpp"

using namespace hsys;
using namespace hsys::series;

namespace {

using Q = mpq_class;
using P = std::vector<Q>;

P mul(const P& a, const P& b) {
  P r(a.size() + b.size() - 1, Q(0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  return r;
}

P add(P a, const P& b) {
  if (b.size() > a.size()) a.resize(b.size(), Q(0));
  for (std::size_t i = 0; i < b.size(); ++i) a[i] += b[i];
  return a;
}

P scale(P a, const Q& c) {
  for (auto& x : a) x *= c;
  return a;
}

P deriv(const P& a) {
  P r(a.size() > 1 ? a.size() - 1 : 1, Q(0));
  for (std::size_t k = 1; k < a.size(); ++k) r[k - 1] = a[k] * Q(static_cast<long>(k));
  return r;
}

// The m = 1 Kelvin-chart pair multiplied through by t^2 (1+t^2)^2:
//   (1+t^2)^2 (t^2 f'' + t f' - f) - 4t^2 (1+t^2) g' + 8 t^2 f - 4 lambda t^2 f
//   (1+t^2)^2 (t^2 g'' + t g')     + 4t^2 (1+t^2) f' + 4t(1-t^2) f - 4 lambda t^2 g
std::array<P, 2> substitute(const P& f, const P& g, const Q& lambda) {
  const P t{0, 1};
  const P t2{0, 0, 1};
  const P D2{1, 0, 2, 0, 1};
  const P t2D{0, 0, 1, 0, 1};
  const P euler_f = add(add(mul(t2, deriv(deriv(f))), mul(t, deriv(f))), scale(f, -1));
  const P euler_g = add(mul(t2, deriv(deriv(g))), mul(t, deriv(g)));
  P ef = mul(D2, euler_f);
  ef = add(ef, scale(mul(t2D, deriv(g)), -4));
  ef = add(ef, scale(mul(t2, f), Q(8) - Q(4) * lambda));
  P eg = mul(D2, euler_g);
  eg = add(eg, scale(mul(t2D, deriv(f)), 4));
  eg = add(eg, scale(mul(P{0, 1, 0, -1}, f), 4));
  eg = add(eg, scale(mul(t2, g), -Q(4) * lambda));
  return {ef, eg};
}

Q coeff(const std::map<int, Q>& m, int k) {
  const auto it = m.find(k);
  return it == m.end() ? Q(0) : it->second;
}

Q random_rational(testing::Gen& gen) {
  Q q(gen.integer(-50, 50), gen.integer(1, 17));
  q.canonicalize();
  return q;
}

}  // namespace

TEST_CASE("rational parsing") {
  CHECK(parse_rational("7/3") == Q(7, 3));
  CHECK(parse_rational("-14/6") == Q(-7, 3));
  CHECK(parse_rational("3") == Q(3));
  CHECK(parse_rational("1.25") == Q(5, 4));
  CHECK(parse_rational("-2.5e-1") == Q(-1, 4));
  CHECK_THROWS_WITH_AS(parse_rational("1/0"), doctest::Contains("zero denominator"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_rational("abc"), doctest::Contains("malformed rational"), ConfigError);
  CHECK_THROWS_AS(parse_rational(""), ConfigError);
  CHECK(rational_string(Q(-7, 3)) == "-7/3");
  CHECK(rational_string(Q(4)) == "4");
}

TEST_CASE("first recursion rows match the hand expansion") {
  testing::Gen gen(12);
  for (int trial = 0; trial < 5; ++trial) {
    const Q lambda = random_rational(gen);
    const RecursionTable tab = derive_recursions(lambda);
    const RecursionRow& r = tab.rows.at(0);
    CHECK(r.target == 2);
    // 4 b2 = 4 lambda b0 - 8 a1
    CHECK(r.b_lead == 4);
    CHECK(coeff(r.alpha, 0) == Q(4) * lambda);
    CHECK(coeff(r.alpha, 1) == 0);
    CHECK(coeff(r.gamma, 0) == 0);
    CHECK(coeff(r.gamma, 1) == -8);
    // 3 a2 = 4 b1 + (4 lambda - 6) a0
    CHECK(r.a_lead == 3);
    CHECK(coeff(r.sigma, 0) == 0);
    CHECK(coeff(r.sigma, 1) == 4);
    CHECK(coeff(r.delta, 0) == Q(4) * lambda - Q(6));
    CHECK(coeff(r.delta, 1) == 0);
    for (std::size_t j = 0; j < tab.rows.size(); ++j) {
      const int n = static_cast<int>(j);
      CHECK(tab.rows[j].a_lead == Q((n + 2) * (n + 2) - 1));
      CHECK(tab.rows[j].b_lead == Q((n + 2) * (n + 2)));
      for (const auto* m : {&tab.rows[j].alpha, &tab.rows[j].gamma, &tab.rows[j].sigma, &tab.rows[j].delta}) {
        for (const auto& [k, v] : *m) CHECK(k <= n + 1);
      }
    }
  }
}

TEST_CASE("recursion tables are affine in lambda") {
  const auto t0 = derive_recursions(Q(0));
  const auto t1 = derive_recursions(Q(1));
  const auto t5 = derive_recursions(Q(5, 2));
  for (std::size_t j = 0; j < t0.rows.size(); ++j) {
    for (int k = 0; k <= static_cast<int>(j) + 1; ++k) {
      const Q slope = coeff(t1.rows[j].alpha, k) - coeff(t0.rows[j].alpha, k);
      CHECK(coeff(t5.rows[j].alpha, k) == coeff(t0.rows[j].alpha, k) + Q(5, 2) * slope);
      const Q dslope = coeff(t1.rows[j].delta, k) - coeff(t0.rows[j].delta, k);
      CHECK(coeff(t5.rows[j].delta, k) == coeff(t0.rows[j].delta, k) + Q(5, 2) * dslope);
    }
  }
}

TEST_CASE("zero seed gives zero output for any lambda") {
  testing::Gen gen(99);
  std::vector<Q> lambdas{Q(0), Q(1), Q(-1), Q(3, 2), Q(-7, 3)};
  for (int k = 0; k < 5; ++k) lambdas.push_back(random_rational(gen));
  for (const Q& lambda : lambdas) {
    const SeriesState st = series_run({0, 0, 0, 0}, lambda, 50);
    REQUIRE(st.a.size() == 51);
    for (int n = 0; n <= 50; ++n) {
      CHECK(st.a[n] == 0);
      CHECK(st.b[n] == 0);
    }
  }
}

TEST_CASE("resonance seed reproduces the Kelvin zero mode") {
  const SeriesState st = series_run({0, -2, 0, 0}, Q(0), 21);
  CHECK(st.a[3] == 6);
  CHECK(st.a[5] == -10);
  CHECK(st.b[2] == 4);
  CHECK(st.b[4] == -8);
  for (int k = 1; k <= 10; ++k) {
    const long sign = (k % 2 == 1) ? 1 : -1;
    CHECK(st.a[2 * k + 1] == Q(sign * 2 * (2 * k + 1)));
    CHECK(st.b[2 * k] == Q(sign * 4 * k));
    CHECK(st.a[2 * k] == 0);
  }
  CHECK(series_compare_taylor("kelvin_zero_mode_f", st));
  CHECK(series_compare_taylor("kelvin_zero_mode_g", st));
  CHECK_FALSE(series_compare_taylor("kelvin_zero_mode_f", series_run({0, -2, 0, 0}, Q(1), 21)));
  CHECK_THROWS_AS(series_compare_taylor("no_such_profile", st), ConfigError);
  for (const auto& [k, v] : st.seed_defect_f) CHECK(v == 0);
  for (const auto& [k, v] : st.seed_defect_g) CHECK(v == 0);
}

TEST_CASE("bubble Taylor coefficients") {
  const auto F = taylor_coefficients("bubble_F", 8);
  const auto G = taylor_coefficients("bubble_G", 8);
  const std::vector<Q> eF{0, 2, 0, -2, 0, 2, 0, -2, 0};
  const std::vector<Q> eG{1, 0, -2, 0, 2, 0, -2, 0, 2};
  CHECK(F == eF);
  CHECK(G == eG);
}

TEST_CASE("linearity in the seed") {
  testing::Gen gen(5);
  for (int trial = 0; trial < 5; ++trial) {
    const Seed s{random_rational(gen), random_rational(gen), random_rational(gen), random_rational(gen)};
    const Q c = random_rational(gen);
    const Q lambda = random_rational(gen);
    const SeriesState a = series_run(s, lambda, 20);
    const SeriesState b = series_run({c * s.a0, c * s.a1, c * s.b0, c * s.b1}, lambda, 20);
    for (int n = 0; n <= 20; ++n) {
      CHECK(b.a[n] == c * a.a[n]);
      CHECK(b.b[n] == c * a.b[n]);
    }
  }
}

TEST_CASE("table-driven and engine-driven runs agree") {
  testing::Gen gen(8);
  for (int trial = 0; trial < 4; ++trial) {
    const Q lambda = random_rational(gen);
    const Seed s{0, random_rational(gen), random_rational(gen), 0};
    const SeriesState a = series_run(s, lambda, 12);
    const SeriesState b = series_run_table(s, derive_recursions(lambda, 12), 12);
    CHECK(a.a == b.a);
    CHECK(a.b == b.b);
  }
}

TEST_CASE("truncations annihilate the ODE through order N (independent polynomial oracle)") {
  testing::Gen gen(31337);
  for (int trial = 0; trial < 6; ++trial) {
    const Q lambda = random_rational(gen);
    // Consistent seeds: a0 and b1 are forced to vanish by the lowest-order equations.
    const Seed s{0, random_rational(gen), random_rational(gen), 0};
    const int N = 30;
    const SeriesState st = series_run(s, lambda, N);
    const auto [ef, eg] = substitute(st.a, st.b, lambda);
    for (int n = 0; n <= N; ++n) {
      CHECK(ef[n] == 0);
      CHECK(eg[n] == 0);
    }
    const auto ann = annihilation_coefficients(st);
    for (int n = 0; n <= N; ++n) {
      CHECK(ann[0][n] == ef[n]);
      CHECK(ann[1][n] == eg[n]);
    }
  }
}

TEST_CASE("Kelvin zero mode closed form satisfies the exact ODE") {
  const int N = 25;
  const auto f = taylor_coefficients("kelvin_zero_mode_f", N + 4);
  const auto g = taylor_coefficients("kelvin_zero_mode_g", N + 4);
  const auto [ef, eg] = substitute(f, g, Q(0));
  for (int n = 0; n <= N; ++n) {
    CHECK(ef[n] == 0);
    CHECK(eg[n] == 0);
  }
}

TEST_CASE("series CSV") {
  const SeriesState st = series_run({0, Q(1, 3), 0, 0}, Q(1, 2), 4);
  std::ostringstream os;
  write_series_csv(os, st);
  const std::string csv = os.str();
  CHECK(csv.rfind("n,a_n,b_n\n0,0,0\n1,1/3,0\n", 0) == 0);
  CHECK_THROWS_AS(series_run({0, 0, 0, 0}, Q(0), 3), ConfigError);
}
