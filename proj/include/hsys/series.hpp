#pragma once

#include <gmpxx.h>

#include <array>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace hsys::series {

/// Parses "p/q", an integer, or a decimal such as "-2.375" into an exact
/// rational. Throws ConfigError on malformed text or a zero denominator.
mpq_class parse_rational(const std::string& text);
/// Canonical "p/q" text ("p" when q = 1).
std::string rational_string(const mpq_class& q);

/// Coefficients (a_n, b_n) of the m = 1 Kelvin-chart expansions
/// f(t) = sum a_n t^n, g(t) = sum b_n t^n, all exact.
struct SeriesState {
  mpq_class lambda;
  int order = 0;
  std::vector<mpq_class> a;
  std::vector<mpq_class> b;
  /// Equation coefficients at the seeded indices 0 and 1 (zero when the seed
  /// is consistent with the equations there).
  std::map<int, mpq_class> seed_defect_f;
  std::map<int, mpq_class> seed_defect_g;
};

/// Linear update for one target index n+2:
///   (n+2)^2 b_{n+2}       = sum_k alpha_k b_k + sum_k gamma_k a_k
///   ((n+2)^2 - 1) a_{n+2} = sum_k sigma_k b_k + sum_k delta_k a_k
struct RecursionRow {
  int target = 0;  ///< n + 2
  mpq_class b_lead;
  mpq_class a_lead;
  std::map<int, mpq_class> alpha;
  std::map<int, mpq_class> gamma;
  std::map<int, mpq_class> sigma;
  std::map<int, mpq_class> delta;
};

struct RecursionTable {
  mpq_class lambda;
  std::vector<RecursionRow> rows;  ///< rows[j] has target j + 2
};

/// Rows for targets 2..max_target, read off the multiplied polynomial
/// equations of the m = 1 Kelvin-chart system.
RecursionTable derive_recursions(const mpq_class& lambda, int max_target = 12);

struct Seed {
  mpq_class a0, a1, b0, b1;
};

/// Applies the recursions through order N (N >= 4).
SeriesState series_run(const Seed& seed, const mpq_class& lambda, int N);

/// Same coefficients obtained by evaluating a recursion table row by row;
/// the table must reach target N.
SeriesState series_run_table(const Seed& seed, const RecursionTable& table, int N);

/// Coefficients of t^0..t^N of both multiplied equations evaluated on the
/// truncated series, as exact polynomial identities: {f-equation, g-equation}.
std::array<std::vector<mpq_class>, 2> annihilation_coefficients(const SeriesState& state);

/// Exact Taylor coefficients (through t^N) of a named m = 1 Kelvin-chart
/// profile: kelvin_zero_mode_f, kelvin_zero_mode_g, bubble_F, bubble_G.
std::vector<mpq_class> taylor_coefficients(const std::string& name, int N);

/// True when the state's sequence (a for *_f / bubble_F, b for *_g /
/// bubble_G) equals the profile's Taylor coefficients through its order.
bool series_compare_taylor(const std::string& name, const SeriesState& state);

/// CSV `n,a_n,b_n` with exact p/q entries.
void write_series_csv(std::ostream& os, const SeriesState& state);

}  // namespace hsys::series
