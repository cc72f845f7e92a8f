#include "hsys/series.hpp"

#include <cctype>
#include <ostream>

#include "hsys/frobenius.hpp"
#include "hsys/types.hpp"

namespace hsys::series {

namespace {

using frobenius::Seq;

constexpr int kKelvinSign = -1;

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

mpz_class pow10(unsigned long k) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, k);
  return r;
}

frobenius::System<mpq_class> kelvin_system(const mpq_class& lambda) {
  return frobenius::corotational_system<mpq_class>(1, lambda, kKelvinSign);
}

// Moves every contribution to x^target other than the Euler diagonal onto the
// right-hand side, sorted by sequence.
void collect_row(const frobenius::Equation<mpq_class>& eq, int target, std::map<int, mpq_class>& on_b,
                 std::map<int, mpq_class>& on_a) {
  for (std::size_t t = 0; t < eq.terms.size(); ++t) {
    const auto& term = eq.terms[t];
    for (std::size_t i = 0; i < term.weight.size(); ++i) {
      if (t == 0 && i == 0) continue;
      if (term.weight[i] == 0) continue;
      const long k = static_cast<long>(target) - static_cast<long>(i) - term.shift;
      if (k < 0) continue;
      const mpq_class c = -term.weight[i] * term.multiplier(k);
      if (c == 0) continue;
      auto& dst = term.seq == Seq::B ? on_b : on_a;
      dst[static_cast<int>(k)] += c;
    }
  }
  for (auto* m : {&on_a, &on_b}) {
    for (auto it = m->begin(); it != m->end();) it = it->second == 0 ? m->erase(it) : std::next(it);
  }
}

void require_order(int N) {
  if (N < 4) throw ConfigError("series order must be >= 4, got " + std::to_string(N));
}

}  // namespace

mpq_class parse_rational(const std::string& text) {
  std::string s = text;
  bool negative = false;
  if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
    negative = s[0] == '-';
    s.erase(0, 1);
  }
  mpq_class q;
  const auto slash = s.find('/');
  if (slash != std::string::npos) {
    const std::string p = s.substr(0, slash);
    const std::string d = s.substr(slash + 1);
    if (!all_digits(p) || !all_digits(d)) throw ConfigError("malformed rational '" + text + "'");
    const mpz_class den(d);
    if (den == 0) throw ConfigError("zero denominator in rational '" + text + "'");
    q = mpq_class(mpz_class(p), den);
  } else {
    std::string mant = s;
    long exp10 = 0;
    const auto e = s.find_first_of("eE");
    if (e != std::string::npos) {
      mant = s.substr(0, e);
      std::string ex = s.substr(e + 1);
      bool eneg = false;
      if (!ex.empty() && (ex[0] == '+' || ex[0] == '-')) {
        eneg = ex[0] == '-';
        ex.erase(0, 1);
      }
      if (!all_digits(ex) || ex.size() > 6) throw ConfigError("malformed rational '" + text + "'");
      exp10 = std::stol(ex) * (eneg ? -1 : 1);
    }
    const auto dot = mant.find('.');
    std::string int_part = mant;
    std::string frac;
    if (dot != std::string::npos) {
      int_part = mant.substr(0, dot);
      frac = mant.substr(dot + 1);
    }
    if ((int_part.empty() && frac.empty()) || (!int_part.empty() && !all_digits(int_part)) ||
        (!frac.empty() && !all_digits(frac))) {
      throw ConfigError("malformed rational '" + text + "'");
    }
    const mpz_class num(int_part + frac);
    exp10 -= static_cast<long>(frac.size());
    if (exp10 >= 0) {
      q = mpq_class(num * pow10(static_cast<unsigned long>(exp10)));
    } else {
      q = mpq_class(num, pow10(static_cast<unsigned long>(-exp10)));
    }
  }
  q.canonicalize();
  return negative ? mpq_class(-q) : q;
}

std::string rational_string(const mpq_class& q) {
  mpq_class c(q);
  c.canonicalize();
  return c.get_str();
}

RecursionTable derive_recursions(const mpq_class& lambda, int max_target) {
  if (max_target < 2) throw ConfigError("recursion table needs max_target >= 2");
  const auto sys = kelvin_system(lambda);
  RecursionTable table;
  table.lambda = lambda;
  for (int target = 2; target <= max_target; ++target) {
    RecursionRow row;
    row.target = target;
    row.b_lead = sys.g_eq.terms[0].multiplier(target);
    row.a_lead = sys.f_eq.terms[0].multiplier(target);
    collect_row(sys.g_eq, target, row.alpha, row.gamma);
    collect_row(sys.f_eq, target, row.sigma, row.delta);
    table.rows.push_back(std::move(row));
  }
  return table;
}

SeriesState series_run(const Seed& seed, const mpq_class& lambda, int N) {
  require_order(N);
  const auto sys = kelvin_system(lambda);
  const std::map<int, mpq_class> sa{{0, seed.a0}, {1, seed.a1}};
  const std::map<int, mpq_class> sb{{0, seed.b0}, {1, seed.b1}};
  auto ex = frobenius::expand(sys, sa, sb, N);
  SeriesState st;
  st.lambda = lambda;
  st.order = N;
  st.a = std::move(ex.a);
  st.b = std::move(ex.b);
  st.seed_defect_f = std::move(ex.defect_f);
  st.seed_defect_g = std::move(ex.defect_g);
  return st;
}

SeriesState series_run_table(const Seed& seed, const RecursionTable& table, int N) {
  require_order(N);
  if (static_cast<int>(table.rows.size()) + 1 < N) throw ConfigError("recursion table does not reach the order");
  SeriesState st;
  st.lambda = table.lambda;
  st.order = N;
  st.a = {seed.a0, seed.a1};
  st.b = {seed.b0, seed.b1};
  for (int target = 2; target <= N; ++target) {
    const RecursionRow& row = table.rows[static_cast<std::size_t>(target - 2)];
    mpq_class rb = 0;
    mpq_class ra = 0;
    for (const auto& [k, c] : row.alpha) rb += c * st.b.at(static_cast<std::size_t>(k));
    for (const auto& [k, c] : row.gamma) rb += c * st.a.at(static_cast<std::size_t>(k));
    for (const auto& [k, c] : row.sigma) ra += c * st.b.at(static_cast<std::size_t>(k));
    for (const auto& [k, c] : row.delta) ra += c * st.a.at(static_cast<std::size_t>(k));
    st.b.push_back(rb / row.b_lead);
    st.a.push_back(ra / row.a_lead);
  }
  return st;
}

std::array<std::vector<mpq_class>, 2> annihilation_coefficients(const SeriesState& state) {
  const auto sys = kelvin_system(state.lambda);
  std::array<std::vector<mpq_class>, 2> out;
  for (int n = 0; n <= state.order; ++n) {
    out[0].push_back(frobenius::equation_coefficient(sys.f_eq, state.a, state.b, n));
    out[1].push_back(frobenius::equation_coefficient(sys.g_eq, state.a, state.b, n));
  }
  return out;
}

std::vector<mpq_class> taylor_coefficients(const std::string& name, int N) {
  if (N < 0) throw ConfigError("negative Taylor order");
  std::vector<mpq_class> num;
  std::vector<mpq_class> den;
  if (name == "kelvin_zero_mode_f") {
    num = {0, -2, 0, 2};
    den = {1, 0, 2, 0, 1};
  } else if (name == "kelvin_zero_mode_g") {
    num = {0, 0, 4};
    den = {1, 0, 2, 0, 1};
  } else if (name == "bubble_F") {
    num = {0, 2};
    den = {1, 0, 1};
  } else if (name == "bubble_G") {
    num = {1, 0, -1};
    den = {1, 0, 1};
  } else {
    throw ConfigError("unknown profile name '" + name + "'");
  }
  std::vector<mpq_class> c;
  for (int n = 0; n <= N; ++n) {
    mpq_class v = n < static_cast<int>(num.size()) ? num[static_cast<std::size_t>(n)] : mpq_class(0);
    for (int j = 1; j < static_cast<int>(den.size()) && j <= n; ++j) {
      v -= den[static_cast<std::size_t>(j)] * c[static_cast<std::size_t>(n - j)];
    }
    c.push_back(v / den[0]);
  }
  return c;
}

bool series_compare_taylor(const std::string& name, const SeriesState& state) {
  const auto ref = taylor_coefficients(name, state.order);
  const bool use_a = name == "kelvin_zero_mode_f" || name == "bubble_F";
  const auto& seq = use_a ? state.a : state.b;
  for (int n = 0; n <= state.order; ++n) {
    if (seq[static_cast<std::size_t>(n)] != ref[static_cast<std::size_t>(n)]) return false;
  }
  return true;
}

void write_series_csv(std::ostream& os, const SeriesState& state) {
  os << "n,a_n,b_n\n";
  for (int n = 0; n <= state.order; ++n) {
    os << n << ',' << rational_string(state.a[static_cast<std::size_t>(n)]) << ','
       << rational_string(state.b[static_cast<std::size_t>(n)]) << '\n';
  }
}

}  // namespace hsys::series
