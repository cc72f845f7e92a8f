#pragma once

// Frobenius expansions of the co-rotational pair about the chart origin,
// written once for any field type T (exact rationals or doubles).
//
// Both equations are multiplied by M = x^2 L with D = 1 + x^2m, E = 1 + x^2
// and L = D^2 (m = 1, where E = D) or D^2 E^2 (m >= 2), which turns every
// coefficient into a polynomial. With a = (a_k), b = (b_k) the coefficients
// of f and g, each equation becomes a sum of terms
//     W(x) * sum_k c(k) s_k x^(k + shift),   c(k) = c0 + c1 k + c2 k^2,
// where s is a or b. The first term of each equation is the Euler part
// L (x^2 d^2 + x d - m^2) (resp. L (x^2 d^2 + x d)); every other term only
// reaches strictly lower indices, so the coefficient of x^n determines a_n
// (resp. b_n) unless the Euler factor vanishes at n.

#include <cstddef>
#include <map>
#include <vector>

namespace hsys::frobenius {

template <class T>
using Poly = std::vector<T>;

template <class T>
Poly<T> poly_mul(const Poly<T>& p, const Poly<T>& q) {
  if (p.empty() || q.empty()) return {};
  Poly<T> r(p.size() + q.size() - 1, T(0));
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = 0; j < q.size(); ++j) r[i + j] += p[i] * q[j];
  }
  return r;
}

/// 1 + x^k
template <class T>
Poly<T> one_plus_pow(int k) {
  Poly<T> p(static_cast<std::size_t>(k) + 1, T(0));
  p[0] += T(1);
  p[static_cast<std::size_t>(k)] += T(1);
  return p;
}

/// c x^k
template <class T>
Poly<T> monomial(const T& c, int k) {
  Poly<T> p(static_cast<std::size_t>(k) + 1, T(0));
  p[static_cast<std::size_t>(k)] = c;
  return p;
}

enum class Seq { A, B };

template <class T>
struct Term {
  Poly<T> weight;
  Seq seq = Seq::A;
  T c0 = T(0);
  T c1 = T(0);
  T c2 = T(0);
  int shift = 0;

  T multiplier(long k) const {
    const T kk(static_cast<long>(k));
    return c0 + c1 * kk + c2 * kk * kk;
  }
};

template <class T>
struct Equation {
  Seq target = Seq::A;
  std::vector<Term<T>> terms;  ///< terms[0] is the Euler part with weight(0) = 1
};

template <class T>
struct System {
  int m = 1;
  Equation<T> f_eq;
  Equation<T> g_eq;
};

/// chart_sign = +1 for the r-chart, -1 for the Kelvin chart (the Kelvin
/// system is the r-chart one with f -> -f).
template <class T>
System<T> corotational_system(int m, const T& lambda, int chart_sign) {
  const T sc(chart_sign);
  const T tm(static_cast<long>(m));
  const Poly<T> D = one_plus_pow<T>(2 * m);
  const Poly<T> E = one_plus_pow<T>(2);
  Poly<T> L_over_D;
  Poly<T> L_over_D2;
  Poly<T> L_over_E2;
  if (m == 1) {
    L_over_D = D;
    L_over_D2 = Poly<T>{T(1)};
    L_over_E2 = Poly<T>{T(1)};
  } else {
    const Poly<T> E2 = poly_mul(E, E);
    L_over_D = poly_mul(D, E2);
    L_over_D2 = E2;
    L_over_E2 = poly_mul(D, D);
  }
  const Poly<T> L = poly_mul(L_over_D, D);

  System<T> sys;
  sys.m = m;
  auto term = [](Poly<T> w, Seq s, T c0, T c1, T c2, int shift) {
    Term<T> t;
    t.weight = std::move(w);
    t.seq = s;
    t.c0 = c0;
    t.c1 = c1;
    t.c2 = c2;
    t.shift = shift;
    return t;
  };
  const T zero(0);
  const T one(1);

  sys.f_eq.target = Seq::A;
  sys.f_eq.terms.push_back(term(L, Seq::A, -tm * tm, zero, one, 0));
  sys.f_eq.terms.push_back(term(poly_mul(monomial<T>(sc * T(4) * tm, m + 1), L_over_D), Seq::B, zero, one, zero, -1));
  sys.f_eq.terms.push_back(term(poly_mul(monomial<T>(T(8) * tm * tm, 2 * m), L_over_D2), Seq::A, one, zero, zero, 0));
  sys.f_eq.terms.push_back(term(poly_mul(monomial<T>(T(-4) * lambda, 2), L_over_E2), Seq::A, one, zero, zero, 0));

  Poly<T> xm_one_minus(static_cast<std::size_t>(3 * m) + 1, T(0));
  xm_one_minus[static_cast<std::size_t>(m)] = T(1);
  xm_one_minus[static_cast<std::size_t>(3 * m)] = T(-1);
  for (auto& c : xm_one_minus) c *= -sc * T(4) * tm * tm;

  sys.g_eq.target = Seq::B;
  sys.g_eq.terms.push_back(term(L, Seq::B, zero, zero, one, 0));
  sys.g_eq.terms.push_back(term(poly_mul(monomial<T>(-sc * T(4) * tm, m + 1), L_over_D), Seq::A, zero, one, zero, -1));
  sys.g_eq.terms.push_back(term(poly_mul(xm_one_minus, L_over_D2), Seq::A, one, zero, zero, 0));
  sys.g_eq.terms.push_back(term(poly_mul(monomial<T>(T(-4) * lambda, 2), L_over_E2), Seq::B, one, zero, zero, 0));
  return sys;
}

/// Coefficient of x^n of the multiplied equation evaluated on the sequences,
/// optionally skipping the Euler term's own x^n contribution. Entries of a, b
/// beyond their length count as zero.
template <class T>
T equation_coefficient(const Equation<T>& eq, const std::vector<T>& a, const std::vector<T>& b, int n,
                       bool skip_lead_diagonal = false) {
  T sum(0);
  for (std::size_t t = 0; t < eq.terms.size(); ++t) {
    const Term<T>& term = eq.terms[t];
    const std::vector<T>& s = term.seq == Seq::A ? a : b;
    for (std::size_t i = 0; i < term.weight.size(); ++i) {
      if (term.weight[i] == T(0)) continue;
      if (t == 0 && i == 0 && skip_lead_diagonal) continue;
      const long k = static_cast<long>(n) - static_cast<long>(i) - term.shift;
      if (k < 0 || k >= static_cast<long>(s.size())) continue;
      sum += term.weight[i] * term.multiplier(k) * s[static_cast<std::size_t>(k)];
    }
  }
  return sum;
}

template <class T>
struct Expansion {
  std::vector<T> a;
  std::vector<T> b;
  /// Equation coefficients at indices fixed by seeds or by a vanishing Euler
  /// factor (zero when the expansion is a genuine solution there).
  std::map<int, T> defect_f;
  std::map<int, T> defect_g;
};

/// Coefficients through order N. Seeds override the recursion at their index.
/// Where the Euler factor vanishes and no seed is given, the coefficient is
/// set to zero and the equation coefficient is recorded as a defect.
template <class T>
Expansion<T> expand(const System<T>& sys, const std::map<int, T>& seed_a, const std::map<int, T>& seed_b, int N) {
  Expansion<T> out;
  out.a.reserve(static_cast<std::size_t>(N) + 1);
  out.b.reserve(static_cast<std::size_t>(N) + 1);
  auto step = [&](const Equation<T>& eq, const std::map<int, T>& seeds, std::vector<T>& target,
                  std::map<int, T>& defects, int n) {
    const T lead = eq.terms[0].multiplier(n);
    const T rest = equation_coefficient(eq, out.a, out.b, n, true);
    const auto it = seeds.find(n);
    if (it != seeds.end()) {
      target.push_back(it->second);
      defects[n] = lead * it->second + rest;
    } else if (lead == T(0)) {
      target.push_back(T(0));
      defects[n] = rest;
    } else {
      target.push_back(-rest / lead);
    }
  };
  for (int n = 0; n <= N; ++n) {
    // Each target depends only on strictly lower indices of the other
    // sequence, so the order of the two updates is immaterial.
    step(sys.f_eq, seed_a, out.a, out.defect_f, n);
    step(sys.g_eq, seed_b, out.b, out.defect_g, n);
  }
  return out;
}

}  // namespace hsys::frobenius
