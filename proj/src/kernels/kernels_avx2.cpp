// Compiled with -mavx2 -mfma -ffp-contract=off. Only entered through the
// dispatch table after a CPU feature check.

#include <immintrin.h>

#include <cmath>

#include "hsys/kernels.hpp"

namespace hsys::kernels {
namespace {

inline __m256d negate(__m256d x) { return _mm256_xor_pd(x, _mm256_set1_pd(-0.0)); }

// Same operation order as the scalar reference, so results agree bitwise.
void bubble_profiles_avx2(int m, std::span<const double> r, std::span<double> F, std::span<double> G,
                          std::span<double> dF, std::span<double> dG) {
  const std::size_t n = r.size();
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d two = _mm256_set1_pd(2.0);
  const __m256d two_m = _mm256_set1_pd(2.0 * m);
  const __m256d four_m = _mm256_set1_pd(4.0 * m);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d ri = _mm256_loadu_pd(r.data() + i);
    const __m256d big = _mm256_cmp_pd(ri, one, _CMP_GT_OQ);
    const __m256d inv = _mm256_div_pd(one, ri);
    const __m256d q = _mm256_blendv_pd(ri, inv, big);
    __m256d qm1 = one;
    for (int k = 1; k < m; ++k) qm1 = _mm256_mul_pd(qm1, q);
    const __m256d qm = _mm256_mul_pd(qm1, q);
    const __m256d q2m = _mm256_mul_pd(qm, qm);
    const __m256d den = _mm256_add_pd(one, q2m);
    const __m256d den2 = _mm256_mul_pd(den, den);
    const __m256d one_minus = _mm256_sub_pd(one, q2m);

    _mm256_storeu_pd(F.data() + i, _mm256_div_pd(_mm256_mul_pd(two, qm), den));
    const __m256d g = _mm256_div_pd(one_minus, den);
    _mm256_storeu_pd(G.data() + i, _mm256_blendv_pd(negate(g), g, big));

    const __m256d df_big =
        negate(_mm256_div_pd(_mm256_mul_pd(_mm256_mul_pd(two_m, _mm256_mul_pd(qm, q)), one_minus), den2));
    const __m256d df_small = _mm256_div_pd(_mm256_mul_pd(_mm256_mul_pd(two_m, qm1), one_minus), den2);
    _mm256_storeu_pd(dF.data() + i, _mm256_blendv_pd(df_small, df_big, big));

    const __m256d dg_big = _mm256_div_pd(_mm256_mul_pd(four_m, _mm256_mul_pd(q2m, q)), den2);
    const __m256d dg_small = _mm256_div_pd(_mm256_mul_pd(four_m, _mm256_mul_pd(qm1, qm)), den2);
    _mm256_storeu_pd(dG.data() + i, _mm256_blendv_pd(dg_small, dg_big, big));
  }
  if (i < n) {
    detail::kScalarTable.bubble_profiles(m, r.subspan(i), F.subspan(i), G.subspan(i), dF.subspan(i),
                                         dG.subspan(i));
  }
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(s) + _mm_cvtsd_f64(_mm_unpackhi_pd(s, s));
}

double weighted_dot_avx2(std::span<const double> w, std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d a0 = _mm256_mul_pd(_mm256_loadu_pd(w.data() + i), _mm256_loadu_pd(x.data() + i));
    const __m256d a1 = _mm256_mul_pd(_mm256_loadu_pd(w.data() + i + 4), _mm256_loadu_pd(x.data() + i + 4));
    acc0 = _mm256_fmadd_pd(a0, _mm256_loadu_pd(y.data() + i), acc0);
    acc1 = _mm256_fmadd_pd(a1, _mm256_loadu_pd(y.data() + i + 4), acc1);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += w[i] * x[i] * y[i];
  return s;
}

double dot_avx2(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x.data() + i), _mm256_loadu_pd(y.data() + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x.data() + i + 4), _mm256_loadu_pd(y.data() + i + 4), acc1);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

void axpy_avx2(double a, std::span<const double> x, std::span<double> y) {
  const std::size_t n = x.size();
  const __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d yi = _mm256_loadu_pd(y.data() + i);
    _mm256_storeu_pd(y.data() + i, _mm256_add_pd(yi, _mm256_mul_pd(av, _mm256_loadu_pd(x.data() + i))));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

double max_abs_avx2(std::span<const double> x) {
  const std::size_t n = x.size();
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d acc = _mm256_setzero_pd();
  __m256d nan_seen = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d a = _mm256_andnot_pd(sign, _mm256_loadu_pd(x.data() + i));
    nan_seen = _mm256_or_pd(nan_seen, _mm256_cmp_pd(a, a, _CMP_UNORD_Q));
    acc = _mm256_max_pd(acc, a);
  }
  if (_mm256_movemask_pd(nan_seen) != 0) return std::nan("");
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double m = std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
  for (; i < n; ++i) {
    const double a = std::abs(x[i]);
    if (std::isnan(a)) return a;
    if (a > m) m = a;
  }
  return m;
}

}  // namespace

namespace detail {
const KernelTable kAvx2Table{Isa::Avx2, &bubble_profiles_avx2, &weighted_dot_avx2, &dot_avx2, &axpy_avx2,
                             &max_abs_avx2};
}

}  // namespace hsys::kernels
