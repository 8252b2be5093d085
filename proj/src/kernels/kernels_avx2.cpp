// Built with -mavx2 -mfma. Only reached through dispatch after a CPU check.

#include <immintrin.h>

#include <cmath>

#include "oufa/kernels.hpp"

namespace oufa::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline double hmax(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d m = _mm_max_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_max_sd(m, _mm_unpackhi_pd(m, m)));
}

}  // namespace

ItoSums ito_sums(std::span<const double> x) {
  ItoSums out;
  if (x.size() < 2) return out;
  const std::size_t n = x.size() - 1;  // number of left endpoints
  const double* p = x.data();

  __m256d cross0 = _mm256_setzero_pd();
  __m256d cross1 = _mm256_setzero_pd();
  __m256d sq0 = _mm256_setzero_pd();
  __m256d sq1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d a0 = _mm256_loadu_pd(p + i);
    const __m256d a1 = _mm256_loadu_pd(p + i + 4);
    const __m256d b0 = _mm256_loadu_pd(p + i + 1);
    const __m256d b1 = _mm256_loadu_pd(p + i + 5);
    cross0 = _mm256_fmadd_pd(a0, _mm256_sub_pd(b0, a0), cross0);
    cross1 = _mm256_fmadd_pd(a1, _mm256_sub_pd(b1, a1), cross1);
    sq0 = _mm256_fmadd_pd(a0, a0, sq0);
    sq1 = _mm256_fmadd_pd(a1, a1, sq1);
  }
  out.cross = hsum(_mm256_add_pd(cross0, cross1));
  out.squares = hsum(_mm256_add_pd(sq0, sq1));
  for (; i < n; ++i) {
    out.cross += p[i] * (p[i + 1] - p[i]);
    out.squares += p[i] * p[i];
  }
  return out;
}

double sum(std::span<const double> x) {
  const double* p = x.data();
  const std::size_t n = x.size();
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(p + i));
    acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(p + i + 4));
  }
  double total = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) total += p[i];
  return total;
}

double sum_squares(std::span<const double> x) {
  const double* p = x.data();
  const std::size_t n = x.size();
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d a0 = _mm256_loadu_pd(p + i);
    const __m256d a1 = _mm256_loadu_pd(p + i + 4);
    acc0 = _mm256_fmadd_pd(a0, a0, acc0);
    acc1 = _mm256_fmadd_pd(a1, a1, acc1);
  }
  double total = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) total += p[i] * p[i];
  return total;
}

double max_abs(std::span<const double> x) {
  const double* p = x.data();
  const std::size_t n = x.size();
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  __m256d m = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    m = _mm256_max_pd(m, _mm256_andnot_pd(sign_mask, _mm256_loadu_pd(p + i)));
  }
  double best = hmax(m);
  for (; i < n; ++i) best = std::fmax(best, std::fabs(p[i]));
  return best;
}

}  // namespace oufa::kernels::avx2
