// AVX2 variants of the edgewise kernels.  This TU is the only one compiled
// with -mavx2; nothing here runs unless avx2::supported() said yes.
//
// Elementwise kernels stick to mul/add (no FMA) so each lane performs the
// exact scalar operation sequence and results stay bit-identical to the
// reference implementation.  Reductions accumulate in four lanes and combine
// at the end, so they can differ from the scalar sum by roundoff.

#include <immintrin.h>

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace adot::kernels::avx2 {

bool supported() { return __builtin_cpu_supports("avx2") != 0; }

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d swap = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, swap));
}

inline double hmax(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_max_pd(lo, hi);
  __m128d swap = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_max_sd(lo, swap));
}

inline __m256d abs_pd(__m256d v) {
  const __m256d mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
  return _mm256_and_pd(v, mask);
}

}  // namespace

void average(const double* a, const double* b, double* out, std::size_t n) {
  const __m256d half = _mm256_set1_pd(0.5);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d s = _mm256_add_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    _mm256_storeu_pd(out + i, _mm256_mul_pd(s, half));
  }
  for (; i < n; ++i) out[i] = (a[i] + b[i]) * 0.5;
}

void add_scaled_diff(double* acc, const double* a, const double* b, double c,
                     std::size_t n) {
  const __m256d vc = _mm256_set1_pd(c);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    __m256d r = _mm256_add_pd(_mm256_loadu_pd(acc + i), _mm256_mul_pd(vc, d));
    _mm256_storeu_pd(acc + i, r);
  }
  for (; i < n; ++i) acc[i] += c * (a[i] - b[i]);
}

double max_abs_diff(const double* a, const double* b, std::size_t n) {
  __m256d vm = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    vm = _mm256_max_pd(vm, abs_pd(d));
  }
  double m = hmax(vm);
  for (; i < n; ++i) m = std::max(m, std::fabs(a[i] - b[i]));
  return m;
}

double dot(const double* a, const double* b, std::size_t n) {
  __m256d vs = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    vs = _mm256_add_pd(vs, _mm256_mul_pd(_mm256_loadu_pd(a + i),
                                         _mm256_loadu_pd(b + i)));
  }
  double s = hsum(vs);
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

double sum_clamped_shift(const double* v, double tau, std::size_t n) {
  const __m256d vt = _mm256_set1_pd(tau);
  const __m256d zero = _mm256_setzero_pd();
  __m256d vs = zero;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(v + i), vt);
    vs = _mm256_add_pd(vs, _mm256_max_pd(d, zero));
  }
  double s = hsum(vs);
  for (; i < n; ++i) s += std::max(v[i] - tau, 0.0);
  return s;
}

void clamped_shift(const double* v, double tau, double* out, std::size_t n) {
  const __m256d vt = _mm256_set1_pd(tau);
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(v + i), vt);
    _mm256_storeu_pd(out + i, _mm256_max_pd(d, zero));
  }
  for (; i < n; ++i) out[i] = std::max(v[i] - tau, 0.0);
}

double l1_norm(const double* v, std::size_t n) {
  __m256d vs = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) vs = _mm256_add_pd(vs, abs_pd(_mm256_loadu_pd(v + i)));
  double s = hsum(vs);
  for (; i < n; ++i) s += std::fabs(v[i]);
  return s;
}

double sum_squares(const double* v, std::size_t n) {
  __m256d vs = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d x = _mm256_loadu_pd(v + i);
    vs = _mm256_add_pd(vs, _mm256_mul_pd(x, x));
  }
  double s = hsum(vs);
  for (; i < n; ++i) s += v[i] * v[i];
  return s;
}

}  // namespace adot::kernels::avx2
