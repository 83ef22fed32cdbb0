// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include <immintrin.h>

#include "spinwave/simd/kernels.hpp"

namespace spinwave::simd {

namespace {

double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

// Duplicates r[i], r[i+1] into (r0, r0, r1, r1).
inline __m256d dup_pairs(const double* r) {
  const __m128d v = _mm_loadu_pd(r);
  return _mm256_permute4x64_pd(_mm256_castpd128_pd256(v), 0x50);
}

std::complex<double> cdot_real_avx2(const double* r, const std::complex<double>* z,
                                    std::size_t n) {
  const double* zd = reinterpret_cast<const double*>(z);
  __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(dup_pairs(r + i), _mm256_loadu_pd(zd + 2 * i), acc0);
    acc1 = _mm256_fmadd_pd(dup_pairs(r + i + 2), _mm256_loadu_pd(zd + 2 * i + 4), acc1);
  }
  const __m256d acc = _mm256_add_pd(acc0, acc1);
  const __m128d s = _mm_add_pd(_mm256_castpd256_pd128(acc), _mm256_extractf128_pd(acc, 1));
  double re = _mm_cvtsd_f64(s), im = _mm_cvtsd_f64(_mm_unpackhi_pd(s, s));
  for (; i < n; ++i) {
    re += r[i] * z[i].real();
    im += r[i] * z[i].imag();
  }
  return {re, im};
}

void caxpy_real_avx2(std::complex<double> alpha, const double* r, std::complex<double>* z,
                     std::size_t n) {
  double* zd = reinterpret_cast<double*>(z);
  const __m256d va = _mm256_setr_pd(alpha.real(), alpha.imag(), alpha.real(), alpha.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    _mm256_storeu_pd(zd + 2 * i,
                     _mm256_fmadd_pd(va, dup_pairs(r + i), _mm256_loadu_pd(zd + 2 * i)));
  }
  for (; i < n; ++i) z[i] += alpha * r[i];
}

double weighted_norm2_avx2(const double* w, const std::complex<double>* z, std::size_t n) {
  const double* zd = reinterpret_cast<const double*>(z);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d v = _mm256_loadu_pd(zd + 2 * i);
    acc = _mm256_fmadd_pd(dup_pairs(w + i), _mm256_mul_pd(v, v), acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += w[i] * std::norm(z[i]);
  return s;
}

}  // namespace

const Kernels* avx2_kernels() {
  static const Kernels k{"avx2", dot_avx2, axpy_avx2, cdot_real_avx2, caxpy_real_avx2,
                         weighted_norm2_avx2};
  static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return ok ? &k : nullptr;
}

}  // namespace spinwave::simd
