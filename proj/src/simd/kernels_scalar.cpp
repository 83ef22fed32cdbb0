#include <cstdlib>
#include <string>

#include "spinwave/simd/kernels.hpp"

namespace spinwave::simd {

namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

std::complex<double> cdot_real_scalar(const double* r, const std::complex<double>* z,
                                      std::size_t n) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    re += r[i] * z[i].real();
    im += r[i] * z[i].imag();
  }
  return {re, im};
}

void caxpy_real_scalar(std::complex<double> alpha, const double* r, std::complex<double>* z,
                       std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) z[i] += alpha * r[i];
}

double weighted_norm2_scalar(const double* w, const std::complex<double>* z, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += w[i] * std::norm(z[i]);
  return s;
}

}  // namespace

const Kernels& scalar_kernels() {
  static const Kernels k{"scalar", dot_scalar, axpy_scalar, cdot_real_scalar, caxpy_real_scalar,
                         weighted_norm2_scalar};
  return k;
}

#if !defined(SPINWAVE_HAVE_AVX2)
const Kernels* avx2_kernels() { return nullptr; }
#endif

const Kernels& active() {
  static const Kernels& k = []() -> const Kernels& {
    const char* env = std::getenv("SPINWAVE_SIMD");
    if (env != nullptr && std::string(env) == "scalar") return scalar_kernels();
    if (const Kernels* v = avx2_kernels()) return *v;
    return scalar_kernels();
  }();
  return k;
}

}  // namespace spinwave::simd
