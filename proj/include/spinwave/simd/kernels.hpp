#pragma once

#include <complex>
#include <cstddef>
#include <string_view>

namespace spinwave::simd {

// Inner-loop kernels. Complex arrays are interleaved (re, im) pairs, i.e. the
// layout of std::complex<double>[n].
struct Kernels {
  std::string_view name;
  double (*dot)(const double* a, const double* b, std::size_t n);
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // Σ r[i] z[i]
  std::complex<double> (*cdot_real)(const double* r, const std::complex<double>* z, std::size_t n);
  // z[i] += alpha r[i]
  void (*caxpy_real)(std::complex<double> alpha, const double* r, std::complex<double>* z,
                     std::size_t n);
  // Σ w[i] |z[i]|²
  double (*weighted_norm2)(const double* w, const std::complex<double>* z, std::size_t n);
};

const Kernels& scalar_kernels();
/// nullptr when the CPU lacks AVX2+FMA or the build did not include them.
const Kernels* avx2_kernels();

/// Kernels chosen once at first use: AVX2 when supported, unless the
/// environment variable SPINWAVE_SIMD=scalar forces the reference path.
const Kernels& active();

}  // namespace spinwave::simd
