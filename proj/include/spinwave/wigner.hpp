#pragma once

#include <complex>
#include <vector>

#include "spinwave/geometry.hpp"

namespace spinwave {

/// At j = max(|m1|,|m2|): d^j_{m1 m2}(β) = sign · e^{logpre} · cos^pc(β/2) · sin^ps(β/2).
struct WignerSeed {
  int j = 0;
  double logpre = 0.0;
  int pc = 0, ps = 0, sign = 1;
};
WignerSeed wigner_d_seed(int m1, int m2);

/// Wigner small-d d^j_{m1 m2}(beta) for all j in [max(|m1|,|m2|), jmax], written to
/// out[j - jmin], each value multiplied by norm[j] when norm is non-null. Three-term
/// recursion in j, seeded by the closed form at j = jmin, with exponent tracking so
/// that tiny values underflow gracefully instead of poisoning the recursion.
/// Returns jmin.
int wigner_d_column(int m1, int m2, double beta, int jmax, double* out,
                    const double* norm = nullptr);

/// Single value by the same recursion.
double wigner_d(int j, int m1, int m2, double beta);

/// Explicit finite sum (long double); reference for small j.
long double wigner_d_sum(int j, int m1, int m2, long double beta);

/// D^l_{m'm}(R) for 0 ≤ l ≤ L in the convention ₛY^R_{lm} = Σ_{m'} D^l_{m'm}(R) ₛY_{lm'},
/// where (f^R)_I(q) = f_R(Rq).
class WignerD {
 public:
  WignerD(const Rotation& R, int L);

  int L() const { return L_; }
  std::complex<double> operator()(int l, int mp, int m) const {
    return data_[offset_[l] + (mp + l) * (2 * l + 1) + (m + l)];
  }

 private:
  int L_;
  std::vector<std::size_t> offset_;
  std::vector<std::complex<double>> data_;
};

}  // namespace spinwave
