#pragma once

#include <complex>
#include <vector>

#include "spinwave/geometry.hpp"

namespace spinwave {

using cplx = std::complex<double>;

// Phase convention: Y_lm carries the factor (−1)^{max(−m,0)}, so conj(Y_lm) = Y_{l,−m}
// and conj(ₛY_lm) = (−1)^s ₋ₛY_{l,−m}. This differs from Condon–Shortley by (−1)^{max(m,0)}.
// In terms of Wigner small-d: ₛY_lm(θ,φ) = (−1)^{max(m,0)+s} √((2l+1)/4π) d^l_{m,−s}(θ) e^{imφ}.

struct EigenData {
  double lambda = 0.0;  // eigenvalue of Δ_s on the shell l
  double b = 1.0;       // √((l+s)!/(l−s)!) for s ≥ 0, √((l−s)!/(l+s)!) for s < 0
};

/// Throws UndefinedHarmonic when l < |s|.
EigenData eigen(int s, int l);
/// λ_ls without validation; (l−s)(l+s+1) for s ≥ 0, (l+s)(l−s+1) for s < 0.
double lambda_ls(int s, int l);

/// ₛY_{lm} in chart I. Throws UndefinedHarmonic if l < |s| or |m| > l, and
/// PoleEvaluation if theta is 0 or π.
cplx eval_sylm(int s, int l, int m, double theta, double phi);

/// Same value from the explicit finite sum, carried in 50-digit binary floating
/// point with compensated summation. Intended for l ≤ 48.
cplx eval_sylm_direct(int s, int l, int m, double theta, double phi);

/// ₛY_lm in chart R at p, by the Wigner route Σ_{m'} D_{m'm}(R) ₛY_{lm'I}(R⁻¹p).
/// Throws PoleInChart when R⁻¹p is a pole.
cplx eval_sylm_chart(int s, int l, int m, const SpherePoint& p, const Rotation& R);

/// Colatitude profiles ₛy_lm(θ) for fixed s and band limit L, all |m| ≤ L.
/// Recursion coefficients are tabulated once; each eval is O(L).
class SpinProfiles {
 public:
  SpinProfiles(int s, int L);

  int s() const { return s_; }
  int L() const { return L_; }
  int lmin(int m) const { return std::max(std::abs(m), std::abs(s_)); }
  /// Writes ₛy_lm(θ) for l = lmin(m)..lmax into out[0..]. Returns lmin(m).
  int eval(int m, double theta, double* out, int lmax = -1) const;

 private:
  struct Coef {
    double a, b, c;  // y_{l+1} = (a x − b) y_l − c y_{l−1}
  };
  int s_, L_;
  std::vector<std::size_t> offset_;  // per m
  std::vector<Coef> coef_;
  std::vector<double> seed_logc_;  // log of the seed's factorial prefactor per m
  std::vector<int> seed_sign_;
};

}  // namespace spinwave
