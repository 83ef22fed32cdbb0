#pragma once

#include <utility>

#include "spinwave/coefficients.hpp"
#include "spinwave/geometry.hpp"

namespace spinwave {

/// ∂: spin s → s+1, multiplier √((l−s)(l+s+1)); shells below |s+1| are dropped.
SpinCoefficients spin_raise(const SpinCoefficients& a);
/// ∂̄: spin s → s−1, multiplier −√((l+s)(l−s+1)).
SpinCoefficients spin_lower(const SpinCoefficients& a);
/// Δ_s: shell-wise multiplication by λ_ls.
SpinCoefficients laplacian_s(const SpinCoefficients& a);

/// Single coefficient (−1)^{max(s,0)} √((2l+1)/4π) at (l, −s), band limit L (≥ l).
SpinCoefficients zonal_coefficients(int s, int l, int L = -1);

/// L f = lim_{θ→0⁺} e^{isφ} f_I(θ, φ), evaluated spectrally.
cplx pole_functional(const SpinCoefficients& a);

/// (E, M) with a = E + iM and both parts involutive: conj(X_lm) = X_{l,−m}.
std::pair<SpinCoefficients, SpinCoefficients> em_decompose(const SpinCoefficients& a);

/// True when conj(a_lm) = a_{l,−m} within tol.
bool is_involutive(const SpinCoefficients& a, double tol = 1e-12);

/// K^{ls}_{R1,R2}(x, y) = Σ_m ₛY_{lmR1}(x) conj(ₛY_{lmR2}(y)).
/// Throws PoleInChart unless x ∈ U_{R1} and y ∈ U_{R2}.
cplx projection_kernel(int s, int l, const SpherePoint& x, const SpherePoint& y,
                       const Rotation& R1, const Rotation& R2);

}  // namespace spinwave
