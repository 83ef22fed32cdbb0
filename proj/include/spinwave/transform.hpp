#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spinwave/coefficients.hpp"
#include "spinwave/geometry.hpp"
#include "spinwave/quadrature.hpp"

namespace spinwave {

/// Chart-I samples f_I(θ_i, φ_k) of a spin-s field on a quadrature grid,
/// ring-major: samples[i * n_phi + k].
struct GridField {
  int s = 0;
  QuadratureGrid grid;
  std::vector<cplx> samples;

  cplx& at(int i, int k) { return samples[static_cast<std::size_t>(i) * grid.n_phi + k]; }
  const cplx& at(int i, int k) const {
    return samples[static_cast<std::size_t>(i) * grid.n_phi + k];
  }
  /// ∫ |f|² by the grid rule.
  double norm2() const;
};

GridField zero_field(int s, const QuadratureGrid& grid);

/// Σ_lm a_lm ₛY_lm at the grid nodes. Throws BandLimitExceeded if the grid is coarser
/// than the coefficients.
GridField synthesis(const SpinCoefficients& coeffs, const QuadratureGrid& grid);

struct AnalysisDiagnostics {
  double top_shell_fraction = 0.0;
  /// Set to BandLimitExceeded when the top shell carries more than 1e-6 of the energy.
  std::optional<ErrorKind> warning;
};

/// a_lm = ⟨f, ₛY_lm⟩ by quadrature, for l ≤ L (L < 0 means the grid band limit).
SpinCoefficients analysis(const GridField& field, int L = -1,
                          AnalysisDiagnostics* diagnostics = nullptr);

/// f_R(p). Uses the chart-I value and the transition phase when p is away from the
/// poles of chart I, otherwise rotates the coefficients into chart R.
/// Throws PoleInChart if p is a pole of chart R.
cplx evaluate(const SpinCoefficients& coeffs, const SpherePoint& p,
              const Rotation& R = Rotation::identity());

/// max |G − I| for the quadrature Gram matrix G of {ₛY_lm : |s| ≤ l ≤ L} on `grid`,
/// with every entry formed from eval_sylm values (the longitude sum is taken numerically).
double gram_residual(int s, int L, const QuadratureGrid& grid);

/// Values ₛY_lmR(x) for |s| ≤ l ≤ L and all m, stored in a coefficient-shaped container.
/// Throws PoleInChart when x is a pole of chart R.
SpinCoefficients harmonics_in_chart(int s, int L, const SpherePoint& x, const Rotation& R);

/// Coefficients of the rotated field f^R, (f^R)_I(q) = f_R(Rq):
/// a'_{lm'} = Σ_m D^l_{m'm}(R) a_lm.
SpinCoefficients rotate_coefficients(const SpinCoefficients& coeffs, const Rotation& R);

/// (f^R)_I at the grid nodes computed pointwise from f through the chart machinery,
/// f_R(Rq) = e^{isψ} f_I(Rq). Reference path for rotate_coefficients.
GridField rotate_samples(const SpinCoefficients& coeffs, const Rotation& R,
                         const QuadratureGrid& grid);

}  // namespace spinwave
