#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "spinwave/coefficients.hpp"
#include "spinwave/geometry.hpp"

namespace spinwave {

/// Angular power spectrum C_l for |s| ≤ l ≤ L (entries below |s| are zero).
struct PowerSpectrum {
  int s = 0;
  int L = 0;
  std::vector<double> C;  // indexed by l, size L+1
  std::string model = "tabulated";
  nlohmann::json params = nlohmann::json::object();
  /// InvalidExponent when a power law has alpha ≤ 2: usable for simulation, outside
  /// the hypotheses of the limit theorems.
  std::optional<ErrorKind> warning;

  double at(int l) const { return (l < 0 || l > L) ? 0.0 : C[l]; }
  /// Σ C_l (2l+1).
  double variance() const;
};

/// C_l = c·l^{−alpha} for l ≥ max(|s|, 1); C_0 = 0 when s = 0.
PowerSpectrum power_law_spectrum(int s, int L, double alpha, double c);

/// Key for one realization: root seed, replication index, and an optional stream.
struct SampleKey {
  std::uint64_t seed = 0;
  std::uint64_t rep = 0;
  std::uint64_t stream = 0;
};

/// Involutive Gaussian sample: for m > 0, Re and Im ~ N(0, C_l/2) independent;
/// A_l0 ~ N(0, C_l) real; A_{l,−m} = conj(A_lm). Draws are keyed by (key, l, m), so
/// restricting to shells [l_lo, l_hi] yields the same values as a full draw.
SpinCoefficients sample_field(const PowerSpectrum& spec, const SampleKey& key, int l_lo = -1,
                              int l_hi = -1);

/// Per-shell standard deviations and m-dependence, so alternative samplers
/// (e.g. a deliberately broken one) can be plugged into diagnostics.
using Sampler = std::function<SpinCoefficients(const PowerSpectrum&, const SampleKey&)>;
Sampler default_sampler();

/// Ĉ_l = Σ_m |A_lm|² / (2l+1).
PowerSpectrum empirical_spectrum(const SpinCoefficients& a);
/// Mean of per-sample estimates.
PowerSpectrum empirical_spectrum(const std::vector<SpinCoefficients>& ensemble);

struct IsotropyReport {
  /// Max over rotations, points and second-order moments of the standardized
  /// difference against the first rotation.
  double max_discrepancy = 0.0;
  /// Max standardized difference between the empirical distributions of Re G and
  /// −Re G at each point (difference of means and of third moments).
  double max_sign_asymmetry = 0.0;
  int n_reps = 0;
  std::size_t n_rotations = 0;
  std::size_t n_points = 0;
};

/// Compares moments up to order 2 of (G^R)_I at fixed points across rotations.
/// Each rotation uses its own independent replications.
IsotropyReport isotropy_diagnostic(const PowerSpectrum& spec, int n_reps,
                                   const std::vector<Rotation>& rotations, std::uint64_t seed,
                                   const std::vector<SpherePoint>& points,
                                   const Sampler& sampler = default_sampler());

}  // namespace spinwave
