#pragma once

#include <cstdint>
#include <vector>

#include "spinwave/coefficients.hpp"
#include "spinwave/filter.hpp"
#include "spinwave/frame.hpp"
#include "spinwave/random_fields.hpp"

namespace spinwave {

/// Γ̂_j = Σ_{l,m} f²(a^{2j}λ_ls)|A_lm|².
double gamma_hat(const SpinCoefficients& a, const FilterSpec& filter, int j);

/// Γ̃_j = Σ_k |β_jk|². Throws ScaleMissing when j is absent.
double gamma_tilde(const WaveletCoefficients& w, int j);

/// γ_j = Σ C_l(2l+1) over shells with a⁻² ≤ a^{2j}λ_ls ≤ a².
double gamma_j(const PowerSpectrum& spec, double a, int j);

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

/// Exact mean Σ f²C_l(2l+1) and variance Σ 2f⁴C_l²(2l+1) of Γ̂_j for a Gaussian
/// involutive field.
Moments gamma_hat_moments(const PowerSpectrum& spec, const FilterSpec& filter, int j);

/// Number of shells with f(a^{2j}λ_ls) > 0 within the spectrum's band limit.
int active_shells(const PowerSpectrum& spec, const FilterSpec& filter, int j);

struct TestResult {
  double S = 0.0;
  double threshold = 0.0;  // z_{α/2} = Φ⁻¹(1 − α/2)
  bool reject = false;
  double p_value = 1.0;  // two-sided normal
};

/// S_j = (Γ̂ − E Γ̂)/√Var Γ̂, rejected when |S_j| ≥ z_{α/2}.
/// Throws DegenerateModel when the variance is not positive.
TestResult s_statistic(double gamma_hat_value, const Moments& model, double alpha = 0.05);

/// Kolmogorov–Smirnov distance between the empirical law of x and N(0, 1).
double ks_normal(std::vector<double> x);

struct CltScale {
  int j = 0;
  int shells = 0;
  std::vector<double> standardized;
  double ks = 0.0;
};

/// Standardized Γ̂_j over n_reps Gaussian samples for each j. Realizations are keyed
/// by (seed, replication), so all scales see the same fields.
/// Throws InvalidExponent when the spectrum is a power law with alpha ≤ 2.
std::vector<CltScale> clt_experiment(const PowerSpectrum& spec, const FilterSpec& filter,
                                     const std::vector<int>& js, int n_reps, std::uint64_t seed);

struct RejectionRate {
  int j = 0;
  int n_reps = 0;
  int rejections = 0;
  double rate = 0.0;
  double alpha = 0.05;
};

/// Fraction of S_j rejections when fields drawn from `truth` are tested against
/// the moments of `model`.
RejectionRate sj_rejection_rate(const PowerSpectrum& truth, const PowerSpectrum& model,
                                const FilterSpec& filter, int j, int n_reps, std::uint64_t seed,
                                double alpha = 0.05);

struct PointPair {
  SpherePoint x, y;
  Rotation Rx, Ry;  // chart tags used to report β
};

struct CorrelationRow {
  int j = 0;
  int pair_id = 0;
  double d_over_t = 0.0;
  double corr = 0.0;  // |Cor(β_x, β_y)|
  double se = 0.0;    // (1 − |r|²)/√n
  double model_corr = 0.0;  // exact |Cor| from the spectrum
};

/// β_{t,x} = (f(t²Δ_s)G)_{R}(x) at t = a^j for each pair and scale, empirical
/// |Cor| over n_reps fields sampled at the spectrum's band limit.
std::vector<CorrelationRow> uncorrelation_experiment(const PowerSpectrum& spec,
                                                     const FilterSpec& filter,
                                                     const std::vector<int>& js,
                                                     const std::vector<PointPair>& pairs,
                                                     int n_reps, std::uint64_t seed);

/// Exact |Cor(β_{t,x}, β_{t,y})| = |Σ f²C K^{ls}(x,y)| / Σ f²C(2l+1)/4π.
double model_correlation(const PowerSpectrum& spec, const FilterSpec& filter, int j,
                         const SpherePoint& x, const SpherePoint& y);

struct EgamRow {
  int j = 0;
  double mean_abs_diff = 0.0;  // E|Γ̂_j − Γ̃_j|
  double gamma_j = 0.0;
  double bound = 0.0;          // ε̂ γ_j
  double mean_hat = 0.0, mean_tilde = 0.0;
};

/// Monte Carlo E|Γ̂_j − Γ̃_j| against ε̂ γ_j for the frame's filter and partitions.
std::vector<EgamRow> egam_experiment(const PowerSpectrum& spec, const NeedletFrame& frame,
                                     const std::vector<int>& js, double eps_hat, int n_reps,
                                     std::uint64_t seed);

}  // namespace spinwave
