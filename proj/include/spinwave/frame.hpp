#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "json.hpp"
#include "spinwave/coefficients.hpp"
#include "spinwave/filter.hpp"
#include "spinwave/geometry.hpp"
#include "spinwave/harmonics.hpp"
#include "spinwave/partition.hpp"

namespace spinwave {

/// Scales j with a^{2j}[λ_{|s|+1,s}, λ_{L,s}] meeting the filter support.
std::pair<int, int> scale_range(double a, int s, int L);

/// Shells l with f(a^{2j} λ_ls) > 0 and the multipliers themselves.
struct ScaleShells {
  int j = 0;
  int l_lo = 0, l_hi = -1;  // empty when l_hi < l_lo
  std::vector<double> f;    // f[l - l_lo]
  double at(int l) const { return (l < l_lo || l > l_hi) ? 0.0 : f[l - l_lo]; }
};
ScaleShells scale_shells(const FilterSpec& filter, int s, int L, int j);

class NeedletFrame {
 public:
  /// Throws ScaleTooCoarse when some scale's cell diameter exceeds π.
  NeedletFrame(const FilterSpec& filter, int s, int L, double b);

  const FilterSpec& filter() const { return filter_; }
  double a() const { return filter_.a(); }
  double b() const { return b_; }
  int spin() const { return s_; }
  int L() const { return L_; }
  int j_min() const { return j_min_; }
  int j_max() const { return j_max_; }
  std::vector<int> j_range() const;
  bool has_scale(int j) const { return j >= j_min_ && j <= j_max_; }

  /// Throws ScaleMissing outside the frame's range.
  const Partition& partition(int j) const;
  const ScaleShells& shells(int j) const;
  const SpinProfiles& profiles() const { return profiles_; }
  std::size_t total_cells() const;

  double c0() const { return c0_; }
  double delta0() const { return delta0_; }
  std::optional<double> C0_estimate() const { return C0_est_; }
  void set_C0_estimate(double c) { C0_est_ = c; }

  nlohmann::json to_json() const;
  /// Rebuilds the frame from its parameters and checks the recorded cell counts.
  static NeedletFrame from_json(const nlohmann::json& j);

 private:
  FilterSpec filter_;
  int s_, L_;
  double b_;
  int j_min_ = 0, j_max_ = -1;
  std::vector<Partition> partitions_;
  std::vector<ScaleShells> shells_;
  SpinProfiles profiles_;
  double c0_ = 0.0, delta0_ = 0.0;
  std::optional<double> C0_est_;
};

NeedletFrame build_frame(double a, double b, int s, int L);

/// β_{jk} = √μ_{jk} (f(a^{2j}Δ_s)F)_{R_{jk}}(x_{jk}), cells in partition order.
struct WaveletCoefficients {
  int s = 0;
  std::map<int, std::vector<cplx>> beta;

  /// Throws ScaleMissing when j is absent.
  const std::vector<cplx>& at(int j) const;
};

/// Wavelet coefficients at the requested scales (all frame scales when empty).
/// Polar cells are reported in the polar chart unless `polar_chart_override` is set,
/// in which case that rotation is used for them instead.
WaveletCoefficients wavelet_coefficients(const SpinCoefficients& F, const NeedletFrame& frame,
                                         const std::vector<int>& js = {},
                                         const Rotation* polar_chart_override = nullptr);

/// Σ_k |β_jk|² without forming the β (aliasing identity per band).
double frame_energy(const SpinCoefficients& F, const NeedletFrame& frame, int j);

/// S F = Σ_{j,k} μ ⟨F, w_jk⟩ w_jk over all frame scales, or the given ones.
SpinCoefficients apply_S(const SpinCoefficients& F, const NeedletFrame& frame,
                         const std::vector<int>& js = {});

/// Q F: shell multiplier Σ_{j∈J} f²(a^{2j} λ_ls).
SpinCoefficients apply_Q(const SpinCoefficients& F, const FilterSpec& filter,
                         const std::vector<int>& js);

/// Coefficients of w_{t,x,R} for t = a^j: f(a^{2j}λ_ls) conj(ₛY_lmR(x)).
SpinCoefficients needlet_coefficients(const FilterSpec& filter, int j, int s, int L,
                                      const SpherePoint& x, const Rotation& R);

/// K_{t,R1,R2}(x, y) = Σ_l f(t²λ_ls) K^{ls}_{R1,R2}(x, y), truncated at L.
/// Throws BandLimitExceeded if f(t²λ_ls) ≠ 0 for some l > L.
cplx needlet_kernel(const FilterSpec& filter, double t, int s, const SpherePoint& x,
                    const SpherePoint& y, const Rotation& R1, const Rotation& R2, int L);

/// Smallest L such that f(t²λ_ls) = 0 for all l > L.
int needlet_band_limit(const FilterSpec& filter, double t, int s);

struct FrameBoundEstimate {
  double A_est = 0.0;
  double B_est = 0.0;
  double C0_est = 0.0;
  std::vector<double> trial_ratios;  // ⟨SF,F⟩/‖F‖² per random trial
  int lanczos_steps = 0;
};

/// Random unit F ⟂ H_{|s|,s} (n_trials of them) plus a Lanczos refinement of the
/// extreme Rayleigh quotients of S on (I − P); A/B are the min/max observed
/// quotients, C0 = max |⟨(Q−S)F,F⟩| / b over the same vectors.
FrameBoundEstimate frame_bound_estimate(const NeedletFrame& frame, int n_trials,
                                        std::uint64_t seed, int lanczos_steps = 40);

struct LocalizationResult {
  double t = 0.0;
  std::vector<double> distance;   // d(x, y)
  std::vector<double> amplitude;  // |K_t(x, y)|
  std::vector<double> envelope;   // max of amplitude over samples at distance ≥ d
  double center_amplitude = 0.0;  // |K_t(x, x)|
  double decay_exponent = 0.0;    // slope of log envelope vs log(d/t) on the far window
  double fit_lo = 0.0, fit_hi = 0.0;  // far window in units of d/t
  int fit_points = 0;
};

/// Zonal profile k(d) with |K_t(x, y)| = |k(d(x, y))| for every x, y and charts:
/// Σ_l f(t²λ_ls) (2l+1)/4π d^l_{ss}(d).
double needlet_kernel_profile(const FilterSpec& filter, double t, int s, double d);

/// Samples |K_t| at n_samples distances d ∈ (0, dmax] and fits the far-zone decay.
LocalizationResult localization_probe(const FilterSpec& filter, double t, int s, int n_samples,
                                      double dmax = 3.14159, double fit_lo = 3.0,
                                      double fit_hi = 12.0);

}  // namespace spinwave
