#pragma once

#include <functional>
#include <memory>
#include <utility>
#include <vector>

namespace spinwave {

/// Smooth step H on ℝ: 0 for t ≤ 0, 1 for t ≥ 1, H(t) + H(1−t) = 1, built from the
/// normalized integral of exp(−1/(1−x²)) on [−1, 1].
class SmoothStep {
 public:
  SmoothStep();
  double operator()(double t) const;

 private:
  double integral_to(double t) const;  // unnormalized ∫_0^t, t ∈ [0, 1/2]
  std::vector<double> cumulative_;     // ∫ over whole panels
  double total_ = 0.0;
};

/// Needlet filter f with support [a⁻², a²] and Σ_j f²(a^{2j}u) = 1 for u > 0:
/// f²(u) = H(1 − |log u / log a²|).
class FilterSpec {
 public:
  /// Throws InvalidArgument unless a > 1.
  explicit FilterSpec(double a);

  double a() const { return a_; }
  double operator()(double u) const { return f(u); }
  double f(double u) const;
  double f2(double u) const;
  std::pair<double, double> support() const { return {1.0 / (a_ * a_), a_ * a_}; }
  /// Multiplier f(a^{2j} λ).
  double at_scale(int j, double lambda) const;
  std::function<double(double)> as_function() const;

 private:
  double a_;
  double log_a2_;
  std::shared_ptr<const SmoothStep> step_;
};

FilterSpec build_filter(double a);

struct DaubechiesBounds {
  double A = 0.0;
  double B = 0.0;
};

/// inf/sup over u of Σ_j f²(a^{2j}u), sampled over one period in log u at ≥ 10⁴
/// points per decade. Terms with a^{2j}u outside [1e-12, 1e4] are dropped, which is
/// exact for compactly supported f and negligible for f decaying at 0 and ∞.
/// Throws DegenerateFilter when A ≤ 0.
DaubechiesBounds daubechies_bounds(const std::function<double(double)>& f, double a);

}  // namespace spinwave
