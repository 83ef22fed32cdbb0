#include "spinwave/filter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spinwave/errors.hpp"
#include "spinwave/quadrature.hpp"

namespace spinwave {

namespace {

constexpr int kPanels = 256;
constexpr int kPoints = 16;

// Bump in the step variable: exp(−1/(1−(2x−1)²)) on (0, 1).
double bump(double x) {
  const double y = 2.0 * x - 1.0;
  const double q = 1.0 - y * y;
  return q > 0.0 ? std::exp(-1.0 / q) : 0.0;
}

const std::vector<double>& gl_nodes() {
  static const std::vector<double> n = [] {
    std::vector<double> x, w;
    gauss_legendre(kPoints, x, w);
    return x;
  }();
  return n;
}

const std::vector<double>& gl_weights() {
  static const std::vector<double> w = [] {
    std::vector<double> x, ww;
    gauss_legendre(kPoints, x, ww);
    return ww;
  }();
  return w;
}

double gl_integral(double lo, double hi) {
  const auto& x = gl_nodes();
  const auto& w = gl_weights();
  const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
  double acc = 0.0;
  for (int i = 0; i < kPoints; ++i) acc += w[i] * bump(c + h * x[i]);
  return acc * h;
}

}  // namespace

SmoothStep::SmoothStep() : cumulative_(kPanels / 2 + 1, 0.0) {
  // Panels cover [0, 1/2]; the other half follows from symmetry of the bump.
  const double width = 0.5 / (kPanels / 2);
  for (int p = 0; p < kPanels / 2; ++p) {
    cumulative_[p + 1] = cumulative_[p] + gl_integral(p * width, (p + 1) * width);
  }
  total_ = 2.0 * cumulative_.back();
}

double SmoothStep::integral_to(double t) const {
  const double width = 0.5 / (kPanels / 2);
  const int p = std::min(static_cast<int>(t / width), kPanels / 2 - 1);
  return cumulative_[p] + gl_integral(p * width, t);
}

double SmoothStep::operator()(double t) const {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  if (t <= 0.5) return integral_to(t) / total_;
  return 1.0 - integral_to(1.0 - t) / total_;
}

FilterSpec::FilterSpec(double a) : a_(a), log_a2_(2.0 * std::log(a)) {
  if (!(a > 1.0) || !std::isfinite(a)) {
    throw Error(ErrorKind::InvalidArgument, "filter dilation base must exceed 1");
  }
  static const auto shared_step = std::make_shared<const SmoothStep>();
  step_ = shared_step;
}

double FilterSpec::f2(double u) const {
  if (!(u > 0.0)) return 0.0;
  const double v = std::log(u) / log_a2_;
  const double t = 1.0 - std::abs(v);
  return t > 0.0 ? (*step_)(t) : 0.0;
}

double FilterSpec::f(double u) const { return std::sqrt(f2(u)); }

double FilterSpec::at_scale(int j, double lambda) const {
  return f(std::pow(a_, 2 * j) * lambda);
}

std::function<double(double)> FilterSpec::as_function() const {
  FilterSpec copy = *this;
  return [copy](double u) { return copy.f(u); };
}

FilterSpec build_filter(double a) { return FilterSpec(a); }

DaubechiesBounds daubechies_bounds(const std::function<double(double)>& f, double a) {
  if (!(a > 1.0)) throw Error(ErrorKind::InvalidArgument, "dilation base must exceed 1");
  const double log_a2 = 2.0 * std::log(a);
  const double decades = log_a2 / std::log(10.0);
  const int n = std::max(1000, static_cast<int>(std::ceil(1e4 * decades)));
  const double lo = std::log(1e-12), hi = std::log(1e4);
  DaubechiesBounds out{std::numeric_limits<double>::infinity(), 0.0};
  for (int i = 0; i < n; ++i) {
    const double logu = log_a2 * i / n;  // one period
    const int j0 = static_cast<int>(std::floor((lo - logu) / log_a2));
    const int j1 = static_cast<int>(std::ceil((hi - logu) / log_a2));
    double sum = 0.0;
    for (int j = j0; j <= j1; ++j) {
      const double v = f(std::exp(logu + j * log_a2));
      sum += v * v;
    }
    out.A = std::min(out.A, sum);
    out.B = std::max(out.B, sum);
  }
  if (!(out.A > 0.0)) throw Error(ErrorKind::DegenerateFilter, "lower Daubechies bound is not positive");
  return out;
}

}  // namespace spinwave
