#include "spinwave/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/distributions/normal.hpp>

#include "spinwave/harmonics.hpp"
#include "spinwave/parallel.hpp"
#include "spinwave/simd/kernels.hpp"
#include "spinwave/transform.hpp"

namespace spinwave {

namespace {

double shell_energy(const SpinCoefficients& a, int l) {
  const double* d = reinterpret_cast<const double*>(&a(l, -l));
  return simd::active().dot(d, d, 2 * (2 * l + 1));
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

// Shells with f(a^{2j}λ) > 0, clipped to [|s|, L].
std::pair<int, int> shell_window(int s, int L, const FilterSpec& filter, int j) {
  int lo = L + 1, hi = -1;
  for (int l = std::abs(s); l <= L; ++l) {
    if (filter.at_scale(j, lambda_ls(s, l)) > 0.0) {
      lo = std::min(lo, l);
      hi = std::max(hi, l);
    }
  }
  return {lo, hi};
}

}  // namespace

double gamma_hat(const SpinCoefficients& a, const FilterSpec& filter, int j) {
  double acc = 0.0;
  for (int l = a.lmin(); l <= a.L(); ++l) {
    const double f2 = filter.f2(std::pow(filter.a(), 2 * j) * lambda_ls(a.spin(), l));
    if (f2 > 0.0) acc += f2 * shell_energy(a, l);
  }
  return acc;
}

double gamma_tilde(const WaveletCoefficients& w, int j) {
  double acc = 0.0;
  for (const auto& b : w.at(j)) acc += std::norm(b);
  return acc;
}

double gamma_j(const PowerSpectrum& spec, double a, int j) {
  const double lo = 1.0 / (a * a), hi = a * a, scale = std::pow(a, 2 * j);
  double acc = 0.0;
  for (int l = std::abs(spec.s); l <= spec.L; ++l) {
    const double u = scale * lambda_ls(spec.s, l);
    if (u >= lo && u <= hi) acc += spec.C[l] * (2.0 * l + 1.0);
  }
  return acc;
}

Moments gamma_hat_moments(const PowerSpectrum& spec, const FilterSpec& filter, int j) {
  Moments m;
  for (int l = std::abs(spec.s); l <= spec.L; ++l) {
    const double f2 = filter.f2(std::pow(filter.a(), 2 * j) * lambda_ls(spec.s, l));
    if (f2 == 0.0) continue;
    const double C = spec.C[l];
    m.mean += f2 * C * (2.0 * l + 1.0);
    m.variance += 2.0 * f2 * f2 * C * C * (2.0 * l + 1.0);
  }
  return m;
}

int active_shells(const PowerSpectrum& spec, const FilterSpec& filter, int j) {
  const auto [lo, hi] = shell_window(spec.s, spec.L, filter, j);
  return hi >= lo ? hi - lo + 1 : 0;
}

TestResult s_statistic(double value, const Moments& model, double alpha) {
  if (!(model.variance > 0.0)) throw Error(ErrorKind::DegenerateModel, "model variance is zero");
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorKind::InvalidArgument, "alpha must lie in (0,1)");
  TestResult r;
  r.S = (value - model.mean) / std::sqrt(model.variance);
  r.threshold = boost::math::quantile(boost::math::normal(), 1.0 - alpha / 2.0);
  r.reject = std::abs(r.S) >= r.threshold;
  r.p_value = std::erfc(std::abs(r.S) / std::numbers::sqrt2);
  return r;
}

double ks_normal(std::vector<double> x) {
  if (x.empty()) return 0.0;
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double F = normal_cdf(x[i]);
    d = std::max({d, (i + 1) / n - F, F - i / n});
  }
  return d;
}

std::vector<CltScale> clt_experiment(const PowerSpectrum& spec, const FilterSpec& filter,
                                     const std::vector<int>& js, int n_reps, std::uint64_t seed) {
  if (spec.warning == ErrorKind::InvalidExponent) {
    throw Error(ErrorKind::InvalidExponent, "limit theorem needs a power law with alpha > 2");
  }
  std::vector<CltScale> out(js.size());
  std::vector<Moments> mom(js.size());
  int lo = spec.L + 1, hi = -1;
  for (std::size_t i = 0; i < js.size(); ++i) {
    out[i].j = js[i];
    mom[i] = gamma_hat_moments(spec, filter, js[i]);
    if (!(mom[i].variance > 0.0)) throw Error(ErrorKind::DegenerateModel, "scale has no active shells");
    const auto w = shell_window(spec.s, spec.L, filter, js[i]);
    out[i].shells = w.second - w.first + 1;
    lo = std::min(lo, w.first);
    hi = std::max(hi, w.second);
    out[i].standardized.resize(n_reps);
  }
  parallel_for(n_reps, [&](std::size_t r) {
    const SpinCoefficients a = sample_field(spec, SampleKey{seed, r, 0}, lo, hi);
    for (std::size_t i = 0; i < js.size(); ++i) {
      out[i].standardized[r] = (gamma_hat(a, filter, js[i]) - mom[i].mean) / std::sqrt(mom[i].variance);
    }
  });
  for (auto& sc : out) sc.ks = ks_normal(sc.standardized);
  return out;
}

RejectionRate sj_rejection_rate(const PowerSpectrum& truth, const PowerSpectrum& model,
                                const FilterSpec& filter, int j, int n_reps, std::uint64_t seed,
                                double alpha) {
  const Moments mom = gamma_hat_moments(model, filter, j);
  if (!(mom.variance > 0.0)) throw Error(ErrorKind::DegenerateModel, "model variance is zero");
  const auto [lo, hi] = shell_window(truth.s, truth.L, filter, j);
  std::vector<int> rejected(n_reps, 0);
  parallel_for(n_reps, [&](std::size_t r) {
    const SpinCoefficients a = sample_field(truth, SampleKey{seed, r, 0}, lo, hi);
    rejected[r] = s_statistic(gamma_hat(a, filter, j), mom, alpha).reject ? 1 : 0;
  });
  RejectionRate out;
  out.j = j;
  out.n_reps = n_reps;
  out.alpha = alpha;
  for (int v : rejected) out.rejections += v;
  out.rate = static_cast<double>(out.rejections) / n_reps;
  return out;
}

double model_correlation(const PowerSpectrum& spec, const FilterSpec& filter, int j,
                         const SpherePoint& x, const SpherePoint& y) {
  const Rotation I;
  const SpinCoefficients Yx = harmonics_in_chart(spec.s, spec.L, x, I);
  const SpinCoefficients Yy = harmonics_in_chart(spec.s, spec.L, y, I);
  cplx cross{};
  double diag = 0.0;
  for (int l = Yx.lmin(); l <= spec.L; ++l) {
    const double f2 = filter.f2(std::pow(filter.a(), 2 * j) * lambda_ls(spec.s, l));
    if (f2 == 0.0) continue;
    cplx k{};
    for (int m = -l; m <= l; ++m) k += Yx(l, m) * std::conj(Yy(l, m));
    cross += f2 * spec.C[l] * k;
    diag += f2 * spec.C[l] * (2.0 * l + 1.0) / (4.0 * std::numbers::pi);
  }
  return diag > 0.0 ? std::abs(cross) / diag : 0.0;
}

std::vector<CorrelationRow> uncorrelation_experiment(const PowerSpectrum& spec,
                                                     const FilterSpec& filter,
                                                     const std::vector<int>& js,
                                                     const std::vector<PointPair>& pairs,
                                                     int n_reps, std::uint64_t seed) {
  if (n_reps < 3) throw Error(ErrorKind::InvalidArgument, "uncorrelation needs n_reps >= 3");
  const int s = spec.s, L = spec.L;
  for (int j : js) {
    if (needlet_band_limit(filter, std::pow(filter.a(), j), s) > L) {
      throw Error(ErrorKind::BandLimitExceeded, "scale needs shells beyond the spectrum band limit");
    }
  }
  // Needlet coefficients of w_{t,x,R}; β_{t,x} = ⟨G, w⟩ = Σ a_lm conj(w_lm).
  std::vector<std::vector<std::pair<SpinCoefficients, SpinCoefficients>>> w(js.size());
  for (std::size_t ji = 0; ji < js.size(); ++ji) {
    for (const auto& p : pairs) {
      w[ji].emplace_back(needlet_coefficients(filter, js[ji], s, L, p.x, p.Rx),
                         needlet_coefficients(filter, js[ji], s, L, p.y, p.Ry));
    }
  }
  const std::size_t cols = js.size() * pairs.size();
  std::vector<std::vector<std::pair<cplx, cplx>>> beta(n_reps, std::vector<std::pair<cplx, cplx>>(cols));
  parallel_for(n_reps, [&](std::size_t r) {
    const SpinCoefficients a = sample_field(spec, SampleKey{seed, r, 0});
    for (std::size_t ji = 0; ji < js.size(); ++ji)
      for (std::size_t pi = 0; pi < pairs.size(); ++pi)
        beta[r][ji * pairs.size() + pi] = {inner(a, w[ji][pi].first), inner(a, w[ji][pi].second)};
  });
  std::vector<CorrelationRow> rows;
  for (std::size_t ji = 0; ji < js.size(); ++ji) {
    const double t = std::pow(filter.a(), js[ji]);
    for (std::size_t pi = 0; pi < pairs.size(); ++pi) {
      const std::size_t c = ji * pairs.size() + pi;
      cplx mx{}, my{};
      for (int r = 0; r < n_reps; ++r) {
        mx += beta[r][c].first;
        my += beta[r][c].second;
      }
      mx /= double(n_reps);
      my /= double(n_reps);
      cplx sxy{};
      double sxx = 0.0, syy = 0.0;
      for (int r = 0; r < n_reps; ++r) {
        const cplx u = beta[r][c].first - mx, v = beta[r][c].second - my;
        sxy += u * std::conj(v);
        sxx += std::norm(u);
        syy += std::norm(v);
      }
      CorrelationRow row;
      row.j = js[ji];
      row.pair_id = static_cast<int>(pi);
      row.d_over_t = geodesic_distance(pairs[pi].x, pairs[pi].y) / t;
      row.corr = (sxx > 0.0 && syy > 0.0) ? std::abs(sxy) / std::sqrt(sxx * syy) : 0.0;
      row.se = (1.0 - row.corr * row.corr) / std::sqrt(double(n_reps));
      row.model_corr = model_correlation(spec, filter, js[ji], pairs[pi].x, pairs[pi].y);
      rows.push_back(row);
    }
  }
  return rows;
}

std::vector<EgamRow> egam_experiment(const PowerSpectrum& spec, const NeedletFrame& frame,
                                     const std::vector<int>& js, double eps_hat, int n_reps,
                                     std::uint64_t seed) {
  if (spec.s != frame.spin()) throw Error(ErrorKind::InvalidArgument, "spin mismatch");
  std::vector<std::vector<double>> diff(js.size(), std::vector<double>(n_reps));
  std::vector<std::vector<double>> hat(js.size(), std::vector<double>(n_reps));
  std::vector<std::vector<double>> tilde(js.size(), std::vector<double>(n_reps));
  for (int r = 0; r < n_reps; ++r) {
    const SpinCoefficients a = sample_field(spec, SampleKey{seed, static_cast<std::uint64_t>(r), 0}).resized(frame.L());
    for (std::size_t i = 0; i < js.size(); ++i) {
      hat[i][r] = gamma_hat(a, frame.filter(), js[i]);
      tilde[i][r] = frame_energy(a, frame, js[i]);
      diff[i][r] = std::abs(hat[i][r] - tilde[i][r]);
    }
  }
  std::vector<EgamRow> rows;
  for (std::size_t i = 0; i < js.size(); ++i) {
    EgamRow row;
    row.j = js[i];
    row.mean_abs_diff = tree_sum(diff[i]) / n_reps;
    row.mean_hat = tree_sum(hat[i]) / n_reps;
    row.mean_tilde = tree_sum(tilde[i]) / n_reps;
    row.gamma_j = gamma_j(spec, frame.a(), js[i]);
    row.bound = eps_hat * row.gamma_j;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace spinwave
