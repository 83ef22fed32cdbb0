#include "spinwave/random_fields.hpp"

#include <algorithm>
#include <cmath>

#include "spinwave/parallel.hpp"
#include "spinwave/rng.hpp"
#include "spinwave/transform.hpp"

namespace spinwave {

double PowerSpectrum::variance() const {
  std::vector<double> terms(C.size());
  for (std::size_t l = 0; l < C.size(); ++l) terms[l] = C[l] * (2.0 * l + 1.0);
  return tree_sum(terms);
}

PowerSpectrum power_law_spectrum(int s, int L, double alpha, double c) {
  if (L < std::abs(s)) throw Error(ErrorKind::UndefinedHarmonic, "band limit below |s|");
  PowerSpectrum p;
  p.s = s;
  p.L = L;
  p.C.assign(L + 1, 0.0);
  p.model = "power_law";
  p.params = {{"alpha", alpha}, {"c", c}};
  for (int l = std::max(std::abs(s), 1); l <= L; ++l) p.C[l] = c * std::pow(double(l), -alpha);
  if (!(alpha > 2.0)) p.warning = ErrorKind::InvalidExponent;
  return p;
}

SpinCoefficients sample_field(const PowerSpectrum& spec, const SampleKey& key, int l_lo,
                              int l_hi) {
  SpinCoefficients a(spec.s, spec.L);
  const int lo = std::max(a.lmin(), l_lo < 0 ? 0 : l_lo);
  const int hi = l_hi < 0 ? spec.L : std::min(l_hi, spec.L);
  for (int l = lo; l <= hi; ++l) {
    const double C = spec.C[l];
    if (C == 0.0) continue;
    const double sd = std::sqrt(C / 2.0);
    for (int m = 0; m <= l; ++m) {
      const auto [z1, z2] = keyed_normal_pair(
          {key.seed, key.stream, key.rep, static_cast<std::uint64_t>(l), static_cast<std::uint64_t>(m)});
      if (m == 0) {
        a(l, 0) = std::sqrt(C) * z1;
      } else {
        a(l, m) = cplx(sd * z1, sd * z2);
        a(l, -m) = std::conj(a(l, m));
      }
    }
  }
  return a;
}

Sampler default_sampler() {
  return [](const PowerSpectrum& spec, const SampleKey& key) { return sample_field(spec, key); };
}

PowerSpectrum empirical_spectrum(const SpinCoefficients& a) {
  PowerSpectrum p;
  p.s = a.spin();
  p.L = a.L();
  p.C.assign(a.L() + 1, 0.0);
  p.model = "empirical";
  for (int l = a.lmin(); l <= a.L(); ++l) p.C[l] = a.shell_norm2(l) / (2.0 * l + 1.0);
  return p;
}

PowerSpectrum empirical_spectrum(const std::vector<SpinCoefficients>& ensemble) {
  if (ensemble.empty()) throw Error(ErrorKind::InvalidArgument, "empty ensemble");
  PowerSpectrum p = empirical_spectrum(ensemble.front());
  for (std::size_t i = 1; i < ensemble.size(); ++i) {
    const PowerSpectrum q = empirical_spectrum(ensemble[i]);
    for (int l = 0; l <= p.L; ++l) p.C[l] += q.C[l];
  }
  for (auto& c : p.C) c /= static_cast<double>(ensemble.size());
  p.params = {{"n_samples", ensemble.size()}};
  return p;
}

IsotropyReport isotropy_diagnostic(const PowerSpectrum& spec, int n_reps,
                                   const std::vector<Rotation>& rotations, std::uint64_t seed,
                                   const std::vector<SpherePoint>& points, const Sampler& sampler) {
  if (rotations.empty() || points.empty() || n_reps < 2) {
    throw Error(ErrorKind::InvalidArgument, "isotropy diagnostic needs rotations, points, n_reps >= 2");
  }
  const std::size_t P = points.size();
  // Observables per replication: Re, Im at each point, then all second-order
  // products of the 2P real coordinates (upper triangle).
  const std::size_t D = 2 * P;
  const std::size_t n_obs = D + D * (D + 1) / 2;
  struct Stat {
    std::vector<double> mean, var;
  };
  std::vector<Stat> stats(rotations.size());
  std::vector<double> rep_obs;
  IsotropyReport report;
  report.n_reps = n_reps;
  report.n_rotations = rotations.size();
  report.n_points = P;
  double asym = 0.0;
  for (std::size_t r = 0; r < rotations.size(); ++r) {
    std::vector<std::vector<double>> obs(n_reps, std::vector<double>(n_obs));
    std::vector<std::vector<double>> re_vals(n_reps, std::vector<double>(P));
    parallel_for(n_reps, [&](std::size_t i) {
      const SpinCoefficients a = sampler(spec, SampleKey{seed, static_cast<std::uint64_t>(i), r + 1});
      const SpinCoefficients aR = rotate_coefficients(a, rotations[r]);
      std::vector<double> x(D);
      for (std::size_t p = 0; p < P; ++p) {
        const cplx v = evaluate(aR, points[p]);
        x[2 * p] = v.real();
        x[2 * p + 1] = v.imag();
        re_vals[i][p] = v.real();
      }
      auto& o = obs[i];
      std::size_t q = 0;
      for (std::size_t u = 0; u < D; ++u) o[q++] = x[u];
      for (std::size_t u = 0; u < D; ++u)
        for (std::size_t v = u; v < D; ++v) o[q++] = x[u] * x[v];
    });
    Stat& st = stats[r];
    st.mean.assign(n_obs, 0.0);
    st.var.assign(n_obs, 0.0);
    for (std::size_t q = 0; q < n_obs; ++q) {
      double m = 0.0;
      for (int i = 0; i < n_reps; ++i) m += obs[i][q];
      m /= n_reps;
      double v = 0.0;
      for (int i = 0; i < n_reps; ++i) v += (obs[i][q] - m) * (obs[i][q] - m);
      st.mean[q] = m;
      st.var[q] = v / (n_reps - 1);
    }
    // Re G vs −Re G: the mean and the third moment must vanish.
    for (std::size_t p = 0; p < P; ++p) {
      double m1 = 0, m2 = 0, m3 = 0, m6 = 0;
      for (int i = 0; i < n_reps; ++i) {
        const double v = re_vals[i][p];
        m1 += v;
        m2 += v * v;
        m3 += v * v * v;
        m6 += v * v * v * v * v * v;
      }
      m1 /= n_reps;
      m2 /= n_reps;
      m3 /= n_reps;
      m6 /= n_reps;
      if (m2 > 0.0) {
        asym = std::max(asym, std::abs(m1) / std::sqrt(m2 / n_reps));
        asym = std::max(asym, std::abs(m3) / std::sqrt(m6 / n_reps));
      }
    }
  }
  double worst = 0.0;
  for (std::size_t r = 1; r < rotations.size(); ++r) {
    for (std::size_t q = 0; q < n_obs; ++q) {
      const double se = std::sqrt((stats[r].var[q] + stats[0].var[q]) / n_reps);
      if (se > 0.0) worst = std::max(worst, std::abs(stats[r].mean[q] - stats[0].mean[q]) / se);
    }
  }
  report.max_discrepancy = worst;
  report.max_sign_asymmetry = asym;
  return report;
}

}  // namespace spinwave
