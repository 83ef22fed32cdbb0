#include "spinwave/transform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "spinwave/harmonics.hpp"
#include "spinwave/parallel.hpp"
#include "spinwave/simd/kernels.hpp"
#include "spinwave/wigner.hpp"

namespace spinwave {

namespace {

// m-major copy: cols[m + L] holds a_lm for l = lmin(m)..L.
std::vector<std::vector<cplx>> m_columns(const SpinCoefficients& a, const SpinProfiles& prof) {
  const int L = a.L();
  std::vector<std::vector<cplx>> cols(2 * L + 1);
  for (int m = -L; m <= L; ++m) {
    auto& col = cols[m + L];
    const int l0 = prof.lmin(m);
    col.resize(l0 <= L ? L - l0 + 1 : 0);
    for (int l = l0; l <= L; ++l) col[l - l0] = a(l, m);
  }
  return cols;
}

// e^{imφ_k} for |m| ≤ L.
std::vector<cplx> phase_table(int L, const QuadratureGrid& grid) {
  std::vector<cplx> E(static_cast<std::size_t>(2 * L + 1) * grid.n_phi);
  for (int m = -L; m <= L; ++m)
    for (int k = 0; k < grid.n_phi; ++k)
      E[static_cast<std::size_t>(m + L) * grid.n_phi + k] = std::polar(1.0, m * grid.phi(k));
  return E;
}

}  // namespace

double GridField::norm2() const {
  std::vector<double> rings(grid.n_theta());
  for (int i = 0; i < grid.n_theta(); ++i) {
    double acc = 0.0;
    for (int k = 0; k < grid.n_phi; ++k) acc += std::norm(at(i, k));
    rings[i] = acc * grid.node_weight(i);
  }
  return tree_sum(rings);
}

GridField zero_field(int s, const QuadratureGrid& grid) {
  GridField f;
  f.s = s;
  f.grid = grid;
  f.samples.assign(grid.size(), cplx{});
  return f;
}

GridField synthesis(const SpinCoefficients& coeffs, const QuadratureGrid& grid) {
  if (grid.L < coeffs.L()) {
    throw Error(ErrorKind::BandLimitExceeded, "grid band limit below coefficient band limit");
  }
  const int L = coeffs.L();
  GridField f = zero_field(coeffs.spin(), grid);
  const SpinProfiles prof(coeffs.spin(), L);
  const auto cols = m_columns(coeffs, prof);
  const auto E = phase_table(L, grid);
  const auto& K = simd::active();
  parallel_for(grid.n_theta(), [&](std::size_t i) {
    std::vector<double> y(L + 1);
    std::vector<cplx> G(2 * L + 1);
    for (int m = -L; m <= L; ++m) {
      const auto& col = cols[m + L];
      if (col.empty()) continue;
      prof.eval(m, grid.theta[i], y.data());
      G[m + L] = K.cdot_real(y.data(), col.data(), col.size());
    }
    for (int k = 0; k < grid.n_phi; ++k) {
      cplx acc{};
      for (int m = -L; m <= L; ++m) acc += G[m + L] * E[static_cast<std::size_t>(m + L) * grid.n_phi + k];
      f.at(static_cast<int>(i), k) = acc;
    }
  });
  return f;
}

SpinCoefficients analysis(const GridField& field, int L, AnalysisDiagnostics* diagnostics) {
  const QuadratureGrid& grid = field.grid;
  if (L < 0) L = grid.L;
  if (L > grid.L) throw Error(ErrorKind::BandLimitExceeded, "analysis band limit above grid");
  const int s = field.s;
  SpinCoefficients out(s, L);
  const SpinProfiles prof(s, L);
  const auto E = phase_table(L, grid);
  const auto& K = simd::active();
  const double dphi = 2.0 * std::numbers::pi / grid.n_phi;

  using Cols = std::vector<std::vector<cplx>>;
  auto empty_cols = [&] { return m_columns(out, prof); };
  Cols total = parallel_reduce<Cols>(
      grid.n_theta(), Cols{},
      [&](std::size_t i) {
        Cols cols = empty_cols();
        std::vector<double> y(L + 1);
        for (int m = -L; m <= L; ++m) {
          auto& col = cols[m + L];
          if (col.empty()) continue;
          cplx G{};
          const cplx* e = &E[static_cast<std::size_t>(m + L) * grid.n_phi];
          for (int k = 0; k < grid.n_phi; ++k) G += field.at(static_cast<int>(i), k) * std::conj(e[k]);
          G *= dphi * grid.weights[i];
          prof.eval(m, grid.theta[i], y.data());
          K.caxpy_real(G, y.data(), col.data(), col.size());
        }
        return cols;
      },
      [](Cols a, const Cols& b) {
        if (a.empty()) return b;
        for (std::size_t m = 0; m < a.size(); ++m)
          for (std::size_t l = 0; l < a[m].size(); ++l) a[m][l] += b[m][l];
        return a;
      });
  for (int m = -L; m <= L; ++m) {
    const int l0 = prof.lmin(m);
    for (int l = l0; l <= L; ++l) out(l, m) = total[m + L][l - l0];
  }
  if (diagnostics) {
    const double n2 = out.norm2();
    diagnostics->top_shell_fraction = n2 > 0.0 ? out.shell_norm2(L) / n2 : 0.0;
    diagnostics->warning.reset();
    if (diagnostics->top_shell_fraction > 1e-6) diagnostics->warning = ErrorKind::BandLimitExceeded;
  }
  return out;
}

namespace {

cplx evaluate_chart_I(const SpinCoefficients& a, double theta, double phi) {
  const int L = a.L();
  const SpinProfiles prof(a.spin(), L);
  std::vector<double> y(L + 1);
  cplx acc{};
  for (int m = -L; m <= L; ++m) {
    const int l0 = prof.lmin(m);
    if (l0 > L) continue;
    prof.eval(m, theta, y.data());
    cplx g{};
    for (int l = l0; l <= L; ++l) g += a(l, m) * y[l - l0];
    acc += g * std::polar(1.0, m * phi);
  }
  return acc;
}

}  // namespace

cplx evaluate(const SpinCoefficients& coeffs, const SpherePoint& p, const Rotation& R) {
  if (!in_chart(p, R, 1e-14)) throw Error(ErrorKind::PoleInChart, "point is a pole of the chart");
  if (in_chart(p, Rotation::identity(), 1e-6)) {
    const cplx fI = evaluate_chart_I(coeffs, p.theta(), p.phi());
    if (R.is_identity()) return fI;
    return std::polar(1.0, coeffs.spin() * reference_angle(p, Rotation::identity(), R)) * fI;
  }
  // f_R(p) = (f^R)_I(R⁻¹p).
  const SpherePoint q = R.inverse().apply(p);
  return evaluate_chart_I(rotate_coefficients(coeffs, R), q.theta(), q.phi());
}

double gram_residual(int s, int L, const QuadratureGrid& grid) {
  const int l0 = std::abs(s);
  if (L < l0) return 0.0;
  const std::size_t nr = grid.theta.size();
  // Real θ-profiles ₛy_lm(θ_i) = ₛY_lm(θ_i, 0), one row per (l, m).
  std::vector<std::pair<int, int>> idx;
  for (int l = l0; l <= L; ++l)
    for (int m = -l; m <= l; ++m) idx.emplace_back(l, m);
  std::vector<double> prof(idx.size() * nr);
  parallel_for(idx.size(), [&](std::size_t r) {
    for (std::size_t i = 0; i < nr; ++i) {
      prof[r * nr + i] = eval_sylm(s, idx[r].first, idx[r].second, grid.theta[i], 0.0).real();
    }
  });
  // Longitude sums Σ_k e^{i(m−m')φ_k} Δφ for every difference.
  std::vector<cplx> ring(4 * L + 1);
  const double dphi = 2.0 * std::numbers::pi / grid.n_phi;
  for (int d = -2 * L; d <= 2 * L; ++d) {
    cplx acc{};
    for (int k = 0; k < grid.n_phi; ++k) acc += std::polar(1.0, d * grid.phi(k));
    ring[d + 2 * L] = acc * dphi;
  }
  std::vector<double> worst(idx.size(), 0.0);
  parallel_for(idx.size(), [&](std::size_t r) {
    for (std::size_t c = 0; c < idx.size(); ++c) {
      double acc = 0.0;
      for (std::size_t i = 0; i < nr; ++i) acc += grid.weights[i] * prof[r * nr + i] * prof[c * nr + i];
      const cplx g = acc * ring[idx[r].second - idx[c].second + 2 * L];
      worst[r] = std::max(worst[r], std::abs(g - (r == c ? 1.0 : 0.0)));
    }
  });
  return *std::max_element(worst.begin(), worst.end());
}

SpinCoefficients harmonics_in_chart(int s, int L, const SpherePoint& x, const Rotation& R) {
  if (!in_chart(x, R, 1e-14)) throw Error(ErrorKind::PoleInChart, "point is a pole of the chart");
  SpinCoefficients out(s, L);
  const Rotation I;
  const SpinProfiles prof(s, L);
  std::vector<double> y(L + 1);
  auto fill_chart_I = [&](SpinCoefficients& dst, double th, double ph) {
    for (int m = -L; m <= L; ++m) {
      const int l0 = prof.lmin(m);
      if (l0 > L) continue;
      prof.eval(m, th, y.data());
      const cplx e = std::polar(1.0, m * ph);
      for (int l = l0; l <= L; ++l) dst(l, m) = e * y[l - l0];
    }
  };
  if (in_chart(x, I, 1e-6)) {
    fill_chart_I(out, x.theta(), x.phi());
    if (!R.is_identity()) out *= std::polar(1.0, s * reference_angle(x, I, R));
    return out;
  }
  // Wigner route: ₛY_lmR(x) = Σ_{m'} D_{m'm}(R) ₛY_{lm'I}(R⁻¹x).
  SpinCoefficients base(s, L);
  const SpherePoint q = R.inverse().apply(x);
  fill_chart_I(base, q.theta(), q.phi());
  const WignerD D(R, L);
  for (int l = out.lmin(); l <= L; ++l) {
    for (int m = -l; m <= l; ++m) {
      cplx acc{};
      for (int mp = -l; mp <= l; ++mp) acc += D(l, mp, m) * base(l, mp);
      out(l, m) = acc;
    }
  }
  return out;
}

SpinCoefficients rotate_coefficients(const SpinCoefficients& coeffs, const Rotation& R) {
  const int L = coeffs.L();
  const WignerD D(R, L);
  SpinCoefficients out(coeffs.spin(), L);
  for (int l = coeffs.lmin(); l <= L; ++l) {
    for (int mp = -l; mp <= l; ++mp) {
      cplx acc{};
      for (int m = -l; m <= l; ++m) acc += D(l, mp, m) * coeffs(l, m);
      out(l, mp) = acc;
    }
  }
  return out;
}

GridField rotate_samples(const SpinCoefficients& coeffs, const Rotation& R,
                         const QuadratureGrid& grid) {
  GridField f = zero_field(coeffs.spin(), grid);
  const int s = coeffs.spin();
  const Rotation I;
  parallel_for(grid.n_theta(), [&](std::size_t i) {
    for (int k = 0; k < grid.n_phi; ++k) {
      const SpherePoint q = SpherePoint::from_angles(grid.theta[i], grid.phi(k));
      const SpherePoint p = R.apply(q);
      const cplx fI = evaluate_chart_I(coeffs, p.theta(), p.phi());
      f.at(static_cast<int>(i), k) = std::polar(1.0, s * reference_angle(p, I, R)) * fI;
    }
  });
  return f;
}

}  // namespace spinwave
