#include "spinwave/spin_ops.hpp"

#include <cmath>
#include <numbers>

#include "spinwave/harmonics.hpp"
#include "spinwave/wigner.hpp"

namespace spinwave {

SpinCoefficients spin_raise(const SpinCoefficients& a) {
  const int s = a.spin();
  if (a.L() < std::abs(s + 1)) return SpinCoefficients(s + 1, std::abs(s + 1));
  SpinCoefficients out(s + 1, a.L());
  for (int l = out.lmin(); l <= a.L(); ++l) {
    const double mult = std::sqrt(double(l - s) * double(l + s + 1));
    for (int m = -l; m <= l; ++m) out(l, m) = mult * a.get(l, m);
  }
  return out;
}

SpinCoefficients spin_lower(const SpinCoefficients& a) {
  const int s = a.spin();
  if (a.L() < std::abs(s - 1)) return SpinCoefficients(s - 1, std::abs(s - 1));
  SpinCoefficients out(s - 1, a.L());
  for (int l = out.lmin(); l <= a.L(); ++l) {
    const double mult = -std::sqrt(double(l + s) * double(l - s + 1));
    for (int m = -l; m <= l; ++m) out(l, m) = mult * a.get(l, m);
  }
  return out;
}

SpinCoefficients laplacian_s(const SpinCoefficients& a) {
  SpinCoefficients out = a;
  for (int l = a.lmin(); l <= a.L(); ++l) {
    const double lam = lambda_ls(a.spin(), l);
    for (int m = -l; m <= l; ++m) out(l, m) *= lam;
  }
  return out;
}

SpinCoefficients zonal_coefficients(int s, int l, int L) {
  if (l < std::abs(s)) throw Error(ErrorKind::UndefinedHarmonic, "zonal harmonic needs l >= |s|");
  if (L < l) L = l;
  SpinCoefficients out(s, L);
  const double sign = (std::max(s, 0) % 2 == 0) ? 1.0 : -1.0;
  out(l, -s) = sign * std::sqrt((2.0 * l + 1.0) / (4.0 * std::numbers::pi));
  return out;
}

cplx pole_functional(const SpinCoefficients& a) {
  // L(ₛY_lm) = δ_{m,−s} (−1)^{max(s,0)} √((2l+1)/4π).
  const int s = a.spin();
  const double sign = (std::max(s, 0) % 2 == 0) ? 1.0 : -1.0;
  cplx acc{};
  for (int l = std::max(a.lmin(), std::abs(s)); l <= a.L(); ++l) {
    acc += a(l, -s) * (sign * std::sqrt((2.0 * l + 1.0) / (4.0 * std::numbers::pi)));
  }
  return acc;
}

std::pair<SpinCoefficients, SpinCoefficients> em_decompose(const SpinCoefficients& a) {
  SpinCoefficients E(a.spin(), a.L()), M(a.spin(), a.L());
  const cplx i(0.0, 1.0);
  for (int l = a.lmin(); l <= a.L(); ++l) {
    for (int m = -l; m <= l; ++m) {
      const cplx x = a(l, m), y = std::conj(a(l, -m));
      E(l, m) = 0.5 * (x + y);
      M(l, m) = -0.5 * i * (x - y);
    }
  }
  return {std::move(E), std::move(M)};
}

bool is_involutive(const SpinCoefficients& a, double tol) {
  for (int l = a.lmin(); l <= a.L(); ++l)
    for (int m = 0; m <= l; ++m)
      if (std::abs(std::conj(a(l, m)) - a(l, -m)) > tol) return false;
  return true;
}

namespace {

// ₛY_{lm R}(x) for all m: phase route when x is away from the poles of chart I,
// Wigner route otherwise.
std::vector<cplx> shell_in_chart(int s, int l, const SpherePoint& x, const Rotation& R) {
  if (!in_chart(x, R, 1e-14)) throw Error(ErrorKind::PoleInChart, "point is a pole of the chart");
  std::vector<cplx> v(2 * l + 1);
  const Rotation I;
  if (in_chart(x, I, 1e-6)) {
    const cplx ph = R.is_identity() ? cplx(1.0) : std::polar(1.0, s * reference_angle(x, I, R));
    const double th = x.theta(), phi = x.phi();
    for (int m = -l; m <= l; ++m) v[m + l] = ph * eval_sylm(s, l, m, th, phi);
    return v;
  }
  const SpherePoint q = R.inverse().apply(x);
  const WignerD D(R, l);
  std::vector<cplx> base(2 * l + 1);
  for (int mp = -l; mp <= l; ++mp) base[mp + l] = eval_sylm(s, l, mp, q.theta(), q.phi());
  for (int m = -l; m <= l; ++m) {
    cplx acc{};
    for (int mp = -l; mp <= l; ++mp) acc += D(l, mp, m) * base[mp + l];
    v[m + l] = acc;
  }
  return v;
}

}  // namespace

cplx projection_kernel(int s, int l, const SpherePoint& x, const SpherePoint& y,
                       const Rotation& R1, const Rotation& R2) {
  if (l < std::abs(s)) throw Error(ErrorKind::UndefinedHarmonic, "kernel needs l >= |s|");
  const auto vx = shell_in_chart(s, l, x, R1);
  const auto vy = shell_in_chart(s, l, y, R2);
  cplx acc{};
  for (int m = -l; m <= l; ++m) acc += vx[m + l] * std::conj(vy[m + l]);
  return acc;
}

}  // namespace spinwave
