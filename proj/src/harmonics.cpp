#include "spinwave/harmonics.hpp"

#include <cmath>
#include <numbers>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "spinwave/errors.hpp"
#include "spinwave/wigner.hpp"

namespace spinwave {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

double shell_norm(int l) { return std::sqrt((2.0 * l + 1.0) / kFourPi); }

int parity(int n) { return (n % 2 == 0) ? 1 : -1; }

void check_indices(int s, int l, int m) {
  if (l < std::abs(s)) throw Error(ErrorKind::UndefinedHarmonic, "spin harmonic needs l >= |s|");
  if (std::abs(m) > l) throw Error(ErrorKind::UndefinedHarmonic, "spin harmonic needs |m| <= l");
}

void check_theta(double theta) {
  if (!(theta > 0.0 && theta < std::numbers::pi)) {
    throw Error(ErrorKind::PoleEvaluation, "chart-I trivialization is undefined at the poles");
  }
}

constexpr double kBig = 0x1.0p200;
constexpr int kBigExp = 200;

}  // namespace

double lambda_ls(int s, int l) {
  return s >= 0 ? double(l - s) * double(l + s + 1) : double(l + s) * double(l - s + 1);
}

EigenData eigen(int s, int l) {
  if (l < std::abs(s)) throw Error(ErrorKind::UndefinedHarmonic, "eigen needs l >= |s|");
  EigenData e;
  e.lambda = lambda_ls(s, l);
  const int as = std::abs(s);
  // √((l+|s|)!/(l−|s|)!) for s ≥ 0, its reciprocal for s < 0.
  const double lb = 0.5 * (std::lgamma(l + as + 1.0) - std::lgamma(l - as + 1.0));
  e.b = std::exp(s >= 0 ? lb : -lb);
  return e;
}

cplx eval_sylm_direct(int s, int l, int m, double theta, double phi) {
  check_indices(s, l, m);
  check_theta(theta);
  // The alternating sum cancels heavily away from θ ≈ 0; 50 significant digits
  // keep l ≤ 48 accurate to double precision.
  using mpf = boost::multiprecision::cpp_bin_float_50;
  std::vector<mpf> ftab(2 * l + 2, mpf(1));
  for (int i = 2; i < 2 * l + 2; ++i) ftab[i] = ftab[i - 1] * i;
  auto fact = [&](int n) -> const mpf& { return ftab[n]; };
  auto binom = [&](int n, int k) { return fact(n) / (fact(k) * fact(n - k)); };
  const mpf half = mpf(theta) / 2;
  const mpf c = cos(half), sn = sin(half);
  const mpf pre = sqrt(fact(l + m) * fact(l - m) / (fact(l + s) * fact(l - s)) *
                       (2 * l + 1) / (4 * boost::math::constants::pi<mpf>()));
  // sin^{2l}(θ/2) cot^{p}(θ/2) = cos^p sin^{2l−p}; Neumaier summation.
  mpf sum = 0, comp = 0;
  for (int r = 0; r <= l - s; ++r) {
    const int k = r + s - m;
    if (k < 0 || k > l + s) continue;
    const int p = 2 * r + s - m;
    mpf term = binom(l - s, r) * binom(l + s, k) * pow(c, p) * pow(sn, 2 * l - p);
    if ((l - r - s) % 2 != 0) term = -term;
    const mpf t = sum + term;
    if (abs(sum) >= abs(term)) comp += (sum - t) + term;
    else comp += (term - t) + sum;
    sum = t;
  }
  const double val = static_cast<double>((sum + comp) * pre) * parity(std::max(-m, 0));
  return std::polar(1.0, m * phi) * val;
}

SpinProfiles::SpinProfiles(int s, int L) : s_(s), L_(L) {
  if (L < std::abs(s)) throw Error(ErrorKind::UndefinedHarmonic, "band limit below |s|");
  offset_.resize(2 * L + 2);
  seed_logc_.resize(2 * L + 1);
  seed_sign_.resize(2 * L + 1);
  std::size_t total = 0;
  for (int m = -L; m <= L; ++m) {
    offset_[m + L] = total;
    total += L - lmin(m) + 1;
  }
  offset_[2 * L + 1] = total;
  coef_.resize(total);
  const double m2 = -s;
  for (int m = -L; m <= L; ++m) {
    const int l0 = lmin(m);
    const WignerSeed sd = wigner_d_seed(m, -s);
    seed_logc_[m + L] = sd.logpre + std::log(shell_norm(l0));
    seed_sign_[m + L] = sd.sign * parity(std::max(m, 0) + std::abs(s));
    const double a2 = double(m) * m, b2 = m2 * m2, mm = m * m2;
    Coef* c = &coef_[offset_[m + L]];
    for (int l = l0; l <= L; ++l) {
      const double ld = l;
      const double r1 = shell_norm(l + 1) / shell_norm(l);
      if (l == 0) {
        c[l - l0] = {r1, 0.0, 0.0};
        continue;
      }
      const double den = ld * std::sqrt(((ld + 1) * (ld + 1) - a2) * ((ld + 1) * (ld + 1) - b2));
      const double r2 = shell_norm(l + 1) / shell_norm(l - 1);
      c[l - l0] = {r1 * (2 * ld + 1) * ld * (ld + 1) / den, r1 * (2 * ld + 1) * mm / den,
                   r2 * (ld + 1) * std::sqrt((ld * ld - a2) * (ld * ld - b2)) / den};
    }
  }
}

int SpinProfiles::eval(int m, double theta, double* out, int lmax) const {
  if (lmax < 0 || lmax > L_) lmax = L_;
  const int l0 = lmin(m);
  if (lmax < l0) return l0;
  const WignerSeed sd = wigner_d_seed(m, -s_);
  const double hc = std::cos(0.5 * theta), hs = std::sin(0.5 * theta);
  double logmag = seed_logc_[m + L_];
  if (sd.pc > 0) logmag += sd.pc * std::log(hc);
  if (sd.ps > 0) logmag += sd.ps * std::log(hs);
  const double l2 = logmag * std::numbers::log2e;
  int E = static_cast<int>(std::floor(l2));
  double cur = seed_sign_[m + L_] * std::exp2(l2 - E), prev = 0.0;
  out[0] = std::ldexp(cur, E);
  const double x = std::cos(theta);
  const Coef* c = &coef_[offset_[m + L_]];
  for (int l = l0; l < lmax; ++l) {
    const Coef& k = c[l - l0];
    const double next = (k.a * x - k.b) * cur - k.c * prev;
    prev = cur;
    cur = next;
    if (std::abs(cur) > kBig) {
      cur = std::ldexp(cur, -kBigExp);
      prev = std::ldexp(prev, -kBigExp);
      E += kBigExp;
    }
    out[l + 1 - l0] = std::ldexp(cur, E);
  }
  return l0;
}

cplx eval_sylm(int s, int l, int m, double theta, double phi) {
  check_indices(s, l, m);
  check_theta(theta);
  const double d = wigner_d(l, m, -s, theta);
  return std::polar(1.0, m * phi) * (parity(std::max(m, 0) + std::abs(s)) * shell_norm(l) * d);
}

cplx eval_sylm_chart(int s, int l, int m, const SpherePoint& p, const Rotation& R) {
  check_indices(s, l, m);
  const SpherePoint q = R.inverse().apply(p);
  if (q.is_pole(1e-14)) throw Error(ErrorKind::PoleInChart, "point is a pole of the chart");
  const WignerD D(R, l);
  const double th = q.theta(), ph = q.phi();
  cplx acc = 0.0;
  for (int mp = -l; mp <= l; ++mp) acc += D(l, mp, m) * eval_sylm(s, l, mp, th, ph);
  return acc;
}

}  // namespace spinwave
