#include "spinwave/wigner.hpp"

#include <cmath>
#include <cstdlib>

#include "spinwave/errors.hpp"

namespace spinwave {

namespace {

// Sign and natural log of the seed magnitude (−inf for an exact zero).
void seed_log(int m1, int m2, double beta, int& sign, double& logmag) {
  const WignerSeed sd = wigner_d_seed(m1, m2);
  const double c = std::cos(0.5 * beta), s = std::sin(0.5 * beta);
  sign = sd.sign;
  logmag = sd.logpre;
  if (sd.pc > 0) {
    logmag += sd.pc * std::log(std::abs(c));
    if (sd.pc % 2 == 1 && c < 0) sign = -sign;
  }
  if (sd.ps > 0) logmag += sd.ps * std::log(std::abs(s));
}

constexpr double kBig = 0x1.0p200;
constexpr int kBigExp = 200;

}  // namespace

WignerSeed wigner_d_seed(int m1, int m2) {
  WignerSeed sd;
  const int j = std::max(std::abs(m1), std::abs(m2));
  // The finite sum has a single admissible k at this degree.
  const int k = std::max(0, m2 - m1);
  sd.j = j;
  sd.logpre = 0.5 * (std::lgamma(j + m1 + 1.0) + std::lgamma(j - m1 + 1.0) +
                     std::lgamma(j + m2 + 1.0) + std::lgamma(j - m2 + 1.0)) -
              std::lgamma(j + m2 - k + 1.0) - std::lgamma(k + 1.0) -
              std::lgamma(m1 - m2 + k + 1.0) - std::lgamma(j - m1 - k + 1.0);
  sd.pc = 2 * j + m2 - m1 - 2 * k;
  sd.ps = m1 - m2 + 2 * k;
  sd.sign = ((m1 - m2 + k) % 2 == 0) ? 1 : -1;
  return sd;
}

long double wigner_d_sum(int j, int m1, int m2, long double beta) {
  if (j < std::abs(m1) || j < std::abs(m2)) return 0.0L;
  const long double c = std::cos(beta / 2), s = std::sin(beta / 2);
  auto lf = [](int n) { return std::lgamma(static_cast<long double>(n) + 1.0L); };
  long double total = 0.0L;
  for (int k = std::max(0, m2 - m1); k <= std::min(j + m2, j - m1); ++k) {
    const long double mag =
        std::exp(0.5L * (lf(j + m1) + lf(j - m1) + lf(j + m2) + lf(j - m2)) - lf(j + m2 - k) -
                 lf(k) - lf(m1 - m2 + k) - lf(j - m1 - k));
    const int pc = 2 * j + m2 - m1 - 2 * k, ps = m1 - m2 + 2 * k;
    long double term = mag * std::pow(c, pc) * std::pow(s, ps);
    if ((m1 - m2 + k) % 2 != 0) term = -term;
    total += term;
  }
  return total;
}

int wigner_d_column(int m1, int m2, double beta, int jmax, double* out, const double* norm) {
  const int jmin = std::max(std::abs(m1), std::abs(m2));
  if (jmax < jmin) return jmin;
  int sign;
  double logmag;
  seed_log(m1, m2, beta, sign, logmag);
  const double x = std::cos(beta);

  // Mantissa/exponent pair: value = mant · 2^E.
  double prev = 0.0, cur = 0.0;
  int E = 0;
  if (std::isfinite(logmag)) {
    const double l2 = logmag / std::log(2.0);
    E = static_cast<int>(std::floor(l2));
    cur = sign * std::exp2(l2 - E);
  }
  auto emit = [&](int j, double v) {
    const double scaled = std::ldexp(v, E);
    out[j - jmin] = norm ? scaled * norm[j] : scaled;
  };
  emit(jmin, cur);
  const double mm = static_cast<double>(m1) * m2;
  const double a2 = static_cast<double>(m1) * m1, b2 = static_cast<double>(m2) * m2;
  for (int j = jmin; j < jmax; ++j) {
    double next;
    if (j == 0) {
      next = x * cur;
    } else {
      const double jd = j;
      const double den =
          jd * std::sqrt(((jd + 1) * (jd + 1) - a2) * ((jd + 1) * (jd + 1) - b2));
      const double c1 = (2 * jd + 1) * (jd * (jd + 1) * x - mm) / den;
      const double c2 = (jd + 1) * std::sqrt((jd * jd - a2) * (jd * jd - b2)) / den;
      next = c1 * cur - c2 * prev;
    }
    prev = cur;
    cur = next;
    if (std::abs(cur) > kBig) {
      cur = std::ldexp(cur, -kBigExp);
      prev = std::ldexp(prev, -kBigExp);
      E += kBigExp;
    }
    emit(j + 1, cur);
  }
  return jmin;
}

double wigner_d(int j, int m1, int m2, double beta) {
  if (j < std::abs(m1) || j < std::abs(m2)) {
    throw Error(ErrorKind::InvalidArgument, "wigner_d: |m| exceeds j");
  }
  std::vector<double> buf(j + 1);
  const int jmin = wigner_d_column(m1, m2, beta, j, buf.data());
  return buf[j - jmin];
}

WignerD::WignerD(const Rotation& R, int L) : L_(L), offset_(L + 1) {
  std::size_t total = 0;
  for (int l = 0; l <= L; ++l) {
    offset_[l] = total;
    total += static_cast<std::size_t>(2 * l + 1) * (2 * l + 1);
  }
  data_.assign(total, {0.0, 0.0});
  const auto [alpha, beta, gamma] = R.zyz();
  std::vector<double> col(L + 1);
  // D_{m'm} = ε_m ε_{m'} e^{i m' γ} d^l_{m m'}(β) e^{i m α}, ε_m = (−1)^{max(m,0)}.
  for (int m = -L; m <= L; ++m) {
    for (int mp = -L; mp <= L; ++mp) {
      const int lmin = wigner_d_column(m, mp, beta, L, col.data());
      const int eps = ((std::max(m, 0) + std::max(mp, 0)) % 2 == 0) ? 1 : -1;
      const std::complex<double> phase = std::polar(1.0, mp * gamma + m * alpha) * double(eps);
      for (int l = lmin; l <= L; ++l) {
        data_[offset_[l] + (mp + l) * (2 * l + 1) + (m + l)] = phase * col[l - lmin];
      }
    }
  }
}

}  // namespace spinwave
