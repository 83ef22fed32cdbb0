#include <cmath>

#include "doctest.h"
#include "spinwave/errors.hpp"
#include "spinwave/random_fields.hpp"
#include "spinwave/spin_ops.hpp"
#include "spinwave/transform.hpp"
#include "test_support.hpp"

using namespace spinwave;
using testing::kPi;

TEST_CASE("power-law spectrum") {
  const PowerSpectrum zero = power_law_spectrum(2, 16, 3.0, 0.0);
  CHECK(zero.variance() == 0.0);
  const PowerSpectrum p = power_law_spectrum(2, 16, 3.0, 1.0);
  CHECK(p.C[2] == doctest::Approx(1.0 / 8.0));
  CHECK(p.C[0] == 0.0);
  CHECK(p.C[1] == 0.0);
  double v = 0.0;
  for (int l = 2; l <= 16; ++l) v += std::pow(l, -3.0) * (2 * l + 1);
  CHECK(p.variance() == doctest::Approx(v).epsilon(1e-14));
  CHECK(!p.warning.has_value());

  const PowerSpectrum scalar = power_law_spectrum(0, 8, 3.0, 1.0);
  CHECK(scalar.C[0] == 0.0);
  CHECK(scalar.C[1] == 1.0);

  const PowerSpectrum shallow = power_law_spectrum(0, 8, 2.0, 1.0);
  REQUIRE(shallow.warning.has_value());
  CHECK(*shallow.warning == ErrorKind::InvalidExponent);
}

TEST_CASE("sampled coefficients: structure and reproducibility") {
  const PowerSpectrum zero = power_law_spectrum(2, 16, 3.0, 0.0);
  CHECK(sample_field(zero, {5, 0, 0}).norm2() == 0.0);

  const PowerSpectrum p = power_law_spectrum(-1, 20, 3.0, 2.0);
  const SpinCoefficients a = sample_field(p, {5, 3, 0});
  CHECK(a.spin() == -1);
  CHECK(is_involutive(a, 0.0));
  for (int l = 1; l <= 20; ++l) CHECK(a(l, 0).imag() == 0.0);
  const SpinCoefficients b = sample_field(p, {5, 3, 0});
  CHECK(a.data() == b.data());
  const SpinCoefficients c = sample_field(p, {5, 4, 0});
  CHECK(a.data() != c.data());
  const SpinCoefficients d = sample_field(p, {5, 3, 1});
  CHECK(a.data() != d.data());

  // Restricting to a shell window reproduces the full draw there.
  const SpinCoefficients w = sample_field(p, {5, 3, 0}, 7, 11);
  for (int l = 1; l <= 20; ++l) {
    for (int m = -l; m <= l; ++m) {
      if (l >= 7 && l <= 11) {
        CHECK(w(l, m) == a(l, m));
      } else {
        CHECK(w(l, m) == cplx{});
      }
    }
  }

  // E/M parts of an involutive field: M vanishes.
  CHECK(em_decompose(a).second.norm2() < 1e-28);
}

TEST_CASE("second moments over 10^4 replications") {
  const int L = 16, n = 10000;
  const PowerSpectrum p = power_law_spectrum(2, L, 3.0, 1.0);
  std::vector<SpinCoefficients> draws;
  draws.reserve(n);
  for (int r = 0; r < n; ++r) draws.push_back(sample_field(p, {2024, static_cast<std::uint64_t>(r), 0}));

  // E|A_lm|² = C_l.
  for (int l : {2, 5, 16}) {
    for (int m : {-l, 0, 1, l}) {
      double s1 = 0.0, s2 = 0.0;
      for (const auto& a : draws) {
        const double v = std::norm(a(l, m));
        s1 += v;
        s2 += v * v;
      }
      const double mean = s1 / n, se = std::sqrt((s2 / n - mean * mean) / n);
      CHECK(std::abs(mean - p.C[l]) < 5 * se);
    }
  }
  // E(A_lm conj A_l'm') = 0 off the diagonal, including (l, m) against (l, −m).
  const int pairs[][4] = {{3, 1, 3, -1}, {4, 2, 5, 2}, {2, 0, 3, 0}, {7, 3, 7, 2}, {16, 5, 2, -1}};
  for (const auto& q : pairs) {
    cplx s1 = 0.0;
    double s2r = 0.0, s2i = 0.0;
    for (const auto& a : draws) {
      const cplx v = a(q[0], q[1]) * std::conj(a(q[2], q[3]));
      s1 += v;
      s2r += v.real() * v.real();
      s2i += v.imag() * v.imag();
    }
    const cplx mean = s1 / double(n);
    const double ser = std::sqrt((s2r / n - mean.real() * mean.real()) / n);
    const double sei = std::sqrt(std::max(0.0, s2i / n - mean.imag() * mean.imag()) / n);
    CHECK(std::abs(mean.real()) < 5 * ser);
    CHECK(std::abs(mean.imag()) <= 5 * sei);
  }

  const PowerSpectrum emp = empirical_spectrum(draws);
  for (int l = 2; l <= L; ++l) {
    CHECK(emp.C[l] / p.C[l] > 0.9);
    CHECK(emp.C[l] / p.C[l] < 1.1);
  }
}

TEST_CASE("empirical spectrum") {
  SpinCoefficients one(1, 10);
  one(6, -3) = 1.0;
  const PowerSpectrum e = empirical_spectrum(one);
  CHECK(e.C[6] == doctest::Approx(1.0 / 13.0));
  CHECK(e.C[5] == 0.0);

  const PowerSpectrum p = power_law_spectrum(2, 24, 3.0, 1.0);
  const SpinCoefficients a = sample_field(p, {9, 0, 0});
  KeyedStream rng(4);
  const SpinCoefficients ra = rotate_coefficients(a, testing::random_rotation(rng));
  const PowerSpectrum e1 = empirical_spectrum(a), e2 = empirical_spectrum(ra);
  for (int l = 2; l <= 24; ++l) CHECK(std::abs(e1.C[l] - e2.C[l]) < 1e-9 * e1.C[l]);

  CHECK_THROWS_AS(empirical_spectrum(std::vector<SpinCoefficients>{}), Error);
}

TEST_CASE("isotropy diagnostic") {
  const PowerSpectrum p = power_law_spectrum(2, 12, 3.0, 1.0);
  KeyedStream rng(70);
  std::vector<Rotation> rotations{Rotation::identity()};
  for (int i = 0; i < 3; ++i) rotations.push_back(testing::random_rotation(rng));
  std::vector<SpherePoint> points;
  for (int i = 0; i < 4; ++i) points.push_back(testing::random_point(rng));

  const IsotropyReport ok = isotropy_diagnostic(p, 2000, rotations, 5, points);
  CHECK(ok.n_reps == 2000);
  CHECK(ok.n_rotations == rotations.size());
  CHECK(ok.max_discrepancy < 4.0);
  CHECK(ok.max_sign_asymmetry < 4.0);

  // Variance growing with |m| breaks rotation invariance.
  const Sampler broken = [](const PowerSpectrum& spec, const SampleKey& key) {
    SpinCoefficients a = sample_field(spec, key);
    for (int l = a.lmin(); l <= a.L(); ++l) {
      for (int m = -l; m <= l; ++m) a(l, m) *= 1.0 + std::abs(m);
    }
    return a;
  };
  const IsotropyReport bad = isotropy_diagnostic(p, 2000, rotations, 5, points, broken);
  CHECK(bad.max_discrepancy > 6.0);
}
