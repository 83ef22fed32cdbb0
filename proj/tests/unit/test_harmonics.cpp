#include <cmath>
#include <numbers>

#include "doctest.h"
#include "spinwave/errors.hpp"
#include "spinwave/harmonics.hpp"
#include "spinwave/quadrature.hpp"
#include "spinwave/spin_ops.hpp"
#include "spinwave/transform.hpp"
#include "spinwave/wigner.hpp"
#include "test_support.hpp"

using namespace spinwave;
using testing::kPi;

namespace {

double norm_factor(int l) { return std::sqrt((2.0 * l + 1.0) / (4.0 * kPi)); }

int splus(int s) { return s > 0 ? s : 0; }

// Chart-I value at (θ, φ).
cplx eval_at(const SpinCoefficients& a, double th, double ph) {
  return evaluate(a, SpherePoint::from_angles(th, ph));
}

}  // namespace

TEST_CASE("eval_sylm closed-form values") {
  CHECK(std::abs(eval_sylm(0, 0, 0, 0.3, 1.2) - cplx(1.0 / std::sqrt(4 * kPi), 0.0)) < 1e-15);
  // Exact rational-arithmetic evaluations of the finite sum.
  CHECK(std::abs(eval_sylm(1, 1, 0, kPi / 2, 0.0) - cplx(0.3454941494713354792652446, 0)) < 1e-14);
  CHECK(std::abs(eval_sylm(2, 3, -1, kPi / 3, 0.0) - cplx(-0.1916222768312404431367715, 0)) < 1e-14);
  CHECK(std::abs(eval_sylm(-2, 4, 3, 2 * kPi / 3, 0.0) - cplx(-0.1713921747991746510592578, 0)) < 1e-14);
  // Longitude dependence is e^{imφ}.
  const cplx a = eval_sylm(2, 3, -1, kPi / 3, 0.0), b = eval_sylm(2, 3, -1, kPi / 3, 0.7);
  CHECK(std::abs(b - a * std::polar(1.0, -0.7)) < 1e-14);
}

TEST_CASE("eval_sylm errors") {
  CHECK_THROWS_AS(eval_sylm(2, 1, 0, 1.0, 0.0), Error);
  CHECK_THROWS_AS(eval_sylm(0, 2, 3, 1.0, 0.0), Error);
  try {
    eval_sylm(1, 2, 0, 0.0, 0.0);
    FAIL("expected PoleEvaluation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::PoleEvaluation);
  }
  try {
    eval_sylm(3, 2, 0, 1.0, 0.0);
    FAIL("expected UndefinedHarmonic");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UndefinedHarmonic);
  }
}

TEST_CASE("pole limit of the m = -s harmonic") {
  for (int s : {-2, -1, 0, 1, 3}) {
    for (int l : {3, 7, 12}) {
      const double phi = 0.9;
      const cplx v = std::polar(1.0, s * phi) * eval_sylm(s, l, -s, 1e-7, phi);
      const double expect = (splus(s) % 2 ? -1.0 : 1.0) * norm_factor(l);
      CHECK(std::abs(v - expect) < 1e-9);
    }
  }
}

TEST_CASE("eigen data") {
  CHECK(eigen(2, 2).lambda == 0.0);
  CHECK(eigen(-2, 3).lambda == doctest::Approx(6.0));
  CHECK(eigen(2, 3).lambda == doctest::Approx(6.0));
  for (int l = 0; l < 10; ++l) CHECK(eigen(0, l).b == 1.0);
  CHECK(eigen(2, 3).b == doctest::Approx(std::sqrt(120.0 / 1.0)));
  CHECK(eigen(-2, 3).b == doctest::Approx(std::sqrt(1.0 / 120.0)));
  for (int s = -3; s <= 3; ++s) {
    for (int l = std::abs(s) + 1; l < 20; ++l) {
      CHECK(lambda_ls(s, l) > lambda_ls(s, l - 1));
      CHECK(lambda_ls(s, l) == lambda_ls(-s, l));
      if (s >= 0) CHECK(lambda_ls(s, l) == doctest::Approx(l * (l + 1.0) - s * (s + 1.0)));
    }
  }
  CHECK_THROWS_AS(eigen(3, 2), Error);
}

// ₋ₛY_lm = c (−∂̄)^s Y_lm and conj(∂f) = ∂̄ conj(f) give conj(ₛY_lm) = (−1)^s ₋ₛY_{l,−m}.
TEST_CASE("conjugation symmetry") {
  KeyedStream rng(21);
  for (int i = 0; i < 200; ++i) {
    const int l = static_cast<int>(rng.uniform() * 30);
    const int s = std::min(l, static_cast<int>(rng.uniform() * 7) - 3);
    if (std::abs(s) > l) continue;
    const int m = static_cast<int>(std::floor(rng.uniform() * (2 * l + 1))) - l;
    const double th = 0.01 + 3.1 * rng.uniform(), ph = 2 * kPi * rng.uniform();
    const double sign = (s % 2) ? -1.0 : 1.0;
    CHECK(std::abs(sign * eval_sylm(-s, l, -m, th, ph) - std::conj(eval_sylm(s, l, m, th, ph))) < 1e-10);
  }
}

TEST_CASE("direct sum and recursion agree for 16 <= l <= 48") {
  KeyedStream rng(5);
  double worst = 0.0;
  for (int i = 0; i < 60; ++i) {
    const int l = 16 + static_cast<int>(rng.uniform() * 33);
    const int s = static_cast<int>(rng.uniform() * 7) - 3;
    const int m = static_cast<int>(std::floor(rng.uniform() * (2 * l + 1))) - l;
    const double th = 0.05 + 3.0 * rng.uniform(), ph = kPi * rng.uniform();
    const cplx ref = eval_sylm_direct(s, l, m, th, ph);
    const double scale = std::max(std::abs(ref), norm_factor(l));
    worst = std::max(worst, std::abs(eval_sylm(s, l, m, th, ph) - ref) / scale);
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("quadrature Gram matrix is the identity for s in [-3, 3]") {
  const QuadratureGrid grid = build_quadrature(32);
  for (int s = -3; s <= 3; ++s) CHECK(gram_residual(s, 32, grid) < 1e-9);
}

TEST_CASE("chart covariance of spin harmonics") {
  KeyedStream rng(8);
  for (int i = 0; i < 40; ++i) {
    const Rotation R = testing::random_rotation(rng);
    const SpherePoint p = testing::random_point(rng);
    if (!in_chart(p, R, 1e-6) || !in_chart(p, Rotation::identity(), 1e-6)) continue;
    const int s = static_cast<int>(rng.uniform() * 5) - 2;
    const int l = 2 + static_cast<int>(rng.uniform() * 12);
    const int m = static_cast<int>(std::floor(rng.uniform() * (2 * l + 1))) - l;
    const double psi = reference_angle(p, Rotation::identity(), R);
    const cplx via_chart = eval_sylm_chart(s, l, m, p, R);
    const cplx via_phase = std::polar(1.0, s * psi) * eval_sylm(s, l, m, p.theta(), p.phi());
    CHECK(std::abs(via_chart - via_phase) < 1e-9);
  }
}

TEST_CASE("projection kernel diagonal") {
  CHECK(projection_kernel(0, 2, SpherePoint::from_angles(0.4, 0.2), SpherePoint::from_angles(0.4, 0.2),
                          Rotation::identity(), Rotation::identity())
            .real() == doctest::Approx(5.0 / (4 * kPi)).epsilon(1e-12));
  KeyedStream rng(13);
  for (int i = 0; i < 20; ++i) {
    const Rotation R = testing::random_rotation(rng);
    const SpherePoint x = testing::random_point(rng);
    for (int s : {0, 2, -2}) {
      for (int l : {2, 9, 32}) {
        const cplx k = projection_kernel(s, l, x, x, R, R);
        const double expect = (2 * l + 1) / (4 * kPi);
        CHECK(std::abs(k - expect) / expect < 1e-9);
      }
    }
  }
  CHECK_THROWS_AS(projection_kernel(0, 2, SpherePoint::north(), SpherePoint::north(), Rotation::identity(),
                                    Rotation::identity()),
                  Error);
}

TEST_CASE("zonal harmonic and kernel at the north pole") {
  const SpherePoint N = SpherePoint::north();
  const Rotation R = Rotation::about_x(kPi / 2);  // N lies on the equator of this chart
  const Vec3 ey{0.0, 1.0, 0.0};
  KeyedStream rng(17);
  for (int i = 0; i < 20; ++i) {
    const Rotation Rp = testing::random_rotation(rng);
    const SpherePoint x = testing::random_point(rng);
    if (!in_chart(x, Rp, 1e-6) || !in_chart(x, Rotation::identity(), 1e-6)) continue;
    for (int s : {-2, 0, 1, 3}) {
      for (int l : {3, 6}) {
        const double psi1 = reference_angle(x, Rp, Rotation::identity());
        const double psi2 = tangent_angle(N, chart_direction(N, R), ey);
        const cplx z = evaluate(zonal_coefficients(s, l), x);
        const cplx k = std::polar(1.0, s * (psi1 - psi2)) * projection_kernel(s, l, x, N, Rp, R);
        CHECK(std::abs(z - k) < 1e-10);
      }
    }
  }
  // s = 0: the standard zonal harmonic (2l+1)/4π P_l(cos θ).
  for (int l : {0, 1, 4, 10}) {
    for (double th : {0.3, 1.4, 2.9}) {
      const cplx z = evaluate(zonal_coefficients(0, l), SpherePoint::from_angles(th, 0.5));
      CHECK(std::abs(z - (2 * l + 1) / (4 * kPi) * std::legendre(l, std::cos(th))) < 1e-12);
    }
  }
  CHECK_THROWS_AS(zonal_coefficients(3, 2), Error);
}

TEST_CASE("pole functional") {
  for (int s : {-2, 0, 2}) {
    for (int l : {2, 5, 11}) {
      CHECK(std::abs(pole_functional(zonal_coefficients(s, l)) - (2 * l + 1) / (4 * kPi)) < 1e-13);
    }
  }
  SpinCoefficients a = testing::random_coefficients(2, 10, 4);
  for (int l = 2; l <= 10; ++l) a(l, -2) = 0.0;
  CHECK(std::abs(pole_functional(a)) < 1e-15);

  // <f, sZ_l> = L f for f in a single shell.
  const int s = -1, l = 7;
  SpinCoefficients f(s, 9);
  const SpinCoefficients r = testing::random_coefficients(s, 9, 6);
  for (int m = -l; m <= l; ++m) f(l, m) = r(l, m);
  CHECK(std::abs(inner(f, zonal_coefficients(s, l, 9)) - pole_functional(f)) < 1e-13);

  // Numerical limit of e^{isφ} f_I along θ → 0, cubic extrapolation from four rings.
  for (int sp : {-2, 1, 3}) {
    const SpinCoefficients g = testing::random_coefficients(sp, 16, 30 + sp);
    double scale = 0.0;
    for (int ll = std::abs(sp); ll <= 16; ++ll) scale += std::abs(g(ll, -sp)) * norm_factor(ll);
    for (double phi : {0.0, 1.3, -2.2}) {
      const double h = 1e-3;
      cplx v[5];
      for (int k = 1; k <= 4; ++k) v[k] = std::polar(1.0, sp * phi) * eval_at(g, k * h, phi);
      const cplx limit = 4.0 * v[1] - 6.0 * v[2] + 4.0 * v[3] - v[4];
      CHECK(std::abs(limit - pole_functional(g)) / scale < 1e-6);
    }
  }
}

TEST_CASE("E/M decomposition") {
  const SpinCoefficients a = testing::random_coefficients(2, 12, 9);
  const auto [e, m] = em_decompose(a);
  CHECK(is_involutive(e));
  CHECK(is_involutive(m));
  CHECK(testing::max_abs_diff(e + cplx(0, 1) * m, a) < 1e-14);
  const auto [e2, m2] = em_decompose(e);
  CHECK(m2.norm2() < 1e-28);
  const auto [e3, m3] = em_decompose(cplx(0, 1) * e);
  CHECK(e3.norm2() < 1e-28);
  CHECK(!is_involutive(a));
}

TEST_CASE("spin raising and lowering multipliers") {
  SpinCoefficients a(0, 4);
  a(1, 0) = 1.0;
  CHECK(std::abs(spin_raise(a)(1, 0) - std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(spin_lower(a)(1, 0) + std::sqrt(2.0)) < 1e-15);
  CHECK(spin_raise(a).spin() == 1);
  CHECK(spin_lower(a).spin() == -1);

  SpinCoefficients b(2, 6);
  b(2, 1) = 1.0;
  b(3, 0) = 2.0;
  CHECK(spin_raise(b).L() == 6);
  CHECK(spin_raise(b).norm2() == doctest::Approx(4.0 * (3 - 2) * (3 + 2 + 1)));  // l = s annihilated
  SpinCoefficients c(-2, 6);
  c(2, 1) = 1.0;
  CHECK(spin_lower(c).norm2() == 0.0);

  for (int s = -3; s <= 3; ++s) {
    const SpinCoefficients f = testing::random_coefficients(s, 14, 40 + s);
    const SpinCoefficients lap = laplacian_s(f);
    const SpinCoefficients comp = s >= 0 ? spin_lower(spin_raise(f)) : spin_raise(spin_lower(f));
    double worst = 0.0;
    for (int l = std::abs(s); l <= 14; ++l) {
      for (int m = -l; m <= l; ++m) {
        worst = std::max(worst, std::abs(lap(l, m) + comp.get(l, m)) / (1.0 + lambda_ls(s, l)));
        CHECK(std::abs(lap(l, m) - lambda_ls(s, l) * f(l, m)) < 1e-12 * (1 + lambda_ls(s, l)));
      }
    }
    CHECK(worst < 1e-12);
    CHECK(laplacian_s(f).shell_norm2(std::abs(s)) == 0.0);
  }
  const SpinCoefficients f0 = testing::random_coefficients(0, 8, 3);
  CHECK(std::abs(laplacian_s(f0)(5, 2) - 30.0 * f0(5, 2)) < 1e-12);
}

TEST_CASE("adjoint identity by quadrature") {
  const int L = 16;
  const QuadratureGrid grid = build_quadrature(L + 1);
  for (int s : {-2, 0, 1}) {
    const SpinCoefficients f = testing::random_coefficients(s, L, 70 + s);
    const SpinCoefficients g = testing::random_coefficients(s + 1, L, 80 + s);
    const GridField df = synthesis(spin_raise(f), grid), gg = synthesis(g, grid);
    const GridField ff = synthesis(f, grid), dg = synthesis(spin_lower(g), grid);
    cplx lhs = 0.0, rhs = 0.0;
    for (int i = 0; i < grid.n_theta(); ++i) {
      for (int k = 0; k < grid.n_phi; ++k) {
        lhs += grid.node_weight(i) * df.at(i, k) * std::conj(gg.at(i, k));
        rhs += grid.node_weight(i) * ff.at(i, k) * std::conj(dg.at(i, k));
      }
    }
    CHECK(std::abs(lhs + rhs) / std::abs(lhs) < 1e-9);
  }
}

TEST_CASE("spectral ladder matches finite differences of the chart expressions") {
  const int L = 16;
  const double h = 1e-4;
  KeyedStream rng(91);
  for (int s : {-2, 0, 1, 2}) {
    const SpinCoefficients f = testing::random_coefficients(s, L, 100 + s);
    const SpinCoefficients up = spin_raise(f), down = spin_lower(f);
    for (int i = 0; i < 10; ++i) {
      const double th = 0.3 + 2.5 * rng.uniform(), ph = 2 * kPi * rng.uniform();
      auto w = [&](double t, double p, int power) { return std::pow(std::sin(t), power) * eval_at(f, t, p); };
      // ∂f = −sin^s θ (∂θ + i/sinθ ∂φ)(sin^{−s} θ f)
      const cplx dth_u = (w(th + h, ph, -s) - w(th - h, ph, -s)) / (2 * h);
      const cplx dph_u = (w(th, ph + h, -s) - w(th, ph - h, -s)) / (2 * h);
      const cplx raise_fd = -std::pow(std::sin(th), s) * (dth_u + cplx(0, 1) / std::sin(th) * dph_u);
      // ∂̄f = −sin^{−s} θ (∂θ − i/sinθ ∂φ)(sin^s θ f)
      const cplx dth_d = (w(th + h, ph, s) - w(th - h, ph, s)) / (2 * h);
      const cplx dph_d = (w(th, ph + h, s) - w(th, ph - h, s)) / (2 * h);
      const cplx lower_fd = -std::pow(std::sin(th), -s) * (dth_d - cplx(0, 1) / std::sin(th) * dph_d);
      const cplx raise_sp = eval_at(up, th, ph), lower_sp = eval_at(down, th, ph);
      CHECK(std::abs(raise_fd - raise_sp) / std::sqrt(up.norm2()) < 1e-4);
      CHECK(std::abs(lower_fd - lower_sp) / std::sqrt(down.norm2()) < 1e-4);
    }
  }
}

TEST_CASE("scalar Laplacian matches finite-difference Laplace-Beltrami") {
  const SpinCoefficients f = testing::random_coefficients(0, 12, 55);
  const SpinCoefficients lap = laplacian_s(f);
  const double h = 1e-3;
  KeyedStream rng(56);
  for (int i = 0; i < 10; ++i) {
    const double th = 0.3 + 2.5 * rng.uniform(), ph = 2 * kPi * rng.uniform();
    const cplx c = eval_at(f, th, ph);
    const cplx ftt = (eval_at(f, th + h, ph) - 2.0 * c + eval_at(f, th - h, ph)) / (h * h);
    const cplx ft = (eval_at(f, th + h, ph) - eval_at(f, th - h, ph)) / (2 * h);
    const cplx fpp = (eval_at(f, th, ph + h) - 2.0 * c + eval_at(f, th, ph - h)) / (h * h);
    const double st = std::sin(th);
    const cplx lb = ftt + std::cos(th) / st * ft + fpp / (st * st);
    CHECK(std::abs(-lb - eval_at(lap, th, ph)) / std::sqrt(lap.norm2()) < 1e-4);
  }
}

TEST_CASE("Wigner D: identity, unitarity, composition order") {
  const int L = 16;
  const WignerD I(Rotation::identity(), L);
  for (int l = 0; l <= L; ++l) {
    for (int a = -l; a <= l; ++a) {
      for (int b = -l; b <= l; ++b) CHECK(std::abs(I(l, a, b) - (a == b ? 1.0 : 0.0)) < 1e-13);
    }
  }
  KeyedStream rng(61);
  for (int trial = 0; trial < 5; ++trial) {
    const Rotation R1 = testing::random_rotation(rng), R2 = testing::random_rotation(rng);
    const WignerD D1(R1, L), D2(R2, L), D12(R1 * R2, L);
    double unit = 0.0, comp = 0.0;
    for (int l = 0; l <= L; ++l) {
      for (int a = -l; a <= l; ++a) {
        for (int b = -l; b <= l; ++b) {
          cplx uu = 0.0, pr = 0.0;
          for (int c = -l; c <= l; ++c) {
            uu += D1(l, a, c) * std::conj(D1(l, b, c));
            pr += D2(l, a, c) * D1(l, c, b);
          }
          unit = std::max(unit, std::abs(uu - (a == b ? 1.0 : 0.0)));
          comp = std::max(comp, std::abs(D12(l, a, b) - pr));
        }
      }
    }
    CHECK(unit < 1e-9);
    // With (f^R)_I(q) = f_R(Rq) the representation composes in reverse order.
    CHECK(comp < 1e-9);
  }
}

TEST_CASE("rotating coefficients") {
  const SpinCoefficients a = testing::random_coefficients(2, 12, 71);
  CHECK(testing::max_abs_diff(rotate_coefficients(a, Rotation::identity()), a) < 1e-13);

  KeyedStream rng(72);
  const Rotation R = testing::random_rotation(rng);
  CHECK(std::abs(rotate_coefficients(a, R).norm2() - a.norm2()) / a.norm2() < 1e-10);

  // (f^R)_I(q) = f_R(Rq), and about z that is a longitude shift: a_lm ↦ e^{imγ} a_lm.
  const double gamma = 0.83;
  const SpinCoefficients rz = rotate_coefficients(a, Rotation::about_z(gamma));
  for (int l = 2; l <= 12; ++l) {
    for (int m = -l; m <= l; ++m) {
      const cplx ratio = rz(l, m) / a(l, m);
      CHECK(std::abs(ratio - std::polar(1.0, m * gamma)) < 1e-12);
    }
  }

  // Grid-level oracle through the chart machinery.
  const QuadratureGrid grid = build_quadrature(12);
  for (int s : {-1, 0, 2}) {
    const SpinCoefficients b = testing::random_coefficients(s, 12, 73 + s);
    for (const Rotation& Q : {R, Rotation::about_z(gamma), Rotation::from_zyz(0.3, 1.1, -0.7)}) {
      const SpinCoefficients ref = analysis(rotate_samples(b, Q, grid), 12);
      CHECK(testing::max_abs_diff(rotate_coefficients(b, Q), ref) < 1e-9);
    }
  }
}

TEST_CASE("analysis and synthesis") {
  const QuadratureGrid grid = build_quadrature(16);
  SpinCoefficients one(1, 16);
  one(5, -2) = 1.0;
  const SpinCoefficients back = analysis(synthesis(one, grid), 16);
  CHECK(std::abs(back(5, -2) - 1.0) < 1e-10);
  CHECK((back - one).norm2() < 1e-20);

  CHECK(analysis(zero_field(2, grid), 16).norm2() == 0.0);

  SpinCoefficients first(-2, 16);
  first(2, 0) = 1.0;
  const GridField gf = synthesis(first, grid);
  for (int i = 0; i < grid.n_theta(); i += 3) {
    CHECK(std::abs(gf.at(i, 1) - eval_sylm(-2, 2, 0, grid.theta[i], grid.phi(1))) < 1e-13);
  }

  for (int s : {-3, 0, 2}) {
    const SpinCoefficients r = testing::random_coefficients(s, 16, 200 + s);
    const GridField g = synthesis(r, grid);
    CHECK(testing::max_abs_diff(analysis(g, 16), r) < 1e-9);
    CHECK(std::abs(g.norm2() - r.norm2()) / r.norm2() < 1e-10);
  }

  const int l = 9;
  const GridField z = synthesis(zonal_coefficients(2, l, 16), grid);
  CHECK(z.norm2() == doctest::Approx((2 * l + 1) / (4 * kPi)).epsilon(1e-10));

  const SpinCoefficients u = testing::random_coefficients(1, 16, 1), v = testing::random_coefficients(1, 16, 2);
  const cplx al(0.3, -1.2), be(2.0, 0.5);
  const GridField lin = synthesis(al * u + be * v, grid);
  const GridField gu = synthesis(u, grid), gv = synthesis(v, grid);
  double worst = 0.0;
  for (std::size_t i = 0; i < lin.samples.size(); ++i) {
    worst = std::max(worst, std::abs(lin.samples[i] - al * gu.samples[i] - be * gv.samples[i]));
  }
  CHECK(worst < 1e-12);

  CHECK_THROWS_AS(synthesis(testing::random_coefficients(0, 20, 1), grid), Error);
  CHECK_THROWS_AS(analysis(gu, 17), Error);

  AnalysisDiagnostics diag;
  analysis(gu, 16, &diag);
  CHECK(diag.warning.has_value());
  CHECK(*diag.warning == ErrorKind::BandLimitExceeded);
  SpinCoefficients low = u.resized(8).resized(16);
  analysis(synthesis(low, grid), 16, &diag);
  CHECK(!diag.warning.has_value());
}
