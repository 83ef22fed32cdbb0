#include <atomic>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "spinwave/frame.hpp"
#include "spinwave/parallel.hpp"
#include "spinwave/random_fields.hpp"
#include "spinwave/rng.hpp"
#include "spinwave/simd/kernels.hpp"
#include "spinwave/stats.hpp"

using namespace spinwave;

namespace {

struct Data {
  std::vector<double> a, b;
  std::vector<std::complex<double>> z;
};

Data make(std::size_t n, std::uint64_t key) {
  KeyedStream rng(key);
  Data d;
  for (std::size_t i = 0; i < n; ++i) {
    d.a.push_back(rng.normal());
    d.b.push_back(rng.normal());
    d.z.emplace_back(rng.normal(), rng.normal());
  }
  return d;
}

double rel(double x, double y, double scale) { return std::abs(x - y) / std::max(1.0, scale); }

}  // namespace

TEST_CASE("AVX2 kernels match the scalar reference") {
  const simd::Kernels& ref = simd::scalar_kernels();
  const simd::Kernels* fast = simd::avx2_kernels();
  CHECK(ref.name == "scalar");
  if (!fast) {
    MESSAGE("AVX2 kernels unavailable on this machine; equivalence not exercised");
    return;
  }
  for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 15u, 16u, 17u, 31u, 64u, 67u, 1000u, 4099u}) {
    const Data d = make(n, n + 1);
    double absdot = 0.0;
    for (std::size_t i = 0; i < n; ++i) absdot += std::abs(d.a[i] * d.b[i]);
    CHECK(rel(ref.dot(d.a.data(), d.b.data(), n), fast->dot(d.a.data(), d.b.data(), n), absdot) < 1e-14);

    std::vector<double> y1 = d.b, y2 = d.b;
    ref.axpy(0.37, d.a.data(), y1.data(), n);
    fast->axpy(0.37, d.a.data(), y2.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(y1[i] - y2[i]) < 1e-15 * (1 + std::abs(y1[i])));

    double absz = 0.0;
    for (std::size_t i = 0; i < n; ++i) absz += std::abs(d.a[i]) * std::abs(d.z[i]);
    const auto c1 = ref.cdot_real(d.a.data(), d.z.data(), n), c2 = fast->cdot_real(d.a.data(), d.z.data(), n);
    CHECK(std::abs(c1 - c2) / std::max(1.0, absz) < 1e-14);

    std::vector<std::complex<double>> z1 = d.z, z2 = d.z;
    ref.caxpy_real({0.5, -1.25}, d.b.data(), z1.data(), n);
    fast->caxpy_real({0.5, -1.25}, d.b.data(), z2.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(z1[i] - z2[i]) < 1e-14 * (1 + std::abs(z1[i])));

    std::vector<double> w(n);
    double wn = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = std::abs(d.a[i]);
      wn += w[i] * std::norm(d.z[i]);
    }
    CHECK(rel(ref.weighted_norm2(w.data(), d.z.data(), n), fast->weighted_norm2(w.data(), d.z.data(), n), wn) <
          1e-14);
  }
  CHECK((simd::active().name == "scalar" || simd::active().name == fast->name));
}

TEST_CASE("scalar kernels against plain loops") {
  const simd::Kernels& k = simd::scalar_kernels();
  const Data d = make(13, 99);
  double dot = 0.0;
  std::complex<double> cd = 0.0;
  for (std::size_t i = 0; i < 13; ++i) {
    dot += d.a[i] * d.b[i];
    cd += d.a[i] * d.z[i];
  }
  CHECK(k.dot(d.a.data(), d.b.data(), 13) == doctest::Approx(dot).epsilon(1e-14));
  CHECK(std::abs(k.cdot_real(d.a.data(), d.z.data(), 13) - cd) < 1e-13);
}

TEST_CASE("parallel_for visits each index once") {
  set_num_threads(4);
  std::vector<std::atomic<int>> hits(1000);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i].fetch_add(1); });
  for (const auto& h : hits) CHECK(h.load() == 1);
  set_num_threads(1);
  CHECK(num_threads() == 1);
}

TEST_CASE("tree_sum and parallel_reduce") {
  CHECK(tree_sum({}) == 0.0);
  CHECK(tree_sum({1.0, 2.0, 3.0}) == 6.0);
  // Pairwise order keeps small terms that a left fold absorbs.
  const std::vector<double> v{1.0, 1e-16, 1e-16, 1e-16};
  CHECK(tree_sum(v) == (1.0 + 1e-16) + (1e-16 + 1e-16));
  CHECK(tree_sum(v) > 1.0);
  const auto sum = [](std::size_t threads) {
    set_num_threads(static_cast<int>(threads));
    return parallel_reduce(
        777, 0.0, [](std::size_t i) { return 1.0 / (1.0 + i); }, [](double a, double b) { return a + b; });
  };
  const double one = sum(1);
  CHECK(sum(3) == one);
  CHECK(sum(8) == one);
  set_num_threads(1);
}

TEST_CASE("results do not depend on the thread count") {
  const FilterSpec f(std::cbrt(2.0));
  const PowerSpectrum p = power_law_spectrum(2, 80, 3.0, 1.0);
  const NeedletFrame frame = build_frame(f.a(), 0.4, 2, 24);
  const SpinCoefficients a = sample_field(power_law_spectrum(2, 24, 3.0, 1.0), {3, 3, 0});

  set_num_threads(1);
  const auto clt1 = clt_experiment(p, f, {-12, -13}, 300, 8);
  const auto w1 = wavelet_coefficients(a, frame);
  const auto S1 = apply_S(a, frame);
  set_num_threads(4);
  const auto clt4 = clt_experiment(p, f, {-12, -13}, 300, 8);
  const auto w4 = wavelet_coefficients(a, frame);
  const auto S4 = apply_S(a, frame);
  set_num_threads(1);

  for (std::size_t i = 0; i < clt1.size(); ++i) {
    CHECK(clt1[i].standardized == clt4[i].standardized);
    CHECK(clt1[i].ks == clt4[i].ks);
  }
  for (int j : frame.j_range()) CHECK(w1.at(j) == w4.at(j));
  CHECK(S1.data() == S4.data());
}

TEST_CASE("keyed random numbers") {
  CHECK(key_hash({1, 2, 3}) == key_hash({1, 2, 3}));
  CHECK(key_hash({1, 2, 3}) != key_hash({1, 3, 2}));
  CHECK(key_hash({1, 2}) != key_hash({1, 2, 0}));
  const auto p1 = keyed_normal_pair({4, 5}), p2 = keyed_normal_pair({4, 5});
  CHECK(p1 == p2);
  CHECK(uniform_from_bits(0) > 0.0);
  CHECK(uniform_from_bits(~0ull) < 1.0);

  KeyedStream s(12);
  const int n = 200000;
  double m1 = 0.0, m2 = 0.0, u1 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = s.normal();
    m1 += z;
    m2 += z * z;
    u1 += s.uniform();
  }
  CHECK(std::abs(m1 / n) < 5.0 / std::sqrt(n));
  CHECK(std::abs(m2 / n - 1.0) < 5.0 * std::sqrt(2.0 / n));
  CHECK(std::abs(u1 / n - 0.5) < 5.0 * std::sqrt(1.0 / 12.0 / n));
}
