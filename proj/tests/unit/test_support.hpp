#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

#include "spinwave/coefficients.hpp"
#include "spinwave/geometry.hpp"
#include "spinwave/rng.hpp"

namespace testing {

using spinwave::cplx;

inline constexpr double kPi = std::numbers::pi;

inline spinwave::SpinCoefficients random_coefficients(int s, int L, std::uint64_t key) {
  spinwave::SpinCoefficients a(s, L);
  spinwave::KeyedStream rng(spinwave::key_hash({key, 0x5eed}));
  for (auto& v : a.data()) v = {rng.normal(), rng.normal()};
  return a;
}

inline spinwave::Rotation random_rotation(spinwave::KeyedStream& rng) {
  return spinwave::Rotation::from_uniforms(rng.uniform(), rng.uniform(), rng.uniform());
}

inline spinwave::SpherePoint random_point(spinwave::KeyedStream& rng) {
  const double z = 2.0 * rng.uniform() - 1.0;
  return spinwave::SpherePoint::from_angles(std::acos(z), kPi * (2.0 * rng.uniform() - 1.0));
}

inline double max_abs_diff(const spinwave::SpinCoefficients& a, const spinwave::SpinCoefficients& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

}  // namespace testing
