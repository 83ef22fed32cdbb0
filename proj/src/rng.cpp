#include "spinwave/rng.hpp"

#include <cmath>
#include <numbers>

namespace spinwave {

std::uint64_t mix64(std::uint64_t x) {
  // splitmix64 finalizer
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t key_hash(std::initializer_list<std::uint64_t> key) {
  std::uint64_t h = 0x243f6a8885a308d3ULL;
  for (std::uint64_t k : key) h = mix64(h ^ mix64(k));
  return h;
}

double uniform_from_bits(std::uint64_t bits) {
  return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

namespace {

std::pair<double, double> box_muller(double u1, double u2) {
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(t), r * std::sin(t)};
}

}  // namespace

std::pair<double, double> keyed_normal_pair(std::initializer_list<std::uint64_t> key) {
  const std::uint64_t h = key_hash(key);
  return box_muller(uniform_from_bits(mix64(h ^ 1)), uniform_from_bits(mix64(h ^ 2)));
}

double KeyedStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform(), u2 = uniform();
  auto [a, b] = box_muller(u1, u2);
  spare_ = b;
  has_spare_ = true;
  return a;
}

}  // namespace spinwave
