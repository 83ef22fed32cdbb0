#pragma once

#include <cstdint>
#include <initializer_list>
#include <utility>

namespace spinwave {

std::uint64_t mix64(std::uint64_t x);

/// Hash of a key tuple. Keyed draws make results independent of evaluation order.
std::uint64_t key_hash(std::initializer_list<std::uint64_t> key);

/// Uniform in the open interval (0, 1).
double uniform_from_bits(std::uint64_t bits);

/// Two independent standard normals for one key (Box–Muller).
std::pair<double, double> keyed_normal_pair(std::initializer_list<std::uint64_t> key);

/// Sequential generator seeded from a key; for draws without natural indices.
class KeyedStream {
 public:
  explicit KeyedStream(std::uint64_t key) : key_(key) {}
  std::uint64_t next_u64() { return mix64(key_ ^ mix64(++counter_)); }
  double uniform() { return uniform_from_bits(next_u64()); }
  double normal();

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace spinwave
