#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace spinwave {

/// Worker count used by the library; defaults to 1.
void set_num_threads(int n);
int num_threads();

/// Runs body(i) for i in [0, n). Chunks are claimed dynamically; body must only
/// write to index-owned storage.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

/// Pairwise sum in a fixed tree order.
double tree_sum(const std::vector<double>& values);

/// Deterministic reduction: partial(i) evaluated in parallel, combined by a
/// fixed-shape pairwise tree. The result does not depend on the thread count.
template <class T, class Partial, class Combine>
T parallel_reduce(std::size_t n, T zero, Partial partial, Combine combine) {
  if (n == 0) return zero;
  std::vector<T> parts(n, zero);
  parallel_for(n, [&](std::size_t i) { parts[i] = partial(i); });
  for (std::size_t width = 1; width < n; width *= 2) {
    for (std::size_t i = 0; i + width < n; i += 2 * width) parts[i] = combine(parts[i], parts[i + width]);
  }
  return parts[0];
}

}  // namespace spinwave
