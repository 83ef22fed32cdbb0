#pragma once

#include <vector>

namespace spinwave {

/// Gauss–Legendre nodes and weights on [-1, 1], ascending nodes.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Product grid: Gauss–Legendre in cos θ times equispaced longitudes.
/// Exact for products of two band-L spin harmonics of equal spin.
struct QuadratureGrid {
  int L = 1;
  std::vector<double> theta;    // colatitudes, descending cos θ order is not assumed
  std::vector<double> cos_theta;
  std::vector<double> weights;  // Gauss weights in the cos θ variable
  int n_phi = 3;

  int n_theta() const { return static_cast<int>(theta.size()); }
  std::size_t size() const { return theta.size() * static_cast<std::size_t>(n_phi); }
  double phi(int k) const;
  /// Area element of node (i, k).
  double node_weight(int i) const;
  double total_weight() const;
};

/// L < 1 is promoted to 1.
QuadratureGrid build_quadrature(int L);

}  // namespace spinwave
