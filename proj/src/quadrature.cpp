#include "spinwave/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace spinwave {

namespace {

// P_n(x) and P'_n(x) by the three-term recurrence.
void legendre_pd(int n, double x, double& p, double& dp) {
  double p0 = 1.0, p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  p = p1;
  dp = n * (x * p1 - p0) / (x * x - 1.0);
}

}  // namespace

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  if (n == 1) {
    weights[0] = 2.0;
    return;
  }
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double p, dp;
    for (int it = 0; it < 100; ++it) {
      legendre_pd(n, x, p, dp);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    legendre_pd(n, x, p, dp);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) nodes[n / 2] = 0.0;
}

double QuadratureGrid::phi(int k) const {
  return -std::numbers::pi + 2.0 * std::numbers::pi * k / n_phi;
}

double QuadratureGrid::node_weight(int i) const {
  return weights[i] * 2.0 * std::numbers::pi / n_phi;
}

double QuadratureGrid::total_weight() const {
  double s = 0.0;
  for (int i = 0; i < n_theta(); ++i) s += node_weight(i) * n_phi;
  return s;
}

QuadratureGrid build_quadrature(int L) {
  QuadratureGrid g;
  g.L = std::max(L, 1);
  gauss_legendre(g.L + 1, g.cos_theta, g.weights);
  g.theta.resize(g.cos_theta.size());
  for (std::size_t i = 0; i < g.theta.size(); ++i) g.theta[i] = std::acos(g.cos_theta[i]);
  g.n_phi = 2 * g.L + 1;
  return g;
}

}  // namespace spinwave
