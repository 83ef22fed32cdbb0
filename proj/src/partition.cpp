#include "spinwave/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "spinwave/errors.hpp"

namespace spinwave {

namespace {

constexpr double kPi = std::numbers::pi;

double g_value(double t1, double t2, double c) {
  return std::cos(t1) * std::cos(t2) + c * std::sin(t1) * std::sin(t2);
}

// Minimum over t2 in [lo, hi] of cos t1 cos t2 + c sin t1 sin t2.
double edge_min(double t1, double lo, double hi, double c) {
  double best = std::min(g_value(t1, lo, c), g_value(t1, hi, c));
  // A cos t + B sin t is minimal at atan2(B, A) + π.
  double t = std::atan2(c * std::sin(t1), std::cos(t1)) + kPi;
  for (double cand : {t - 2.0 * kPi, t, t + 2.0 * kPi}) {
    if (cand > lo && cand < hi) best = std::min(best, g_value(t1, cand, c));
  }
  return best;
}

}  // namespace

double Band::dphi() const { return 2.0 * kPi / n; }

double Band::phi_center(int k) const { return -kPi + (k + 0.5) * dphi(); }

Rotation polar_chart() { return Rotation::about_x(kPi / 2.0); }

double cell_diameter(double theta1, double theta2, double dphi) {
  // Two points of the cell at colatitudes t, t' and longitude gap Δ have
  // cos d = cos t cos t' + cos Δ sin t sin t'; the worst Δ is min(dphi, π).
  const double c = std::cos(std::min(dphi, kPi));
  double gmin = std::min(edge_min(theta1, theta1, theta2, c), edge_min(theta2, theta1, theta2, c));
  // Interior critical points of g lie on the diagonal t = t' = π/2 and are not minima
  // below the edge values, so the boundary suffices.
  gmin = std::clamp(gmin, -1.0, 1.0);
  return std::acos(gmin);
}

Partition::Partition(int j, double a, double b) : j_(j), a_(a), b_(b), d_(b * std::pow(a, j)) {
  if (!(a > 1.0)) throw Error(ErrorKind::InvalidArgument, "dilation base a must exceed 1");
  if (!(b > 0.0)) throw Error(ErrorKind::InvalidArgument, "discretization b must be positive");
  build();
}

Partition::Partition(double d) : d_(d) { build(); }

void Partition::build() {
  if (!(d_ <= kPi)) throw Error(ErrorKind::ScaleTooCoarse, "cell diameter bound exceeds π");
  if (!(d_ > 0.0)) throw Error(ErrorKind::InvalidArgument, "cell diameter bound must be positive");
  const int nb = static_cast<int>(std::ceil(kPi / (d_ / 2.0) - 1e-12));
  bands_.resize(nb);
  std::size_t offset = 0;
  for (int i = 0; i < nb; ++i) {
    Band& band = bands_[i];
    band.theta1 = kPi * i / nb;
    band.theta2 = kPi * (i + 1) / nb;
    band.theta_center = 0.5 * (band.theta1 + band.theta2);
    band.polar = (i == 0 || i == nb - 1);
    // Diameter is nonincreasing in n: double, then bisect for the smallest admissible n.
    auto ok = [&](long n) { return cell_diameter(band.theta1, band.theta2, 2.0 * kPi / n) <= d_; };
    long hi = 1;
    while (!ok(hi)) hi *= 2;
    long lo = hi / 2;  // lo fails (or is 0)
    while (hi - lo > 1) {
      const long mid = (lo + hi) / 2;
      if (ok(mid)) hi = mid; else lo = mid;
    }
    band.n = static_cast<int>(hi);
    band.cell_area = band.dphi() * (std::cos(band.theta1) - std::cos(band.theta2));
    band.cell_diam = cell_diameter(band.theta1, band.theta2, band.dphi());
    band.first_cell = offset;
    offset += band.n;
  }
  n_cells_ = offset;
}

double Partition::total_area() const {
  double s = 0.0;
  for (const auto& b : bands_) s += b.cell_area * b.n;
  return s;
}

double Partition::min_area() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& b : bands_) m = std::min(m, b.cell_area);
  return m;
}

Cell Partition::cell(std::size_t index) const {
  if (index >= n_cells_) throw Error(ErrorKind::InvalidArgument, "cell index out of range");
  auto it = std::upper_bound(bands_.begin(), bands_.end(), index,
                             [](std::size_t i, const Band& b) { return i < b.first_cell; });
  const Band& band = *(it - 1);
  const int k = static_cast<int>(index - band.first_cell);
  Cell c;
  c.center = SpherePoint::from_angles(band.theta_center, band.phi_center(k));
  c.area = band.cell_area;
  c.diam = band.cell_diam;
  c.chart = band.polar ? polar_chart() : Rotation::identity();
  return c;
}

std::vector<Cell> Partition::cells() const {
  std::vector<Cell> out;
  out.reserve(n_cells_);
  for (std::size_t i = 0; i < n_cells_; ++i) out.push_back(cell(i));
  return out;
}

nlohmann::json Partition::to_json() const {
  nlohmann::json cells_json = nlohmann::json::array();
  for (const auto& band : bands_) {
    for (int k = 0; k < band.n; ++k) {
      nlohmann::json c;
      c["center"] = {band.theta_center, band.phi_center(k)};
      c["area"] = band.cell_area;
      c["diam"] = band.cell_diam;
      if (band.polar) {
        const auto& m = polar_chart().matrix();
        c["chart"] = {{m[0], m[1], m[2]}, {m[3], m[4], m[5]}, {m[6], m[7], m[8]}};
      } else {
        c["chart"] = "I";
      }
      cells_json.push_back(std::move(c));
    }
  }
  return {{"j", j_}, {"a", a_}, {"b", b_}, {"cells", std::move(cells_json)}};
}

const PartitionConstants& partition_constants() {
  static const PartitionConstants constants = [] {
    PartitionConstants pc;
    pc.delta0 = kPi / 2.0;
    // Log-spaced sweep of the diameter bound below delta0; 0.9 absorbs the
    // sweep's finite resolution.
    const int n = 800;
    const double lo = std::log(5e-4), hi = std::log(pc.delta0);
    double ratio = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      const double d = std::exp(lo + (hi - lo) * i / (n - 1)) * (1.0 - 1e-9);
      ratio = std::min(ratio, Partition(d).min_area() / (d * d));
    }
    pc.c0 = 0.9 * ratio;
    return pc;
  }();
  return constants;
}

}  // namespace spinwave
