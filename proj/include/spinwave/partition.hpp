#pragma once

#include <vector>

#include "json.hpp"

#include "spinwave/geometry.hpp"

namespace spinwave {

/// One colatitude band [theta1, theta2] split into n equal-longitude cells.
struct Band {
  double theta1 = 0.0, theta2 = 0.0;
  double theta_center = 0.0;  // band-midpoint colatitude
  int n = 1;
  double cell_area = 0.0;  // exact spherical area of each cell
  double cell_diam = 0.0;  // exact geodesic diameter of each cell
  bool polar = false;      // closure contains a pole
  std::size_t first_cell = 0;

  double dphi() const;
  /// Longitude of the center of cell k in [0, n).
  double phi_center(int k) const;
};

struct Cell {
  SpherePoint center;
  double area = 0.0;
  double diam = 0.0;
  Rotation chart;
};

/// Chart used for cells touching a pole.
Rotation polar_chart();

/// Construction constants of condition (*): area ≥ c0·d² whenever d < delta0.
struct PartitionConstants {
  double c0 = 0.0;
  double delta0 = 0.0;
};
const PartitionConstants& partition_constants();

/// Exact diameter of the cell [theta1, theta2] × [0, dphi].
double cell_diameter(double theta1, double theta2, double dphi);

class Partition {
 public:
  /// Iso-latitude partition with maximal cell diameter d = b·a^j.
  /// Throws ScaleTooCoarse when d > π.
  Partition(int j, double a, double b);
  /// Partition directly from the diameter bound d.
  explicit Partition(double d);

  int j() const { return j_; }
  double a() const { return a_; }
  double b() const { return b_; }
  double max_diameter() const { return d_; }
  const std::vector<Band>& bands() const { return bands_; }
  std::size_t size() const { return n_cells_; }
  double total_area() const;
  double min_area() const;

  Cell cell(std::size_t index) const;
  std::vector<Cell> cells() const;

  nlohmann::json to_json() const;

 private:
  void build();

  int j_ = 0;
  double a_ = 0.0, b_ = 0.0, d_ = 0.0;
  std::vector<Band> bands_;
  std::size_t n_cells_ = 0;
};

}  // namespace spinwave
