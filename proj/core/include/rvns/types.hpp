#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

namespace rvns {

// Closed domain [a, b] of the private values.
struct DataRange {
  double a;
  double b;

  DataRange(double a_, double b_);
  double width() const { return b - a; }
  bool contains(double x) const { return x >= a && x <= b; }
};

// Parameters of the negative-survey perturbation: band width d and the
// number of perturbed samples k each user reports.
struct PerturbationConfig {
  DataRange range;
  double d;
  int k;

  PerturbationConfig(DataRange range_, double d_, int k_);
};

// An ordered collection of real values, all inside a common range.
struct Dataset {
  std::vector<double> values;
  DataRange range;

  Dataset(std::vector<double> values_, DataRange range_);
  std::size_t size() const { return values.size(); }
};

// What one user sends to the collector: k samples drawn outside the
// prohibited band. band_offset keeps the drawn d1 for diagnostics; it is
// never needed for reconstruction.
struct PerturbedReport {
  std::uint64_t user_id = 0;
  std::vector<double> samples;
  double band_offset = 0.0;
};

// Strictly increasing evaluation points z_1 < ... < z_m plus one auxiliary
// point z_{m+1} > z_m that closes the last cell for rectangular sums.
class InterestGrid {
 public:
  InterestGrid(std::vector<double> points, double auxiliary);

  const std::vector<double>& points() const { return points_; }
  double auxiliary() const { return auxiliary_; }
  std::size_t size() const { return points_.size(); }
  double point(std::size_t i) const { return points_[i]; }
  // Width of cell i, i.e. z_{i+1} - z_i (the auxiliary point closes cell m).
  double spacing(std::size_t i) const;
  double total_width() const;

 private:
  std::vector<double> points_;
  double auxiliary_;
};

using GridPtr = std::shared_ptr<const InterestGrid>;

bool same_grid(const InterestGrid& lhs, const InterestGrid& rhs);

// m equally spaced points spanning [a, b] inclusive; the auxiliary point
// extends the grid by the last spacing so uniform grids stay uniform.
GridPtr make_uniform_grid(const DataRange& range, int m);

// Density (or mass) values sampled on an interest grid.
struct DensityVector {
  GridPtr grid;
  std::vector<double> values;

  DensityVector(GridPtr grid_, std::vector<double> values_);

  // Rectangular-rule integral Sum values[i] * spacing(i).
  double rectangular_mass() const;
  bool is_normalized(double tol = 1e-6) const;
  // Returns a copy scaled so the rectangular-rule integral is exactly 1.
  DensityVector normalized() const;
};

// Dense m-by-m transition kernel sampled on a grid: entry (row j, col i)
// holds the perturbation density p(z_i, z_j) from input z_i to output z_j.
class TransitionMatrix {
 public:
  TransitionMatrix(GridPtr grid, std::vector<double> entries);

  const InterestGrid& grid() const { return *grid_; }
  GridPtr grid_ptr() const { return grid_; }
  std::size_t size() const { return grid_->size(); }
  double at(std::size_t row, std::size_t col) const {
    return entries_[row * grid_->size() + col];
  }
  const std::vector<double>& entries() const { return entries_; }

  // Rectangular-rule integral of column i over the grid; 1 up to
  // discretization error for a properly built matrix.
  double column_sum(std::size_t col) const;

 private:
  GridPtr grid_;
  std::vector<double> entries_;
};

}  // namespace rvns
