#include "rvns/types.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rvns {

DataRange::DataRange(double a_, double b_) : a(a_), b(b_) {
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) {
    throw std::invalid_argument("DataRange requires finite a < b");
  }
}

PerturbationConfig::PerturbationConfig(DataRange range_, double d_, int k_)
    : range(range_), d(d_), k(k_) {
  if (!(d > 0.0) || !(d < range.width())) {
    throw std::invalid_argument("band width d must satisfy 0 < d < b - a");
  }
  if (k < 1) {
    throw std::invalid_argument("samples per user k must be >= 1");
  }
}

Dataset::Dataset(std::vector<double> values_, DataRange range_)
    : values(std::move(values_)), range(range_) {
  for (double v : values) {
    if (!range.contains(v)) {
      throw std::invalid_argument("dataset value " + std::to_string(v) +
                                  " outside range");
    }
  }
}

InterestGrid::InterestGrid(std::vector<double> points, double auxiliary)
    : points_(std::move(points)), auxiliary_(auxiliary) {
  if (points_.empty()) {
    throw std::invalid_argument("grid needs at least one point");
  }
  for (std::size_t i = 1; i < points_.size(); ++i) {
    if (!(points_[i] > points_[i - 1])) {
      throw std::invalid_argument("grid points must be strictly increasing");
    }
  }
  if (!(auxiliary_ > points_.back())) {
    throw std::invalid_argument("auxiliary point must exceed the last point");
  }
}

double InterestGrid::spacing(std::size_t i) const {
  if (i + 1 < points_.size()) return points_[i + 1] - points_[i];
  return auxiliary_ - points_.back();
}

double InterestGrid::total_width() const {
  return auxiliary_ - points_.front();
}

bool same_grid(const InterestGrid& lhs, const InterestGrid& rhs) {
  return &lhs == &rhs ||
         (lhs.points() == rhs.points() && lhs.auxiliary() == rhs.auxiliary());
}

GridPtr make_uniform_grid(const DataRange& range, int m) {
  if (m < 2) {
    throw std::invalid_argument("uniform grid needs m >= 2");
  }
  std::vector<double> pts(static_cast<std::size_t>(m));
  const double step = range.width() / (m - 1);
  for (int i = 0; i < m; ++i) {
    pts[static_cast<std::size_t>(i)] = range.a + step * i;
  }
  pts.back() = range.b;  // avoid accumulation drift at the top end
  const double aux = pts.back() + (pts.back() - pts[pts.size() - 2]);
  return std::make_shared<const InterestGrid>(std::move(pts), aux);
}

DensityVector::DensityVector(GridPtr grid_, std::vector<double> values_)
    : grid(std::move(grid_)), values(std::move(values_)) {
  if (!grid) {
    throw std::invalid_argument("density vector needs a grid");
  }
  if (values.size() != grid->size()) {
    throw std::invalid_argument("density length does not match grid size");
  }
  for (double v : values) {
    if (v < 0.0 || !std::isfinite(v)) {
      throw std::invalid_argument("density values must be finite and >= 0");
    }
  }
}

double DensityVector::rectangular_mass() const {
  double s = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    s += values[i] * grid->spacing(i);
  }
  return s;
}

bool DensityVector::is_normalized(double tol) const {
  return std::abs(rectangular_mass() - 1.0) <= tol;
}

DensityVector DensityVector::normalized() const {
  const double mass = rectangular_mass();
  if (!(mass > 0.0)) {
    throw std::invalid_argument("cannot normalize a zero-mass density");
  }
  std::vector<double> scaled(values);
  for (double& v : scaled) v /= mass;
  return DensityVector(grid, std::move(scaled));
}

TransitionMatrix::TransitionMatrix(GridPtr grid, std::vector<double> entries)
    : grid_(std::move(grid)), entries_(std::move(entries)) {
  if (!grid_) {
    throw std::invalid_argument("transition matrix needs a grid");
  }
  const std::size_t m = grid_->size();
  if (entries_.size() != m * m) {
    throw std::invalid_argument("transition matrix must be m x m");
  }
  for (double e : entries_) {
    if (e < 0.0 || !std::isfinite(e)) {
      throw std::invalid_argument("transition entries must be finite and >= 0");
    }
  }
}

double TransitionMatrix::column_sum(std::size_t col) const {
  const std::size_t m = grid_->size();
  double s = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    s += at(j, col) * grid_->spacing(j);
  }
  return s;
}

}  // namespace rvns
