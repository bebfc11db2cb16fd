#include "rvns/kde.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace rvns {

namespace {
constexpr double kInvSqrt2Pi = 0.3989422804014327;
}

double gaussian_kernel(double t) {
  return kInvSqrt2Pi * std::exp(-0.5 * t * t);
}

double silverman_bandwidth(const std::vector<double>& samples) {
  const std::size_t n = samples.size();
  if (n < 2) {
    throw std::invalid_argument("silverman bandwidth needs at least 2 samples");
  }
  double mean = 0.0;
  for (double y : samples) mean += y;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double y : samples) ss += (y - mean) * (y - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  const double h = 1.06 * sd * std::pow(static_cast<double>(n), -0.2);
  if (!(h > 0.0)) {
    throw std::invalid_argument("silverman bandwidth is zero (constant data)");
  }
  return h;
}

DensityVector kde_at(GridPtr grid, const std::vector<double>& samples,
                     const KdeConfig& config) {
  if (samples.empty()) {
    throw std::invalid_argument("kde_at: empty sample set");
  }
  const double h =
      config.bandwidth ? *config.bandwidth : silverman_bandwidth(samples);
  if (!(h > 0.0)) {
    throw std::invalid_argument("kde_at: bandwidth must be positive");
  }

  const std::size_t m = grid->size();
  std::vector<double> q(m, 0.0);
  const double inv_h = 1.0 / h;
  const double scale = inv_h / static_cast<double>(samples.size());
  for (std::size_t i = 0; i < m; ++i) {
    const double z = grid->point(i);
    double acc = 0.0;
    for (double y : samples) {
      acc += gaussian_kernel((z - y) * inv_h);
    }
    // The true estimate is positive everywhere; guard against every term
    // underflowing when a grid point sits implausibly far from all samples.
    q[i] = std::max(acc * scale, std::numeric_limits<double>::min());
  }
  return DensityVector(std::move(grid), std::move(q));
}

}  // namespace rvns
