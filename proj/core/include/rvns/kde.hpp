#pragma once

#include <optional>
#include <vector>

#include "rvns/types.hpp"

namespace rvns {

// Bandwidth selection: an explicit h, or Silverman's rule when unset.
struct KdeConfig {
  std::optional<double> bandwidth;
};

// Standard normal kernel K(t) = exp(-t^2 / 2) / sqrt(2 pi).
double gaussian_kernel(double t);

// Silverman's rule of thumb h = 1.06 * sd * n^(-1/5) with the sample
// standard deviation (n - 1 denominator). Needs at least two distinct
// samples to produce a positive bandwidth.
double silverman_bandwidth(const std::vector<double>& samples);

// Kernel density estimate q(z) = (1/n) Sum_j K((z - y_j)/h) / h at every
// grid point. No boundary correction is applied, so the estimate dips near
// domain edges by design; downstream consumers rely on that behavior.
DensityVector kde_at(GridPtr grid, const std::vector<double>& samples,
                     const KdeConfig& config);

}  // namespace rvns
