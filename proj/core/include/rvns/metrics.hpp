#pragma once

#include <vector>

#include "rvns/random.hpp"
#include "rvns/types.hpp"

namespace rvns {

// The six summary statistics used to score reconstruction fidelity.
struct IndicatorSet {
  double mean = 0.0;
  double std_dev = 0.0;
  double mode = 0.0;
  double median = 0.0;
  double skewness = 0.0;
  double kurtosis = 0.0;
};

// Wasserstein-1 between two distributions on one grid as the sum of
// absolute CDF differences Sum_i |F_r(i) - F_s(i)|. With as_masses=false
// the value vectors are densities and are converted to cell masses first;
// either way both sides are renormalized. The default is the plain index
// sum; scaled=true weights each term by the cell width, giving the true
// metric-space transport cost.
double wasserstein1(const DensityVector& r, const DensityVector& s,
                    bool as_masses = false, bool scaled = false);

// Draws count i.i.d. values from the piecewise-linear interpolation of a
// normalized density between its grid points (trapezoidal CDF, exact
// per-segment inversion).
Dataset resample(const DensityVector& density, std::size_t count, Rng& rng);

// Computes the six indicators. The mode of continuous data needs a binning
// convention: with a grid, it is the midpoint of the cell with the highest
// count (smallest midpoint on ties); without one, the most frequent exact
// value (smallest on ties). Std uses the n-1 denominator, skewness is the
// adjusted Fisher-Pearson form, kurtosis is the non-excess m4/m2^2, and
// zero-variance data defines skewness and kurtosis as 0.
IndicatorSet indicators(const Dataset& data, const InterestGrid* grid);

// Resamples count values from estimated_density and returns the
// elementwise absolute indicator differences against original. Both sides
// are binned on the density's grid for the mode.
IndicatorSet indicator_error(const Dataset& original,
                             const DensityVector& estimated_density,
                             std::size_t count, Rng& rng);

}  // namespace rvns
