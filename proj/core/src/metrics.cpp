#include "rvns/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rvns {

namespace {

std::vector<double> to_normalized_masses(const DensityVector& v,
                                         bool as_masses) {
  std::vector<double> masses(v.values.size());
  double total = 0.0;
  for (std::size_t i = 0; i < masses.size(); ++i) {
    masses[i] = as_masses ? v.values[i] : v.values[i] * v.grid->spacing(i);
    total += masses[i];
  }
  if (!(total > 0.0)) {
    throw std::invalid_argument("wasserstein1: zero-mass input");
  }
  for (double& mass : masses) mass /= total;
  return masses;
}

}  // namespace

double wasserstein1(const DensityVector& r, const DensityVector& s,
                    bool as_masses, bool scaled) {
  if (!same_grid(*r.grid, *s.grid)) {
    throw std::invalid_argument("wasserstein1: grid mismatch");
  }
  const std::vector<double> mr = to_normalized_masses(r, as_masses);
  const std::vector<double> ms = to_normalized_masses(s, as_masses);
  double cdf_r = 0.0;
  double cdf_s = 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < mr.size(); ++i) {
    cdf_r += mr[i];
    cdf_s += ms[i];
    const double term = std::abs(cdf_r - cdf_s);
    acc += scaled ? term * r.grid->spacing(i) : term;
  }
  return acc;
}

Dataset resample(const DensityVector& density, std::size_t count, Rng& rng) {
  if (!density.is_normalized()) {
    throw std::invalid_argument("resample: density must be normalized");
  }
  if (count == 0) {
    throw std::invalid_argument("resample: count must be positive");
  }
  const auto& z = density.grid->points();
  const auto& f = density.values;
  const std::size_t m = z.size();
  if (m < 2) {
    throw std::invalid_argument("resample: need at least two grid points");
  }

  // Trapezoidal CDF of the piecewise-linear interpolant over [z_1, z_m].
  std::vector<double> cdf(m, 0.0);
  for (std::size_t i = 1; i < m; ++i) {
    cdf[i] = cdf[i - 1] + 0.5 * (f[i - 1] + f[i]) * (z[i] - z[i - 1]);
  }
  const double total = cdf.back();
  if (!(total > 0.0)) {
    throw std::invalid_argument("resample: density has zero interior mass");
  }

  std::vector<double> out(count);
  for (std::size_t s = 0; s < count; ++s) {
    const double target = rng.uniform() * total;
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), target);
    std::size_t seg =
        std::min(m - 2, static_cast<std::size_t>(
                            std::max<std::ptrdiff_t>(
                                0, (it - cdf.begin()) - 1)));
    const double rem = target - cdf[seg];
    const double len = z[seg + 1] - z[seg];
    const double f0 = f[seg];
    const double slope = (f[seg + 1] - f0) / len;
    // Solve 0.5*slope*t^2 + f0*t = rem for t in [0, len]; the citardauq
    // form stays stable when the segment is nearly flat or decreasing.
    double t;
    const double disc = std::max(0.0, f0 * f0 + 2.0 * slope * rem);
    const double denom = f0 + std::sqrt(disc);
    if (denom > 0.0) {
      t = 2.0 * rem / denom;
    } else {
      t = 0.0;  // zero-density segment start; rem must be ~0 here
    }
    out[s] = z[seg] + std::clamp(t, 0.0, len);
  }
  return Dataset(std::move(out), DataRange(z.front(), z.back()));
}

IndicatorSet indicators(const Dataset& data, const InterestGrid* grid) {
  const std::size_t n = data.size();
  if (n == 0) {
    throw std::invalid_argument("indicators: empty dataset");
  }
  const auto& x = data.values;

  IndicatorSet out;
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);
  out.mean = mean;

  double m2 = 0.0, m3 = 0.0, m4 = 0.0, ss = 0.0;
  for (double v : x) {
    const double c = v - mean;
    const double c2 = c * c;
    ss += c2;
    m2 += c2;
    m3 += c2 * c;
    m4 += c2 * c2;
  }
  m2 /= static_cast<double>(n);
  m3 /= static_cast<double>(n);
  m4 /= static_cast<double>(n);
  out.std_dev = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;

  if (m2 > 0.0 && n > 2) {
    const double nn = static_cast<double>(n);
    out.skewness =
        std::sqrt(nn * (nn - 1.0)) / (nn - 2.0) * m3 / std::pow(m2, 1.5);
  }
  out.kurtosis = m2 > 0.0 ? m4 / (m2 * m2) : 0.0;

  std::vector<double> sorted(x);
  std::sort(sorted.begin(), sorted.end());
  out.median = n % 2 == 1
                   ? sorted[n / 2]
                   : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);

  if (grid != nullptr) {
    // Histogram-cell mode: cell i spans [z_i, z_{i+1}); out-of-grid values
    // clamp into the end cells; ties keep the smallest midpoint.
    const auto& z = grid->points();
    const std::size_t m = z.size();
    std::vector<std::size_t> counts(m, 0);
    for (double v : sorted) {
      const auto it = std::upper_bound(z.begin(), z.end(), v);
      const std::size_t cell = static_cast<std::size_t>(std::clamp<
          std::ptrdiff_t>((it - z.begin()) - 1, 0,
                          static_cast<std::ptrdiff_t>(m - 1)));
      ++counts[cell];
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < m; ++i) {
      if (counts[i] > counts[best]) best = i;
    }
    const double cell_hi =
        best + 1 < m ? z[best + 1] : grid->auxiliary();
    out.mode = 0.5 * (z[best] + cell_hi);
  } else {
    // Exact multiset mode: longest run of equal values, smallest on ties.
    double best_val = sorted.front();
    std::size_t best_run = 1, run = 1;
    for (std::size_t i = 1; i < n; ++i) {
      run = sorted[i] == sorted[i - 1] ? run + 1 : 1;
      if (run > best_run) {
        best_run = run;
        best_val = sorted[i];
      }
    }
    out.mode = best_val;
  }
  return out;
}

IndicatorSet indicator_error(const Dataset& original,
                             const DensityVector& estimated_density,
                             std::size_t count, Rng& rng) {
  const Dataset redrawn = resample(estimated_density, count, rng);
  const InterestGrid* grid = estimated_density.grid.get();
  const IndicatorSet a = indicators(original, grid);
  const IndicatorSet b = indicators(redrawn, grid);
  IndicatorSet err;
  err.mean = std::abs(a.mean - b.mean);
  err.std_dev = std::abs(a.std_dev - b.std_dev);
  err.mode = std::abs(a.mode - b.mode);
  err.median = std::abs(a.median - b.median);
  err.skewness = std::abs(a.skewness - b.skewness);
  err.kurtosis = std::abs(a.kurtosis - b.kurtosis);
  return err;
}

}  // namespace rvns
