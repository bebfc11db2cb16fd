#include "rvns/perturbation.hpp"

#include <cmath>
#include <stdexcept>

namespace rvns {

PerturbedReport perturb(double x, const PerturbationConfig& config, Rng& rng) {
  const double a = config.range.a;
  const double b = config.range.b;
  const double d = config.d;
  if (!config.range.contains(x)) {
    throw std::invalid_argument("perturb: x outside [a, b]");
  }

  double d1;
  if (x - a < d) {
    d1 = rng.uniform() * (x - a);
  } else if (b - x < d) {
    d1 = d - rng.uniform() * (b - x);
  } else {
    d1 = rng.uniform() * d;
  }

  const double band_lo = x - d1;
  const double band_hi = x + d - d1;
  const double left_len = band_lo - a;
  const double total_len = left_len + (b - band_hi);  // == b - a - d

  PerturbedReport report;
  report.band_offset = d1;
  report.samples.resize(static_cast<std::size_t>(config.k));
  for (double& y : report.samples) {
    // One draw picks the sub-interval proportionally to its length and the
    // position inside it, which is exactly uniform over the union.
    const double u = rng.uniform() * total_len;
    y = u < left_len ? a + u : band_hi + (u - left_len);
  }
  return report;
}

std::vector<PerturbedReport> perturb_dataset(const Dataset& data,
                                             const PerturbationConfig& config,
                                             Rng& rng) {
  std::vector<PerturbedReport> reports;
  reports.reserve(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    PerturbedReport r = perturb(data.values[i], config, rng);
    r.user_id = i;
    reports.push_back(std::move(r));
  }
  return reports;
}

double kernel_density(double x, double y, const PerturbationConfig& config) {
  const double a = config.range.a;
  const double b = config.range.b;
  const double d = config.d;
  if (!config.range.contains(x)) {
    throw std::invalid_argument("kernel_density: x outside [a, b]");
  }
  if (!config.range.contains(y)) {
    return 0.0;  // observations never leave the domain
  }
  const double c = 1.0 / (b - a - d);

  if (x < a + d) {
    // Left-edge regime: the band pins against a; nothing between x and a+d
    // is ever emitted, and mass ramps linearly on both sides of that gap.
    if (y >= x && y <= a + d) return 0.0;
    if (y > x + d) return c;
    if (y < x) return (x - y) / (x - a) * c;  // empty interval when x == a
    return (y - a - d) / (x - a) * c;         // y in (a+d, x+d]
  }
  if (x <= b - d) {
    // Interior regime: symmetric ramps of half-width d around x.
    const double dist = std::abs(y - x);
    if (dist >= d) return c;
    return dist / d * c;
  }
  // Right-edge regime, mirror image of the left edge.
  if (y >= b - d && y <= x) return 0.0;
  if (y < x - d) return c;
  if (y > x) return (y - x) / (b - x) * c;    // empty interval when x == b
  return (b - d - y) / (b - x) * c;           // y in [x-d, b-d)
}

LdpBudget ldp_budget(const PerturbationConfig& config, double delta) {
  if (!(delta > 0.0) || !(delta < 4.0 * config.d)) {
    throw std::invalid_argument("ldp_budget: delta must lie in (0, 4d)");
  }
  LdpBudget budget;
  budget.epsilon = config.k * std::log(4.0 * config.d / delta);
  budget.delta_neighborhood = delta;
  budget.k = config.k;
  budget.d = config.d;
  return budget;
}

}  // namespace rvns
