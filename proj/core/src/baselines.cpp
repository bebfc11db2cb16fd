#include "rvns/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rvns {

double perturb_noise(double x, const NoiseConfig& config,
                     const DataRange& range, Rng& rng) {
  if (!range.contains(x)) {
    throw std::invalid_argument("perturb_noise: x outside [a, b]");
  }
  if (!(config.scale > 0.0)) {
    throw std::invalid_argument("perturb_noise: scale must be positive");
  }
  const double noise = config.mechanism == NoiseConfig::Mechanism::laplace
                           ? rng.laplace(config.scale)
                           : config.scale * rng.normal();
  double y = x + noise;
  if (config.clip_to_range) {
    y = std::clamp(y, range.a, range.b);
  }
  return y;
}

Dataset perturb_noise_dataset(const Dataset& data, const NoiseConfig& config,
                              Rng& rng) {
  std::vector<double> out;
  out.reserve(data.size());
  double lo = data.range.a;
  double hi = data.range.b;
  for (double x : data.values) {
    const double y = perturb_noise(x, config, data.range, rng);
    lo = std::min(lo, y);
    hi = std::max(hi, y);
    out.push_back(y);
  }
  // The noisy values typically spill outside [a, b]; widen the range so the
  // dataset invariant still holds.
  return Dataset(std::move(out), DataRange(lo, hi > lo ? hi : lo + 1.0));
}

double baseline_privacy(const Dataset& original, const Dataset& perturbed) {
  if (original.size() != perturbed.size()) {
    throw std::invalid_argument("baseline_privacy: datasets differ in length");
  }
  double ss = 0.0;
  for (std::size_t i = 0; i < original.size(); ++i) {
    const double diff = original.values[i] - perturbed.values[i];
    ss += diff * diff;
  }
  return std::sqrt(ss);
}

double expected_noise_distance(NoiseConfig::Mechanism mechanism, double scale,
                               std::size_t n) {
  const double var = mechanism == NoiseConfig::Mechanism::laplace
                         ? 2.0 * scale * scale
                         : scale * scale;
  return std::sqrt(var * static_cast<double>(n));
}

double calibrate_noise_scale(NoiseConfig::Mechanism mechanism, std::size_t n,
                             double target_distance,
                             double relative_tolerance) {
  if (!(target_distance > 0.0) || n == 0) {
    throw std::invalid_argument(
        "calibrate_noise_scale: need n > 0 and a positive target");
  }
  double lo = 0.0;
  double hi = 1.0;
  while (expected_noise_distance(mechanism, hi, n) < target_distance) {
    hi *= 2.0;
    if (hi > 1e12) {
      throw std::invalid_argument("calibrate_noise_scale: target unreachable");
    }
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (expected_noise_distance(mechanism, mid, n) < target_distance) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= relative_tolerance * hi) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace rvns
