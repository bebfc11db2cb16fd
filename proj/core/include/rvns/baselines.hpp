#pragma once

#include "rvns/attack.hpp"
#include "rvns/random.hpp"
#include "rvns/types.hpp"

namespace rvns {

// Additive-noise comparison mechanisms.
struct NoiseConfig {
  enum class Mechanism { laplace, gaussian };
  Mechanism mechanism = Mechanism::laplace;
  double scale = 1.0;          // Laplace b or Gaussian sigma, data units
  bool clip_to_range = false;  // off by default: noisy values may leave [a,b]
};

// x plus Laplace(0, scale) or Normal(0, scale^2) noise, optionally clamped
// back into the range.
double perturb_noise(double x, const NoiseConfig& config,
                     const DataRange& range, Rng& rng);

// One noisy value per dataset entry.
Dataset perturb_noise_dataset(const Dataset& data, const NoiseConfig& config,
                              Rng& rng);

// For additive noise the adversary's guess is the report itself, so the
// privacy indicator is the straight Euclidean distance to the original.
double baseline_privacy(const Dataset& original, const Dataset& perturbed);

// Expected privacy distance of a noise mechanism over n users:
// scale * sqrt(2 n) for Laplace, scale * sqrt(n) for Gaussian (root of the
// summed noise variance).
double expected_noise_distance(NoiseConfig::Mechanism mechanism, double scale,
                               std::size_t n);

// Bisects the noise scale until the expected privacy distance matches
// target_distance; used to align baseline curves with the mechanism under
// test at equal privacy.
double calibrate_noise_scale(NoiseConfig::Mechanism mechanism, std::size_t n,
                             double target_distance,
                             double relative_tolerance = 1e-6);

}  // namespace rvns
