#pragma once

#include <vector>

#include "rvns/random.hpp"
#include "rvns/types.hpp"

namespace rvns {

// Local differential privacy budget of the mechanism for outputs observed
// at the resolution of a +/- delta neighborhood.
struct LdpBudget {
  double epsilon;
  double delta_neighborhood;
  int k;
  double d;
};

// Client-side perturbation. Draws the band offset d1 once, then k samples
// uniformly over [a, b] minus the prohibited band [x - d1, x + d - d1].
//
// The offset rule keeps the band inside the domain in all three regimes:
//   interior (both edges at least d away): d1 ~ U[0, d]
//   left edge (x - a < d):                 d1 ~ U[0, x - a]
//   right edge (b - x < d):                d1 = d - U[0, b - x]
// so the allowed region always has total length b - a - d, which is what
// makes the conditional sampling density uniform at 1 / (b - a - d).
PerturbedReport perturb(double x, const PerturbationConfig& config, Rng& rng);

// Convenience wrapper: one report per dataset value, user ids 0..n-1.
std::vector<PerturbedReport> perturb_dataset(const Dataset& data,
                                             const PerturbationConfig& config,
                                             Rng& rng);

// Marginal density p(x, y) of observing perturbed value y for true value x,
// i.e. the d1-averaged sampling density. Piecewise linear in y with three
// regimes in x (left edge, interior, right edge); continuous, bounded by
// 1 / (b - a - d), and zero on the set never reachable from x, including
// every y outside [a, b]. x itself must be a valid domain value.
double kernel_density(double x, double y, const PerturbationConfig& config);

// epsilon = k * ln(4 d / delta); requires 0 < delta < 4 d.
LdpBudget ldp_budget(const PerturbationConfig& config, double delta);

}  // namespace rvns
