#pragma once

#include <utility>
#include <vector>

#include "rvns/perturbation.hpp"
#include "rvns/types.hpp"

namespace rvns {

// Adversary output: one inferred value per attacked user, plus the log of
// the maximized per-user likelihood.
struct AttackResult {
  Dataset inferred;
  std::vector<double> log_likelihoods;
};

// How to resolve flat stretches of the likelihood, which are common: every
// x far enough from all samples scores the same flat kernel level.
enum class TieRule {
  smallest_x,  // leftmost maximizer (default; reproducible worst case)
  centroid,    // mean of all tying grid candidates (may itself score lower)
};

// Maximum-likelihood inference of a user's true value from their report:
// maximizes Sum_j log p(x, y_j) over x in [a, b]. Candidates are evaluated
// on a uniform grid of grid_resolution points, then the best candidate's
// cell is refined by golden-section search. Any candidate hitting a zero
// kernel factor scores -infinity. The likelihood is piecewise constant
// over wide plateaus, so the tie rule is what makes the attack
// deterministic; the returned log-likelihood is always evaluated at the
// returned point.
std::pair<double, double> infer_user(const PerturbedReport& report,
                                     const PerturbationConfig& config,
                                     int grid_resolution = 1000,
                                     TieRule tie_rule = TieRule::smallest_x);

// Runs infer_user over every report.
AttackResult run_attack(const std::vector<PerturbedReport>& reports,
                        const PerturbationConfig& config,
                        int grid_resolution = 1000,
                        TieRule tie_rule = TieRule::smallest_x);

// Euclidean distance sqrt(Sum (x_i - x'_i)^2) between aligned datasets;
// the privacy indicator (larger = better hidden).
double privacy_distance(const Dataset& original, const Dataset& guess);

}  // namespace rvns
