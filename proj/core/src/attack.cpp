#include "rvns/attack.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rvns {

namespace {

double log_likelihood(double x, const PerturbedReport& report,
                      const PerturbationConfig& config) {
  double acc = 0.0;
  for (double y : report.samples) {
    const double p = kernel_density(x, y, config);
    if (p <= 0.0) return -std::numeric_limits<double>::infinity();
    acc += std::log(p);
  }
  return acc;
}

}  // namespace

std::pair<double, double> infer_user(const PerturbedReport& report,
                                     const PerturbationConfig& config,
                                     int grid_resolution, TieRule tie_rule) {
  if (grid_resolution < 2) {
    throw std::invalid_argument("infer_user: grid_resolution must be >= 2");
  }
  if (report.samples.empty()) {
    throw std::invalid_argument("infer_user: report has no samples");
  }
  const double a = config.range.a;
  const double b = config.range.b;
  const double step = (b - a) / (grid_resolution - 1);

  // Coarse pass; strict comparison keeps the smallest tying candidate.
  double best_x = a;
  double best_ll = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid_resolution; ++i) {
    const double x = i + 1 == grid_resolution ? b : a + step * i;
    const double ll = log_likelihood(x, report, config);
    if (ll > best_ll) {
      best_ll = ll;
      best_x = x;
    }
  }

  if (tie_rule == TieRule::centroid) {
    // Average every grid candidate that ties the maximum. Plateaus tie
    // bitwise (identical flat factors), so no tolerance is needed.
    double sum = 0.0;
    std::size_t ties = 0;
    for (int i = 0; i < grid_resolution; ++i) {
      const double x = i + 1 == grid_resolution ? b : a + step * i;
      if (log_likelihood(x, report, config) == best_ll) {
        sum += x;
        ++ties;
      }
    }
    const double x = sum / static_cast<double>(ties);
    return {x, log_likelihood(x, report, config)};
  }

  // Golden-section refinement inside the best candidate's cell. On flat
  // stretches the >= comparison discards the right part of the bracket, so
  // the search drifts to the leftmost maximizer.
  double lo = std::max(a, best_x - step);
  double hi = std::min(b, best_x + step);
  constexpr double kGolden = 0.6180339887498949;
  for (int it = 0; it < 100 && hi - lo > 1e-13; ++it) {
    const double c1 = hi - kGolden * (hi - lo);
    const double c2 = lo + kGolden * (hi - lo);
    if (log_likelihood(c1, report, config) >=
        log_likelihood(c2, report, config)) {
      hi = c2;
    } else {
      lo = c1;
    }
  }

  // The bracket may have collapsed slightly off the optimum (e.g. just left
  // of a plateau edge); pick the best of a few exact candidates, preferring
  // the smallest x on ties.
  const double candidates[] = {lo, 0.5 * (lo + hi), hi, best_x};
  double out_x = best_x;
  double out_ll = -std::numeric_limits<double>::infinity();
  for (double x : candidates) {
    const double ll = log_likelihood(x, report, config);
    if (ll > out_ll || (ll == out_ll && x < out_x)) {
      out_ll = ll;
      out_x = x;
    }
  }
  return {out_x, out_ll};
}

AttackResult run_attack(const std::vector<PerturbedReport>& reports,
                        const PerturbationConfig& config,
                        int grid_resolution, TieRule tie_rule) {
  std::vector<double> inferred;
  std::vector<double> lls;
  inferred.reserve(reports.size());
  lls.reserve(reports.size());
  for (const auto& r : reports) {
    const auto [x, ll] = infer_user(r, config, grid_resolution, tie_rule);
    inferred.push_back(x);
    lls.push_back(ll);
  }
  return AttackResult{Dataset(std::move(inferred), config.range),
                      std::move(lls)};
}

double privacy_distance(const Dataset& original, const Dataset& guess) {
  if (original.size() != guess.size()) {
    throw std::invalid_argument("privacy_distance: datasets differ in length");
  }
  double ss = 0.0;
  for (std::size_t i = 0; i < original.size(); ++i) {
    const double diff = original.values[i] - guess.values[i];
    ss += diff * diff;
  }
  return std::sqrt(ss);
}

}  // namespace rvns
