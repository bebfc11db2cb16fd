#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "rvns/data.hpp"
#include "rvns/errors.hpp"
#include "rvns/metrics.hpp"
#include "rvns/random.hpp"
#include "rvns/reconstruction.hpp"
#include "support/oracles.hpp"

using namespace rvns;

TEST_SUITE_BEGIN("reconstruction");

namespace {

// True density used across these tests: chi-squared(3) truncated to the
// grid's range, sampled at the grid points.
DensityVector gridded_truth(GridPtr grid, int df) {
  const double a = grid->point(0);
  const double b = grid->point(grid->size() - 1);
  std::vector<double> vals(grid->size());
  for (std::size_t i = 0; i < grid->size(); ++i) {
    vals[i] = oracles::truncated_chi2_pdf(grid->point(i), df, a, b);
  }
  return DensityVector(std::move(grid), std::move(vals));
}

}  // namespace

TEST_CASE("transition matrix samples the kernel on the grid") {
  auto grid = make_uniform_grid(DataRange(0.0, 10.0), 100);
  PerturbationConfig cfg(DataRange(0.0, 10.0), 1.0, 1);
  TransitionMatrix t = build_transition_matrix(grid, cfg);
  REQUIRE(t.size() == 100);

  for (std::size_t i = 0; i < 100; ++i) {
    const double z = grid->point(i);
    // Interior grid points can never observe themselves.
    if (z >= 1.0 && z <= 9.0) CHECK(t.at(i, i) == 0.0);
    for (std::size_t j = 0; j < 100; ++j) {
      CHECK(t.at(j, i) ==
            kernel_density(grid->point(i), grid->point(j), cfg));
    }
  }
  // Far pairs sit on the flat level 1/(b - a - d).
  CHECK(t.at(29, 49) == doctest::Approx(1.0 / 9.0).epsilon(1e-12));
  CHECK(t.at(80, 20) == doctest::Approx(1.0 / 9.0).epsilon(1e-12));
}

TEST_CASE("transition matrix rejects grids outside the data range") {
  auto grid = make_uniform_grid(DataRange(-1.0, 10.0), 50);
  PerturbationConfig cfg(DataRange(0.0, 10.0), 1.0, 1);
  CHECK_THROWS_AS(build_transition_matrix(grid, cfg), std::invalid_argument);
}

TEST_CASE("columns integrate to one up to the rectangular-rule error") {
  // The kernel has bounded variation 2/(b - a - d) in y, so the
  // left-endpoint rule is off by at most about twice dz/(b - a - d).
  for (int m : {100, 400}) {
    auto grid = make_uniform_grid(DataRange(0.0, 10.0), m);
    PerturbationConfig cfg(DataRange(0.0, 10.0), 1.0, 1);
    TransitionMatrix t = build_transition_matrix(grid, cfg);
    const double dz = 10.0 / (m - 1);
    const double bound = 2.0 * dz / 9.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      CHECK(std::abs(t.column_sum(i) - 1.0) <= bound);
    }
  }
}

TEST_CASE("forward map is linear and reproduces kernel columns") {
  auto grid = make_uniform_grid(DataRange(0.0, 10.0), 60);
  PerturbationConfig cfg(DataRange(0.0, 10.0), 1.5, 1);
  TransitionMatrix t = build_transition_matrix(grid, cfg);
  Rng rng(9);

  std::vector<double> fv(60), gv(60);
  for (auto* v : {&fv, &gv})
    for (double& x : *v) x = rng.uniform(0.0, 1.0);
  DensityVector f(grid, fv), g(grid, gv);

  DensityVector lhs = forward_map(
      t, DensityVector(grid, [&] {
        std::vector<double> mix(60);
        for (int i = 0; i < 60; ++i) mix[i] = 0.3 * fv[i] + 0.7 * gv[i];
        return mix;
      }()));
  DensityVector mf = forward_map(t, f);
  DensityVector mg = forward_map(t, g);
  for (std::size_t j = 0; j < 60; ++j) {
    CHECK(lhs.values[j] ==
          doctest::Approx(0.3 * mf.values[j] + 0.7 * mg.values[j])
              .epsilon(1e-12));
  }

  // A point mass at grid index i maps to column i scaled by the cell width.
  std::vector<double> delta(60, 0.0);
  delta[25] = 2.0;
  DensityVector image = forward_map(t, DensityVector(grid, delta));
  for (std::size_t j = 0; j < 60; ++j) {
    CHECK(image.values[j] ==
          doctest::Approx(t.at(j, 25) * 2.0 * grid->spacing(25))
              .epsilon(1e-12));
  }

  auto other = make_uniform_grid(DataRange(0.0, 10.0), 61);
  CHECK_THROWS_AS(
      forward_map(t, DensityVector(other, std::vector<double>(61, 0.1))),
      std::invalid_argument);
}

TEST_CASE("a uniform density is a fixed point of the forward map inside") {
  auto grid = make_uniform_grid(DataRange(0.0, 10.0), 200);
  PerturbationConfig cfg(DataRange(0.0, 10.0), 1.0, 1);
  TransitionMatrix t = build_transition_matrix(grid, cfg);
  const double level = 0.1;
  DensityVector f(grid, std::vector<double>(200, level));
  DensityVector g = forward_map(t, f);
  for (std::size_t j = 0; j < 200; ++j) {
    const double z = grid->point(j);
    if (z < 1.0 || z > 9.0) continue;  // edge cells see the dead zone
    CHECK(g.values[j] == doctest::Approx(level).epsilon(0.03));
  }
}

TEST_CASE("objective vanishes on the exact preimage and adds penalties") {
  auto grid = make_uniform_grid(DataRange(0.0, 10.0), 80);
  PerturbationConfig cfg(DataRange(0.0, 10.0), 2.0, 1);
  TransitionMatrix t = build_transition_matrix(grid, cfg);
  DensityVector truth = gridded_truth(grid, 3).normalized();
  DensityVector g = forward_map(t, truth);

  ReconstructionConfig plain;
  plain.lambda1 = 0.0;
  plain.lambda2 = 0.0;
  CHECK(objective(truth, g, t, plain) >= 0.0);
  CHECK(objective(truth, g, t, plain) < 1e-12);

  ReconstructionConfig l1;
  l1.lambda1 = 1.0;
  l1.lambda2 = 0.0;
  double abs_sum = 0.0;
  for (double v : truth.values) abs_sum += std::abs(v);
  CHECK(objective(truth, g, t, l1) == doctest::Approx(abs_sum).epsilon(1e-9));

  ReconstructionConfig l2;
  l2.lambda1 = 0.0;
  l2.lambda2 = 1.0;
  double sq_sum = 0.0;
  for (double v : truth.values) sq_sum += v * v;
  CHECK(objective(truth, g, t, l2) == doctest::Approx(sq_sum).epsilon(1e-9));

  // Any other feasible density scores strictly worse.
  DensityVector uniform(grid, std::vector<double>(80, 1.0 / grid->total_width()));
  CHECK(objective(uniform, g, t, plain) > 1e-4);
}

TEST_CASE("analytic gradient matches central finite differences") {
  auto grid = make_uniform_grid(DataRange(0.0, 10.0), 30);
  PerturbationConfig cfg(DataRange(0.0, 10.0), 1.0, 1);
  TransitionMatrix t = build_transition_matrix(grid, cfg);
  DensityVector truth = gridded_truth(grid, 3).normalized();
  DensityVector g_target = forward_map(t, truth);
  ReconstructionConfig config;  // default lambdas

  Rng rng(17);
  for (int trial = 0; trial < 2; ++trial) {
    // Random strictly positive feasible density.
    std::vector<double> raw(30);
    for (double& x : raw) x = rng.uniform(0.5, 1.5);
    DensityVector v = DensityVector(grid, raw).normalized();

    const std::vector<double> grad =
        objective_gradient(v, g_target, t, config);
    const auto f = [&](const std::vector<double>& p) {
      return objective(DensityVector(grid, p), g_target, t, config);
    };
    const std::vector<double> fd =
        oracles::central_difference_gradient(f, v.values, 1e-6);

    for (std::size_t i = 0; i < grad.size(); ++i) {
      const double denom = std::max(1.0, std::abs(fd[i]));
      CHECK(std::abs(grad[i] - fd[i]) / denom < 1e-5);
    }
  }
}

TEST_CASE("noise-free reconstruction recovers the exact discrete truth") {
  auto grid = make_uniform_grid(DataRange(0.0, 10.0), 50);
  PerturbationConfig cfg(DataRange(0.0, 10.0), 2.0, 1);
  TransitionMatrix t = build_transition_matrix(grid, cfg);
  DensityVector truth = gridded_truth(grid, 3).normalized();
  DensityVector g = forward_map(t, truth);

  ReconstructionConfig config;
  config.lambda1 = 0.0;
  config.lambda2 = 0.0;

  auto worst_error = [&](const ReconstructionResult& res) {
    double worst = 0.0;
    for (std::size_t i = 0; i < truth.values.size(); ++i) {
      worst =
          std::max(worst, std::abs(res.density.values[i] - truth.values[i]));
    }
    return worst;
  };

  ReconstructionResult res = solve_density(g, t, config);
  CHECK(res.converged);
  CHECK(res.constraint_residual <= 1e-6);
  CHECK(worst_error(res) <= 1e-4);
  CHECK(res.objective_value <= 1e-12);

  // The valley around the minimizer is nearly flat, so the error tracks the
  // stationarity tolerance; tightening it drills in by orders of magnitude.
  config.objective_tolerance = 1e-12;
  ReconstructionResult deep = solve_density(g, t, config);
  CHECK(deep.converged);
  CHECK(worst_error(deep) <= 1e-9);
}

TEST_CASE("regularized reconstruction still lands near the truth") {
  auto grid = make_uniform_grid(DataRange(0.0, 10.0), 50);
  PerturbationConfig cfg(DataRange(0.0, 10.0), 2.0, 1);
  TransitionMatrix t = build_transition_matrix(grid, cfg);
  DensityVector truth = gridded_truth(grid, 3).normalized();
  DensityVector g = forward_map(t, truth);

  ReconstructionConfig config;  // default lambda1 = lambda2 = 1e-3
  ReconstructionResult res = solve_density(g, t, config);

  CHECK(res.constraint_residual <= 1e-6);
  for (double v : res.density.values) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
  DensityVector uniform(grid,
                        std::vector<double>(50, 1.0 / grid->total_width()));
  const double w_rec = wasserstein1(res.density, truth);
  const double w_uni = wasserstein1(uniform, truth);
  CHECK(w_rec < 0.5 * w_uni);
}

TEST_CASE("solver output is deterministic") {
  auto grid = make_uniform_grid(DataRange(0.0, 10.0), 40);
  PerturbationConfig cfg(DataRange(0.0, 10.0), 1.0, 1);
  TransitionMatrix t = build_transition_matrix(grid, cfg);
  DensityVector truth = gridded_truth(grid, 2).normalized();
  DensityVector g = forward_map(t, truth);

  ReconstructionConfig config;
  ReconstructionResult r1 = solve_density(g, t, config);
  ReconstructionResult r2 = solve_density(g, t, config);
  CHECK(r1.density.values == r2.density.values);
  CHECK(r1.objective_value == r2.objective_value);
  CHECK(r1.iterations == r2.iterations);
}

TEST_CASE("a single-cell grid is forced by the area constraint") {
  auto grid =
      std::make_shared<const InterestGrid>(std::vector<double>{5.0}, 6.25);
  PerturbationConfig cfg(DataRange(0.0, 10.0), 1.0, 1);
  TransitionMatrix t = build_transition_matrix(grid, cfg);
  DensityVector g(grid, {0.7});

  ReconstructionResult res = solve_density(g, t, ReconstructionConfig{});
  CHECK(res.density.values[0] == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(res.constraint_residual <= 1e-12);
  CHECK(res.converged);
}

TEST_CASE("infeasible box is reported as such") {
  // Total width 0.8 < 1 means even v = 1 everywhere cannot reach unit area.
  auto grid =
      std::make_shared<const InterestGrid>(std::vector<double>{5.0}, 5.8);
  PerturbationConfig cfg(DataRange(0.0, 10.0), 1.0, 1);
  TransitionMatrix t = build_transition_matrix(grid, cfg);
  DensityVector g(grid, {0.7});
  CHECK_THROWS_AS(solve_density(g, t, ReconstructionConfig{}),
                  infeasible_problem_error);
}

TEST_CASE("zero-mass targets are rejected") {
  auto grid = make_uniform_grid(DataRange(0.0, 10.0), 20);
  PerturbationConfig cfg(DataRange(0.0, 10.0), 1.0, 1);
  TransitionMatrix t = build_transition_matrix(grid, cfg);
  DensityVector g(grid, std::vector<double>(20, 0.0));
  CHECK_THROWS_AS(solve_density(g, t, ReconstructionConfig{}),
                  std::invalid_argument);
}

TEST_CASE("grid mismatches are rejected across the module") {
  auto g1 = make_uniform_grid(DataRange(0.0, 10.0), 20);
  auto g2 = make_uniform_grid(DataRange(0.0, 10.0), 21);
  PerturbationConfig cfg(DataRange(0.0, 10.0), 1.0, 1);
  TransitionMatrix t = build_transition_matrix(g1, cfg);
  DensityVector f2(g2, std::vector<double>(21, 0.1));
  CHECK_THROWS_AS(forward_map(t, f2), std::invalid_argument);
  CHECK_THROWS_AS(solve_density(f2, t, ReconstructionConfig{}),
                  std::invalid_argument);
  DensityVector f1(g1, std::vector<double>(20, 0.1));
  CHECK_THROWS_AS(objective(f1, f2, t, ReconstructionConfig{}),
                  std::invalid_argument);
}

TEST_CASE("full pipeline beats the raw perturbed estimate") {
  // Perturb a chi-squared(2) sample, reconstruct, and check the result is
  // much closer to the truth than the kernel estimate of the raw reports.
  const DataRange range(0.0, 10.0);
  PerturbationConfig cfg(range, 1.0, 3);
  Rng rng(mix_seed(2026, 0));
  Dataset data = generate_chi_squared(2, 3000, range, rng);

  auto grid = make_uniform_grid(range, 60);
  auto reports = perturb_dataset(data, cfg, rng);
  ReconstructionResult res =
      reconstruct(reports, grid, cfg, KdeConfig{}, ReconstructionConfig{});

  DensityVector truth = [&] {
    std::vector<double> vals(grid->size());
    for (std::size_t i = 0; i < grid->size(); ++i) {
      vals[i] = oracles::truncated_chi2_pdf(grid->point(i), 2, 0.0, 10.0);
    }
    return DensityVector(grid, vals).normalized();
  }();

  std::vector<double> pooled;
  for (const auto& r : reports)
    pooled.insert(pooled.end(), r.samples.begin(), r.samples.end());
  DensityVector raw = kde_at(grid, pooled, KdeConfig{});

  const double w_rec = wasserstein1(res.density, truth);
  const double w_raw = wasserstein1(raw, truth);
  CHECK(w_rec < w_raw);
  CHECK(res.constraint_residual <= 1e-6);
}

TEST_CASE("reconstruct refuses an empty report set") {
  auto grid = make_uniform_grid(DataRange(0.0, 10.0), 20);
  PerturbationConfig cfg(DataRange(0.0, 10.0), 1.0, 1);
  CHECK_THROWS_AS(reconstruct({}, grid, cfg, KdeConfig{},
                              ReconstructionConfig{}),
                  std::invalid_argument);
}

TEST_SUITE_END();
