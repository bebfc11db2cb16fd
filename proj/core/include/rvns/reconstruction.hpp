#pragma once

#include <vector>

#include "rvns/kde.hpp"
#include "rvns/perturbation.hpp"
#include "rvns/types.hpp"

namespace rvns {

// Objective weights and solver budget for the constrained reconstruction.
struct ReconstructionConfig {
  double lambda1 = 1e-3;          // L1 weight
  double lambda2 = 1e-3;          // L2 weight
  double kl_floor = 1e-12;        // mass floor applied before logarithms
  int max_iterations = 500;       // total iteration budget
  double constraint_tolerance = 1e-8;
  double objective_tolerance = 1e-8;  // first-order stationarity tolerance
};

struct ReconstructionResult {
  DensityVector density;
  double objective_value = 0.0;
  double constraint_residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Samples the perturbation kernel on the grid: entry (row j, col i) is
// p(z_i, z_j). Columns integrate to 1 up to the rectangular-rule error.
TransitionMatrix build_transition_matrix(GridPtr grid,
                                         const PerturbationConfig& config);

// Left-endpoint rectangular discretization of the perturbation integral:
// g(z_j) = Sum_i p(z_i, z_j) * f(z_i) * (z_{i+1} - z_i).
DensityVector forward_map(const TransitionMatrix& matrix,
                          const DensityVector& f);

// Symmetric KL divergence between the cell masses of g_target and of
// forward_map(matrix, v), both renormalized and floored at kl_floor,
// plus lambda1 * Sum |v_i| + lambda2 * Sum v_i^2.
double objective(const DensityVector& v, const DensityVector& g_target,
                 const TransitionMatrix& matrix,
                 const ReconstructionConfig& config);

// Analytic gradient of objective() with respect to v; the solver uses it
// and tests check it against central finite differences.
std::vector<double> objective_gradient(const DensityVector& v,
                                       const DensityVector& g_target,
                                       const TransitionMatrix& matrix,
                                       const ReconstructionConfig& config);

// Minimizes objective() subject to Sum v_i * (z_{i+1} - z_i) = 1 and
// 0 <= v_i <= 1, starting from the uniform density. Two phases: a
// projected Barzilai-Borwein gradient descent to locate the active set,
// then Gauss-Newton KKT steps on the free variables to resolve the
// ill-conditioned valley that first-order steps cannot traverse.
ReconstructionResult solve_density(const DensityVector& g_target,
                                   const TransitionMatrix& matrix,
                                   const ReconstructionConfig& config);

// Full server-side pipeline: pool all report samples, estimate the
// perturbed density by KDE, build the transition matrix, and solve.
ReconstructionResult reconstruct(const std::vector<PerturbedReport>& reports,
                                 GridPtr grid,
                                 const PerturbationConfig& pconfig,
                                 const KdeConfig& kconfig,
                                 const ReconstructionConfig& rconfig);

}  // namespace rvns
