#include "rvns/reconstruction.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rvns/errors.hpp"

namespace rvns {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Shared problem data: mass-space forward operator and floored target.
struct Problem {
  MatrixXd B;          // B(j,i) = dz_j * P(j,i) * dz_i, maps v to masses
  VectorXd col_sum;    // B^T 1
  VectorXd target;     // floored, renormalized target masses
  VectorXd widths;     // cell widths dz_i
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double floor = 1e-12;
};

Problem make_problem(const DensityVector& g_target,
                     const TransitionMatrix& matrix,
                     const ReconstructionConfig& config) {
  const auto& grid = matrix.grid();
  const Eigen::Index m = static_cast<Eigen::Index>(grid.size());

  Problem p;
  p.lambda1 = config.lambda1;
  p.lambda2 = config.lambda2;
  p.floor = config.kl_floor;
  p.widths.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    p.widths[i] = grid.spacing(static_cast<std::size_t>(i));
  }

  p.B.resize(m, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index i = 0; i < m; ++i) {
      p.B(j, i) = p.widths[j] *
                  matrix.at(static_cast<std::size_t>(j),
                            static_cast<std::size_t>(i)) *
                  p.widths[i];
    }
  }
  p.col_sum = p.B.colwise().sum().transpose();

  p.target.resize(m);
  double total = 0.0;
  for (Eigen::Index j = 0; j < m; ++j) {
    p.target[j] = g_target.values[static_cast<std::size_t>(j)] * p.widths[j];
    total += p.target[j];
  }
  if (!(total > 0.0)) {
    throw std::invalid_argument("target density has zero mass");
  }
  p.target /= total;
  p.target = p.target.cwiseMax(p.floor);
  return p;
}

struct Evaluation {
  double value = 0.0;
  VectorXd masses;      // raw normalized masses w
  VectorXd floored;     // max(w, floor)
  double mass_total = 0.0;
};

Evaluation evaluate(const Problem& p, const VectorXd& v) {
  Evaluation e;
  VectorXd mu = p.B * v;
  e.mass_total = mu.sum();
  if (!(e.mass_total > 0.0)) {
    // All-zero image; treat as fully floored masses.
    e.masses = VectorXd::Zero(mu.size());
  } else {
    e.masses = mu / e.mass_total;
  }
  e.floored = e.masses.cwiseMax(p.floor);

  double kl = 0.0;
  for (Eigen::Index j = 0; j < e.floored.size(); ++j) {
    const double t = p.target[j];
    const double w = e.floored[j];
    const double lr = std::log(t / w);
    kl += t * lr - w * lr;  // t*log(t/w) + w*log(w/t)
  }
  e.value = kl + p.lambda1 * v.cwiseAbs().sum() + p.lambda2 * v.squaredNorm();
  return e;
}

VectorXd gradient(const Problem& p, const VectorXd& v, const Evaluation& e) {
  VectorXd g;
  if (e.mass_total > 0.0) {
    // d(KL)/dw_j, zero where the floor is pinned.
    VectorXd psi(e.masses.size());
    for (Eigen::Index j = 0; j < psi.size(); ++j) {
      if (e.masses[j] > p.floor) {
        const double t = p.target[j];
        const double w = e.floored[j];
        psi[j] = -t / w + std::log(w / t) + 1.0;
      } else {
        psi[j] = 0.0;
      }
    }
    g = (p.B.transpose() * psi - psi.dot(e.masses) * p.col_sum) / e.mass_total;
  } else {
    // Degenerate image (B v = 0): the KL term sees only the floor, so its
    // derivative vanishes and only the regularizers push.
    g = VectorXd::Zero(v.size());
  }
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    const double sign = v[i] > 0.0 ? 1.0 : (v[i] < 0.0 ? -1.0 : 0.0);
    g[i] += p.lambda1 * sign + 2.0 * p.lambda2 * v[i];
  }
  return g;
}

// Gauss-Newton model of the KL part: J^T diag(D) J with J = dw/dv, plus the
// exact L2 curvature. Positive semidefinite by construction.
MatrixXd gn_hessian(const Problem& p, const Evaluation& e) {
  const Eigen::Index m = p.B.rows();
  if (!(e.mass_total > 0.0)) {
    MatrixXd reg = MatrixXd::Zero(m, m);
    reg.diagonal().array() = 2.0 * p.lambda2;
    return reg;
  }
  VectorXd D(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    if (e.masses[j] > p.floor) {
      const double w = e.floored[j];
      D[j] = p.target[j] / (w * w) + 1.0 / w;
    } else {
      D[j] = 0.0;
    }
  }
  MatrixXd J = (p.B - e.masses * p.col_sum.transpose()) / e.mass_total;
  MatrixXd H = J.transpose() * D.asDiagonal() * J;
  H.diagonal().array() += 2.0 * p.lambda2;
  return H;
}

// Euclidean projection onto { Sum v_i dz_i = 1, 0 <= v_i <= 1 } by
// bisection on the multiplier of the equality constraint.
VectorXd project(const VectorXd& x, const VectorXd& widths) {
  double lo = ((x.array() - 1.0) / widths.array()).minCoeff();
  double hi = (x.array() / widths.array()).maxCoeff();
  for (int it = 0; it < 200; ++it) {
    const double tau = 0.5 * (lo + hi);
    const double mass =
        (x - tau * widths).cwiseMax(0.0).cwiseMin(1.0).dot(widths);
    if (mass > 1.0) {
      lo = tau;
    } else {
      hi = tau;
    }
  }
  const double tau = 0.5 * (lo + hi);
  return (x - tau * widths).cwiseMax(0.0).cwiseMin(1.0);
}

double projected_gradient_norm(const VectorXd& v, const VectorXd& g,
                               const VectorXd& widths) {
  return (v - project(v - g, widths)).cwiseAbs().maxCoeff();
}

}  // namespace

TransitionMatrix build_transition_matrix(GridPtr grid,
                                         const PerturbationConfig& config) {
  const auto& pts = grid->points();
  if (pts.front() < config.range.a || pts.back() > config.range.b) {
    throw std::invalid_argument("grid points must lie within [a, b]");
  }
  const std::size_t m = pts.size();
  std::vector<double> entries(m * m);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = 0; i < m; ++i) {
      entries[j * m + i] = kernel_density(pts[i], pts[j], config);
    }
  }
  return TransitionMatrix(std::move(grid), std::move(entries));
}

DensityVector forward_map(const TransitionMatrix& matrix,
                          const DensityVector& f) {
  if (!same_grid(matrix.grid(), *f.grid)) {
    throw std::invalid_argument("forward_map: grid mismatch");
  }
  const std::size_t m = matrix.size();
  std::vector<double> g(m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      acc += matrix.at(j, i) * f.values[i] * matrix.grid().spacing(i);
    }
    g[j] = acc;
  }
  return DensityVector(f.grid, std::move(g));
}

double objective(const DensityVector& v, const DensityVector& g_target,
                 const TransitionMatrix& matrix,
                 const ReconstructionConfig& config) {
  if (!same_grid(matrix.grid(), *v.grid) ||
      !same_grid(matrix.grid(), *g_target.grid)) {
    throw std::invalid_argument("objective: grid mismatch");
  }
  const Problem p = make_problem(g_target, matrix, config);
  const VectorXd vv = Eigen::Map<const VectorXd>(
      v.values.data(), static_cast<Eigen::Index>(v.values.size()));
  return evaluate(p, vv).value;
}

std::vector<double> objective_gradient(const DensityVector& v,
                                       const DensityVector& g_target,
                                       const TransitionMatrix& matrix,
                                       const ReconstructionConfig& config) {
  if (!same_grid(matrix.grid(), *v.grid) ||
      !same_grid(matrix.grid(), *g_target.grid)) {
    throw std::invalid_argument("objective_gradient: grid mismatch");
  }
  const Problem p = make_problem(g_target, matrix, config);
  const VectorXd vv = Eigen::Map<const VectorXd>(
      v.values.data(), static_cast<Eigen::Index>(v.values.size()));
  const Evaluation e = evaluate(p, vv);
  const VectorXd g = gradient(p, vv, e);
  return std::vector<double>(g.data(), g.data() + g.size());
}

ReconstructionResult solve_density(const DensityVector& g_target,
                                   const TransitionMatrix& matrix,
                                   const ReconstructionConfig& config) {
  if (!same_grid(matrix.grid(), *g_target.grid)) {
    throw std::invalid_argument("solve_density: grid mismatch");
  }
  const auto& grid = matrix.grid();
  const Eigen::Index m = static_cast<Eigen::Index>(grid.size());

  const Problem p = make_problem(g_target, matrix, config);
  if (p.widths.sum() < 1.0) {
    throw infeasible_problem_error(
        "box bound v <= 1 caps the area below the required unit mass");
  }

  const double range_width = grid.total_width();
  VectorXd v = project(VectorXd::Constant(m, 1.0 / range_width), p.widths);
  Evaluation ev = evaluate(p, v);
  VectorXd g = gradient(p, v, ev);

  VectorXd best_v = v;
  double best_f = ev.value;
  int iterations = 0;
  int stall = 0;

  const int budget = config.max_iterations;
  const int phase1_budget = std::max(1, (budget * 3) / 5);
  const double phase1_tol = std::max(1e-6, config.objective_tolerance);

  // Phase 1: projected gradient with Barzilai-Borwein steps and a monotone
  // Armijo backtracking line search.
  double bb_step = 1.0;
  while (iterations < phase1_budget) {
    if (projected_gradient_norm(v, g, p.widths) <= phase1_tol) break;
    double step = bb_step;
    VectorXd trial;
    Evaluation trial_ev;
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      trial = project(v - step * g, p.widths);
      const double decrease = g.dot(trial - v);
      trial_ev = evaluate(p, trial);
      if (trial_ev.value <= ev.value + 1e-4 * decrease || decrease >= 0.0) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    ++iterations;
    if (!accepted) break;

    const VectorXd g_new = gradient(p, trial, trial_ev);
    const VectorXd s = trial - v;
    const VectorXd y = g_new - g;
    const double sy = s.dot(y);
    bb_step = sy > 1e-18 ? std::clamp(s.squaredNorm() / sy, 1e-6, 1e6) : 1.0;

    const double change = ev.value - trial_ev.value;
    v = trial;
    ev = trial_ev;
    g = g_new;
    if (ev.value < best_f) {
      best_f = ev.value;
      best_v = v;
    }
    stall = change < config.objective_tolerance ? stall + 1 : 0;
    if (stall >= 10) break;
  }

  // Phase 2: Gauss-Newton KKT steps on the free variables. The KL surface
  // has near-flat valleys (the forward operator is badly conditioned), so
  // curvature information is required to reach the constrained minimum. A
  // tiny projected gradient is not trusted until at least one curvature
  // step has been taken: valley floors look stationary to first order.
  stall = 0;
  bool curvature_step_taken = false;
  while (iterations < budget) {
    const double pg_norm = projected_gradient_norm(v, g, p.widths);
    const double residual = std::abs(v.dot(p.widths) - 1.0);
    if (curvature_step_taken && pg_norm <= config.objective_tolerance &&
        residual <= config.constraint_tolerance) {
      break;
    }

    std::vector<Eigen::Index> free_idx;
    free_idx.reserve(static_cast<std::size_t>(m));
    for (Eigen::Index i = 0; i < m; ++i) {
      const bool lower_ok = v[i] > 1e-14 || g[i] < 0.0;
      const bool upper_ok = v[i] < 1.0 - 1e-14 || g[i] > 0.0;
      if (lower_ok && upper_ok) free_idx.push_back(i);
    }
    if (free_idx.empty()) break;
    const Eigen::Index nf = static_cast<Eigen::Index>(free_idx.size());

    const MatrixXd H = gn_hessian(p, ev);
    MatrixXd Hf(nf, nf);
    VectorXd gf(nf), wf(nf);
    for (Eigen::Index r = 0; r < nf; ++r) {
      gf[r] = g[free_idx[static_cast<std::size_t>(r)]];
      wf[r] = p.widths[free_idx[static_cast<std::size_t>(r)]];
      for (Eigen::Index cidx = 0; cidx < nf; ++cidx) {
        Hf(r, cidx) = H(free_idx[static_cast<std::size_t>(r)],
                        free_idx[static_cast<std::size_t>(cidx)]);
      }
    }
    const double ridge =
        1e-12 * std::max(1.0, Hf.trace() / static_cast<double>(nf));
    Hf.diagonal().array() += ridge;

    // Equality-constrained Newton step via the Schur complement of the
    // single area constraint: d = u1 + nu * u2 with H u1 = -g, H u2 = w.
    Eigen::LDLT<MatrixXd> ldlt(Hf);
    if (ldlt.info() != Eigen::Success) break;
    const VectorXd u1 = ldlt.solve(-gf);
    const VectorXd u2 = ldlt.solve(wf);
    const double denom = wf.dot(u2);
    if (!(denom > 0.0) || !u1.allFinite() || !u2.allFinite()) break;
    const double target_gap = 1.0 - v.dot(p.widths);
    const double nu = (target_gap - wf.dot(u1)) / denom;

    VectorXd dir = VectorXd::Zero(m);
    for (Eigen::Index r = 0; r < nf; ++r) {
      dir[free_idx[static_cast<std::size_t>(r)]] = u1[r] + nu * u2[r];
    }
    if (dir.cwiseAbs().maxCoeff() < 1e-16) {
      ++iterations;
      break;
    }

    // Fraction-to-boundary cap, then monotone backtracking.
    double alpha = 1.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (dir[i] < 0.0 && v[i] > 0.0) {
        alpha = std::min(alpha, 0.9995 * (-v[i] / dir[i]));
      } else if (dir[i] > 0.0 && v[i] < 1.0) {
        alpha = std::min(alpha, 0.9995 * ((1.0 - v[i]) / dir[i]));
      }
    }
    alpha = std::clamp(alpha, 0.0, 1.0);

    VectorXd trial;
    Evaluation trial_ev;
    bool improved = false;
    for (int bt = 0; bt < 60 && alpha > 0.0; ++bt) {
      trial = (v + alpha * dir).cwiseMax(0.0).cwiseMin(1.0);
      trial_ev = evaluate(p, trial);
      if (trial_ev.value <= ev.value) {
        improved = true;
        break;
      }
      alpha *= 0.5;
    }
    ++iterations;
    curvature_step_taken = true;
    if (!improved) {
      // Fall back to one projected-gradient step before giving up.
      trial = project(v - bb_step * g, p.widths);
      trial_ev = evaluate(p, trial);
      if (trial_ev.value > ev.value) break;
    }

    const double change = ev.value - trial_ev.value;
    v = trial;
    ev = trial_ev;
    g = gradient(p, v, ev);
    if (ev.value < best_f) {
      best_f = ev.value;
      best_v = v;
    }
    stall = change < config.objective_tolerance ? stall + 1 : 0;
    if (stall >= 10) break;
  }

  if (evaluate(p, best_v).value < ev.value) {
    v = best_v;
    ev = evaluate(p, v);
    g = gradient(p, v, ev);
  }

  const double pg_norm = projected_gradient_norm(v, g, p.widths);
  const double residual = std::abs(v.dot(p.widths) - 1.0);

  ReconstructionResult result{
      DensityVector(matrix.grid_ptr(),
                    std::vector<double>(v.data(), v.data() + v.size())),
      ev.value, residual, iterations,
      pg_norm <= config.objective_tolerance &&
          residual <= config.constraint_tolerance};
  return result;
}

ReconstructionResult reconstruct(const std::vector<PerturbedReport>& reports,
                                 GridPtr grid,
                                 const PerturbationConfig& pconfig,
                                 const KdeConfig& kconfig,
                                 const ReconstructionConfig& rconfig) {
  if (reports.empty()) {
    throw std::invalid_argument("reconstruct: no reports");
  }
  std::vector<double> pooled;
  for (const auto& r : reports) {
    pooled.insert(pooled.end(), r.samples.begin(), r.samples.end());
  }
  TransitionMatrix matrix = build_transition_matrix(grid, pconfig);
  const DensityVector g = kde_at(matrix.grid_ptr(), pooled, kconfig);
  return solve_density(g, matrix, rconfig);
}

}  // namespace rvns
