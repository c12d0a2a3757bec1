#include "wentzell/functional.hpp"

#include "wentzell/errors.hpp"
#include "wentzell/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

namespace wentzell {

void validate(const SolverConfig& config) {
  if (!(config.p > 2.0)) throw ParameterError("exponent p must exceed 2");
  if (!(config.grad_tol > 0.0)) throw ParameterError("grad_tol must be positive");
  if (config.max_iters <= 0) throw ParameterError("max_iters must be positive");
  if (config.path_points < 16) throw ParameterError("path_points must be at least 16");
  if (!(config.descent.initial_step > 0.0))
    throw ParameterError("descent initial_step must be positive");
  if (!(config.descent.backtracking > 0.0 && config.descent.backtracking < 1.0))
    throw ParameterError("descent backtracking factor must lie in (0,1)");
  if (!(config.descent.armijo > 0.0 && config.descent.armijo < 1.0))
    throw ParameterError("descent armijo constant must lie in (0,1)");
  if (!(config.deflation.shift >= 0.0)) throw ParameterError("deflation shift must be >= 0");
  if (!(config.deflation.power >= 1.0)) throw ParameterError("deflation power must be >= 1");
  if (config.multistart_count < 1) throw ParameterError("multistart_count must be >= 1");
}

Problem make_problem(Mesh mesh, double p) {
  const std::vector<std::string> diagnostics = validate_mesh(mesh);
  if (!diagnostics.empty()) {
    std::string message = "invalid mesh:";
    for (const std::string& d : diagnostics) message += "\n  " + d;
    throw MeshError(message);
  }
  Problem problem;
  problem.mesh = std::move(mesh);
  problem.dofs = build_dof_map(problem.mesh);
  problem.system = assemble_system(problem.mesh, problem.dofs, p);
  problem.h1_matrix = apply_dirichlet(
      SparseOperator(problem.system.interior_stiffness + problem.system.boundary_stiffness),
      problem.dofs);
  auto factor = std::make_shared<Eigen::SimplicialLLT<SparseOperator>>();
  factor->compute(problem.h1_matrix);
  if (factor->info() != Eigen::Success)
    throw SolverError("combined stiffness factorization failed (operator not SPD)");
  problem.h1_factor = std::move(factor);
  return problem;
}

double h1_inner(const Problem& problem, const DiscreteFunction& u, const DiscreteFunction& v) {
  return u.dot(problem.h1_matrix * v);
}

double h1_norm_sq(const Problem& problem, const DiscreteFunction& u) {
  return std::max(0.0, h1_inner(problem, u, u));
}

Eigen::VectorXd riesz_solve(const Problem& problem, const Eigen::VectorXd& dual) {
  Eigen::VectorXd x = problem.h1_factor->solve(dual);
  if (problem.h1_factor->info() != Eigen::Success)
    throw SolverError("Riesz solve failed");
  return x;
}

double energy(const Problem& problem, const DiscreteFunction& u) {
  const double p = problem.system.p;
  return 0.5 * h1_norm_sq(problem, u) - boundary_p_integral(problem.mesh, u, p) / p;
}

EnergyGradient energy_gradient(const Problem& problem, const DiscreteFunction& u) {
  EnergyGradient g;
  g.dual = problem.h1_matrix * u -
           boundary_p_form(problem.mesh, problem.dofs, u, problem.system.p);
  for (int c : problem.dofs.constrained_dofs) g.dual[c] = 0.0;
  g.riesz = riesz_solve(problem, g.dual);
  return g;
}

double nehari_value(const Problem& problem, const DiscreteFunction& u) {
  return h1_norm_sq(problem, u) - boundary_p_integral(problem.mesh, u, problem.system.p);
}

double weak_residual_norm(const Problem& problem, const DiscreteFunction& u) {
  Eigen::VectorXd dual = problem.h1_matrix * u -
                         boundary_p_form(problem.mesh, problem.dofs, u, problem.system.p);
  for (int c : problem.dofs.constrained_dofs) dual[c] = 0.0;
  return dual.norm();
}

RayScaling ray_scaling_from_norms(double h1_norm, double trace_p_norm, double p) {
  if (!(trace_p_norm > 0.0))
    throw ParameterError("ray scaling undefined for zero boundary trace");
  if (!(h1_norm > 0.0)) throw ParameterError("ray scaling undefined for zero function");
  RayScaling ray;
  ray.lambda_u = std::pow(h1_norm, 2.0 / (p - 2.0)) * std::pow(trace_p_norm, -p / (p - 2.0));
  ray.ray_max =
      (0.5 - 1.0 / p) * std::pow(h1_norm / trace_p_norm, 2.0 * p / (p - 2.0));
  return ray;
}

RayScaling ray_scaling(const Problem& problem, const DiscreteFunction& u) {
  const double p = problem.system.p;
  const double h1 = std::sqrt(h1_norm_sq(problem, u));
  const double pnorm = std::pow(boundary_p_integral(problem.mesh, u, p), 1.0 / p);
  return ray_scaling_from_norms(h1, pnorm, p);
}

namespace {

struct AscentOutcome {
  bool converged = false;
  double quotient = 0.0;
  double grad_norm = 0.0;
  DiscreteFunction u;
  int iterations = 0;
};

/// Riesz gradient of Q(u) = ||u||_{p,Gamma1} / ||u||_{H1} at an H1-normalized
/// iterate: scale the p-form representative and remove the radial component.
Eigen::VectorXd quotient_gradient(const Problem& problem, const DiscreteFunction& u,
                                  double p_integral, double quotient) {
  const double p = problem.system.p;
  const Eigen::VectorXd pf = boundary_p_form(problem.mesh, problem.dofs, u, p);
  Eigen::VectorXd g = std::pow(p_integral, (1.0 - p) / p) * riesz_solve(problem, pf);
  g -= quotient * u;
  return g;
}

/// Barzilai-Borwein ascent on the trace quotient over the H1 unit sphere.
AscentOutcome quotient_ascent(const Problem& problem, DiscreteFunction u,
                              const SolverConfig& config) {
  const double p = problem.system.p;
  AscentOutcome out;

  double norm = std::sqrt(h1_norm_sq(problem, u));
  if (!(norm > 0.0)) return out;
  u /= norm;
  double P = boundary_p_integral(problem.mesh, u, p);
  if (!(P > 0.0)) return out;
  double Q = std::pow(P, 1.0 / p);

  Eigen::VectorXd g = quotient_gradient(problem, u, P, Q);
  DiscreteFunction u_prev;
  Eigen::VectorXd g_prev;
  bool have_previous = false;
  std::vector<double> history{Q};

  for (int iter = 1; iter <= config.max_iters; ++iter) {
    const double grad_norm = std::sqrt(h1_norm_sq(problem, g));
    const bool gradient_small = grad_norm <= 1e-8 * Q;
    const bool stalled = history.size() > 10 &&
                         std::abs(Q - history[history.size() - 11]) <= 1e-10 * Q;
    if (gradient_small && stalled) {
      out.converged = true;
      out.quotient = Q;
      out.grad_norm = grad_norm;
      out.u = u;
      out.iterations = iter;
      return out;
    }

    double alpha = config.descent.initial_step;
    if (have_previous) {
      const Eigen::VectorXd s = u - u_prev;
      const Eigen::VectorXd y = g - g_prev;
      const double s_dot_s = h1_inner(problem, s, s);
      const double s_dot_y = h1_inner(problem, s, y);
      if (s_dot_y != 0.0) alpha = std::clamp(std::abs(s_dot_s / s_dot_y), 1e-6, 1e3);
    }
    u_prev = u;
    g_prev = g;
    have_previous = true;

    for (int shrink = 0; shrink < 30; ++shrink) {
      DiscreteFunction candidate = u + alpha * g;
      const double candidate_norm = std::sqrt(h1_norm_sq(problem, candidate));
      if (candidate_norm > 0.0) {
        candidate /= candidate_norm;
        const double P_candidate = boundary_p_integral(problem.mesh, candidate, p);
        if (P_candidate > 0.0) {
          const double Q_candidate = std::pow(P_candidate, 1.0 / p);
          // Tolerate mild nonmonotonicity; halve on a severe drop.
          if (Q_candidate >= 0.8 * Q || shrink == 29) {
            u = candidate;
            P = P_candidate;
            Q = Q_candidate;
            break;
          }
        }
      }
      alpha *= 0.5;
    }

    g = quotient_gradient(problem, u, P, Q);
    history.push_back(Q);
    out.quotient = Q;
    out.grad_norm = grad_norm;
    out.u = u;
    out.iterations = iter;
  }
  return out;
}

/// Interior-harmonic start with a boundary-mass-dominant trace profile.
DiscreteFunction depth_seed(const Problem& problem, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::VectorXd r(problem.mesh.vertex_count());
  for (int i = 0; i < r.size(); ++i) r[i] = dist(rng);
  for (int c : problem.dofs.constrained_dofs) r[c] = 0.0;
  return riesz_solve(problem, problem.system.boundary_mass * r);
}

}  // namespace

DepthEstimate compute_depth(const Problem& problem, const SolverConfig& config) {
  validate(config);
  if (config.p != problem.system.p)
    throw ParameterError("solver config p differs from the assembled exponent");

  const int starts = config.multistart_count;
  std::vector<AscentOutcome> outcomes(static_cast<size_t>(starts));
  std::vector<std::string> failures(static_cast<size_t>(starts));
  parallel_for_index(starts, [&](int i) {
    try {
      const DiscreteFunction u0 =
          depth_seed(problem, config.rng_seed + 1000003ull * static_cast<std::uint64_t>(i));
      outcomes[static_cast<size_t>(i)] = quotient_ascent(problem, u0, config);
    } catch (const std::exception& e) {
      failures[static_cast<size_t>(i)] = e.what();
    }
  });

  int best = -1;
  for (int i = 0; i < starts; ++i) {
    const AscentOutcome& o = outcomes[static_cast<size_t>(i)];
    if (o.converged && (best < 0 || o.quotient > outcomes[static_cast<size_t>(best)].quotient))
      best = i;
  }
  if (best < 0) {
    std::string message = "trace-quotient ascent did not converge in any of " +
                          std::to_string(starts) + " starts";
    for (int i = 0; i < starts; ++i) {
      const AscentOutcome& o = outcomes[static_cast<size_t>(i)];
      message += "\n  start " + std::to_string(i) + ": ";
      if (!failures[static_cast<size_t>(i)].empty())
        message += failures[static_cast<size_t>(i)];
      else
        message += "quotient " + std::to_string(o.quotient) + ", gradient norm " +
                   std::to_string(o.grad_norm) + " after " + std::to_string(o.iterations) +
                   " iterations";
    }
    throw ConvergenceError(message);
  }

  const AscentOutcome& winner = outcomes[static_cast<size_t>(best)];
  const double p = problem.system.p;
  DepthEstimate depth;
  depth.B = winner.quotient;
  depth.lambda1 = std::pow(depth.B, -p / (p - 2.0));
  depth.lambda2 = std::pow(depth.B, -2.0 / (p - 2.0));
  depth.depth_d = (0.5 - 1.0 / p) * depth.lambda1 * depth.lambda1;
  depth.maximizer = winner.u;
  return depth;
}

EnergyReport solution_report(const Problem& problem, const DiscreteFunction& u,
                             const DepthEstimate& depth) {
  const double p = problem.system.p;
  const double h1_sq = h1_norm_sq(problem, u);
  const double p_integral = boundary_p_integral(problem.mesh, u, p);
  EnergyReport report;
  report.h1_norm = std::sqrt(h1_sq);
  report.trace_p_norm = std::pow(p_integral, 1.0 / p);
  report.energy_I = 0.5 * h1_sq - p_integral / p;
  report.nehari_K = h1_sq - p_integral;
  report.weak_residual = weak_residual_norm(problem, u);
  report.lambda1_residual = std::abs(report.h1_norm - depth.lambda1);
  report.lambda2_residual = std::abs(report.trace_p_norm - depth.lambda2);
  return report;
}

}  // namespace wentzell
