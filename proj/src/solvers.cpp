#include "wentzell/solvers.hpp"

#include "wentzell/errors.hpp"
#include "wentzell/krylov.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace wentzell {

Eigen::VectorXd solve_linear_spd(const SparseOperator& op, const Eigen::VectorXd& rhs) {
  Eigen::SimplicialLLT<SparseOperator> llt(op);
  if (llt.info() != Eigen::Success)
    throw SolverError("sparse Cholesky factorization failed (operator not SPD)");
  Eigen::VectorXd x = llt.solve(rhs);
  if (llt.info() != Eigen::Success || !x.allFinite())
    throw SolverError("sparse Cholesky back-substitution failed");
  const double residual = (op * x - rhs).norm();
  if (residual > 1e-10 * std::max(1.0, rhs.norm()))
    throw SolverError("sparse solve residual too large: " + std::to_string(residual));
  return x;
}

namespace {

using Vec = Eigen::VectorXd;

/// Uniform interface for the two formulations the critical-point algorithms
/// run on: the full finite-element space with the combined inner product, and
/// the boundary-only reduction through the harmonic extension.
class SolveSpace {
 public:
  virtual ~SolveSpace() = default;
  virtual double value(const Vec& u) const = 0;
  /// Differential against every active hat function; zero elsewhere.
  virtual Vec gradient(const Vec& u) const = 0;
  virtual Vec riesz(const Vec& dual) const = 0;
  virtual double inner(const Vec& a, const Vec& b) const = 0;
  virtual double p_integral(const Vec& u) const = 0;
  /// Solve the (indefinite) second-derivative system at u.
  virtual Vec newton_solve(const Vec& u, const Vec& rhs) const = 0;
  virtual DiscreteFunction to_full(const Vec& u) const = 0;
  virtual Vec project(const DiscreteFunction& u) const = 0;

  double norm(const Vec& u) const { return std::sqrt(std::max(0.0, inner(u, u))); }
};

class FullSpaceOps final : public SolveSpace {
 public:
  explicit FullSpaceOps(const Problem& problem) : pr_(&problem) {}

  double value(const Vec& u) const override { return energy(*pr_, u); }

  Vec gradient(const Vec& u) const override {
    Vec dual = pr_->h1_matrix * u -
               boundary_p_form(pr_->mesh, pr_->dofs, u, pr_->system.p);
    for (int c : pr_->dofs.constrained_dofs) dual[c] = 0.0;
    return dual;
  }

  Vec riesz(const Vec& dual) const override { return riesz_solve(*pr_, dual); }

  double inner(const Vec& a, const Vec& b) const override { return h1_inner(*pr_, a, b); }

  double p_integral(const Vec& u) const override {
    return boundary_p_integral(pr_->mesh, u, pr_->system.p);
  }

  Vec newton_solve(const Vec& u, const Vec& rhs) const override {
    const SparseOperator hess(
        pr_->h1_matrix - boundary_p_hessian(pr_->mesh, pr_->dofs, u, pr_->system.p));
    Eigen::SimplicialLDLT<SparseOperator> ldlt(hess);
    if (ldlt.info() == Eigen::Success) {
      Vec x = ldlt.solve(rhs);
      if (x.allFinite()) return x;
    }
    // Rescue a failed factorization with a Levenberg-style diagonal shift,
    // twice the most negative diagonal entry over the free dofs.
    double worst = 0.0;
    for (int i = 0; i < hess.rows(); ++i)
      if (!pr_->dofs.is_constrained(i)) worst = std::min(worst, hess.coeff(i, i));
    const double shift = worst < 0.0 ? -2.0 * worst : 1e-8;
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(static_cast<size_t>(hess.rows()));
    for (int i = 0; i < hess.rows(); ++i)
      if (!pr_->dofs.is_constrained(i)) triplets.emplace_back(i, i, shift);
    SparseOperator bump(hess.rows(), hess.cols());
    bump.setFromTriplets(triplets.begin(), triplets.end());
    ldlt.compute(SparseOperator(hess + bump));
    if (ldlt.info() != Eigen::Success)
      throw SolverError("Newton system factorization failed even with a diagonal shift");
    Vec x = ldlt.solve(rhs);
    if (!x.allFinite()) throw SolverError("Newton system solve produced non-finite values");
    return x;
  }

  DiscreteFunction to_full(const Vec& u) const override { return u; }

  Vec project(const DiscreteFunction& u) const override {
    Vec v = u;
    for (int c : pr_->dofs.constrained_dofs) v[c] = 0.0;
    return v;
  }

 private:
  const Problem* pr_;
};

/// Keep only couplings inside the active set; unit diagonal elsewhere.
SparseOperator restrict_active(const SparseOperator& op, const std::vector<std::uint8_t>& mask) {
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<size_t>(op.nonZeros()) + static_cast<size_t>(op.rows()));
  for (int k = 0; k < op.outerSize(); ++k)
    for (SparseOperator::InnerIterator it(op, k); it; ++it)
      if (mask[static_cast<size_t>(it.row())] && mask[static_cast<size_t>(it.col())])
        triplets.emplace_back(it.row(), it.col(), it.value());
  for (int i = 0; i < op.rows(); ++i)
    if (!mask[static_cast<size_t>(i)]) triplets.emplace_back(i, i, 1.0);
  SparseOperator out(op.rows(), op.cols());
  out.setFromTriplets(triplets.begin(), triplets.end());
  return out;
}

class BoundaryOps final : public SolveSpace {
 public:
  explicit BoundaryOps(const Problem& problem)
      : pr_(&problem), ext_(problem), active_(boundary_free_dofs(problem.dofs)) {
    mask_.assign(static_cast<size_t>(problem.mesh.vertex_count()), 0);
    for (int i : active_) mask_[static_cast<size_t>(i)] = 1;
    const SparseOperator combo(pr_->system.boundary_stiffness + pr_->system.boundary_mass);
    precond_llt_.compute(restrict_active(combo, mask_));
    if (precond_llt_.info() != Eigen::Success)
      throw SolverError("boundary preconditioner factorization failed");
  }

  double value(const Vec& v) const override { return boundary_energy(ext_, v); }

  Vec gradient(const Vec& v) const override { return boundary_gradient(ext_, v); }

  Vec riesz(const Vec& dual) const override {
    const KrylovResult result =
        pcg([this](const Vec& w) { return metric_apply(w); },
            [this](const Vec& w) { return precond_solve(w); }, dual, 1e-12,
            4 * static_cast<int>(active_.size()) + 50);
    if (!result.converged && result.residual > 1e-8 * std::max(1.0, dual.norm()))
      throw SolverError("boundary Riesz solve stalled (residual " +
                        std::to_string(result.residual) + ")");
    return result.x;
  }

  double inner(const Vec& a, const Vec& b) const override {
    return ext_.dtn_form(a, b) + a.dot(pr_->system.boundary_stiffness * b);
  }

  double p_integral(const Vec& v) const override {
    return boundary_p_integral(pr_->mesh, v, pr_->system.p);
  }

  Vec newton_solve(const Vec& v, const Vec& rhs) const override {
    const SparseOperator ph = boundary_p_hessian(pr_->mesh, pr_->dofs, v, pr_->system.p);
    const KrylovResult result =
        minres([this, &ph](const Vec& w) { return mask(metric_apply(w) - ph * w); },
               [this](const Vec& w) { return precond_solve(w); }, rhs, 1e-12,
               6 * static_cast<int>(active_.size()) + 60);
    // Mild inexactness is tolerated; the Newton line search guards it.
    return result.x;
  }

  DiscreteFunction to_full(const Vec& v) const override { return ext_.extend(v); }

  Vec project(const DiscreteFunction& u) const override { return mask(ext_.trace(u)); }

 private:
  Vec mask(Vec v) const {
    for (int i = 0; i < v.size(); ++i)
      if (!mask_[static_cast<size_t>(i)]) v[i] = 0.0;
    return v;
  }

  Vec metric_apply(const Vec& w) const {
    return mask(ext_.dtn_apply(w) + pr_->system.boundary_stiffness * w);
  }

  Vec precond_solve(const Vec& r) const { return mask(precond_llt_.solve(r)); }

  const Problem* pr_;
  HarmonicExtensionSolver ext_;
  std::vector<int> active_;
  std::vector<std::uint8_t> mask_;
  Eigen::SimplicialLLT<SparseOperator> precond_llt_;
};

std::unique_ptr<SolveSpace> make_space(const Problem& problem, Backend backend) {
  if (backend == Backend::BoundaryDtn) return std::make_unique<BoundaryOps>(problem);
  return std::make_unique<FullSpaceOps>(problem);
}

struct RefineOutcome {
  Vec u;
  int iterations = 0;
  double grad_norm = 0.0;
  bool converged = false;
};

/// Damped Newton on the gradient with a residual-decrease line search. On
/// reaching the tolerance one further full step is taken (kept only if it
/// reduces the residual) so downstream certificates have margin.
RefineOutcome newton_refine(const SolveSpace& space, Vec u, double tol, int max_steps) {
  RefineOutcome out;
  Vec g = space.gradient(u);
  double gn = g.norm();
  for (int it = 0; it < max_steps; ++it) {
    if (gn <= tol) {
      const Vec step = space.newton_solve(u, -g);
      const Vec candidate = u + step;
      const Vec gc = space.gradient(candidate);
      if (gc.norm() < gn) {
        u = candidate;
        gn = gc.norm();
      }
      out.converged = true;
      break;
    }
    const Vec step = space.newton_solve(u, -g);
    double tau = 1.0;
    bool accepted = false;
    for (int halvings = 0; halvings < 25; ++halvings) {
      const Vec candidate = u + tau * step;
      const Vec gc = space.gradient(candidate);
      if (gc.norm() <= (1.0 - 1e-4 * tau) * gn) {
        u = candidate;
        g = gc;
        gn = gc.norm();
        accepted = true;
        break;
      }
      tau *= 0.5;
    }
    out.iterations = it + 1;
    if (!accepted) break;
  }
  if (gn <= tol) out.converged = true;
  out.u = std::move(u);
  out.grad_norm = gn;
  return out;
}

/// Certify and package a polished point. The Nehari value of an exact
/// critical point vanishes; enforce it within gradient tolerance, pushing a
/// few more Newton steps if the margin is not yet there.
CriticalPoint finish_point(const Problem& problem, const SolveSpace& space, Vec u,
                           const SolverConfig& config, const DepthEstimate& depth,
                           int iterations, Backend backend) {
  for (int round = 0;; ++round) {
    DiscreteFunction full = space.to_full(u);
    EnergyReport report = solution_report(problem, full, depth);
    const double h1_sq = report.h1_norm * report.h1_norm;
    const bool residual_ok = report.weak_residual <= config.grad_tol;
    const bool nehari_ok = std::abs(report.nehari_K) <= config.grad_tol * (1.0 + h1_sq);
    if (residual_ok && nehari_ok) {
      CriticalPoint point;
      point.u = std::move(full);
      point.report = report;
      point.iterations = iterations;
      point.backend = backend;
      return point;
    }
    if (round >= 3)
      throw ConvergenceError("critical point certificate failed: weak residual " +
                             std::to_string(report.weak_residual) + ", Nehari value " +
                             std::to_string(report.nehari_K));
    const Vec g = space.gradient(u);
    u += space.newton_solve(u, -g);
    ++iterations;
  }
}

/// Resample the path to equal spacing in the metric of the space, endpoints
/// pinned. Piecewise linear in state space.
std::vector<Vec> redistribute(const SolveSpace& space, const std::vector<Vec>& nodes) {
  const int n = static_cast<int>(nodes.size());
  std::vector<double> cumulative(static_cast<size_t>(n), 0.0);
  for (int i = 0; i + 1 < n; ++i) {
    const Vec d = nodes[static_cast<size_t>(i + 1)] - nodes[static_cast<size_t>(i)];
    cumulative[static_cast<size_t>(i + 1)] =
        cumulative[static_cast<size_t>(i)] + space.norm(d);
  }
  const double total = cumulative[static_cast<size_t>(n - 1)];
  if (!(total > 0.0)) return nodes;
  std::vector<Vec> out(static_cast<size_t>(n));
  out.front() = nodes.front();
  out.back() = nodes.back();
  int segment = 0;
  for (int j = 1; j < n - 1; ++j) {
    const double target = total * j / (n - 1);
    while (segment + 2 < n && cumulative[static_cast<size_t>(segment + 1)] < target) ++segment;
    const double length = cumulative[static_cast<size_t>(segment + 1)] -
                          cumulative[static_cast<size_t>(segment)];
    const double theta = length > 0.0
                             ? (target - cumulative[static_cast<size_t>(segment)]) / length
                             : 0.0;
    out[static_cast<size_t>(j)] = (1.0 - theta) * nodes[static_cast<size_t>(segment)] +
                                  theta * nodes[static_cast<size_t>(segment + 1)];
  }
  return out;
}

CriticalPoint mountain_pass_once(const Problem& problem, const SolveSpace& space,
                                 const SolverConfig& config, const DepthEstimate& depth,
                                 const Vec& start, Backend backend) {
  const double p = problem.system.p;
  const RayScaling ray = ray_scaling_from_norms(
      space.norm(start), std::pow(space.p_integral(start), 1.0 / p), p);

  // Endpoint with negative energy: twice the ray maximizer always works for
  // p > 2; grow defensively against roundoff.
  Vec endpoint = (2.0 * ray.lambda_u) * start;
  double end_value = space.value(endpoint);
  for (int grow = 0; grow < 8 && !(end_value < 0.0); ++grow) {
    endpoint *= 1.5;
    end_value = space.value(endpoint);
  }
  if (!(end_value < 0.0))
    throw ConvergenceError("could not reach a negative-energy path endpoint");

  const int n = config.path_points;
  const double spacing = space.norm(endpoint) / (n - 1);
  std::vector<Vec> nodes(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    nodes[static_cast<size_t>(i)] = (static_cast<double>(i) / (n - 1)) * endpoint;

  auto evaluate = [&](const std::vector<Vec>& path) {
    std::vector<double> v(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<size_t>(i)] = space.value(path[static_cast<size_t>(i)]);
    return v;
  };
  auto argmax_interior = [&](const std::vector<double>& v) {
    int m = 1;
    for (int i = 2; i < n - 1; ++i)
      if (v[static_cast<size_t>(i)] > v[static_cast<size_t>(m)]) m = i;
    return m;
  };

  std::vector<double> values = evaluate(nodes);
  double newton_entry = -1.0;
  double last_grad_norm = std::numeric_limits<double>::infinity();
  double last_max = std::numeric_limits<double>::infinity();

  for (int iter = 0; iter < config.max_iters; ++iter) {
    const int m = argmax_interior(values);
    const double path_max = values[static_cast<size_t>(m)];
    last_max = path_max;

    if (path_max < 1e-12)
      throw ConvergenceError("deformation path collapsed toward zero");

    const Vec g = space.gradient(nodes[static_cast<size_t>(m)]);
    const double gn = g.norm();
    last_grad_norm = gn;
    if (newton_entry < 0.0) newton_entry = std::max(0.05 * gn, 1e3 * config.grad_tol);

    if (gn <= newton_entry) {
      const RefineOutcome polish =
          newton_refine(space, nodes[static_cast<size_t>(m)], config.grad_tol, 80);
      if (polish.converged && space.value(polish.u) > 0.25 * depth.depth_d)
        return finish_point(problem, space, polish.u, config, depth,
                            iter + polish.iterations, backend);
      newton_entry *= 0.1;
      if (newton_entry < 10.0 * config.grad_tol)
        throw ConvergenceError("Newton polish kept failing near the path maximum");
    }

    const Vec r = space.riesz(g);
    const double slope = g.dot(r);
    const double r_norm = space.norm(r);
    // Cap the move at one node spacing so the crest descends in lockstep and
    // the resampling below can keep the ridge crossing sampled.
    double alpha = config.descent.initial_step;
    if (r_norm > 0.0) alpha = std::min(alpha, spacing / r_norm);
    bool moved = false;
    for (int halvings = 0; halvings < 60; ++halvings) {
      const Vec candidate = nodes[static_cast<size_t>(m)] - alpha * r;
      const double candidate_value = space.value(candidate);
      if (candidate_value <=
          values[static_cast<size_t>(m)] - config.descent.armijo * alpha * slope) {
        nodes[static_cast<size_t>(m)] = candidate;
        values[static_cast<size_t>(m)] = candidate_value;
        moved = true;
        break;
      }
      alpha *= config.descent.backtracking;
    }
    if (!moved) {
      // The gradient is at noise level for descent; polish directly.
      const RefineOutcome polish =
          newton_refine(space, nodes[static_cast<size_t>(m)], config.grad_tol, 80);
      if (polish.converged && space.value(polish.u) > 0.25 * depth.depth_d)
        return finish_point(problem, space, polish.u, config, depth,
                            iter + polish.iterations, backend);
      throw ConvergenceError("descent stalled at the path maximum (gradient norm " +
                             std::to_string(gn) + ")");
    }
    // The descent move never raises the sampled maximum.
    if (values[static_cast<size_t>(m)] > path_max)
      throw SolverError("descent step raised the path maximum");

    // Re-equidistribute so segments straddling the ridge keep a sample near
    // the crest; this may lift the sampled maximum when it uncovers terrain
    // the previous sampling missed.
    nodes = redistribute(space, nodes);
    values = evaluate(nodes);
  }
  throw ConvergenceError("mountain-pass iteration budget exhausted (path maximum " +
                         std::to_string(last_max) + ", gradient norm " +
                         std::to_string(last_grad_norm) + ")");
}

void require_matching_p(const Problem& problem, const SolverConfig& config) {
  if (config.p != problem.system.p)
    throw ParameterError("solver config p differs from the assembled exponent");
}

}  // namespace

DiscreteFunction constant_trace_seed(const Problem& problem) {
  HarmonicExtensionSolver ext(problem);
  Vec profile = Vec::Zero(problem.mesh.vertex_count());
  for (int i : boundary_free_dofs(problem.dofs)) profile[i] = 1.0;
  return ext.extend(profile);
}

DiscreteFunction random_trace_seed(const Problem& problem, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Vec r(problem.mesh.vertex_count());
  for (int i = 0; i < r.size(); ++i) r[i] = dist(rng);
  for (int c : problem.dofs.constrained_dofs) r[c] = 0.0;
  return riesz_solve(problem, problem.system.boundary_mass * r);
}

CriticalPoint mountain_pass(const Problem& problem, const SolverConfig& config,
                            const DepthEstimate& depth, const DiscreteFunction& seed,
                            Backend backend) {
  validate(config);
  require_matching_p(problem, config);
  const std::unique_ptr<SolveSpace> space = make_space(problem, backend);
  const Vec start = space->project(seed);
  if (!(space->p_integral(start) > 0.0))
    throw ParameterError("mountain-pass seed has zero boundary trace");

  std::string failures;
  const int attempts = std::max(1, config.multistart_count);
  for (int attempt = 0; attempt < attempts; ++attempt) {
    try {
      const Vec attempt_start =
          attempt == 0 ? start
                       : space->project(random_trace_seed(
                             problem, config.rng_seed +
                                          7919ull * static_cast<std::uint64_t>(attempt)));
      return mountain_pass_once(problem, *space, config, depth, attempt_start, backend);
    } catch (const ConvergenceError& e) {
      failures += "\n  attempt " + std::to_string(attempt) + ": " + e.what();
    }
  }
  throw ConvergenceError("mountain pass failed in all attempts:" + failures);
}

CriticalPoint nehari_minimize(const Problem& problem, const SolverConfig& config,
                              const DepthEstimate& depth, Backend backend) {
  validate(config);
  require_matching_p(problem, config);
  const std::unique_ptr<SolveSpace> space = make_space(problem, backend);
  const RayScaling ray = ray_scaling(problem, depth.maximizer);
  const Vec start = space->project(ray.lambda_u * depth.maximizer);
  const RefineOutcome polish = newton_refine(*space, start, config.grad_tol, 200);
  if (!polish.converged)
    throw ConvergenceError(
        "Newton refinement from the scaled quotient maximizer stalled (gradient norm " +
        std::to_string(polish.grad_norm) + ")");
  return finish_point(problem, *space, polish.u, config, depth, polish.iterations, backend);
}

namespace {

/// Multiplier that blows up at every known root (both signs) and at zero, so
/// Newton on the deflated residual is repelled from all of them.
struct Deflation {
  const SolveSpace* space = nullptr;
  double power = 2.0;
  double shift = 1.0;
  std::vector<Vec> roots;

  double factor(const Vec& u) const {
    double value = 1.0;
    for (const Vec& root : roots) {
      const Vec d = u - root;
      const double dist = std::sqrt(std::max(1e-300, space->inner(d, d)));
      value *= std::pow(dist, -power) + shift;
    }
    return value;
  }

  /// Directional derivative of log(factor): (grad factor . delta) / factor.
  double dlog(const Vec& u, const Vec& delta) const {
    double sum = 0.0;
    for (const Vec& root : roots) {
      const Vec d = u - root;
      const double dist_sq = std::max(1e-300, space->inner(d, d));
      const double dist = std::sqrt(dist_sq);
      const double single = std::pow(dist, -power) + shift;
      const double derivative =
          -power * std::pow(dist, -power - 2.0) * space->inner(d, delta);
      sum += derivative / single;
    }
    return sum;
  }
};

struct DeflatedOutcome {
  Vec u;
  int iterations = 0;
  bool converged = false;
};

/// Newton on the deflated residual. The step direction is the plain Newton
/// step rescaled by the closed-form deflation correction; the line search
/// decreases the deflated residual norm, which diverges at known roots.
DeflatedOutcome deflated_newton(const SolveSpace& space, const Deflation& deflation, Vec u,
                                double tol, int max_steps) {
  DeflatedOutcome out;
  Vec g = space.gradient(u);
  double gn = g.norm();
  double deflated_norm = deflation.factor(u) * gn;
  for (int it = 0; it < max_steps; ++it) {
    if (gn <= tol) {
      out.converged = true;
      break;
    }
    const Vec base = space.newton_solve(u, -g);
    const double correction = deflation.dlog(u, base);
    const double denominator = 1.0 - correction;
    const double tau_deflect = denominator > 1e-3 ? std::min(1.0 / denominator, 1e3) : 1.0;
    double tau = 1.0;
    bool accepted = false;
    for (int halvings = 0; halvings < 25; ++halvings) {
      const Vec candidate = u + (tau * tau_deflect) * base;
      const Vec gc = space.gradient(candidate);
      const double candidate_deflated = deflation.factor(candidate) * gc.norm();
      if (candidate_deflated <= (1.0 - 1e-4 * tau) * deflated_norm) {
        u = candidate;
        g = gc;
        gn = gc.norm();
        deflated_norm = candidate_deflated;
        accepted = true;
        break;
      }
      tau *= 0.5;
    }
    out.iterations = it + 1;
    if (!accepted) break;
  }
  if (gn <= tol) out.converged = true;
  out.u = std::move(u);
  return out;
}

void push_nehari_scaled(std::vector<Vec>& seeds, const Problem& problem,
                        const DiscreteFunction& u) {
  try {
    const RayScaling ray = ray_scaling(problem, u);
    seeds.push_back(ray.lambda_u * u);
  } catch (const ParameterError&) {
    // zero trace or zero function; not a usable seed
  }
}

/// Diverse deterministic starts: harmonic lifts of the low generalized
/// eigenmodes of the boundary pencil (tangential stiffness vs boundary mass),
/// then random lifts, then sums of neighbouring known points. All scaled to
/// the Nehari set along their ray.
std::vector<Vec> continuation_seeds(const Problem& problem, const SolverConfig& config,
                                    const std::vector<CriticalPoint>& known) {
  std::vector<Vec> seeds;
  HarmonicExtensionSolver ext(problem);
  const std::vector<int> active = boundary_free_dofs(problem.dofs);
  const int nb = static_cast<int>(active.size());
  if (nb > 0) {
    Eigen::MatrixXd stiffness = Eigen::MatrixXd::Zero(nb, nb);
    Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(nb, nb);
    for (int a = 0; a < nb; ++a)
      for (int b = 0; b < nb; ++b) {
        stiffness(a, b) = problem.system.boundary_stiffness.coeff(active[static_cast<size_t>(a)],
                                                                  active[static_cast<size_t>(b)]);
        mass(a, b) = problem.system.boundary_mass.coeff(active[static_cast<size_t>(a)],
                                                        active[static_cast<size_t>(b)]);
      }
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> eig(stiffness, mass);
    if (eig.info() == Eigen::Success) {
      const int modes = std::min(nb, 12);
      for (int k = 0; k < modes; ++k) {
        Vec v = Vec::Zero(problem.mesh.vertex_count());
        for (int a = 0; a < nb; ++a)
          v[active[static_cast<size_t>(a)]] = eig.eigenvectors()(a, k);
        push_nehari_scaled(seeds, problem, ext.extend(v));
      }
    }
  }
  for (int j = 0; j < 12; ++j)
    push_nehari_scaled(seeds, problem,
                       random_trace_seed(problem, config.rng_seed +
                                                      104729ull * static_cast<std::uint64_t>(j + 1)));
  for (size_t k = 0; k + 1 < known.size() && k < 4; ++k)
    push_nehari_scaled(seeds, problem, known[k].u + known[k + 1].u);
  return seeds;
}

bool distinct_from_known(const SolveSpace& space, const Vec& u,
                         const std::vector<CriticalPoint>& known, double grad_tol) {
  const double threshold = std::max(10.0 * grad_tol, 1e-6);
  if (space.norm(u) <= threshold) return false;
  for (const CriticalPoint& point : known) {
    const Vec d_minus = u - point.u;
    const Vec d_plus = u + point.u;
    if (std::min(space.norm(d_minus), space.norm(d_plus)) <= threshold) return false;
  }
  return true;
}

}  // namespace

std::optional<CriticalPoint> deflated_continue(const Problem& problem,
                                               const SolverConfig& config,
                                               const DepthEstimate& depth,
                                               const std::vector<CriticalPoint>& known) {
  validate(config);
  require_matching_p(problem, config);
  FullSpaceOps space(problem);

  Deflation deflation;
  deflation.space = &space;
  deflation.power = config.deflation.power;
  deflation.shift = config.deflation.shift;
  deflation.roots.push_back(Vec::Zero(problem.mesh.vertex_count()));
  for (const CriticalPoint& point : known) {
    deflation.roots.push_back(point.u);
    deflation.roots.push_back(-point.u);
  }

  for (const Vec& seed : continuation_seeds(problem, config, known)) {
    const DeflatedOutcome outcome = deflated_newton(space, deflation, seed, config.grad_tol, 60);
    if (!outcome.converged) continue;
    if (!distinct_from_known(space, outcome.u, known, config.grad_tol)) continue;
    if (!(space.value(outcome.u) > 0.25 * depth.depth_d)) continue;
    try {
      return finish_point(problem, space, outcome.u, config, depth, outcome.iterations,
                          Backend::FullSpace);
    } catch (const ConvergenceError&) {
      continue;
    }
  }
  return std::nullopt;
}

std::vector<CriticalPoint> critical_point_ladder(const Problem& problem,
                                                 const SolverConfig& config,
                                                 const DepthEstimate& depth, int count) {
  validate(config);
  require_matching_p(problem, config);
  if (count < 1) throw ParameterError("requested level count must be >= 1");

  std::vector<CriticalPoint> found;
  found.push_back(nehari_minimize(problem, config, depth));

  auto level_count = [&]() {
    std::vector<double> energies;
    energies.reserve(found.size());
    for (const CriticalPoint& point : found) energies.push_back(point.report.energy_I);
    std::sort(energies.begin(), energies.end());
    size_t levels = 0;
    double last = -std::numeric_limits<double>::infinity();
    for (double e : energies)
      if (std::abs(e - last) > 1e-6 * (1.0 + std::abs(last))) {
        ++levels;
        last = e;
      }
    return levels;
  };

  const size_t cap = static_cast<size_t>(std::max(count * 6, 12));
  while (level_count() < static_cast<size_t>(count) && found.size() < cap) {
    std::optional<CriticalPoint> next = deflated_continue(problem, config, depth, found);
    if (!next) break;
    found.push_back(std::move(*next));
  }

  std::sort(found.begin(), found.end(), [](const CriticalPoint& a, const CriticalPoint& b) {
    return a.report.energy_I < b.report.energy_I;
  });
  std::vector<CriticalPoint> ladder;
  for (CriticalPoint& point : found) {
    if (!ladder.empty() &&
        std::abs(point.report.energy_I - ladder.back().report.energy_I) <=
            1e-6 * (1.0 + std::abs(ladder.back().report.energy_I)))
      continue;
    ladder.push_back(std::move(point));
    if (ladder.size() == static_cast<size_t>(count)) break;
  }
  return ladder;
}

}  // namespace wentzell
