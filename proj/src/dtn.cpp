#include "wentzell/dtn.hpp"

#include "wentzell/errors.hpp"

#include <vector>

namespace wentzell {

HarmonicExtensionSolver::HarmonicExtensionSolver(const Problem& problem)
    : problem_(&problem) {
  const int n = problem.mesh.vertex_count();
  interior_index_.assign(static_cast<size_t>(n), -1);
  for (int v = 0; v < n; ++v)
    if (!problem.dofs.is_constrained(v) && !problem.dofs.is_on_gamma1(v)) {
      interior_index_[static_cast<size_t>(v)] = static_cast<int>(interior_.size());
      interior_.push_back(v);
    }

  const SparseOperator& K = problem.system.interior_stiffness;
  std::vector<Eigen::Triplet<double>> triplets;
  for (int k = 0; k < K.outerSize(); ++k)
    for (SparseOperator::InnerIterator it(K, k); it; ++it) {
      const int i = interior_index_[static_cast<size_t>(it.row())];
      const int j = interior_index_[static_cast<size_t>(it.col())];
      if (i >= 0 && j >= 0) triplets.emplace_back(i, j, it.value());
    }
  SparseOperator block(static_cast<int>(interior_.size()), static_cast<int>(interior_.size()));
  block.setFromTriplets(triplets.begin(), triplets.end());
  interior_factor_.compute(block);
  if (interior_factor_.info() != Eigen::Success)
    throw SolverError("interior Dirichlet block factorization failed");
}

BoundaryFunction HarmonicExtensionSolver::trace(const DiscreteFunction& u) const {
  BoundaryFunction v = u;
  for (int i : interior_) v[i] = 0.0;
  return v;
}

DiscreteFunction HarmonicExtensionSolver::extend(const BoundaryFunction& v) const {
  DiscreteFunction u = trace(v);
  if (interior_.empty()) return u;
  const Eigen::VectorXd coupled = problem_->system.interior_stiffness * u;
  Eigen::VectorXd rhs(static_cast<int>(interior_.size()));
  for (size_t k = 0; k < interior_.size(); ++k)
    rhs[static_cast<int>(k)] = -coupled[interior_[k]];
  const Eigen::VectorXd u_interior = interior_factor_.solve(rhs);
  if (interior_factor_.info() != Eigen::Success)
    throw SolverError("harmonic extension solve failed");
  for (size_t k = 0; k < interior_.size(); ++k)
    u[interior_[k]] = u_interior[static_cast<int>(k)];
  return u;
}

Eigen::VectorXd HarmonicExtensionSolver::dtn_apply(const BoundaryFunction& v) const {
  Eigen::VectorXd dual = problem_->system.interior_stiffness * extend(v);
  for (int i : interior_) dual[i] = 0.0;
  for (int c : problem_->dofs.constrained_dofs) dual[c] = 0.0;
  return dual;
}

double HarmonicExtensionSolver::dtn_form(const BoundaryFunction& v,
                                         const BoundaryFunction& w) const {
  const DiscreteFunction ev = extend(v);
  const DiscreteFunction ew = extend(w);
  return ev.dot(problem_->system.interior_stiffness * ew);
}

double boundary_energy(const HarmonicExtensionSolver& solver, const BoundaryFunction& v) {
  const Problem& problem = solver.problem();
  const double p = problem.system.p;
  return 0.5 * solver.dtn_form(v, v) + 0.5 * v.dot(problem.system.boundary_stiffness * v) -
         boundary_p_integral(problem.mesh, v, p) / p;
}

Eigen::VectorXd boundary_gradient(const HarmonicExtensionSolver& solver,
                                  const BoundaryFunction& v) {
  const Problem& problem = solver.problem();
  Eigen::VectorXd dual = solver.dtn_apply(v) + problem.system.boundary_stiffness * v -
                         boundary_p_form(problem.mesh, problem.dofs, v, problem.system.p);
  for (int i : solver.interior_vertices()) dual[i] = 0.0;
  for (int c : problem.dofs.constrained_dofs) dual[c] = 0.0;
  return dual;
}

std::pair<DiscreteFunction, DiscreteFunction> harmonic_projection(
    const HarmonicExtensionSolver& solver, const DiscreteFunction& u) {
  DiscreteFunction harmonic_part = solver.extend(solver.trace(u));
  DiscreteFunction interior_part = u - harmonic_part;
  return {std::move(harmonic_part), std::move(interior_part)};
}

std::vector<int> boundary_free_dofs(const DofMap& dofs) {
  std::vector<int> out;
  for (int v : dofs.boundary_dofs)
    if (!dofs.is_constrained(v)) out.push_back(v);
  return out;
}

}  // namespace wentzell
