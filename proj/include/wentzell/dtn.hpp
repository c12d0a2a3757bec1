#pragma once

#include "wentzell/functional.hpp"

#include <utility>
#include <vector>

namespace wentzell {

/// Boundary trace stored full-length: values at boundary vertices, zero at
/// interior vertices; admissible traces are also zero at Gamma0 vertices.
using BoundaryFunction = Eigen::VectorXd;

/// Harmonic extension (Dirichlet operator) with one cached factorization of
/// the interior block; also applies the Dirichlet-to-Neumann form without
/// ever assembling it as a matrix.
class HarmonicExtensionSolver {
 public:
  explicit HarmonicExtensionSolver(const Problem& problem);

  const Problem& problem() const { return *problem_; }
  const std::vector<int>& interior_vertices() const { return interior_; }

  /// Zero out interior vertices; boundary values pass through.
  BoundaryFunction trace(const DiscreteFunction& u) const;

  /// Discretely harmonic in the interior, equal to v at boundary vertices.
  DiscreteFunction extend(const BoundaryFunction& v) const;

  /// Pairing of the Dirichlet-to-Neumann operator with every boundary hat:
  /// component i of the result is the interior gradient pairing of the
  /// extensions of v and of hat i. Zero at interior and constrained dofs.
  Eigen::VectorXd dtn_apply(const BoundaryFunction& v) const;

  double dtn_form(const BoundaryFunction& v, const BoundaryFunction& w) const;

 private:
  const Problem* problem_;
  std::vector<int> interior_;        // vertices incident to no boundary edge
  std::vector<int> interior_index_;  // vertex -> interior position, or -1
  Eigen::SimplicialLLT<SparseOperator> interior_factor_;
};

/// Boundary-only energy: interior Dirichlet energy of the extension plus the
/// tangential term minus the superlinear boundary term.
double boundary_energy(const HarmonicExtensionSolver& solver, const BoundaryFunction& v);

/// Differential of boundary_energy against boundary hats; zero at interior
/// and constrained dofs.
Eigen::VectorXd boundary_gradient(const HarmonicExtensionSolver& solver,
                                  const BoundaryFunction& v);

/// Split u into its harmonic part (extension of the trace) and the interior
/// remainder; the parts are orthogonal in the combined inner product.
std::pair<DiscreteFunction, DiscreteFunction> harmonic_projection(
    const HarmonicExtensionSolver& solver, const DiscreteFunction& u);

/// Unconstrained vertices on the Gamma1 closure, ascending.
std::vector<int> boundary_free_dofs(const DofMap& dofs);

}  // namespace wentzell
