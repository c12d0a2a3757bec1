#pragma once

#include "wentzell/mesh.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace wentzell {

/// Symmetric sparse bilinear form over the global vertex numbering.
using SparseOperator = Eigen::SparseMatrix<double>;

/// Nodal values of a P1 function, one entry per mesh vertex. Admissible
/// functions vanish at constrained (Gamma0) vertices.
using DiscreteFunction = Eigen::VectorXd;

/// Quadrature rule on the reference edge [0,1]; weights sum to 1.
struct GaussRule {
  Eigen::VectorXd points;
  Eigen::VectorXd weights;
};

/// 4-point Gauss-Legendre rule, exact for polynomials of degree 7.
const GaussRule& gauss_legendre_4();

/// All u-independent operators for one (mesh, p) pair.
struct AssembledSystem {
  SparseOperator interior_stiffness;  // Dirichlet rows/cols wiped, unit diagonal
  SparseOperator boundary_stiffness;  // raw, rows only at Gamma1-closure dofs
  SparseOperator boundary_mass;       // raw, rows only at Gamma1-closure dofs
  GaussRule quadrature;
  double p = 0.0;
};

/// P1 stiffness of the interior Dirichlet form, with constrained rows and
/// columns zeroed and a unit diagonal put in their place.
SparseOperator assemble_interior_stiffness(const Mesh& mesh, const DofMap& dofs);

/// 1-D P1 stiffness along the Gamma1 polyline (arc-length Laplacian); per
/// edge of length h the local matrix is (1/h)[[1,-1],[-1,1]]. No constraint
/// handling: wiping happens when operators are combined, so that constants
/// stay in the kernel of this operator alone.
SparseOperator assemble_boundary_stiffness(const Mesh& mesh);

/// Lumped-free consistent P1 mass along Gamma1; per edge (h/6)[[2,1],[1,2]].
SparseOperator assemble_boundary_mass(const Mesh& mesh);

/// Zero constrained rows/columns of a symmetric operator and set a unit
/// diagonal there. Idempotent.
SparseOperator apply_dirichlet(const SparseOperator& op, const DofMap& dofs);

AssembledSystem assemble_system(const Mesh& mesh, const DofMap& dofs, double p);

/// Integral of |u|^p over Gamma1, evaluated edge by edge with the given rule.
double boundary_p_integral(const Mesh& mesh, const DiscreteFunction& u, double p,
                           const GaussRule& rule = gauss_legendre_4());

/// Dual vector of the superlinear boundary term: component i equals
/// the integral of |u|^{p-2} u phi_i over Gamma1. Zero at constrained dofs
/// and at dofs off the Gamma1 closure.
Eigen::VectorXd boundary_p_form(const Mesh& mesh, const DofMap& dofs,
                                const DiscreteFunction& u, double p,
                                const GaussRule& rule = gauss_legendre_4());

/// Second derivative of (1/p) * integral |u|^p: the bilinear form
/// (p-1) * integral_{Gamma1} |u|^{p-2} phi_i phi_j, constrained rows and
/// columns zeroed (no unit diagonal).
SparseOperator boundary_p_hessian(const Mesh& mesh, const DofMap& dofs,
                                  const DiscreteFunction& u, double p,
                                  const GaussRule& rule = gauss_legendre_4());

}  // namespace wentzell
