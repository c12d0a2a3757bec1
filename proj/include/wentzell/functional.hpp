#pragma once

#include "wentzell/assembly.hpp"
#include "wentzell/config.hpp"
#include "wentzell/mesh.hpp"

#include <Eigen/SparseCholesky>

#include <memory>

namespace wentzell {

/// One discretized variational problem: geometry, cached operators, the
/// combined inner-product matrix and its factorization. Immutable; cheap to
/// copy (the factorization is shared).
struct Problem {
  Mesh mesh;
  DofMap dofs;
  AssembledSystem system;
  SparseOperator h1_matrix;  // interior + boundary stiffness, constrained
  std::shared_ptr<const Eigen::SimplicialLLT<SparseOperator>> h1_factor;
};

Problem make_problem(Mesh mesh, double p);

struct EnergyReport {
  double energy_I = 0.0;
  double nehari_K = 0.0;
  double h1_norm = 0.0;
  double trace_p_norm = 0.0;
  double weak_residual = 0.0;
  double lambda1_residual = 0.0;
  double lambda2_residual = 0.0;
};

struct DepthEstimate {
  double B = 0.0;        // best discrete trace quotient
  double lambda1 = 0.0;  // B^{-p/(p-2)}
  double lambda2 = 0.0;  // B^{-2/(p-2)}
  double depth_d = 0.0;  // (1/2 - 1/p) * lambda1^2, mesh-dependent
  DiscreteFunction maximizer;
};

struct EnergyGradient {
  Eigen::VectorXd dual;     // pairing against every free hat function
  DiscreteFunction riesz;   // representative in the combined inner product
};

struct RayScaling {
  double lambda_u = 0.0;  // unique positive maximizer of lambda -> I(lambda u)
  double ray_max = 0.0;   // the maximal value
};

/// Combined inner product (interior gradients plus tangential gradients on
/// the Wentzell boundary). Exact for admissible u, v.
double h1_inner(const Problem& problem, const DiscreteFunction& u, const DiscreteFunction& v);
double h1_norm_sq(const Problem& problem, const DiscreteFunction& u);

/// Riesz representative: solve h1_matrix * x = dual (zero at constrained dofs).
Eigen::VectorXd riesz_solve(const Problem& problem, const Eigen::VectorXd& dual);

double energy(const Problem& problem, const DiscreteFunction& u);
EnergyGradient energy_gradient(const Problem& problem, const DiscreteFunction& u);
double nehari_value(const Problem& problem, const DiscreteFunction& u);

/// Euclidean norm of the weak-form residual over free dofs.
double weak_residual_norm(const Problem& problem, const DiscreteFunction& u);

RayScaling ray_scaling_from_norms(double h1_norm, double trace_p_norm, double p);
RayScaling ray_scaling(const Problem& problem, const DiscreteFunction& u);

/// Maximize the trace quotient ||u||_{p,Gamma1} / ||u||_{H1} by normalized
/// Barzilai-Borwein ascent with multistarts; derive lambda1, lambda2 and the
/// well depth from the achieved quotient. Throws ConvergenceError only when
/// every start fails.
DepthEstimate compute_depth(const Problem& problem, const SolverConfig& config);

EnergyReport solution_report(const Problem& problem, const DiscreteFunction& u,
                             const DepthEstimate& depth);

}  // namespace wentzell
