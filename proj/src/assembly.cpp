#include "wentzell/assembly.hpp"

#include "wentzell/errors.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace wentzell {

const GaussRule& gauss_legendre_4() {
  static const GaussRule rule = [] {
    GaussRule r;
    const double x1 = 0.33998104358485626;
    const double x2 = 0.86113631159405258;
    const double w1 = 0.65214515486254614;
    const double w2 = 0.34785484513745385;
    r.points.resize(4);
    r.weights.resize(4);
    r.points << 0.5 * (1.0 - x2), 0.5 * (1.0 - x1), 0.5 * (1.0 + x1), 0.5 * (1.0 + x2);
    r.weights << 0.5 * w2, 0.5 * w1, 0.5 * w1, 0.5 * w2;
    return r;
  }();
  return rule;
}

namespace {

void require_p(double p) {
  if (!(p > 2.0)) throw ParameterError("exponent p must exceed 2");
}

SparseOperator from_triplets(int n, const std::vector<Eigen::Triplet<double>>& triplets) {
  SparseOperator op(n, n);
  op.setFromTriplets(triplets.begin(), triplets.end());
  return op;
}

double edge_length_checked(const Mesh& mesh, const BoundaryEdge& edge) {
  if (!(edge.length > 0.0))
    throw MeshError("boundary edge (" + std::to_string(edge.a) + "," +
                    std::to_string(edge.b) + ") has zero length");
  (void)mesh;
  return edge.length;
}

}  // namespace

SparseOperator assemble_interior_stiffness(const Mesh& mesh, const DofMap& dofs) {
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<size_t>(9 * mesh.triangle_count()));
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const double area = mesh.triangle_area(t);
    if (!(area > 0.0))
      throw MeshError("cannot assemble stiffness: triangle " + std::to_string(t) +
                      " has non-positive area");
    const auto& tri = mesh.triangles[static_cast<size_t>(t)];
    // Edge vector opposite vertex i; nabla lambda_i is its quarter-turn / 2A,
    // so the local stiffness entries are dot products of opposite edges.
    std::array<Eigen::Vector2d, 3> opp;
    for (int i = 0; i < 3; ++i)
      opp[static_cast<size_t>(i)] = mesh.vertices[static_cast<size_t>(tri[(i + 2) % 3])] -
                                    mesh.vertices[static_cast<size_t>(tri[(i + 1) % 3])];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        triplets.emplace_back(tri[static_cast<size_t>(i)], tri[static_cast<size_t>(j)],
                              opp[static_cast<size_t>(i)].dot(opp[static_cast<size_t>(j)]) /
                                  (4.0 * area));
  }
  return apply_dirichlet(from_triplets(mesh.vertex_count(), triplets), dofs);
}

SparseOperator assemble_boundary_stiffness(const Mesh& mesh) {
  std::vector<Eigen::Triplet<double>> triplets;
  for (const BoundaryEdge& e : mesh.boundary_edges) {
    if (e.tag != EdgeTag::Gamma1) continue;
    const double w = 1.0 / edge_length_checked(mesh, e);
    triplets.emplace_back(e.a, e.a, w);
    triplets.emplace_back(e.b, e.b, w);
    triplets.emplace_back(e.a, e.b, -w);
    triplets.emplace_back(e.b, e.a, -w);
  }
  return from_triplets(mesh.vertex_count(), triplets);
}

SparseOperator assemble_boundary_mass(const Mesh& mesh) {
  std::vector<Eigen::Triplet<double>> triplets;
  for (const BoundaryEdge& e : mesh.boundary_edges) {
    if (e.tag != EdgeTag::Gamma1) continue;
    const double h = edge_length_checked(mesh, e);
    triplets.emplace_back(e.a, e.a, h / 3.0);
    triplets.emplace_back(e.b, e.b, h / 3.0);
    triplets.emplace_back(e.a, e.b, h / 6.0);
    triplets.emplace_back(e.b, e.a, h / 6.0);
  }
  return from_triplets(mesh.vertex_count(), triplets);
}

SparseOperator apply_dirichlet(const SparseOperator& op, const DofMap& dofs) {
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<size_t>(op.nonZeros()) + dofs.constrained_dofs.size());
  for (int k = 0; k < op.outerSize(); ++k)
    for (SparseOperator::InnerIterator it(op, k); it; ++it)
      if (!dofs.is_constrained(static_cast<int>(it.row())) &&
          !dofs.is_constrained(static_cast<int>(it.col())))
        triplets.emplace_back(it.row(), it.col(), it.value());
  for (int v : dofs.constrained_dofs) triplets.emplace_back(v, v, 1.0);
  return from_triplets(static_cast<int>(op.rows()), triplets);
}

AssembledSystem assemble_system(const Mesh& mesh, const DofMap& dofs, double p) {
  require_p(p);
  AssembledSystem system;
  system.interior_stiffness = assemble_interior_stiffness(mesh, dofs);
  system.boundary_stiffness = assemble_boundary_stiffness(mesh);
  system.boundary_mass = assemble_boundary_mass(mesh);
  system.quadrature = gauss_legendre_4();
  system.p = p;
  return system;
}

double boundary_p_integral(const Mesh& mesh, const DiscreteFunction& u, double p,
                           const GaussRule& rule) {
  require_p(p);
  double total = 0.0;
  for (const BoundaryEdge& e : mesh.boundary_edges) {
    if (e.tag != EdgeTag::Gamma1) continue;
    const double ua = u[e.a];
    const double ub = u[e.b];
    double edge_sum = 0.0;
    for (int q = 0; q < rule.points.size(); ++q) {
      const double v = ua + (ub - ua) * rule.points[q];
      edge_sum += rule.weights[q] * std::pow(std::abs(v), p);
    }
    total += e.length * edge_sum;
  }
  return total;
}

Eigen::VectorXd boundary_p_form(const Mesh& mesh, const DofMap& dofs,
                                const DiscreteFunction& u, double p, const GaussRule& rule) {
  require_p(p);
  Eigen::VectorXd form = Eigen::VectorXd::Zero(mesh.vertex_count());
  for (const BoundaryEdge& e : mesh.boundary_edges) {
    if (e.tag != EdgeTag::Gamma1) continue;
    const double ua = u[e.a];
    const double ub = u[e.b];
    double to_a = 0.0;
    double to_b = 0.0;
    for (int q = 0; q < rule.points.size(); ++q) {
      const double x = rule.points[q];
      const double v = ua + (ub - ua) * x;
      const double g = rule.weights[q] * std::copysign(std::pow(std::abs(v), p - 1.0), v);
      to_a += g * (1.0 - x);
      to_b += g * x;
    }
    form[e.a] += e.length * to_a;
    form[e.b] += e.length * to_b;
  }
  for (int v : dofs.constrained_dofs) form[v] = 0.0;
  return form;
}

SparseOperator boundary_p_hessian(const Mesh& mesh, const DofMap& dofs,
                                  const DiscreteFunction& u, double p, const GaussRule& rule) {
  require_p(p);
  std::vector<Eigen::Triplet<double>> triplets;
  for (const BoundaryEdge& e : mesh.boundary_edges) {
    if (e.tag != EdgeTag::Gamma1) continue;
    const double ua = u[e.a];
    const double ub = u[e.b];
    double aa = 0.0;
    double ab = 0.0;
    double bb = 0.0;
    for (int q = 0; q < rule.points.size(); ++q) {
      const double x = rule.points[q];
      const double v = ua + (ub - ua) * x;
      const double w = rule.weights[q] * (p - 1.0) * std::pow(std::abs(v), p - 2.0);
      aa += w * (1.0 - x) * (1.0 - x);
      ab += w * (1.0 - x) * x;
      bb += w * x * x;
    }
    const bool drop_a = dofs.is_constrained(e.a);
    const bool drop_b = dofs.is_constrained(e.b);
    if (!drop_a) triplets.emplace_back(e.a, e.a, e.length * aa);
    if (!drop_b) triplets.emplace_back(e.b, e.b, e.length * bb);
    if (!drop_a && !drop_b) {
      triplets.emplace_back(e.a, e.b, e.length * ab);
      triplets.emplace_back(e.b, e.a, e.length * ab);
    }
  }
  return from_triplets(mesh.vertex_count(), triplets);
}

}  // namespace wentzell
