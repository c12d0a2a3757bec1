#pragma once

#include "wentzell/mesh.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <random>

namespace wentzell::testing {

inline BoundaryEdge edge_of(const Mesh& mesh, int a, int b, EdgeTag tag) {
  return BoundaryEdge{a, b, tag, mesh.edge_length(a, b)};
}

/// Smallest valid mesh: one triangle, Dirichlet hypotenuse-free leg, the two
/// remaining sides Wentzell.
inline Mesh single_triangle_mesh() {
  Mesh mesh;
  mesh.vertices = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
  mesh.triangles = {{0, 1, 2}};
  mesh.boundary_edges = {edge_of(mesh, 0, 1, EdgeTag::Gamma0),
                         edge_of(mesh, 1, 2, EdgeTag::Gamma1),
                         edge_of(mesh, 2, 0, EdgeTag::Gamma1)};
  return mesh;
}

/// Unit square on an n x n grid, Dirichlet on the side x = 0, Wentzell on the
/// other three sides. The corners (0,0) and (0,1) join both boundary parts.
inline Mesh unit_square_mesh(int n) {
  Mesh mesh;
  auto vid = [n](int i, int j) { return i * (n + 1) + j; };
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j)
      mesh.vertices.emplace_back(static_cast<double>(j) / n, static_cast<double>(i) / n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const int a = vid(i, j);
      const int b = vid(i, j + 1);
      const int c = vid(i + 1, j + 1);
      const int d = vid(i + 1, j);
      mesh.triangles.push_back({a, b, c});
      mesh.triangles.push_back({a, c, d});
    }
  }
  for (int i = 0; i < n; ++i)
    mesh.boundary_edges.push_back(edge_of(mesh, vid(i, 0), vid(i + 1, 0), EdgeTag::Gamma0));
  for (int j = 0; j < n; ++j)
    mesh.boundary_edges.push_back(edge_of(mesh, vid(0, j), vid(0, j + 1), EdgeTag::Gamma1));
  for (int i = 0; i < n; ++i)
    mesh.boundary_edges.push_back(edge_of(mesh, vid(i, n), vid(i + 1, n), EdgeTag::Gamma1));
  for (int j = 0; j < n; ++j)
    mesh.boundary_edges.push_back(edge_of(mesh, vid(n, j), vid(n, j + 1), EdgeTag::Gamma1));
  return mesh;
}

inline Eigen::VectorXd random_vector(int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = dist(rng);
  return v;
}

inline Eigen::VectorXd random_admissible(const Mesh& mesh, const DofMap& dofs, unsigned seed) {
  Eigen::VectorXd v = random_vector(mesh.vertex_count(), seed);
  for (int c : dofs.constrained_dofs) v[c] = 0.0;
  return v;
}

/// Nodal interpolant of ln|x|; admissible on annuli with inner radius 1.
inline Eigen::VectorXd log_radius_interpolant(const Mesh& mesh) {
  Eigen::VectorXd v(mesh.vertex_count());
  for (int i = 0; i < mesh.vertex_count(); ++i)
    v[i] = std::log(mesh.vertices[static_cast<size_t>(i)].norm());
  return v;
}

/// Recursive adaptive Simpson quadrature; an integration path independent of
/// any closed form under test.
template <typename F>
double adaptive_simpson(const F& f, double a, double b, double tol, int depth = 0) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double left = (m - a) / 6.0 * (fa + 4.0 * f(lm) + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * f(rm) + fb);
  if (depth > 40 || std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, a, m, 0.5 * tol, depth + 1) +
         adaptive_simpson(f, m, b, 0.5 * tol, depth + 1);
}

/// Same vertices, triangles and edges listed in a different order.
inline Mesh shuffled_mesh(const Mesh& mesh, unsigned seed) {
  Mesh out = mesh;
  std::mt19937_64 rng(seed);
  std::shuffle(out.triangles.begin(), out.triangles.end(), rng);
  std::shuffle(out.boundary_edges.begin(), out.boundary_edges.end(), rng);
  return out;
}

}  // namespace wentzell::testing
