#pragma once

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace wentzell {

enum class EdgeTag : int { Gamma0 = 0, Gamma1 = 1 };

struct BoundaryEdge {
  int a = 0;
  int b = 0;
  EdgeTag tag = EdgeTag::Gamma0;
  double length = 0.0;
};

/// Triangulated planar domain whose boundary is partitioned into a Dirichlet
/// part (Gamma0) and a Wentzell part (Gamma1). Immutable after construction.
struct Mesh {
  std::vector<Eigen::Vector2d> vertices;
  std::vector<std::array<int, 3>> triangles;  // counterclockwise
  std::vector<BoundaryEdge> boundary_edges;

  int vertex_count() const { return static_cast<int>(vertices.size()); }
  int triangle_count() const { return static_cast<int>(triangles.size()); }
  int boundary_edge_count() const { return static_cast<int>(boundary_edges.size()); }

  double triangle_area(int t) const;
  double edge_length(int a, int b) const;

  /// Total polyline length of the edges carrying the given tag.
  double tagged_length(EdgeTag tag) const;
};

/// Vertex classification induced by the Dirichlet part of the boundary:
/// every endpoint of a Gamma0 edge is constrained (nodal value pinned to 0),
/// including vertices shared with Gamma1 edges.
struct DofMap {
  std::vector<int> free_dofs;
  std::vector<int> constrained_dofs;
  std::vector<int> boundary_dofs;         // vertices on the closure of Gamma1
  std::vector<std::uint8_t> constrained;  // per-vertex flag
  std::vector<std::uint8_t> on_gamma1;    // per-vertex flag (closure of Gamma1)

  bool is_constrained(int v) const { return constrained[static_cast<size_t>(v)] != 0; }
  bool is_on_gamma1(int v) const { return on_gamma1[static_cast<size_t>(v)] != 0; }
};

/// Structured annulus r0 < |x| < R with the inner circle tagged Gamma0 and
/// the outer circle tagged Gamma1. n_theta must be even and >= 8, n_r >= 2.
Mesh generate_annulus_mesh(double r0, double R, int n_r, int n_theta);

/// Parse a mesh from file content. Throws ParseError with a line number on
/// malformed input and MeshError when the parsed mesh fails validate_mesh.
Mesh load_mesh(const std::string& text);

/// Convenience wrapper: read the file at `path` and call load_mesh.
Mesh load_mesh_file(const std::string& path);

void save_mesh(const Mesh& mesh, std::ostream& out);
std::string save_mesh(const Mesh& mesh);
void save_mesh_file(const Mesh& mesh, const std::string& path);

/// Check all structural invariants. Returns one human-readable line per
/// violation, naming the offending entity; empty means valid.
std::vector<std::string> validate_mesh(const Mesh& mesh);

/// Classify vertices. Requires a valid mesh.
DofMap build_dof_map(const Mesh& mesh);

}  // namespace wentzell
