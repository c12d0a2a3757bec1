#include "wentzell/mesh.hpp"

#include "wentzell/errors.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <string>

using namespace wentzell;
using namespace wentzell::testing;

namespace {

bool any_contains(const std::vector<std::string>& lines, const std::string& needle) {
  for (const auto& line : lines)
    if (line.find(needle) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST_CASE("structured annulus has the predicted entity counts") {
  const Mesh mesh = generate_annulus_mesh(1.0, 2.0, 2, 8);
  CHECK(mesh.vertex_count() == 24);
  CHECK(mesh.triangle_count() == 32);
  CHECK(mesh.boundary_edge_count() == 16);

  int gamma0 = 0;
  int gamma1 = 0;
  for (const BoundaryEdge& e : mesh.boundary_edges)
    (e.tag == EdgeTag::Gamma0 ? gamma0 : gamma1) += 1;
  CHECK(gamma0 == 8);
  CHECK(gamma1 == 8);
}

TEST_CASE("annulus boundary lengths are inscribed-polygon perimeters") {
  const Mesh mesh = generate_annulus_mesh(1.0, 2.0, 2, 8);
  const double pi = std::numbers::pi;
  CHECK(mesh.tagged_length(EdgeTag::Gamma1) ==
        doctest::Approx(2.0 * 2.0 * 8.0 * std::sin(pi / 8.0)).epsilon(1e-13));
  CHECK(mesh.tagged_length(EdgeTag::Gamma0) ==
        doctest::Approx(2.0 * 1.0 * 8.0 * std::sin(pi / 8.0)).epsilon(1e-13));
}

TEST_CASE("annulus vertices sit on concentric rings") {
  const double r0 = 0.5;
  const double R = 3.0;
  const int n_r = 3;
  const int n_theta = 10;
  const Mesh mesh = generate_annulus_mesh(r0, R, n_r, n_theta);
  for (int k = 0; k <= n_r; ++k) {
    const double r = r0 + (R - r0) * k / n_r;
    for (int j = 0; j < n_theta; ++j) {
      const Eigen::Vector2d& v = mesh.vertices[static_cast<size_t>(k * n_theta + j)];
      CHECK(v.norm() == doctest::Approx(r).epsilon(1e-14));
    }
  }
}

TEST_CASE("annulus parameter validation") {
  CHECK_THROWS_AS(generate_annulus_mesh(1.0, 1.0, 2, 8), ParameterError);
  CHECK_THROWS_AS(generate_annulus_mesh(2.0, 1.0, 2, 8), ParameterError);
  CHECK_THROWS_AS(generate_annulus_mesh(0.0, 1.0, 2, 8), ParameterError);
  CHECK_THROWS_AS(generate_annulus_mesh(-1.0, 1.0, 2, 8), ParameterError);
  CHECK_THROWS_AS(generate_annulus_mesh(1.0, 2.0, 1, 8), ParameterError);
  CHECK_THROWS_AS(generate_annulus_mesh(1.0, 2.0, 2, 6), ParameterError);
  CHECK_THROWS_AS(generate_annulus_mesh(1.0, 2.0, 2, 9), ParameterError);
}

TEST_CASE("generated meshes validate cleanly") {
  CHECK(validate_mesh(generate_annulus_mesh(1.0, 2.0, 2, 8)).empty());
  CHECK(validate_mesh(generate_annulus_mesh(0.3, 5.0, 5, 12)).empty());
  CHECK(validate_mesh(single_triangle_mesh()).empty());
  CHECK(validate_mesh(unit_square_mesh(4)).empty());
}

TEST_CASE("triangle areas are positive and sum to the annulus area") {
  const Mesh mesh = generate_annulus_mesh(1.0, 2.0, 32, 128);
  double total = 0.0;
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const double area = mesh.triangle_area(t);
    REQUIRE(area > 0.0);
    total += area;
  }
  const double exact = std::numbers::pi * (4.0 - 1.0);
  CHECK(std::abs(total - exact) / exact < 1e-3);
}

TEST_CASE("dof map splits annulus vertices into rings") {
  const Mesh mesh = generate_annulus_mesh(1.0, 2.0, 2, 8);
  const DofMap dofs = build_dof_map(mesh);
  CHECK(dofs.constrained_dofs.size() == 8);
  CHECK(dofs.free_dofs.size() == 16);
  CHECK(dofs.boundary_dofs.size() == 8);
  for (int v : dofs.constrained_dofs) CHECK(v < 8);        // inner ring
  for (int v : dofs.boundary_dofs) CHECK(v >= 16);         // outer ring
  for (int v = 0; v < mesh.vertex_count(); ++v)
    CHECK((dofs.is_constrained(v) ? 1 : 0) + (v >= 8 ? 1 : 0) == 1);
}

TEST_CASE("vertex joining both boundary parts is constrained") {
  const Mesh mesh = unit_square_mesh(3);
  const DofMap dofs = build_dof_map(mesh);
  // Vertex 0 is an endpoint of a Dirichlet edge and of a Wentzell edge.
  CHECK(dofs.is_constrained(0));
  CHECK(dofs.is_on_gamma1(0));
  const int top_left = 3 * 4;
  CHECK(dofs.is_constrained(top_left));
  CHECK(dofs.is_on_gamma1(top_left));
  // Interior vertices are free and not on the Wentzell closure.
  const int interior = 1 * 4 + 1;
  CHECK_FALSE(dofs.is_constrained(interior));
  CHECK_FALSE(dofs.is_on_gamma1(interior));
}

TEST_CASE("save and load round-trip the mesh exactly") {
  const Mesh original = generate_annulus_mesh(1.0, 2.718281828459045, 4, 16);
  const Mesh reloaded = load_mesh(save_mesh(original));
  REQUIRE(reloaded.vertex_count() == original.vertex_count());
  REQUIRE(reloaded.triangle_count() == original.triangle_count());
  REQUIRE(reloaded.boundary_edge_count() == original.boundary_edge_count());
  for (int v = 0; v < original.vertex_count(); ++v) {
    CHECK(reloaded.vertices[static_cast<size_t>(v)].x() ==
          original.vertices[static_cast<size_t>(v)].x());
    CHECK(reloaded.vertices[static_cast<size_t>(v)].y() ==
          original.vertices[static_cast<size_t>(v)].y());
  }
  for (int t = 0; t < original.triangle_count(); ++t)
    CHECK(reloaded.triangles[static_cast<size_t>(t)] ==
          original.triangles[static_cast<size_t>(t)]);
  for (int e = 0; e < original.boundary_edge_count(); ++e) {
    const BoundaryEdge& a = original.boundary_edges[static_cast<size_t>(e)];
    const BoundaryEdge& b = reloaded.boundary_edges[static_cast<size_t>(e)];
    CHECK(a.a == b.a);
    CHECK(a.b == b.b);
    CHECK(a.tag == b.tag);
    CHECK(a.length == b.length);
  }
}

TEST_CASE("load_mesh accepts comments and blank lines") {
  const std::string text =
      "# smallest valid mesh\n"
      "vertices 3\n"
      "0 0\n"
      "\n"
      "1 0\n"
      "0 1\n"
      "# connectivity\n"
      "triangles 1\n"
      "0 1 2\n"
      "boundary_edges 3\n"
      "0 1 0\n"
      "1 2 1\n"
      "2 0 1\n";
  const Mesh mesh = load_mesh(text);
  CHECK(mesh.vertex_count() == 3);
  CHECK(mesh.triangle_count() == 1);
  CHECK(mesh.boundary_edges[0].tag == EdgeTag::Gamma0);
  CHECK(mesh.boundary_edges[1].length == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("load_mesh reports parse errors with line numbers") {
  SUBCASE("vertex index beyond vertex count") {
    const std::string text =
        "vertices 3\n0 0\n1 0\n0 1\n"
        "triangles 1\n0 1 7\n"
        "boundary_edges 3\n0 1 0\n1 2 1\n2 0 1\n";
    CHECK_THROWS_WITH_AS(load_mesh(text),
                         doctest::Contains("line 6"), ParseError);
    CHECK_THROWS_WITH_AS(load_mesh(text),
                         doctest::Contains("out of range"), ParseError);
  }
  SUBCASE("malformed header") {
    CHECK_THROWS_WITH_AS(load_mesh("points 3\n"), doctest::Contains("vertices"), ParseError);
  }
  SUBCASE("truncated input") {
    CHECK_THROWS_AS(load_mesh("vertices 2\n0 0\n"), ParseError);
  }
  SUBCASE("bad boundary tag") {
    const std::string text =
        "vertices 3\n0 0\n1 0\n0 1\n"
        "triangles 1\n0 1 2\n"
        "boundary_edges 3\n0 1 0\n1 2 1\n2 0 5\n";
    CHECK_THROWS_WITH_AS(load_mesh(text), doctest::Contains("tag"), ParseError);
  }
  SUBCASE("trailing tokens on a data line") {
    CHECK_THROWS_WITH_AS(load_mesh("vertices 1\n0 0 0\ntriangles 0\nboundary_edges 0\n"),
                         doctest::Contains("trailing"), ParseError);
  }
  SUBCASE("content after the last section") {
    const std::string text =
        "vertices 3\n0 0\n1 0\n0 1\n"
        "triangles 1\n0 1 2\n"
        "boundary_edges 3\n0 1 0\n1 2 1\n2 0 1\n"
        "extra\n";
    CHECK_THROWS_WITH_AS(load_mesh(text), doctest::Contains("line 11"), ParseError);
  }
}

TEST_CASE("load_mesh rejects a mesh whose whole boundary is Wentzell") {
  const std::string text =
      "vertices 3\n0 0\n1 0\n0 1\n"
      "triangles 1\n0 1 2\n"
      "boundary_edges 3\n0 1 1\n1 2 1\n2 0 1\n";
  CHECK_THROWS_WITH_AS(load_mesh(text), doctest::Contains("GAMMA0 measure zero"), MeshError);
}

TEST_CASE("validate_mesh names an inverted triangle") {
  Mesh mesh = single_triangle_mesh();
  mesh.triangles[0] = {0, 2, 1};
  const auto diagnostics = validate_mesh(mesh);
  CHECK(any_contains(diagnostics, "triangle 0"));
  CHECK(any_contains(diagnostics, "non-positive"));
}

TEST_CASE("validate_mesh flags a boundary edge interior to the mesh") {
  Mesh mesh;
  mesh.vertices = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}};
  mesh.triangles = {{0, 1, 3}, {0, 3, 2}};
  mesh.boundary_edges = {edge_of(mesh, 0, 1, EdgeTag::Gamma0),
                         edge_of(mesh, 1, 3, EdgeTag::Gamma1),
                         edge_of(mesh, 3, 2, EdgeTag::Gamma1),
                         edge_of(mesh, 2, 0, EdgeTag::Gamma1)};
  REQUIRE(validate_mesh(mesh).empty());
  mesh.boundary_edges.push_back(edge_of(mesh, 0, 3, EdgeTag::Gamma1));
  CHECK(any_contains(validate_mesh(mesh), "non-manifold boundary"));
}

TEST_CASE("validate_mesh flags structural defects") {
  SUBCASE("undeclared boundary edge") {
    Mesh mesh = single_triangle_mesh();
    mesh.boundary_edges.pop_back();
    const auto diagnostics = validate_mesh(mesh);
    CHECK(any_contains(diagnostics, "not declared"));
  }
  SUBCASE("duplicate declaration") {
    Mesh mesh = single_triangle_mesh();
    mesh.boundary_edges.push_back(mesh.boundary_edges[1]);
    CHECK(any_contains(validate_mesh(mesh), "more than once"));
  }
  SUBCASE("edge referencing a missing vertex") {
    Mesh mesh = single_triangle_mesh();
    mesh.boundary_edges[1].b = 9;
    CHECK(any_contains(validate_mesh(mesh), "out of range"));
  }
  SUBCASE("stored length disagrees with the geometry") {
    Mesh mesh = single_triangle_mesh();
    mesh.boundary_edges[0].length = 2.0;
    CHECK(any_contains(validate_mesh(mesh), "length"));
  }
  SUBCASE("no Wentzell edges") {
    Mesh mesh = single_triangle_mesh();
    for (BoundaryEdge& e : mesh.boundary_edges) e.tag = EdgeTag::Gamma0;
    CHECK(any_contains(validate_mesh(mesh), "GAMMA1"));
  }
}
