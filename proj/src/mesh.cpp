#include "wentzell/mesh.hpp"

#include "wentzell/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <utility>

namespace wentzell {

double Mesh::triangle_area(int t) const {
  const auto& tri = triangles[static_cast<size_t>(t)];
  const Eigen::Vector2d& a = vertices[static_cast<size_t>(tri[0])];
  const Eigen::Vector2d& b = vertices[static_cast<size_t>(tri[1])];
  const Eigen::Vector2d& c = vertices[static_cast<size_t>(tri[2])];
  const Eigen::Vector2d ab = b - a;
  const Eigen::Vector2d ac = c - a;
  return 0.5 * (ab.x() * ac.y() - ab.y() * ac.x());
}

double Mesh::edge_length(int a, int b) const {
  return (vertices[static_cast<size_t>(b)] - vertices[static_cast<size_t>(a)]).norm();
}

double Mesh::tagged_length(EdgeTag tag) const {
  double total = 0.0;
  for (const BoundaryEdge& e : boundary_edges)
    if (e.tag == tag) total += e.length;
  return total;
}

Mesh generate_annulus_mesh(double r0, double R, int n_r, int n_theta) {
  if (!(r0 > 0.0)) throw ParameterError("annulus inner radius must be positive");
  if (!(R > r0)) throw ParameterError("annulus outer radius must exceed inner radius");
  if (n_r < 2) throw ParameterError("annulus needs at least 2 radial divisions");
  if (n_theta < 8 || n_theta % 2 != 0)
    throw ParameterError("annulus needs an even number of angular divisions, at least 8");

  Mesh mesh;
  mesh.vertices.reserve(static_cast<size_t>((n_r + 1) * n_theta));
  for (int k = 0; k <= n_r; ++k) {
    const double r = r0 + (R - r0) * static_cast<double>(k) / n_r;
    for (int j = 0; j < n_theta; ++j) {
      const double theta = 2.0 * std::numbers::pi * static_cast<double>(j) / n_theta;
      mesh.vertices.emplace_back(r * std::cos(theta), r * std::sin(theta));
    }
  }

  // Split each quad of the structured grid into two counterclockwise triangles.
  mesh.triangles.reserve(static_cast<size_t>(2 * n_r * n_theta));
  auto vid = [n_theta](int k, int j) { return k * n_theta + (j % n_theta); };
  for (int k = 0; k < n_r; ++k) {
    for (int j = 0; j < n_theta; ++j) {
      const int a = vid(k, j);
      const int b = vid(k, j + 1);
      const int c = vid(k + 1, j + 1);
      const int d = vid(k + 1, j);
      mesh.triangles.push_back({a, d, c});
      mesh.triangles.push_back({a, c, b});
    }
  }

  for (int j = 0; j < n_theta; ++j) {
    BoundaryEdge inner{vid(0, j), vid(0, j + 1), EdgeTag::Gamma0, 0.0};
    inner.length = mesh.edge_length(inner.a, inner.b);
    mesh.boundary_edges.push_back(inner);
  }
  for (int j = 0; j < n_theta; ++j) {
    BoundaryEdge outer{vid(n_r, j), vid(n_r, j + 1), EdgeTag::Gamma1, 0.0};
    outer.length = mesh.edge_length(outer.a, outer.b);
    mesh.boundary_edges.push_back(outer);
  }
  return mesh;
}

namespace {

struct LineReader {
  std::istringstream stream;
  int line_number = 0;

  explicit LineReader(const std::string& text) : stream(text) {}

  /// Next non-blank, non-comment line, or empty optional at end of input.
  std::optional<std::string> next() {
    std::string line;
    while (std::getline(stream, line)) {
      ++line_number;
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      return line;
    }
    return std::nullopt;
  }
};

[[noreturn]] void parse_fail(int line, const std::string& what) {
  throw ParseError("line " + std::to_string(line) + ": " + what);
}

std::string require_line(LineReader& reader, const std::string& expectation) {
  auto line = reader.next();
  if (!line) parse_fail(reader.line_number, "unexpected end of input, expected " + expectation);
  return *line;
}

int parse_header(LineReader& reader, const std::string& keyword) {
  const std::string line = require_line(reader, "'" + keyword + " <count>'");
  std::istringstream fields(line);
  std::string word;
  long long count = -1;
  if (!(fields >> word) || word != keyword || !(fields >> count) || count < 0)
    parse_fail(reader.line_number, "expected '" + keyword + " <count>', got '" + line + "'");
  std::string extra;
  if (fields >> extra) parse_fail(reader.line_number, "trailing content '" + extra + "'");
  return static_cast<int>(count);
}

int parse_vertex_index(LineReader& reader, std::istringstream& fields, int vertex_count,
                       const std::string& what) {
  long long idx = 0;
  if (!(fields >> idx)) parse_fail(reader.line_number, "expected " + what);
  if (idx < 0 || idx >= vertex_count)
    parse_fail(reader.line_number,
               what + " " + std::to_string(idx) + " out of range [0, " +
                   std::to_string(vertex_count) + ")");
  return static_cast<int>(idx);
}

void require_line_end(LineReader& reader, std::istringstream& fields) {
  std::string extra;
  if (fields >> extra) parse_fail(reader.line_number, "trailing content '" + extra + "'");
}

}  // namespace

Mesh load_mesh(const std::string& text) {
  LineReader reader(text);
  Mesh mesh;

  const int n_vertices = parse_header(reader, "vertices");
  mesh.vertices.reserve(static_cast<size_t>(n_vertices));
  for (int i = 0; i < n_vertices; ++i) {
    std::istringstream fields(require_line(reader, "vertex coordinates"));
    double x = 0.0;
    double y = 0.0;
    if (!(fields >> x >> y)) parse_fail(reader.line_number, "expected 'x y' coordinates");
    require_line_end(reader, fields);
    mesh.vertices.emplace_back(x, y);
  }

  const int n_triangles = parse_header(reader, "triangles");
  mesh.triangles.reserve(static_cast<size_t>(n_triangles));
  for (int i = 0; i < n_triangles; ++i) {
    std::istringstream fields(require_line(reader, "triangle vertex indices"));
    std::array<int, 3> tri{};
    for (int& v : tri) v = parse_vertex_index(reader, fields, n_vertices, "triangle vertex index");
    require_line_end(reader, fields);
    mesh.triangles.push_back(tri);
  }

  const int n_edges = parse_header(reader, "boundary_edges");
  mesh.boundary_edges.reserve(static_cast<size_t>(n_edges));
  for (int i = 0; i < n_edges; ++i) {
    std::istringstream fields(require_line(reader, "boundary edge"));
    BoundaryEdge edge;
    edge.a = parse_vertex_index(reader, fields, n_vertices, "boundary edge vertex index");
    edge.b = parse_vertex_index(reader, fields, n_vertices, "boundary edge vertex index");
    int tag = -1;
    if (!(fields >> tag) || (tag != 0 && tag != 1))
      parse_fail(reader.line_number, "expected boundary tag 0 or 1");
    require_line_end(reader, fields);
    edge.tag = tag == 0 ? EdgeTag::Gamma0 : EdgeTag::Gamma1;
    edge.length = mesh.edge_length(edge.a, edge.b);
    mesh.boundary_edges.push_back(edge);
  }

  if (auto line = reader.next())
    parse_fail(reader.line_number, "unexpected content after boundary edges: '" + *line + "'");

  const std::vector<std::string> diagnostics = validate_mesh(mesh);
  if (!diagnostics.empty()) {
    std::string message = "invalid mesh:";
    for (const std::string& d : diagnostics) message += "\n  " + d;
    throw MeshError(message);
  }
  return mesh;
}

Mesh load_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open mesh file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return load_mesh(buffer.str());
}

void save_mesh(const Mesh& mesh, std::ostream& out) {
  out << std::setprecision(17);
  out << "vertices " << mesh.vertex_count() << "\n";
  for (const Eigen::Vector2d& v : mesh.vertices) out << v.x() << " " << v.y() << "\n";
  out << "triangles " << mesh.triangle_count() << "\n";
  for (const auto& t : mesh.triangles) out << t[0] << " " << t[1] << " " << t[2] << "\n";
  out << "boundary_edges " << mesh.boundary_edge_count() << "\n";
  for (const BoundaryEdge& e : mesh.boundary_edges)
    out << e.a << " " << e.b << " " << (e.tag == EdgeTag::Gamma0 ? 0 : 1) << "\n";
}

std::string save_mesh(const Mesh& mesh) {
  std::ostringstream out;
  save_mesh(mesh, out);
  return out.str();
}

void save_mesh_file(const Mesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open '" + path + "' for writing");
  save_mesh(mesh, out);
}

std::vector<std::string> validate_mesh(const Mesh& mesh) {
  std::vector<std::string> diagnostics;
  const int nv = mesh.vertex_count();
  auto complain = [&diagnostics](const std::string& what) { diagnostics.push_back(what); };

  bool indices_ok = true;
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const auto& tri = mesh.triangles[static_cast<size_t>(t)];
    for (int v : tri)
      if (v < 0 || v >= nv) {
        complain("triangle " + std::to_string(t) + " references vertex " + std::to_string(v) +
                 " out of range");
        indices_ok = false;
      }
    if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2]) {
      complain("triangle " + std::to_string(t) + " repeats a vertex");
      indices_ok = false;
    }
  }
  for (int e = 0; e < mesh.boundary_edge_count(); ++e) {
    const BoundaryEdge& edge = mesh.boundary_edges[static_cast<size_t>(e)];
    for (int v : {edge.a, edge.b})
      if (v < 0 || v >= nv) {
        complain("boundary edge " + std::to_string(e) + " references vertex " +
                 std::to_string(v) + " out of range");
        indices_ok = false;
      }
    if (edge.a == edge.b) {
      complain("boundary edge " + std::to_string(e) + " is degenerate (both endpoints " +
               std::to_string(edge.a) + ")");
      indices_ok = false;
    }
  }
  if (!indices_ok) return diagnostics;  // remaining checks assume well-formed indices

  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const double area = mesh.triangle_area(t);
    if (!(area > 0.0))
      complain("triangle " + std::to_string(t) + " has non-positive signed area " +
               std::to_string(area));
  }

  // Count, for every undirected triangle edge, how many triangles contain it.
  std::map<std::pair<int, int>, int> edge_use;
  for (const auto& tri : mesh.triangles) {
    for (int side = 0; side < 3; ++side) {
      const int a = tri[static_cast<size_t>(side)];
      const int b = tri[static_cast<size_t>((side + 1) % 3)];
      ++edge_use[std::minmax(a, b)];
    }
  }

  std::map<std::pair<int, int>, int> boundary_seen;
  std::map<int, int> boundary_degree;
  for (int e = 0; e < mesh.boundary_edge_count(); ++e) {
    const BoundaryEdge& edge = mesh.boundary_edges[static_cast<size_t>(e)];
    const auto key = std::minmax(edge.a, edge.b);
    const std::string name =
        "(" + std::to_string(edge.a) + "," + std::to_string(edge.b) + ")";

    if (++boundary_seen[key] == 2)
      complain("boundary edge " + name + " declared more than once");

    const auto use = edge_use.find(key);
    if (use == edge_use.end())
      complain("boundary edge " + name + " is not an edge of any triangle");
    else if (use->second != 1)
      complain("non-manifold boundary: edge " + name + " belongs to " +
               std::to_string(use->second) + " triangles");

    ++boundary_degree[edge.a];
    ++boundary_degree[edge.b];

    const double chord = mesh.edge_length(edge.a, edge.b);
    if (std::abs(edge.length - chord) > 1e-12 * std::max(1.0, chord))
      complain("boundary edge " + name + " stores length " + std::to_string(edge.length) +
               " but its endpoints are " + std::to_string(chord) + " apart");
  }

  // Closed loops exactly when every boundary vertex touches two boundary edges.
  for (const auto& [vertex, degree] : boundary_degree)
    if (degree != 2)
      complain("boundary vertex " + std::to_string(vertex) + " has boundary degree " +
               std::to_string(degree) + ", boundary edges do not form closed loops");

  // Triangle edges used once are topological boundary and must be declared.
  for (const auto& [key, count] : edge_use)
    if (count == 1 && boundary_seen.find(key) == boundary_seen.end())
      complain("edge (" + std::to_string(key.first) + "," + std::to_string(key.second) +
               ") lies on the domain boundary but is not declared");

  if (!(mesh.tagged_length(EdgeTag::Gamma0) > 0.0)) complain("GAMMA0 measure zero");
  bool has_gamma1 = false;
  for (const BoundaryEdge& e : mesh.boundary_edges)
    if (e.tag == EdgeTag::Gamma1) has_gamma1 = true;
  if (!has_gamma1) complain("no GAMMA1 edges");

  return diagnostics;
}

DofMap build_dof_map(const Mesh& mesh) {
  const size_t nv = static_cast<size_t>(mesh.vertex_count());
  DofMap map;
  map.constrained.assign(nv, 0);
  map.on_gamma1.assign(nv, 0);
  for (const BoundaryEdge& e : mesh.boundary_edges) {
    auto& flags = e.tag == EdgeTag::Gamma0 ? map.constrained : map.on_gamma1;
    flags[static_cast<size_t>(e.a)] = 1;
    flags[static_cast<size_t>(e.b)] = 1;
  }
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    (map.is_constrained(v) ? map.constrained_dofs : map.free_dofs).push_back(v);
    if (map.is_on_gamma1(v)) map.boundary_dofs.push_back(v);
  }
  return map;
}

}  // namespace wentzell
