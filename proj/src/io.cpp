#include "wentzell/io.hpp"

#include "wentzell/errors.hpp"

#include <fstream>
#include <iomanip>

namespace wentzell {

namespace {

std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParameterError("cannot open '" + path + "' for writing");
  out << std::setprecision(17);
  return out;
}

void check_sizes(const Mesh& mesh, const DiscreteFunction& u) {
  if (u.size() != mesh.vertex_count())
    throw ParameterError("solution length does not match the vertex count");
}

}  // namespace

void write_solution_csv(const std::string& path, const Mesh& mesh, const DiscreteFunction& u) {
  check_sizes(mesh, u);
  std::ofstream out = open_for_write(path);
  out << "vertex_index,x,y,u\n";
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    const auto& x = mesh.vertices[static_cast<size_t>(v)];
    out << v << ',' << x[0] << ',' << x[1] << ',' << u[v] << '\n';
  }
  if (!out) throw ParameterError("write to '" + path + "' failed");
}

void write_solution_vtk(const std::string& path, const Mesh& mesh, const DiscreteFunction& u) {
  check_sizes(mesh, u);
  std::ofstream out = open_for_write(path);
  out << "# vtk DataFile Version 3.0\n";
  out << "nodal solution\n";
  out << "ASCII\n";
  out << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.vertex_count() << " double\n";
  for (const auto& x : mesh.vertices) out << x[0] << ' ' << x[1] << " 0\n";
  const size_t n_tri = mesh.triangles.size();
  out << "CELLS " << n_tri << ' ' << 4 * n_tri << '\n';
  for (const auto& t : mesh.triangles) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  out << "CELL_TYPES " << n_tri << '\n';
  for (size_t i = 0; i < n_tri; ++i) out << "5\n";
  out << "POINT_DATA " << mesh.vertex_count() << '\n';
  out << "SCALARS u double 1\n";
  out << "LOOKUP_TABLE default\n";
  for (int v = 0; v < mesh.vertex_count(); ++v) out << u[v] << '\n';
  if (!out) throw ParameterError("write to '" + path + "' failed");
}

void write_operator_triplets(const std::string& path, const SparseOperator& op) {
  std::ofstream out = open_for_write(path);
  for (int k = 0; k < op.outerSize(); ++k)
    for (SparseOperator::InnerIterator it(op, k); it; ++it)
      out << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
  if (!out) throw ParameterError("write to '" + path + "' failed");
}

}  // namespace wentzell
