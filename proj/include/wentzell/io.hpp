#pragma once

#include "wentzell/assembly.hpp"
#include "wentzell/mesh.hpp"

#include <string>

namespace wentzell {

/// Nodal solution as `vertex_index,x,y,u` rows, full double precision.
void write_solution_csv(const std::string& path, const Mesh& mesh, const DiscreteFunction& u);

/// Legacy-VTK unstructured grid with the scalar point field `u`.
void write_solution_vtk(const std::string& path, const Mesh& mesh, const DiscreteFunction& u);

/// Sparse operator as plain-text `i j value` triplets (debugging aid).
void write_operator_triplets(const std::string& path, const SparseOperator& op);

}  // namespace wentzell
