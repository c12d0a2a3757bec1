#include "wentzell/oracle.hpp"

#include "wentzell/errors.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace wentzell {

RadialSolution radial_solution(double r0, double R, double p) {
  if (!(r0 > 0.0)) throw ParameterError("inner radius must be positive");
  if (!(R > r0)) throw ParameterError("outer radius must exceed the inner radius");
  if (!(p > 2.0)) throw ParameterError("exponent p must exceed 2");

  const double log_ratio = std::log(R / r0);
  RadialSolution sol;
  sol.r0 = r0;
  sol.R = R;
  sol.p = p;
  sol.c = std::pow(R * std::pow(log_ratio, p - 1.0), -1.0 / (p - 2.0));
  sol.h1_norm_sq = 2.0 * M_PI * sol.c * sol.c * log_ratio;
  sol.trace_p_norm_p = 2.0 * M_PI * R * std::pow(sol.c * log_ratio, p);
  sol.energy_I = (0.5 - 1.0 / p) * sol.h1_norm_sq;
  return sol;
}

DiscreteFunction radial_interpolant(const Mesh& mesh, const RadialSolution& sol) {
  constexpr double kRadiusTol = 1e-9;

  // The mesh must be an annulus for the same radii: every vertex inside the
  // ring, inner-boundary vertices at r0 and Wentzell-boundary vertices at R.
  std::vector<char> on_inner(mesh.vertices.size(), 0);
  for (const BoundaryEdge& edge : mesh.boundary_edges) {
    for (int v : {edge.a, edge.b}) {
      const double r = mesh.vertices[static_cast<size_t>(v)].norm();
      const double target = edge.tag == EdgeTag::Gamma0 ? sol.r0 : sol.R;
      if (std::abs(r - target) > kRadiusTol)
        throw ParameterError("mesh is not an annulus for these radii: boundary vertex " +
                             std::to_string(v) + " at radius " + std::to_string(r));
      if (edge.tag == EdgeTag::Gamma0) on_inner[static_cast<size_t>(v)] = 1;
    }
  }
  DiscreteFunction u(mesh.vertex_count());
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    const double r = mesh.vertices[static_cast<size_t>(v)].norm();
    if (r < sol.r0 - kRadiusTol || r > sol.R + kRadiusTol)
      throw ParameterError("mesh is not an annulus for these radii: vertex " +
                           std::to_string(v) + " at radius " + std::to_string(r));
    u[v] = on_inner[static_cast<size_t>(v)] ? 0.0 : sol.c * std::log(r / sol.r0);
  }
  return u;
}

}  // namespace wentzell
