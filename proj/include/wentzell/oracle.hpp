#pragma once

#include "wentzell/assembly.hpp"
#include "wentzell/mesh.hpp"

namespace wentzell {

/// The positive radial critical point on an annulus, in closed form.
/// u(r) = c log(r / r0) is harmonic, vanishes on the inner circle, and its
/// constant outer trace turns the nonlinear boundary condition into the
/// scalar equation c / R = (c log(R / r0))^(p-1), fixing the amplitude.
struct RadialSolution {
  double c = 0.0;
  double r0 = 0.0;
  double R = 0.0;
  double p = 0.0;
  double energy_I = 0.0;
  double h1_norm_sq = 0.0;       // equals trace_p_norm_p (Nehari identity)
  double trace_p_norm_p = 0.0;
};

RadialSolution radial_solution(double r0, double R, double p);

/// Nodal interpolant of the radial solution on an annulus mesh for (r0, R);
/// exactly zero at inner-ring vertices. Radii mismatch beyond 1e-9 is an
/// error.
DiscreteFunction radial_interpolant(const Mesh& mesh, const RadialSolution& sol);

}  // namespace wentzell
