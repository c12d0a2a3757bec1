#pragma once

#include "wentzell/config.hpp"
#include "wentzell/dtn.hpp"
#include "wentzell/functional.hpp"

#include <optional>
#include <vector>

namespace wentzell {

enum class Backend { FullSpace, BoundaryDtn };

struct CriticalPoint {
  DiscreteFunction u;
  EnergyReport report;
  int iterations = 0;
  Backend backend = Backend::FullSpace;
};

/// Direct sparse Cholesky solve for a symmetric positive definite operator.
Eigen::VectorXd solve_linear_spd(const SparseOperator& op, const Eigen::VectorXd& rhs);

/// Deterministic default seed: harmonic lift of the constant trace profile
/// on the Wentzell boundary. On a rotation-symmetric annulus this is the
/// radial direction, so solves started here stay on the radial branch.
DiscreteFunction constant_trace_seed(const Problem& problem);

/// Harmonic-dominant lift of a random boundary profile.
DiscreteFunction random_trace_seed(const Problem& problem, std::uint64_t seed);

/// Mountain-pass solve: deform a path from zero to a negative-energy
/// endpoint, descending at the path maximum, then polish with Newton.
/// The path-maximum value is non-increasing across iterations.
CriticalPoint mountain_pass(const Problem& problem, const SolverConfig& config,
                            const DepthEstimate& depth, const DiscreteFunction& seed,
                            Backend backend = Backend::FullSpace);

/// Ground state via the trace-quotient maximizer scaled onto the Nehari set,
/// polished by Newton.
CriticalPoint nehari_minimize(const Problem& problem, const SolverConfig& config,
                              const DepthEstimate& depth,
                              Backend backend = Backend::FullSpace);

/// Search for a critical point distinct from every known one (and from the
/// known antipodes) by Newton on the deflated residual. Empty optional means
/// the attempt schedule is exhausted, not an error.
std::optional<CriticalPoint> deflated_continue(const Problem& problem,
                                               const SolverConfig& config,
                                               const DepthEstimate& depth,
                                               const std::vector<CriticalPoint>& known);

/// Best-effort ladder: ground state plus deflated continuations until
/// `count` strictly increasing energy levels are found (or the search is
/// exhausted). Equal-energy symmetry copies are deduplicated by energy.
std::vector<CriticalPoint> critical_point_ladder(const Problem& problem,
                                                 const SolverConfig& config,
                                                 const DepthEstimate& depth, int count);

}  // namespace wentzell
