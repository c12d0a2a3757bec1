#pragma once

#include <cstdint>

namespace wentzell {

/// Armijo backtracking parameters for gradient descent steps.
struct DescentConfig {
  double initial_step = 1.0;
  double backtracking = 0.5;  // step shrink factor, in (0,1)
  double armijo = 1e-4;       // sufficient-decrease constant, in (0,1)
};

/// Shifted deflation operator parameters: (dist^{-power} + shift) per root.
struct DeflationConfig {
  double shift = 1.0;  // sigma >= 0
  double power = 2.0;  // q >= 1
};

struct SolverConfig {
  double p = 4.0;
  double grad_tol = 1e-8;
  int max_iters = 5000;
  int path_points = 33;  // mountain-pass path resolution, >= 16
  DescentConfig descent;
  DeflationConfig deflation;
  int multistart_count = 3;
  std::uint64_t rng_seed = 1;
};

/// Throws ParameterError on out-of-range values.
void validate(const SolverConfig& config);

}  // namespace wentzell
