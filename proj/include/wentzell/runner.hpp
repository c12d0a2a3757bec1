#pragma once

#include "wentzell/config.hpp"

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace wentzell {

/// Fully resolved invocation of one subcommand. Field defaults are the CLI
/// defaults; the whole struct is embedded in every report.
struct RunConfig {
  std::string command;

  // Mesh source: a file, or annulus parameters r0 R n_r n_theta.
  std::string mesh_file;
  std::vector<double> annulus;

  SolverConfig solver;
  std::string backend = "full";  // "full" | "boundary"
  bool random_start = false;     // solve: random lift instead of the constant-trace seed
  int count = 3;                 // multiplicity: requested number of energy levels

  // oracle inputs
  double oracle_r0 = 1.0;
  double oracle_R = 2.718281828459045;

  // artifacts
  std::string report_file;
  std::string csv_file;
  std::string vtk_file;
  std::string mesh_output;
};

/// Execute one subcommand: writes the report JSON (or a machine-readable
/// error JSON) to `out`, produces any requested files, and returns the exit
/// code: 0 success, 1 configuration, 2 mesh, 3 convergence.
int run(const RunConfig& config, std::ostream& out);

}  // namespace wentzell
