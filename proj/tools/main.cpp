#include "wentzell/runner.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>

namespace {

void add_mesh_source(CLI::App* cmd, wentzell::RunConfig& config) {
  cmd->add_option("--mesh", config.mesh_file, "mesh file to load");
  cmd->add_option("--annulus", config.annulus, "annulus mesh: r0 R n_r n_theta")->expected(4);
}

void add_solver_flags(CLI::App* cmd, wentzell::RunConfig& config) {
  cmd->add_option("--p", config.solver.p, "boundary exponent p (> 2)");
  cmd->add_option("--grad-tol", config.solver.grad_tol, "gradient stopping tolerance");
  cmd->add_option("--max-iters", config.solver.max_iters, "iteration budget");
  cmd->add_option("--path-points", config.solver.path_points,
                  "number of nodes on the mountain-pass path");
  cmd->add_option("--step", config.solver.descent.initial_step, "descent initial step");
  cmd->add_option("--backtracking", config.solver.descent.backtracking,
                  "descent backtracking factor in (0,1)");
  cmd->add_option("--armijo", config.solver.descent.armijo, "descent Armijo constant in (0,1)");
  cmd->add_option("--deflation-shift", config.solver.deflation.shift, "deflation shift");
  cmd->add_option("--deflation-power", config.solver.deflation.power, "deflation power");
  cmd->add_option("--multistart", config.solver.multistart_count, "solver restart budget");
  cmd->add_option("--seed", config.solver.rng_seed, "random number generator seed");
}

void add_outputs(CLI::App* cmd, wentzell::RunConfig& config) {
  cmd->add_option("--report", config.report_file, "also write the JSON report to this file");
  cmd->add_option("--csv", config.csv_file, "write the solution as vertex_index,x,y,u CSV");
  cmd->add_option("--vtk", config.vtk_file, "write the solution as a legacy VTK grid");
}

}  // namespace

int main(int argc, char** argv) {
  wentzell::RunConfig config;
  CLI::App app{"Critical points of the Laplace equation with a nonlinear Wentzell boundary "
               "condition, by finite elements"};
  app.require_subcommand(1);
  app.footer("The WENTZELL_THREADS environment variable caps internal parallelism.");

  CLI::App* mesh_annulus = app.add_subcommand("mesh-annulus", "Generate an annulus mesh file");
  mesh_annulus->add_option("--annulus", config.annulus, "r0 R n_r n_theta")
      ->expected(4)
      ->required();
  mesh_annulus->add_option("--output", config.mesh_output, "mesh file to write")->required();
  mesh_annulus->add_option("--report", config.report_file,
                           "also write the JSON report to this file");

  CLI::App* check = app.add_subcommand("check", "Run the mesh invariant suite");
  add_mesh_source(check, config);
  check->add_option("--report", config.report_file, "also write the JSON report to this file");

  CLI::App* solve = app.add_subcommand(
      "solve", "Mountain-pass critical point (default seed: constant-trace harmonic lift)");
  add_mesh_source(solve, config);
  add_solver_flags(solve, config);
  add_outputs(solve, config);
  solve->add_option("--backend", config.backend, "solve space: full | boundary");
  solve->add_flag("--random-start", config.random_start,
                  "seed with a random boundary lift instead of the constant trace");

  CLI::App* depth = app.add_subcommand(
      "depth", "Best trace quotient, lambda1/lambda2 and the potential-well depth");
  add_mesh_source(depth, config);
  add_solver_flags(depth, config);
  add_outputs(depth, config);

  CLI::App* multiplicity =
      app.add_subcommand("multiplicity", "Ladder of distinct critical points by deflation");
  add_mesh_source(multiplicity, config);
  add_solver_flags(multiplicity, config);
  add_outputs(multiplicity, config);
  multiplicity->add_option("--count", config.count, "requested number of energy levels");

  CLI::App* oracle = app.add_subcommand("oracle", "Closed-form radial solution on an annulus");
  oracle->add_option("--r0", config.oracle_r0, "inner radius");
  oracle->add_option("--R", config.oracle_R, "outer radius");
  oracle->add_option("--p", config.solver.p, "boundary exponent p (> 2)");
  oracle->add_option("--report", config.report_file, "also write the JSON report to this file");

  CLI::App* compare =
      app.add_subcommand("compare", "Solve, depth and radial oracle side by side");
  compare->add_option("--annulus", config.annulus, "r0 R n_r n_theta")->expected(4)->required();
  add_solver_flags(compare, config);
  add_outputs(compare, config);
  compare->add_option("--backend", config.backend, "solve space: full | boundary");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    nlohmann::json j;
    j["error_kind"] = "config";
    j["error_message"] = e.what();
    std::cout << j.dump(2) << "\n";
    return 1;
  }
  config.command = app.get_subcommands().front()->get_name();
  return wentzell::run(config, std::cout);
}
