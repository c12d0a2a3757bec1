#include "wentzell/runner.hpp"

#include "wentzell/errors.hpp"
#include "wentzell/functional.hpp"
#include "wentzell/io.hpp"
#include "wentzell/mesh.hpp"
#include "wentzell/oracle.hpp"
#include "wentzell/solvers.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

namespace wentzell {

namespace {

using nlohmann::json;

std::string utc_timestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

json config_json(const RunConfig& config) {
  json j;
  j["command"] = config.command;
  if (!config.mesh_file.empty()) j["mesh_file"] = config.mesh_file;
  if (!config.annulus.empty()) {
    j["annulus_r0"] = config.annulus.size() > 0 ? config.annulus[0] : 0.0;
    j["annulus_R"] = config.annulus.size() > 1 ? config.annulus[1] : 0.0;
    j["annulus_n_r"] = config.annulus.size() > 2 ? config.annulus[2] : 0.0;
    j["annulus_n_theta"] = config.annulus.size() > 3 ? config.annulus[3] : 0.0;
  }
  j["p"] = config.solver.p;
  j["grad_tol"] = config.solver.grad_tol;
  j["max_iters"] = config.solver.max_iters;
  j["path_points"] = config.solver.path_points;
  j["descent_initial_step"] = config.solver.descent.initial_step;
  j["descent_backtracking"] = config.solver.descent.backtracking;
  j["descent_armijo"] = config.solver.descent.armijo;
  j["deflation_shift"] = config.solver.deflation.shift;
  j["deflation_power"] = config.solver.deflation.power;
  j["multistart_count"] = config.solver.multistart_count;
  j["rng_seed"] = config.solver.rng_seed;
  j["backend"] = config.backend;
  j["random_start"] = config.random_start;
  j["count"] = config.count;
  if (config.command == "oracle") {
    j["r0"] = config.oracle_r0;
    j["R"] = config.oracle_R;
  }
  return j;
}

void emit(std::ostream& out, json j, const std::string& report_file) {
  j["timestamp"] = utc_timestamp();
  const std::string text = j.dump(2) + "\n";
  out << text;
  if (!report_file.empty()) {
    std::ofstream file(report_file);
    if (!file) throw ParameterError("cannot open '" + report_file + "' for writing");
    file << text;
  }
}

void add_mesh_stats(json& j, const Mesh& mesh) {
  j["vertices"] = mesh.vertex_count();
  j["triangles"] = mesh.triangles.size();
  j["boundary_edges"] = mesh.boundary_edges.size();
  j["gamma0_length"] = mesh.tagged_length(EdgeTag::Gamma0);
  j["gamma1_length"] = mesh.tagged_length(EdgeTag::Gamma1);
}

void add_depth(json& j, const DepthEstimate& depth, double p) {
  j["B"] = depth.B;
  j["lambda1"] = depth.lambda1;
  j["lambda2"] = depth.lambda2;
  j["depth_d"] = depth.depth_d;
  j["depth_identity_rel_gap"] =
      std::abs(depth.depth_d - (0.5 - 1.0 / p) * std::pow(depth.lambda2, p)) / depth.depth_d;
  // These four are properties of the discretized problem on this mesh, not
  // of the continuum problem.
  j["depth_is_mesh_dependent"] = true;
}

void add_report(json& j, const EnergyReport& report, const std::string& prefix = "") {
  j[prefix + "energy_I"] = report.energy_I;
  j[prefix + "nehari_K"] = report.nehari_K;
  j[prefix + "h1_norm"] = report.h1_norm;
  j[prefix + "trace_p_norm"] = report.trace_p_norm;
  j[prefix + "weak_residual"] = report.weak_residual;
  j[prefix + "lambda1_residual"] = report.lambda1_residual;
  j[prefix + "lambda2_residual"] = report.lambda2_residual;
}

Mesh acquire_mesh(const RunConfig& config) {
  if (!config.annulus.empty()) {
    if (config.annulus.size() != 4)
      throw ParameterError("--annulus expects exactly r0 R n_r n_theta");
    const double n_r = config.annulus[2];
    const double n_theta = config.annulus[3];
    if (n_r != std::floor(n_r) || n_theta != std::floor(n_theta))
      throw ParameterError("annulus subdivision counts must be integers");
    return generate_annulus_mesh(config.annulus[0], config.annulus[1],
                                 static_cast<int>(n_r), static_cast<int>(n_theta));
  }
  if (!config.mesh_file.empty()) return load_mesh_file(config.mesh_file);
  throw ParameterError("a mesh source is required: --mesh FILE or --annulus r0 R n_r n_theta");
}

Backend parse_backend(const std::string& name) {
  if (name == "full") return Backend::FullSpace;
  if (name == "boundary") return Backend::BoundaryDtn;
  throw ParameterError("unknown backend '" + name + "' (expected full or boundary)");
}

std::string with_suffix(const std::string& path, const std::string& suffix) {
  const size_t dot = path.find_last_of('.');
  const size_t slash = path.find_last_of('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return path + suffix;
  return path.substr(0, dot) + suffix + path.substr(dot);
}

void export_solution(const RunConfig& config, const Mesh& mesh, const DiscreteFunction& u,
                     const std::string& suffix = "") {
  if (!config.csv_file.empty())
    write_solution_csv(suffix.empty() ? config.csv_file : with_suffix(config.csv_file, suffix),
                       mesh, u);
  if (!config.vtk_file.empty())
    write_solution_vtk(suffix.empty() ? config.vtk_file : with_suffix(config.vtk_file, suffix),
                       mesh, u);
}

int do_mesh_annulus(const RunConfig& config, std::ostream& out) {
  if (config.mesh_output.empty())
    throw ParameterError("mesh-annulus requires --output for the mesh file");
  if (config.annulus.empty())
    throw ParameterError("mesh-annulus requires --annulus r0 R n_r n_theta");
  const Mesh mesh = acquire_mesh(config);
  save_mesh_file(mesh, config.mesh_output);
  json j = config_json(config);
  add_mesh_stats(j, mesh);
  j["mesh_output"] = config.mesh_output;
  emit(out, j, config.report_file);
  return 0;
}

int do_check(const RunConfig& config, std::ostream& out) {
  const Mesh mesh = acquire_mesh(config);
  const std::vector<std::string> diagnostics = validate_mesh(mesh);
  json j = config_json(config);
  add_mesh_stats(j, mesh);
  j["valid"] = diagnostics.empty();
  j["diagnostics"] = diagnostics;
  emit(out, j, config.report_file);
  return diagnostics.empty() ? 0 : 2;
}

int do_solve(const RunConfig& config, std::ostream& out) {
  validate(config.solver);
  const Backend backend = parse_backend(config.backend);
  const Problem problem = make_problem(acquire_mesh(config), config.solver.p);
  const DepthEstimate depth = compute_depth(problem, config.solver);
  const DiscreteFunction seed =
      config.random_start ? random_trace_seed(problem, config.solver.rng_seed)
                          : constant_trace_seed(problem);
  const CriticalPoint point = mountain_pass(problem, config.solver, depth, seed, backend);

  json j = config_json(config);
  add_mesh_stats(j, problem.mesh);
  add_depth(j, depth, config.solver.p);
  add_report(j, point.report);
  j["iterations"] = point.iterations;
  export_solution(config, problem.mesh, point.u);
  emit(out, j, config.report_file);
  return 0;
}

int do_depth(const RunConfig& config, std::ostream& out) {
  validate(config.solver);
  const Problem problem = make_problem(acquire_mesh(config), config.solver.p);
  const DepthEstimate depth = compute_depth(problem, config.solver);
  json j = config_json(config);
  add_mesh_stats(j, problem.mesh);
  add_depth(j, depth, config.solver.p);
  export_solution(config, problem.mesh, depth.maximizer);
  emit(out, j, config.report_file);
  return 0;
}

int do_multiplicity(const RunConfig& config, std::ostream& out) {
  validate(config.solver);
  const Problem problem = make_problem(acquire_mesh(config), config.solver.p);
  const DepthEstimate depth = compute_depth(problem, config.solver);
  const std::vector<CriticalPoint> ladder =
      critical_point_ladder(problem, config.solver, depth, config.count);

  json j = config_json(config);
  add_mesh_stats(j, problem.mesh);
  add_depth(j, depth, config.solver.p);
  j["levels"] = ladder.size();
  for (size_t k = 0; k < ladder.size(); ++k) {
    const std::string prefix = "level_" + std::to_string(k + 1) + "_";
    add_report(j, ladder[k].report, prefix);
    j[prefix + "iterations"] = ladder[k].iterations;
    export_solution(config, problem.mesh, ladder[k].u, "_" + std::to_string(k + 1));
  }
  emit(out, j, config.report_file);
  return 0;
}

int do_oracle(const RunConfig& config, std::ostream& out) {
  const RadialSolution sol = radial_solution(config.oracle_r0, config.oracle_R, config.solver.p);
  json j = config_json(config);
  j["c"] = sol.c;
  j["energy_I"] = sol.energy_I;
  j["h1_norm_sq"] = sol.h1_norm_sq;
  j["trace_p_norm_p"] = sol.trace_p_norm_p;
  emit(out, j, config.report_file);
  return 0;
}

int do_compare(const RunConfig& config, std::ostream& out) {
  validate(config.solver);
  if (config.annulus.empty())
    throw ParameterError("compare requires --annulus so the radial oracle applies");
  const Backend backend = parse_backend(config.backend);
  const Problem problem = make_problem(acquire_mesh(config), config.solver.p);
  const DepthEstimate depth = compute_depth(problem, config.solver);
  const CriticalPoint point = mountain_pass(problem, config.solver, depth,
                                            constant_trace_seed(problem), backend);
  const RadialSolution sol =
      radial_solution(config.annulus[0], config.annulus[1], config.solver.p);

  json j = config_json(config);
  add_mesh_stats(j, problem.mesh);
  add_depth(j, depth, config.solver.p);
  add_report(j, point.report);
  j["iterations"] = point.iterations;
  j["oracle_c"] = sol.c;
  j["oracle_energy_I"] = sol.energy_I;
  j["oracle_h1_norm_sq"] = sol.h1_norm_sq;
  j["solver_vs_oracle_rel"] =
      std::abs(point.report.energy_I - sol.energy_I) / std::abs(sol.energy_I);
  j["solver_vs_depth_rel"] =
      std::abs(point.report.energy_I - depth.depth_d) / depth.depth_d;
  j["depth_le_radial_energy"] = depth.depth_d <= sol.energy_I + 1e-8;
  export_solution(config, problem.mesh, point.u);
  emit(out, j, config.report_file);
  return 0;
}

void emit_error(std::ostream& out, const RunConfig& config, const std::string& kind,
                const std::string& message) {
  json j = config_json(config);
  j["error_kind"] = kind;
  j["error_message"] = message;
  j["timestamp"] = utc_timestamp();
  out << j.dump(2) << "\n";
}

}  // namespace

int run(const RunConfig& config, std::ostream& out) {
  try {
    if (config.command == "mesh-annulus") return do_mesh_annulus(config, out);
    if (config.command == "check") return do_check(config, out);
    if (config.command == "solve") return do_solve(config, out);
    if (config.command == "depth") return do_depth(config, out);
    if (config.command == "multiplicity") return do_multiplicity(config, out);
    if (config.command == "oracle") return do_oracle(config, out);
    if (config.command == "compare") return do_compare(config, out);
    throw ParameterError("unknown command '" + config.command + "'");
  } catch (const ParameterError& e) {
    emit_error(out, config, "config", e.what());
    return 1;
  } catch (const ParseError& e) {
    emit_error(out, config, "mesh", e.what());
    return 2;
  } catch (const MeshError& e) {
    emit_error(out, config, "mesh", e.what());
    return 2;
  } catch (const ConvergenceError& e) {
    emit_error(out, config, "convergence", e.what());
    return 3;
  } catch (const SolverError& e) {
    emit_error(out, config, "convergence", e.what());
    return 3;
  } catch (const std::exception& e) {
    emit_error(out, config, "internal", e.what());
    return 70;
  }
}

}  // namespace wentzell
