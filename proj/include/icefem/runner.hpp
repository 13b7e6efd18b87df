#ifndef ICEFEM_RUNNER_HPP
#define ICEFEM_RUNNER_HPP

#include <memory>
#include <string>
#include <vector>

#include "icefem/config.hpp"
#include "icefem/gauss_newton.hpp"
#include "icefem/lsq.hpp"

namespace icefem {

/// Active mesh with spaces and state, rebuilt when the active cell set
/// changes between time steps.
struct Problem {
  Triangulation parent;
  std::vector<char> active;  // per parent cell
  std::unique_ptr<Submesh> sub;
  std::unique_ptr<Spaces> spaces;
  ModelData model;
  State state;
};

struct RunResult {
  std::vector<StepLog> steps;
  double functional = 0.0;
  std::string output_dir;
  std::unique_ptr<Problem> problem;  // final state, for inspection
};

/// Runs the configured experiment and writes log.csv, indicators.csv and
/// the final state VTK into the output directory.
RunResult run_experiment(const RunConfig& cfg);

struct StudyLevel {
  int level = 0;
  double h_max = 0.0;
  int dofs = 0;
  double functional = 0.0;
  int gn_iterations = 0;
  double wall_seconds = 0.0;
};

struct StudyReport {
  std::vector<StudyLevel> levels;
  double slope = 0.0;
  bool slope_defined = false;
};

/// Runs the experiment on a uniform-refinement hierarchy and fits the slope
/// of log H against log h_max; writes study.csv.
StudyReport run_convergence_study(const RunConfig& cfg, int levels);

/// Least-squares fit of log(values) vs log(h); used for rate reporting.
double fit_log_slope(const std::vector<double>& h, const std::vector<double>& v);

void export_vtk(const Spaces& sp, const State& state,
                const std::vector<double>& indicators, const std::string& path);

void write_step_log_csv(const std::vector<StepLog>& steps, const std::string& path);
void write_indicator_csv(const std::vector<double>& eta_sq, const std::string& path);

/// Builds the parent mesh described by the config.
Triangulation build_config_mesh(const RunConfig& cfg);

/// Assembles the model/state/spaces for a given parent mesh at time t0.
std::unique_ptr<Problem> setup_problem(const RunConfig& cfg, Triangulation parent);

/// Cellwise thickness averages used for the active-set decision.
std::vector<double> cell_thickness(const Triangulation& tri,
                                   const TimeScalarField& h, double t);

struct MeshInfo {
  int points = 0, cells = 0, edges = 0;
  int dirichlet_edges = 0, neumann_edges = 0;
  double area = 0.0, h_max = 0.0;
};
MeshInfo mesh_info(const Triangulation& tri);

}  // namespace icefem

#endif
