#ifndef ICEFEM_CONFIG_HPP
#define ICEFEM_CONFIG_HPP

#include <optional>
#include <string>

#include "icefem/expr.hpp"
#include "icefem/gauss_newton.hpp"
#include "icefem/model.hpp"

namespace icefem {

enum class MeshSource { Square, File };

/// A fully validated run configuration.  The file format is line-based
/// `key = value` with `#` comments; unknown keys are rejected.
struct RunConfig {
  MeshSource mesh_source = MeshSource::Square;
  int mesh_n = 8;
  double domain_size = 1.0;
  std::string boundary_tags = "DDDD";  // left, right, bottom, top
  std::string mesh_file;

  int order = 2;
  Mode mode = Mode::TimeDependent;
  double dt = 600.0;
  int n_steps = 1;

  GaussNewtonConfig gn;
  PhysicalParams params;

  Expr A = Expr::constant(1.0);
  Expr h = Expr::constant(1.0);
  Expr v_o_x = Expr::constant(0.0);
  Expr v_o_y = Expr::constant(0.0);
  std::optional<Expr> u0_x, u0_y;
  std::optional<Expr> g_x, g_y;
  bool sigma_zero_init = false;

  std::string output_dir = "out";
  int levels = 4;
  int vtk_every = 0;  // 0: final state only

  CoefficientFields make_fields() const;
  std::optional<TimeVectorField> make_body_force() const;
  TimeVectorField make_u0() const;
};

RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& text, const std::string& name);

}  // namespace icefem

#endif
