#include "icefem/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>

#include "icefem/errors.hpp"
#include "icefem/quadrature.hpp"

namespace icefem {

namespace {

namespace fs = std::filesystem;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

BoundaryTag tag_of(char c) {
  return c == 'D' ? BoundaryTag::Dirichlet : BoundaryTag::Neumann;
}

}  // namespace

Triangulation build_config_mesh(const RunConfig& cfg) {
  if (cfg.mesh_source == MeshSource::File) return read_mesh_file(cfg.mesh_file);
  double l = cfg.domain_size;
  return square_grid(cfg.mesh_n, cfg.mesh_n, l, l,
                     rectangle_side_tagger(l, l, tag_of(cfg.boundary_tags[0]),
                                           tag_of(cfg.boundary_tags[1]),
                                           tag_of(cfg.boundary_tags[2]),
                                           tag_of(cfg.boundary_tags[3])));
}

std::vector<double> cell_thickness(const Triangulation& tri,
                                   const TimeScalarField& h, double t) {
  QuadratureRule q = make_quadrature(2);
  std::vector<double> values(tri.n_cells(), 0.0);
  for (int c = 0; c < tri.n_cells(); ++c) {
    AffineMap map = tri.cell_map(c);
    double acc = 0.0;
    for (int k = 0; k < q.size(); ++k)
      acc += q.weights[k] * h(map.apply(q.points[k]), t);
    values[c] = acc / 0.5;  // reference area
  }
  return values;
}

namespace {

std::vector<char> active_mask(const Triangulation& parent, const ModelData& model) {
  auto thickness = cell_thickness(parent, model.fields.h, model.time);
  std::vector<char> mask(parent.n_cells(), 0);
  for (int c = 0; c < parent.n_cells(); ++c)
    mask[c] = thickness[c] >= model.params.h_min ? 1 : 0;
  return mask;
}

void build_active(Problem& p, const RunConfig& cfg) {
  auto thickness = cell_thickness(p.parent, p.model.fields.h, p.model.time);
  p.sub = std::make_unique<Submesh>(
      active_subdomain(p.parent, thickness, p.model.params.h_min));
  p.spaces = std::make_unique<Spaces>(make_spaces(p.sub->mesh, cfg.order));
  p.active.assign(p.parent.n_cells(), 0);
  for (int c : p.sub->cell_parent) p.active[c] = 1;
}

// Carries coefficients between two submeshes of the same parent: entities
// present in both keep their values, freshly uncovered velocity nodes start
// from v_o and new stress dofs from zero.
void transfer_state(const Problem& p, const Submesh& old_sub, const Spaces& old_sp,
                    const State& old_state, State& state, const ModelData& model,
                    const Spaces& sp) {
  const Submesh& sub = *p.sub;
  std::vector<int> point_new(p.parent.n_points(), -1);
  for (size_t i = 0; i < old_sub.point_parent.size(); ++i)
    point_new[old_sub.point_parent[i]] = static_cast<int>(i);
  std::vector<int> edge_new(p.parent.n_edges(), -1);
  for (size_t i = 0; i < old_sub.edge_parent.size(); ++i)
    edge_new[old_sub.edge_parent[i]] = static_cast<int>(i);
  std::vector<int> cell_new(p.parent.n_cells(), -1);
  for (size_t i = 0; i < old_sub.cell_parent.size(); ++i)
    cell_new[old_sub.cell_parent[i]] = static_cast<int>(i);

  const int nv = sub.mesh.n_points();
  const int old_nv = old_sub.mesh.n_points();
  auto vo_at = [&](const Vec2& x) { return model.fields.v_o(x, model.time); };

  for (int v = 0; v < nv; ++v) {
    int ov = point_new[sub.point_parent[v]];
    Vec2 val = ov >= 0 ? Vec2{old_state.u.coeffs[2 * ov], old_state.u.coeffs[2 * ov + 1]}
                       : vo_at(sub.mesh.points[v]);
    state.u.coeffs[2 * v] = val.x;
    state.u.coeffs[2 * v + 1] = val.y;
  }
  const int nm = rt_edge_moments(sp.order - 1);
  for (int e = 0; e < sub.mesh.n_edges(); ++e) {
    int oe = edge_new[sub.edge_parent[e]];
    if (sp.order == 2) {
      int node = nv + e;
      Vec2 val = oe >= 0 ? Vec2{old_state.u.coeffs[2 * (old_nv + oe)],
                                old_state.u.coeffs[2 * (old_nv + oe) + 1]}
                         : vo_at(sub.mesh.edge_midpoint(e));
      state.u.coeffs[2 * node] = val.x;
      state.u.coeffs[2 * node + 1] = val.y;
    }
    for (int row = 0; row < 2; ++row)
      for (int m = 0; m < nm; ++m)
        state.sigma.coeffs[row * sp.n_srow + nm * e + m] =
            oe >= 0 ? old_state.sigma.coeffs[row * old_sp.n_srow + nm * oe + m] : 0.0;
  }
  if (sp.order == 2) {
    const int off = nm * sub.mesh.n_edges();
    const int old_off = nm * old_sub.mesh.n_edges();
    for (int c = 0; c < sub.mesh.n_cells(); ++c) {
      int oc = cell_new[sub.cell_parent[c]];
      for (int row = 0; row < 2; ++row)
        for (int i = 0; i < 2; ++i)
          state.sigma.coeffs[row * sp.n_srow + off + 2 * c + i] =
              oc >= 0 ? old_state.sigma.coeffs[row * old_sp.n_srow + old_off + 2 * oc + i]
                      : 0.0;
    }
  }
  apply_constraints(sp.vel, state.u.coeffs);
  apply_constraints(sp.srow, state.sigma.coeffs);
  state.u_old.coeffs = state.u.coeffs;
}

}  // namespace

std::unique_ptr<Problem> setup_problem(const RunConfig& cfg, Triangulation parent) {
  auto p = std::make_unique<Problem>();
  p->parent = std::move(parent);
  p->model.params = cfg.params;
  p->model.fields = cfg.make_fields();
  p->model.body_force = cfg.make_body_force();
  p->model.time = cfg.mode == Mode::TimeDependent ? cfg.dt : 0.0;
  build_active(*p, cfg);

  p->state = make_zero_state(*p->spaces);
  auto u0 = cfg.make_u0();
  p->state.u = interpolate_velocity(
      p->sub->mesh, p->spaces->vel, cfg.order,
      [&](const Vec2& x) { return u0(x, 0.0); });
  p->state.u_old.coeffs = p->state.u.coeffs;
  if (!cfg.sigma_zero_init) initialize_sigma(p->state, p->model, *p->spaces);
  return p;
}

RunResult run_experiment(const RunConfig& cfg) {
  RunResult res;
  res.output_dir = cfg.output_dir;
  fs::create_directories(cfg.output_dir);

  auto p = setup_problem(cfg, build_config_mesh(cfg));

  if (cfg.mode == Mode::Stationary) {
    GnResult gn = gauss_newton(p->state, p->model, Mode::Stationary, *p->spaces, cfg.gn);
    StepLog log;
    log.step = 1;
    log.gn_iterations = gn.iterations;
    log.functional = gn.functional;
    log.tau_stop = gn.log.empty() ? 0.0 : gn.log.back().tau_stop;
    log.gn_converged = gn.converged;
    log.u_minus_vo_norm = std::sqrt(l2_diff_sq_velocity(
        *p->spaces, p->state.u.coeffs,
        [&](const Vec2& x) { return p->model.fields.v_o(x, p->model.time); }));
    res.steps.push_back(log);
  } else {
    const bool h_static = !cfg.h.uses_t();
    for (int step = 1; step <= cfg.n_steps; ++step) {
      if (!h_static && step > 1) {
        p->model.time = step * cfg.dt;
        auto mask = active_mask(p->parent, p->model);
        if (mask != p->active) {
          auto old_sub = std::move(p->sub);
          auto old_spaces = std::move(p->spaces);
          State old_state = std::move(p->state);
          build_active(*p, cfg);
          p->state = make_zero_state(*p->spaces);
          transfer_state(*p, *old_sub, *old_spaces, old_state, p->state, p->model,
                         *p->spaces);
        }
      }
      res.steps.push_back(advance_step(p->state, p->model, *p->spaces, step, cfg.gn));
      if (cfg.vtk_every > 0 && step % cfg.vtk_every == 0 && step != cfg.n_steps) {
        auto ind = local_indicators(p->state, p->model, Mode::TimeDependent, *p->spaces);
        export_vtk(*p->spaces, p->state,
                   ind, cfg.output_dir + "/state_" + std::to_string(step) + ".vtk");
      }
    }
  }

  Mode mode = cfg.mode;
  auto indicators = local_indicators(p->state, p->model, mode, *p->spaces);
  res.functional = 0.0;
  for (double v : indicators) res.functional += v;

  write_step_log_csv(res.steps, cfg.output_dir + "/log.csv");
  write_indicator_csv(indicators, cfg.output_dir + "/indicators.csv");
  int final_step = cfg.mode == Mode::Stationary ? 1 : cfg.n_steps;
  export_vtk(*p->spaces, p->state, indicators,
             cfg.output_dir + "/state_" + std::to_string(final_step) + ".vtk");

  res.problem = std::move(p);
  return res;
}

double fit_log_slope(const std::vector<double>& h, const std::vector<double>& v) {
  const size_t n = h.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    double x = std::log(h[i]), y = std::log(v[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

StudyReport run_convergence_study(const RunConfig& cfg, int levels) {
  if (levels < 3) throw ConfigError("convergence study needs at least 3 levels");
  fs::create_directories(cfg.output_dir);

  StudyReport report;
  Triangulation mesh = build_config_mesh(cfg);
  std::vector<double> h_values, f_values, scales;
  for (int level = 0; level < levels; ++level) {
    if (level > 0) mesh = uniform_refine(mesh);
    auto t0 = std::chrono::steady_clock::now();

    auto p = setup_problem(cfg, Triangulation(mesh));
    std::vector<StepLog> steps;
    if (cfg.mode == Mode::Stationary) {
      GnResult gn = gauss_newton(p->state, p->model, Mode::Stationary, *p->spaces,
                                 cfg.gn);
      StepLog log;
      log.step = 1;
      log.gn_iterations = gn.iterations;
      log.functional = gn.functional;
      steps.push_back(log);
    } else {
      TimeLoopConfig loop{cfg.dt, cfg.n_steps, cfg.sigma_zero_init};
      steps = time_march(p->state, p->model, *p->spaces, loop, cfg.gn);
    }
    auto t1 = std::chrono::steady_clock::now();

    StudyLevel rec;
    rec.level = level;
    rec.h_max = p->sub->mesh.h_max();
    rec.dofs = p->spaces->n_total;
    rec.functional = steps.back().functional;
    for (const auto& s : steps) rec.gn_iterations += s.gn_iterations;
    rec.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
    report.levels.push_back(rec);

    h_values.push_back(rec.h_max);
    f_values.push_back(rec.functional);
    double scale = 1.0 + triple_norm_sq(*p->spaces, p->state.u.coeffs,
                                        p->state.sigma.coeffs);
    scales.push_back(scale);
  }

  // A functional at the representability floor carries no rate information.
  report.slope_defined = true;
  for (size_t i = 0; i < f_values.size(); ++i)
    if (!(f_values[i] > 1e-20 * scales[i])) report.slope_defined = false;
  report.slope = report.slope_defined ? fit_log_slope(h_values, f_values)
                                      : std::numeric_limits<double>::quiet_NaN();

  auto out = open_out(cfg.output_dir + "/study.csv");
  out << "level,h_max,dofs,functional,gn_iterations\n";
  for (const auto& rec : report.levels)
    out << rec.level << "," << fmt(rec.h_max) << "," << rec.dofs << ","
        << fmt(rec.functional) << "," << rec.gn_iterations << "\n";
  out << "# fitted_slope = " << (report.slope_defined ? fmt(report.slope) : "undefined")
      << "\n";
  return report;
}

void write_step_log_csv(const std::vector<StepLog>& steps, const std::string& path) {
  auto out = open_out(path);
  out << "step,gn_iter,functional,tau_stop,u_minus_vo_norm\n";
  for (const auto& s : steps)
    out << s.step << "," << s.gn_iterations << "," << fmt(s.functional) << ","
        << fmt(s.tau_stop) << "," << fmt(s.u_minus_vo_norm) << "\n";
}

void write_indicator_csv(const std::vector<double>& eta_sq, const std::string& path) {
  auto out = open_out(path);
  out << "cell_index,eta_sq\n";
  for (size_t c = 0; c < eta_sq.size(); ++c)
    out << c << "," << fmt(eta_sq[c]) << "\n";
}

void export_vtk(const Spaces& sp, const State& state,
                const std::vector<double>& indicators, const std::string& path) {
  const Triangulation& tri = *sp.mesh;
  auto out = open_out(path);
  out << "# vtk DataFile Version 2.0\n";
  out << "icefem state\n";
  out << "ASCII\n";
  out << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << tri.n_points() << " double\n";
  for (const auto& p : tri.points)
    out << fmt(p.x) << " " << fmt(p.y) << " 0\n";
  out << "CELLS " << tri.n_cells() << " " << 4 * tri.n_cells() << "\n";
  for (const auto& c : tri.cells)
    out << "3 " << c[0] << " " << c[1] << " " << c[2] << "\n";
  out << "CELL_TYPES " << tri.n_cells() << "\n";
  for (int c = 0; c < tri.n_cells(); ++c) out << "5\n";

  out << "POINT_DATA " << tri.n_points() << "\n";
  out << "VECTORS velocity double\n";
  for (int v = 0; v < tri.n_points(); ++v)
    out << fmt(state.u.coeffs[2 * v]) << " " << fmt(state.u.coeffs[2 * v + 1])
        << " 0\n";

  // cell averages of the stress tensor
  QuadratureRule q = make_quadrature(2);
  std::vector<Mat2> avg(tri.n_cells());
  for (int c = 0; c < tri.n_cells(); ++c) {
    Mat2 acc;
    double wsum = 0.0;
    for (int k = 0; k < q.size(); ++k) {
      auto sv = evaluate_stress(tri, sp.srow, sp.order - 1, state.sigma.coeffs, c,
                                q.points[k]);
      acc += q.weights[k] * sv.value;
      wsum += q.weights[k];
    }
    avg[c] = (1.0 / wsum) * acc;
  }

  out << "CELL_DATA " << tri.n_cells() << "\n";
  const char* names[4] = {"sigma_xx", "sigma_xy", "sigma_yx", "sigma_yy"};
  for (int comp = 0; comp < 4; ++comp) {
    out << "SCALARS " << names[comp] << " double 1\n";
    out << "LOOKUP_TABLE default\n";
    for (int c = 0; c < tri.n_cells(); ++c) {
      const Mat2& m = avg[c];
      double v = comp == 0 ? m.xx : comp == 1 ? m.xy : comp == 2 ? m.yx : m.yy;
      out << fmt(v) << "\n";
    }
  }
  out << "SCALARS indicator double 1\n";
  out << "LOOKUP_TABLE default\n";
  for (int c = 0; c < tri.n_cells(); ++c)
    out << fmt(c < static_cast<int>(indicators.size()) ? indicators[c] : 0.0) << "\n";
  if (!out) throw IoError("failed writing '" + path + "'");
}

MeshInfo mesh_info(const Triangulation& tri) {
  MeshInfo info;
  info.points = tri.n_points();
  info.cells = tri.n_cells();
  info.edges = tri.n_edges();
  for (int e = 0; e < tri.n_edges(); ++e) {
    if (!tri.is_boundary_edge(e)) continue;
    if (tri.edge_tag[e] == static_cast<int>(BoundaryTag::Dirichlet))
      ++info.dirichlet_edges;
    else
      ++info.neumann_edges;
  }
  info.area = tri.total_area();
  info.h_max = tri.h_max();
  return info;
}

}  // namespace icefem
