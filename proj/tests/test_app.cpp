#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "icefem/errors.hpp"
#include "icefem/runner.hpp"

using namespace icefem;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path temp_dir(const char* name) {
  fs::path p = fs::temp_directory_path() / "icefem_tests" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

// the shipped square-domain configuration scaled down for tests
std::string square_cfg_text(int n, int steps, const std::string& outdir) {
  std::ostringstream ss;
  ss << "mesh_type = square\n"
     << "mesh_n = " << n << "\n"
     << "domain_size = 500000\n"
     << "mode = time_dependent\n"
     << "dt = 600\n"
     << "n_steps = " << steps << "\n"
     << "gn_tol = 1e-4\n"
     << "cg_tol = 1e-8\n"
     << "A = x / 500000\n"
     << "h = 1\n"
     << "v_o_x = 0.1 * (2*y - 500000) / 500000\n"
     << "v_o_y = 0.1 * (500000 - 2*x) / 500000\n"
     << "output_dir = " << outdir << "\n";
  return ss.str();
}

// mild-parameter representable stationary case (see test_lsq.cpp)
std::string representable_cfg_text(int n, const std::string& outdir) {
  std::ostringstream ss;
  ss << "mesh_type = square\n"
     << "mesh_n = " << n << "\n"
     << "domain_size = 1\n"
     << "boundary_tags = DNNN\n"
     << "mode = stationary\n"
     << "gn_tol = 1e-8\n"
     << "gn_max_iter = 30\n"
     << "rho = 1\nrho_o = 1000\nC_o = 1e-3\nP_star = 4e-9\nc_m = 2e-9\n"
     << "C_hard = 1\nh_min = 0.01\ndt = 1\n"
     << "A = 1\nh = 1\nv_o_x = 0\nv_o_y = 0\n"
     << "u0_x = x*(x - 2)\nu0_y = 0\n"
     << "g_x = abs(x*(x - 2))*(x*(x - 2)) - 8\ng_y = 0\n"
     << "output_dir = " << outdir << "\n";
  return ss.str();
}

}  // namespace

TEST_CASE("config parsing") {
  SUBCASE("shipped square configuration") {
    RunConfig cfg = load_config(std::string(ICEFEM_SOURCE_DIR) + "/configs/square.cfg");
    CHECK(cfg.dt == 600.0);
    CHECK(cfg.gn.tol == 1e-4);
    CHECK(cfg.A.evaluate(250000.0, 0.0) == doctest::Approx(0.5));
    CHECK(cfg.v_o_x.evaluate(0.0, 500000.0) == doctest::Approx(0.1));
    CHECK(cfg.mode == Mode::TimeDependent);
    CHECK(cfg.params.rho == 900.0);  // standard defaults untouched
    CHECK_NOTHROW(
        load_config(std::string(ICEFEM_SOURCE_DIR) + "/configs/manufactured.cfg"));
  }

  SUBCASE("scaled-down square configuration text") {
    RunConfig cfg = parse_config(square_cfg_text(16, 24, "out"), "square.cfg");
    CHECK(cfg.dt == 600.0);
    CHECK(cfg.A.evaluate(250000.0, 0.0) == doctest::Approx(0.5));
  }

  SUBCASE("missing mesh file is a config error") {
    std::string text =
        "mesh_type = file\nmesh_file = /nonexistent/mesh.txt\n"
        "A=1\nh=1\nv_o_x=0\nv_o_y=0\n";
    CHECK_THROWS_AS(parse_config(text, "c"), ConfigError);
  }

  SUBCASE("unknown key is rejected with its name") {
    std::string text = "viscocity = 3\n";
    try {
      parse_config(text, "bad.cfg");
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("unknown key 'viscocity'") != std::string::npos);
    }
  }

  SUBCASE("missing required key is named") {
    std::string text = "A = 1\nh = 1\nv_o_y = 0\n";
    try {
      parse_config(text, "bad.cfg");
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("v_o_x") != std::string::npos);
    }
  }

  SUBCASE("expression errors carry the config line") {
    std::string text = "A = 1 +\nh = 1\nv_o_x = 0\nv_o_y = 0\n";
    try {
      parse_config(text, "bad.cfg");
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("bad.cfg:1") != std::string::npos);
    }
  }

  SUBCASE("validation errors") {
    CHECK_THROWS_AS(parse_config("mode = banana\nA=1\nh=1\nv_o_x=0\nv_o_y=0\n", "c"),
                    ConfigError);
    CHECK_THROWS_AS(
        parse_config("mesh_type = file\nA=1\nh=1\nv_o_x=0\nv_o_y=0\n", "c"),
        ConfigError);
    CHECK_THROWS_AS(
        parse_config("dt = -5\nA=1\nh=1\nv_o_x=0\nv_o_y=0\n", "c"), ConfigError);
    CHECK_THROWS_AS(
        parse_config("boundary_tags = DDX\nA=1\nh=1\nv_o_x=0\nv_o_y=0\n", "c"),
        ConfigError);
    CHECK_THROWS_AS(parse_config("A = 1\nA = 2\nh=1\nv_o_x=0\nv_o_y=0\n", "c"),
                    ConfigError);
  }
}

TEST_CASE("run_experiment writes parsable artifacts and decays toward equilibrium") {
  fs::path out = temp_dir("square_run");
  RunConfig cfg = parse_config(square_cfg_text(8, 6, out.string()), "square.cfg");
  RunResult res = run_experiment(cfg);

  REQUIRE(res.steps.size() == 6);
  for (const auto& s : res.steps) {
    CHECK(std::isfinite(s.functional));
    CHECK(s.gn_converged);
  }
  CHECK(res.steps.back().functional < res.steps.front().functional);

  CHECK(fs::exists(out / "log.csv"));
  CHECK(fs::exists(out / "indicators.csv"));
  CHECK(fs::exists(out / "state_6.vtk"));

  std::string log = slurp(out / "log.csv");
  CHECK(log.rfind("step,gn_iter,functional,tau_stop,u_minus_vo_norm\n", 0) == 0);
  int lines = 0;
  for (char c : log)
    if (c == '\n') ++lines;
  CHECK(lines == 7);

  std::string ind = slurp(out / "indicators.csv");
  CHECK(ind.rfind("cell_index,eta_sq\n", 0) == 0);
}

TEST_CASE("stationary manufactured run reaches the quadrature floor") {
  fs::path out = temp_dir("representable");
  RunConfig cfg = parse_config(representable_cfg_text(4, out.string()), "rep.cfg");
  RunResult res = run_experiment(cfg);
  const Problem& p = *res.problem;
  double scale =
      triple_norm_sq(*p.spaces, p.state.u.coeffs, p.state.sigma.coeffs);
  CHECK(res.functional <= 1e-18 * scale);
}

TEST_CASE("sigma normal trace vanishes on Neumann edges after a run") {
  fs::path out = temp_dir("neumann_trace");
  RunConfig cfg = parse_config(representable_cfg_text(4, out.string()), "rep.cfg");
  RunResult res = run_experiment(cfg);
  const Problem& p = *res.problem;
  const Triangulation& tri = p.sub->mesh;
  const Spaces& sp = *p.spaces;

  double scale = 0.0;
  for (double v : p.state.sigma.coeffs) scale = std::max(scale, std::abs(v));
  for (int e = 0; e < tri.n_edges(); ++e) {
    if (tri.edge_tag[e] != static_cast<int>(BoundaryTag::Neumann)) continue;
    Vec2 n = tri.edge_normal(e);
    int c = tri.edge_cells[e][0];
    for (double s : {0.2, 0.5, 0.8}) {
      Vec2 x = tri.points[tri.edges[e][0]] +
               s * (tri.points[tri.edges[e][1]] - tri.points[tri.edges[e][0]]);
      auto sv = evaluate_stress(tri, sp.srow, sp.order - 1, p.state.sigma.coeffs, c,
                                tri.cell_map(c).pull(x));
      CHECK(std::abs(dot(sv.value.row(0), n)) <= 1e-10 * (1.0 + scale));
      CHECK(std::abs(dot(sv.value.row(1), n)) <= 1e-10 * (1.0 + scale));
    }
  }
}

TEST_CASE("study slope agrees with the two-point rate on clean convergence") {
  fs::path out = temp_dir("study_slope");
  RunConfig cfg = load_config(std::string(ICEFEM_SOURCE_DIR) + "/configs/manufactured.cfg");
  cfg.output_dir = out.string();
  StudyReport rep = run_convergence_study(cfg, 3);
  REQUIRE(rep.slope_defined);
  const auto& l = rep.levels;
  double two_point = std::log(l[2].functional / l[1].functional) /
                     std::log(l[2].h_max / l[1].h_max);
  CHECK(std::abs(rep.slope - two_point) <= 0.05);
}

TEST_CASE("convergence study on a representable solution reports an undefined slope") {
  fs::path out = temp_dir("study_floor");
  RunConfig cfg = parse_config(representable_cfg_text(2, out.string()), "rep.cfg");
  StudyReport report = run_convergence_study(cfg, 3);
  REQUIRE(report.levels.size() == 3);
  for (size_t i = 1; i < report.levels.size(); ++i)
    CHECK(report.levels[i].h_max < report.levels[i - 1].h_max);
  CHECK(!report.slope_defined);
  std::string study = slurp(out / "study.csv");
  CHECK(study.find("# fitted_slope = undefined") != std::string::npos);
  CHECK_THROWS_AS(run_convergence_study(cfg, 2), ConfigError);
}

TEST_CASE("square-configuration study records a positive slope") {
  // scaled-down time-dependent study; the equilibrium of this data is not
  // smooth enough for a clean rate, so only positivity is asserted and the
  // value is recorded
  fs::path out = temp_dir("study_square");
  RunConfig cfg = parse_config(square_cfg_text(2, 4, out.string()), "sq.cfg");
  StudyReport rep = run_convergence_study(cfg, 3);
  REQUIRE(rep.slope_defined);
  CHECK(rep.slope > 0.0);
  MESSAGE("square configuration slope at reduced resolution: ", rep.slope);
}

TEST_CASE("runs are bit-for-bit reproducible") {
  fs::path out1 = temp_dir("repro1"), out2 = temp_dir("repro2");
  RunConfig c1 = parse_config(square_cfg_text(4, 4, out1.string()), "a.cfg");
  RunConfig c2 = parse_config(square_cfg_text(4, 4, out2.string()), "b.cfg");
  run_experiment(c1);
  run_experiment(c2);
  CHECK(slurp(out1 / "log.csv") == slurp(out2 / "log.csv"));
  CHECK(slurp(out1 / "indicators.csv") == slurp(out2 / "indicators.csv"));
}

TEST_CASE("vtk export") {
  Triangulation tri = square_grid(3, 3, 2.0, 2.0, all_dirichlet());
  Spaces sp = make_spaces(tri, 2);

  SUBCASE("zero state produces zero data arrays of the right shape") {
    State st = make_zero_state(sp);
    std::vector<double> ind(tri.n_cells(), 0.0);
    fs::path out = temp_dir("vtk_zero") / "state.vtk";
    export_vtk(sp, st, ind, out.string());
    std::string text = slurp(out);
    CHECK(text.find("POINTS 16 double") != std::string::npos);
    CHECK(text.find("CELLS 18 72") != std::string::npos);
    CHECK(text.find("VECTORS velocity double") != std::string::npos);
    CHECK(text.find("SCALARS sigma_xx double 1") != std::string::npos);
    CHECK(text.find("SCALARS indicator double 1") != std::string::npos);
  }

  SUBCASE("rotation field exports nodal values exactly") {
    State st = make_zero_state(sp);
    // unconstrained interpolation: use the same mesh with Neumann tags
    Triangulation trin = square_grid(3, 3, 2.0, 2.0, all_neumann());
    Spaces spn = make_spaces(trin, 2);
    State stn = make_zero_state(spn);
    stn.u = interpolate_velocity(trin, spn.vel, 2,
                                 [](const Vec2& p) { return Vec2{p.y, -p.x}; });
    fs::path out = temp_dir("vtk_rot") / "state.vtk";
    std::vector<double> ind(trin.n_cells(), 1.5);
    export_vtk(spn, stn, ind, out.string());
    std::string text = slurp(out);

    // parse the velocity block back and compare
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
      if (line.rfind("VECTORS velocity", 0) == 0) break;
    for (int v = 0; v < trin.n_points(); ++v) {
      REQUIRE(std::getline(in, line));
      std::istringstream ls(line);
      double x, y, z;
      ls >> x >> y >> z;
      CHECK(x == doctest::Approx(trin.points[v].y).epsilon(1e-13));
      CHECK(y == doctest::Approx(-trin.points[v].x).epsilon(1e-13));
      CHECK(z == 0.0);
    }
  }
}

TEST_CASE("mesh info") {
  Triangulation tri = square_grid(4, 4, 1.0, 1.0,
                                  rectangle_side_tagger(1.0, 1.0, BoundaryTag::Dirichlet,
                                                        BoundaryTag::Neumann,
                                                        BoundaryTag::Dirichlet,
                                                        BoundaryTag::Neumann));
  MeshInfo info = mesh_info(tri);
  CHECK(info.points == 25);
  CHECK(info.cells == 32);
  CHECK(info.edges == 56);
  CHECK(info.dirichlet_edges == 8);
  CHECK(info.neumann_edges == 8);
  CHECK(info.area == doctest::Approx(1.0));
}

TEST_CASE("tagged mesh file run: landmass ring with open outer ocean") {
  // annulus-like domain: an 8x8 grid with the central 2x2 block removed,
  // inner boundary Dirichlet (land), outer boundary Neumann (open water);
  // exercised through the mesh file path of the config
  fs::path out = temp_dir("ring_run");
  Triangulation grid = square_grid(8, 8, 1.0, 1.0, all_neumann());
  std::vector<double> hole(grid.n_cells(), 1.0);
  for (int c = 0; c < grid.n_cells(); ++c) {
    Vec2 m = grid.cell_centroid(c);
    if (m.x > 0.375 && m.x < 0.625 && m.y > 0.375 && m.y < 0.625) hole[c] = 0.0;
  }
  Submesh ring = active_subdomain(grid, hole, 0.5);
  // retag: edges created by the removal (the coast) become Dirichlet
  for (int e = 0; e < ring.mesh.n_edges(); ++e) {
    if (!ring.mesh.is_boundary_edge(e)) continue;
    Vec2 m = ring.mesh.edge_midpoint(e);
    bool inner = m.x > 0.3 && m.x < 0.7 && m.y > 0.3 && m.y < 0.7;
    ring.mesh.edge_tag[e] =
        static_cast<int>(inner ? BoundaryTag::Dirichlet : BoundaryTag::Neumann);
  }
  fs::path mesh_path = out / "ring.mesh";
  write_mesh_file(mesh_path.string(), ring.mesh);

  std::ostringstream ss;
  ss << "mesh_type = file\nmesh_file = " << mesh_path.string() << "\n"
     << "mode = time_dependent\ndt = 1\nn_steps = 3\n"
     << "gn_tol = 1e-6\n"
     << "rho = 1\nrho_o = 1000\nC_o = 1e-3\nP_star = 4e-9\nc_m = 2e-9\n"
     << "C_hard = 1\nh_min = 0.01\n"
     << "A = 1\nh = 1\n"
     << "v_o_x = 0.1 * (2*y - 1)\nv_o_y = 0.1 * (1 - 2*x)\n"
     << "output_dir = " << (out / "artifacts").string() << "\n";
  RunConfig cfg = parse_config(ss.str(), "ring.cfg");
  RunResult res = run_experiment(cfg);

  REQUIRE(res.steps.size() == 3);
  for (const auto& s : res.steps) {
    CHECK(s.gn_converged);
    CHECK(std::isfinite(s.functional));
  }
  const Problem& p = *res.problem;
  const Triangulation& tri = p.sub->mesh;
  CHECK(tri.total_area() == doctest::Approx(1.0 - 0.0625).epsilon(1e-13));

  // land: u = 0 on the coast; open water: sigma.n = 0
  const Spaces& sp = *p.spaces;
  double sigma_scale = 0.0;
  for (double v : p.state.sigma.coeffs)
    sigma_scale = std::max(sigma_scale, std::abs(v));
  for (int e = 0; e < tri.n_edges(); ++e) {
    if (!tri.is_boundary_edge(e)) continue;
    if (tri.edge_tag[e] == static_cast<int>(BoundaryTag::Dirichlet)) {
      for (int v : {tri.edges[e][0], tri.edges[e][1]}) {
        CHECK(p.state.u.coeffs[2 * v] == 0.0);
        CHECK(p.state.u.coeffs[2 * v + 1] == 0.0);
      }
    } else {
      Vec2 n = tri.edge_normal(e);
      int c = tri.edge_cells[e][0];
      Vec2 x = tri.edge_midpoint(e);
      auto sv = evaluate_stress(tri, sp.srow, sp.order - 1, p.state.sigma.coeffs, c,
                                tri.cell_map(c).pull(x));
      CHECK(std::abs(dot(sv.value.row(0), n)) <= 1e-10 * (1.0 + sigma_scale));
      CHECK(std::abs(dot(sv.value.row(1), n)) <= 1e-10 * (1.0 + sigma_scale));
    }
  }
}

TEST_CASE("active set changes rebuild the spaces mid-march") {
  // thickness collapses on the right half after t = 1000 s
  std::ostringstream ss;
  fs::path out = temp_dir("active_change");
  ss << "mesh_type = square\nmesh_n = 4\ndomain_size = 1\n"
     << "mode = time_dependent\ndt = 600\nn_steps = 4\n"
     << "gn_tol = 1e-4\n"
     << "rho = 1\nrho_o = 1000\nC_o = 1e-3\nP_star = 4e-9\nc_m = 2e-9\n"
     << "C_hard = 1\nh_min = 0.01\n"
     << "A = 1\n"
     << "h = max(0.001, 1 - max(0, x - 0.5) * t / 500)\n"
     << "v_o_x = 0.1\nv_o_y = 0\n"
     << "output_dir = " << out.string() << "\n";
  RunConfig cfg = parse_config(ss.str(), "active.cfg");
  RunResult res = run_experiment(cfg);
  REQUIRE(res.steps.size() == 4);
  // after the collapse only the left half remains active
  CHECK(res.problem->sub->mesh.n_cells() < 32);
  CHECK(res.problem->sub->mesh.total_area() < 1.0);
  for (const auto& s : res.steps) CHECK(std::isfinite(s.functional));
}
