#include "icefem/config.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "icefem/errors.hpp"

namespace icefem {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

struct KeyValue {
  std::string value;
  int line;
};

}  // namespace

CoefficientFields RunConfig::make_fields() const {
  CoefficientFields f;
  f.A = [e = A](const Vec2& p, double t) { return e.evaluate(p.x, p.y, t); };
  f.h = [e = h](const Vec2& p, double t) { return e.evaluate(p.x, p.y, t); };
  f.v_o = [ex = v_o_x, ey = v_o_y](const Vec2& p, double t) {
    return Vec2{ex.evaluate(p.x, p.y, t), ey.evaluate(p.x, p.y, t)};
  };
  return f;
}

std::optional<TimeVectorField> RunConfig::make_body_force() const {
  if (!g_x && !g_y) return std::nullopt;
  Expr ex = g_x ? *g_x : Expr::constant(0.0);
  Expr ey = g_y ? *g_y : Expr::constant(0.0);
  return TimeVectorField([ex, ey](const Vec2& p, double t) {
    return Vec2{ex.evaluate(p.x, p.y, t), ey.evaluate(p.x, p.y, t)};
  });
}

TimeVectorField RunConfig::make_u0() const {
  Expr ex = u0_x ? *u0_x : Expr::constant(0.0);
  Expr ey = u0_y ? *u0_y : Expr::constant(0.0);
  return [ex, ey](const Vec2& p, double t) {
    return Vec2{ex.evaluate(p.x, p.y, t), ey.evaluate(p.x, p.y, t)};
  };
}

RunConfig parse_config(const std::string& text, const std::string& name) {
  static const std::set<std::string> known = {
      "mesh_type",   "mesh_n",      "domain_size", "boundary_tags", "mesh_file",
      "order",       "mode",        "dt",          "n_steps",       "gn_tol",
      "gn_max_iter", "gn_damping",  "cg_tol",      "cg_max_iter",   "rho",
      "rho_o",       "C_o",         "P_star",      "c_m",           "C_hard",
      "h_min",       "A",           "h",           "v_o_x",         "v_o_y",
      "u0_x",        "u0_y",        "g_x",         "g_y",           "sigma_init",
      "output_dir",  "levels",      "vtk_every"};

  std::map<std::string, KeyValue> kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(name + ":" + std::to_string(lineno) +
                        ": expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (known.find(key) == known.end())
      throw ConfigError(name + ":" + std::to_string(lineno) + ": unknown key '" +
                        key + "'");
    if (kv.count(key))
      throw ConfigError(name + ":" + std::to_string(lineno) + ": duplicate key '" +
                        key + "'");
    kv[key] = {value, lineno};
  }

  auto where = [&](const std::string& key) {
    return name + ":" + std::to_string(kv.at(key).line) + ": ";
  };
  auto get_double = [&](const std::string& key, double dflt) {
    auto it = kv.find(key);
    if (it == kv.end()) return dflt;
    const char* s = it->second.value.c_str();
    char* end = nullptr;
    double v = std::strtod(s, &end);
    if (end == s || *end != '\0')
      throw ConfigError(where(key) + "key '" + key + "' is not a number");
    return v;
  };
  auto get_int = [&](const std::string& key, int dflt) {
    double v = get_double(key, dflt);
    int i = static_cast<int>(v);
    if (v != i) throw ConfigError(where(key) + "key '" + key + "' is not an integer");
    return i;
  };
  auto get_expr = [&](const std::string& key) -> std::optional<Expr> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    try {
      return Expr::parse(it->second.value);
    } catch (const ExprError& e) {
      throw ConfigError(where(key) + "key '" + key + "': " + e.what());
    }
  };
  auto require_expr = [&](const std::string& key) {
    auto e = get_expr(key);
    if (!e) throw ConfigError(name + ": missing required key '" + key + "'");
    return *e;
  };

  RunConfig cfg;

  if (kv.count("mesh_type")) {
    const std::string& v = kv["mesh_type"].value;
    if (v == "square")
      cfg.mesh_source = MeshSource::Square;
    else if (v == "file")
      cfg.mesh_source = MeshSource::File;
    else
      throw ConfigError(where("mesh_type") + "mesh_type must be 'square' or 'file'");
  }
  cfg.mesh_n = get_int("mesh_n", cfg.mesh_n);
  cfg.domain_size = get_double("domain_size", cfg.domain_size);
  if (kv.count("boundary_tags")) {
    cfg.boundary_tags = kv["boundary_tags"].value;
    if (cfg.boundary_tags.size() != 4 ||
        cfg.boundary_tags.find_first_not_of("DN") != std::string::npos)
      throw ConfigError(where("boundary_tags") +
                        "boundary_tags must be 4 characters from {D, N}");
  }
  if (kv.count("mesh_file")) cfg.mesh_file = kv["mesh_file"].value;
  if (cfg.mesh_source == MeshSource::File) {
    if (cfg.mesh_file.empty())
      throw ConfigError(name + ": missing required key 'mesh_file'");
    if (!std::filesystem::exists(cfg.mesh_file))
      throw ConfigError(name + ": mesh file '" + cfg.mesh_file + "' does not exist");
  }
  if (cfg.mesh_source == MeshSource::Square && cfg.mesh_n < 1)
    throw ConfigError(name + ": mesh_n must be >= 1");
  if (!(cfg.domain_size > 0.0)) throw ConfigError(name + ": domain_size must be positive");

  cfg.order = get_int("order", 2);
  if (cfg.order != 1 && cfg.order != 2)
    throw ConfigError(where("order") + "order must be 1 or 2");

  if (kv.count("mode")) {
    const std::string& v = kv["mode"].value;
    if (v == "time_dependent")
      cfg.mode = Mode::TimeDependent;
    else if (v == "stationary")
      cfg.mode = Mode::Stationary;
    else
      throw ConfigError(where("mode") + "mode must be 'time_dependent' or 'stationary'");
  }

  cfg.dt = get_double("dt", cfg.dt);
  cfg.n_steps = get_int("n_steps", cfg.n_steps);
  if (cfg.mode == Mode::TimeDependent) {
    if (!(cfg.dt > 0.0)) throw ConfigError(name + ": dt must be positive");
    if (cfg.n_steps < 1) throw ConfigError(name + ": n_steps must be >= 1");
  }

  cfg.gn.tol = get_double("gn_tol", cfg.gn.tol);
  cfg.gn.max_iter = get_int("gn_max_iter", cfg.gn.max_iter);
  if (kv.count("gn_damping")) {
    const std::string& v = kv["gn_damping"].value;
    if (v == "on")
      cfg.gn.damping = true;
    else if (v == "off")
      cfg.gn.damping = false;
    else
      throw ConfigError(where("gn_damping") + "gn_damping must be 'on' or 'off'");
  }
  cfg.gn.cg_tol = get_double("cg_tol", cfg.gn.cg_tol);
  cfg.gn.cg_max_iter = get_int("cg_max_iter", cfg.gn.cg_max_iter);
  if (!(cfg.gn.tol > 0.0 && cfg.gn.tol < 1.0))
    throw ConfigError(name + ": gn_tol must lie in (0, 1)");
  if (cfg.gn.max_iter < 1) throw ConfigError(name + ": gn_max_iter must be >= 1");

  cfg.params.rho = get_double("rho", cfg.params.rho);
  cfg.params.rho_o = get_double("rho_o", cfg.params.rho_o);
  cfg.params.C_o = get_double("C_o", cfg.params.C_o);
  cfg.params.P_star = get_double("P_star", cfg.params.P_star);
  cfg.params.c_m = get_double("c_m", cfg.params.c_m);
  cfg.params.C_hard = get_double("C_hard", cfg.params.C_hard);
  cfg.params.h_min = get_double("h_min", cfg.params.h_min);
  cfg.params.dt = cfg.dt;
  if (cfg.params.C_o < 0.0)
    throw ConfigError(name + ": C_o must be nonnegative");
  // C_o = 0 switches the drag off (linear problem); validate the rest
  PhysicalParams check = cfg.params;
  check.C_o = cfg.params.C_o == 0.0 ? 1.0 : cfg.params.C_o;
  try {
    check.validate();
  } catch (const ModelError& e) {
    throw ConfigError(name + ": " + e.what());
  }

  cfg.A = require_expr("A");
  cfg.h = require_expr("h");
  cfg.v_o_x = require_expr("v_o_x");
  cfg.v_o_y = require_expr("v_o_y");
  cfg.u0_x = get_expr("u0_x");
  cfg.u0_y = get_expr("u0_y");
  cfg.g_x = get_expr("g_x");
  cfg.g_y = get_expr("g_y");

  if (kv.count("sigma_init")) {
    const std::string& v = kv["sigma_init"].value;
    if (v == "zero")
      cfg.sigma_zero_init = true;
    else if (v == "interp")
      cfg.sigma_zero_init = false;
    else
      throw ConfigError(where("sigma_init") + "sigma_init must be 'interp' or 'zero'");
  }

  if (kv.count("output_dir")) cfg.output_dir = kv["output_dir"].value;
  cfg.levels = get_int("levels", cfg.levels);
  cfg.vtk_every = get_int("vtk_every", cfg.vtk_every);
  if (cfg.vtk_every < 0) throw ConfigError(name + ": vtk_every must be >= 0");
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

}  // namespace icefem
