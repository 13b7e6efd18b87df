#include "icefem/gauss_newton.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "icefem/errors.hpp"

namespace icefem {

void GaussNewtonConfig::validate() const {
  if (!(tol > 0.0 && tol < 1.0))
    throw Error("gauss_newton: tol must lie in (0, 1)");
  if (max_iter < 1) throw Error("gauss_newton: max_iter must be >= 1");
}

void TimeLoopConfig::validate() const {
  if (!(dt > 0.0)) throw Error("time_march: dt must be positive");
  if (n_steps < 1) throw Error("time_march: n_steps must be >= 1");
}

namespace {

void add_scaled(State& state, const Spaces& sp, std::span<const double> dx,
                double alpha) {
  for (int i = 0; i < sp.n_u; ++i) state.u.coeffs[i] += alpha * dx[i];
  for (int i = 0; i < 2 * sp.n_srow; ++i)
    state.sigma.coeffs[i] += alpha * dx[sp.n_u + i];
}

}  // namespace

GnResult gauss_newton(State& state, const ModelData& model, Mode mode,
                      const Spaces& sp, const GaussNewtonConfig& cfg) {
  cfg.validate();
  GnResult res;
  double h_prev = functional(state, model, mode, sp);
  res.functional_initial = h_prev;
  res.functional = h_prev;
  if (h_prev == 0.0) {
    res.converged = true;
    return res;
  }

  for (int k = 1; k <= cfg.max_iter; ++k) {
    GaussNewtonSystem sys = assemble(state, model, mode, sp);
    CgResult cg;
    std::vector<double> dx;
    try {
      dx = solve_spd(sys.matrix, sys.rhs, cfg.cg_tol, cfg.cg_max_iter, &cg);
    } catch (const SolveError& e) {
      throw SolveError(std::string(e.what()) + " (Gauss-Newton iteration " +
                       std::to_string(k) + ")");
    }

    double alpha = 1.0;
    int halvings = 0;
    double h_cand = 0.0;
    double best_h = std::numeric_limits<double>::infinity();
    double best_alpha = 0.0;
    for (;;) {
      add_scaled(state, sp, dx, alpha);
      h_cand = functional(state, model, mode, sp);
      add_scaled(state, sp, dx, -alpha);
      if (h_cand < best_h) {
        best_h = h_cand;
        best_alpha = alpha;
      }
      if (!cfg.damping || h_cand <= h_prev || halvings >= 10) break;
      alpha *= 0.5;
      ++halvings;
    }
    if (cfg.damping && best_h > h_prev) {
      // no step length decreases the functional; stay put and stop
      res.iterations = k;
      res.converged = true;
      res.log.push_back({k, h_prev, 0.0, halvings, cg.iterations});
      break;
    }
    double h_new = cfg.damping ? best_h : h_cand;
    add_scaled(state, sp, dx, cfg.damping ? best_alpha : alpha);

    double tau_stop = 1.0 - h_new / h_prev;
    res.log.push_back({k, h_new, tau_stop, halvings, cg.iterations});
    res.iterations = k;
    res.functional = h_new;
    h_prev = h_new;
    if (h_new == 0.0 || (tau_stop >= 0.0 && tau_stop <= cfg.tol)) {
      res.converged = true;
      break;
    }
  }
  return res;
}

void initialize_sigma(State& state, const ModelData& model, const Spaces& sp) {
  const Triangulation& tri = *sp.mesh;
  bool u_zero = true;
  for (double c : state.u.coeffs)
    if (c != 0.0) {
      u_zero = false;
      break;
    }
  if (u_zero) {
    std::fill(state.sigma.coeffs.begin(), state.sigma.coeffs.end(), 0.0);
    return;
  }
  // The discrete strain jumps across edges; edge moments use the first
  // adjacent cell.
  for (int row = 0; row < 2; ++row) {
    CellVectorField f = [&](int cell, const Vec2& p) {
      Vec2 ref = tri.cell_map(cell).pull(p);
      auto uv = evaluate_velocity(tri, sp.vel, sp.order, state.u.coeffs, cell, ref);
      return (2.0 * model.eta_at(p) * sym(uv.grad)).row(row);
    };
    auto rc = interpolate_rt_row_cellwise(tri, sp.srow, sp.order - 1, f);
    std::copy(rc.begin(), rc.end(),
              state.sigma.coeffs.begin() + row * sp.n_srow);
  }
}

StepLog advance_step(State& state, ModelData& model, const Spaces& sp, int step,
                     const GaussNewtonConfig& cfg) {
  state.u_old.coeffs = state.u.coeffs;
  model.time = step * model.params.dt;
  GnResult gn = gauss_newton(state, model, Mode::TimeDependent, sp, cfg);
  StepLog log;
  log.step = step;
  log.gn_iterations = gn.iterations;
  log.functional = gn.functional;
  log.tau_stop = gn.log.empty() ? 0.0 : gn.log.back().tau_stop;
  log.gn_converged = gn.converged;
  auto vo = [&](const Vec2& p) { return model.fields.v_o(p, model.time); };
  log.u_minus_vo_norm = std::sqrt(l2_diff_sq_velocity(sp, state.u.coeffs, vo));
  return log;
}

std::vector<StepLog> time_march(State& state, ModelData& model, const Spaces& sp,
                                const TimeLoopConfig& loop,
                                const GaussNewtonConfig& cfg) {
  loop.validate();
  model.params.dt = loop.dt;
  std::vector<StepLog> logs;
  logs.reserve(loop.n_steps);
  for (int step = 1; step <= loop.n_steps; ++step) {
    try {
      logs.push_back(advance_step(state, model, sp, step, cfg));
    } catch (const SolveError& e) {
      throw SolveError(std::string(e.what()) + " (time step " +
                       std::to_string(step) + ")");
    }
  }
  return logs;
}

}  // namespace icefem
