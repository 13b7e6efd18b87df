#include "icefem/lsq.hpp"

#include <cmath>

#include "icefem/errors.hpp"
#include "icefem/quadrature.hpp"

namespace icefem {

namespace {

// Products like (2 eta)^{1/2} eps(u) : (2 eta)^{-1/2} tau are low-order
// polynomials times smooth coefficients; degree 6 over-integrates them and
// keeps the nonlinear drag accurate.
constexpr int kQuadDegree = 6;

const QuadratureRule& quad() {
  static const QuadratureRule q = make_quadrature(kQuadDegree);
  return q;
}

struct PointCoefs {
  double beta_m, beta_p;  // beta^{-1/2}, beta^{1/2}
  double eta_m, eta_p;    // (2 eta)^{-1/2}, (2 eta)^{1/2}
  Vec2 v_o;
  Vec2 g;
};

PointCoefs coefs_at(const ModelData& model, const Vec2& x) {
  PointCoefs c;
  double b = model.beta_at(x);
  double e = model.eta_at(x);
  c.beta_p = std::sqrt(b);
  c.beta_m = 1.0 / c.beta_p;
  c.eta_p = std::sqrt(2.0 * e);
  c.eta_m = 1.0 / c.eta_p;
  c.v_o = model.v_o_at(x);
  c.g = model.body_force_at(x);
  return c;
}

ResidualSample point_residual(Mode mode, const PointCoefs& c,
                              const PhysicalParams& params, const Vec2& u,
                              const Vec2& u_old, const Mat2& grad_u,
                              const Mat2& sigma, const Vec2& div_sigma) {
  ResidualSample r;
  Vec2 drag = ocean_drag(u, c.v_o, params);
  r.r1 = c.beta_p * (drag - div_sigma - c.g);
  if (mode == Mode::TimeDependent) r.r1 += c.beta_m * (u - u_old);
  r.r2 = c.eta_m * sigma - c.eta_p * sym(grad_u);
  return r;
}

ResidualSample point_residual_derivative(Mode mode, const PointCoefs& c,
                                         const PhysicalParams& params,
                                         const Vec2& u, const DirectionSample& d) {
  ResidualSample r;
  Vec2 ddrag = ocean_drag_derivative(u, c.v_o, d.v, params);
  r.r1 = c.beta_p * (ddrag - d.div_tau);
  if (mode == Mode::TimeDependent) r.r1 += c.beta_m * d.v;
  r.r2 = c.eta_m * d.tau - c.eta_p * sym(d.grad_v);
  return r;
}

// Everything of one cell the quadrature loops need.
struct CellData {
  AffineMap map;
  std::vector<double> lag_vals;
  std::vector<Vec2> lag_grads;
  std::vector<Vec2> rt_vals;
  std::vector<double> rt_divs;
  std::vector<Vec2> phys_points;

  void fill(const Spaces& sp, int cell, const QuadratureRule& q) {
    map = sp.mesh->cell_map(cell);
    tabulate_lagrange_cell(sp.order, map, q.points, lag_vals, lag_grads);
    tabulate_rt_cell(sp.order - 1, map, sp.srow, cell, q.points, rt_vals, rt_divs);
    phys_points.resize(q.size());
    for (int i = 0; i < q.size(); ++i) phys_points[i] = map.apply(q.points[i]);
  }
};

struct StateAtPoint {
  Vec2 u, u_old;
  Mat2 grad_u;
  Mat2 sigma;
  Vec2 div_sigma;
};

StateAtPoint state_at(const Spaces& sp, const State& state, const CellData& cd,
                      int cell, int q) {
  StateAtPoint s;
  const int nl = lagrange_size(sp.order);
  const int nr = rt_size(sp.order - 1);
  for (int a = 0; a < nl; ++a) {
    double val = cd.lag_vals[static_cast<size_t>(q) * nl + a];
    Vec2 g = cd.lag_grads[static_cast<size_t>(q) * nl + a];
    double cx = state.u.coeffs[sp.vel.dof(cell, 2 * a)];
    double cy = state.u.coeffs[sp.vel.dof(cell, 2 * a + 1)];
    double ox = state.u_old.coeffs[sp.vel.dof(cell, 2 * a)];
    double oy = state.u_old.coeffs[sp.vel.dof(cell, 2 * a + 1)];
    s.u += val * Vec2{cx, cy};
    s.u_old += val * Vec2{ox, oy};
    s.grad_u += Mat2{cx * g.x, cx * g.y, cy * g.x, cy * g.y};
  }
  for (int row = 0; row < 2; ++row) {
    Vec2 v{0.0, 0.0};
    double dv = 0.0;
    const double* coeffs = state.sigma.coeffs.data() + row * sp.n_srow;
    for (int k = 0; k < nr; ++k) {
      double c = coeffs[sp.srow.dof(cell, k)];
      v += c * cd.rt_vals[static_cast<size_t>(q) * nr + k];
      dv += c * cd.rt_divs[static_cast<size_t>(q) * nr + k];
    }
    if (row == 0) {
      s.sigma.xx = v.x;
      s.sigma.xy = v.y;
      s.div_sigma.x = dv;
    } else {
      s.sigma.yx = v.x;
      s.sigma.yy = v.y;
      s.div_sigma.y = dv;
    }
  }
  return s;
}

// Residual derivatives of all local basis directions at one point.
void basis_derivatives(const Spaces& sp, Mode mode, const PointCoefs& c,
                       const PhysicalParams& params, const CellData& cd,
                       const Vec2& u, int q, std::vector<ResidualSample>& dr) {
  const int nl = lagrange_size(sp.order);
  const int nr = rt_size(sp.order - 1);
  dr.resize(2 * nl + 2 * nr);
  int i = 0;
  for (int a = 0; a < nl; ++a) {
    double val = cd.lag_vals[static_cast<size_t>(q) * nl + a];
    Vec2 g = cd.lag_grads[static_cast<size_t>(q) * nl + a];
    for (int comp = 0; comp < 2; ++comp, ++i) {
      Vec2 v = comp == 0 ? Vec2{val, 0.0} : Vec2{0.0, val};
      Mat2 grad_v = comp == 0 ? Mat2{g.x, g.y, 0.0, 0.0} : Mat2{0.0, 0.0, g.x, g.y};
      Vec2 ddrag = ocean_drag_derivative(u, c.v_o, v, params);
      ResidualSample& r = dr[i];
      r.r1 = c.beta_p * ddrag;
      if (mode == Mode::TimeDependent) r.r1 += c.beta_m * v;
      r.r2 = (-c.eta_p) * sym(grad_v);
    }
  }
  for (int row = 0; row < 2; ++row) {
    for (int k = 0; k < nr; ++k, ++i) {
      Vec2 psi = cd.rt_vals[static_cast<size_t>(q) * nr + k];
      double dpsi = cd.rt_divs[static_cast<size_t>(q) * nr + k];
      ResidualSample& r = dr[i];
      r.r1 = row == 0 ? Vec2{-c.beta_p * dpsi, 0.0} : Vec2{0.0, -c.beta_p * dpsi};
      r.r2 = row == 0 ? Mat2{c.eta_m * psi.x, c.eta_m * psi.y, 0.0, 0.0}
                      : Mat2{0.0, 0.0, c.eta_m * psi.x, c.eta_m * psi.y};
    }
  }
}

void global_dofs(const Spaces& sp, int cell, std::vector<int>& dofs) {
  const int nl = lagrange_size(sp.order);
  const int nr = rt_size(sp.order - 1);
  dofs.resize(2 * nl + 2 * nr);
  int i = 0;
  for (int a = 0; a < 2 * nl; ++a, ++i) dofs[i] = sp.vel.dof(cell, a);
  for (int row = 0; row < 2; ++row)
    for (int k = 0; k < nr; ++k, ++i)
      dofs[i] = sp.sigma_offset(row) + sp.srow.dof(cell, k);
}

bool is_constrained(const Spaces& sp, int gdof) {
  if (gdof < sp.n_u) return sp.vel.constrained[gdof];
  return sp.srow.constrained[(gdof - sp.n_u) % sp.n_srow];
}

double inner(const ResidualSample& a, const ResidualSample& b) {
  return dot(a.r1, b.r1) + ddot(a.r2, b.r2);
}

}  // namespace

Spaces make_spaces(const Triangulation& tri, int order) {
  if (order != 1 && order != 2)
    throw Error("make_spaces: velocity order must be 1 or 2");
  Spaces sp;
  sp.mesh = &tri;
  sp.order = order;
  sp.vel_desc = velocity_space(order);
  sp.stress_desc = stress_row_space(order - 1);
  sp.vel = build_dofmap(sp.vel_desc, tri);
  sp.srow = build_dofmap(sp.stress_desc, tri);
  sp.n_u = sp.vel.n_dofs;
  sp.n_srow = sp.srow.n_dofs;
  sp.n_total = sp.n_u + 2 * sp.n_srow;
  return sp;
}

State make_zero_state(const Spaces& sp) {
  State s;
  s.u = {sp.vel_desc, std::vector<double>(sp.n_u, 0.0)};
  s.u_old = {sp.vel_desc, std::vector<double>(sp.n_u, 0.0)};
  s.sigma = {sp.stress_desc, std::vector<double>(2 * sp.n_srow, 0.0)};
  return s;
}

ResidualSample residual_at(const State& state, const ModelData& model, Mode mode,
                           const Spaces& sp, int cell, const Vec2& ref) {
  auto uv = evaluate_velocity(*sp.mesh, sp.vel, sp.order, state.u.coeffs, cell, ref);
  auto ov = evaluate_velocity(*sp.mesh, sp.vel, sp.order, state.u_old.coeffs, cell, ref);
  auto sv = evaluate_stress(*sp.mesh, sp.srow, sp.order - 1, state.sigma.coeffs, cell, ref);
  Vec2 x = sp.mesh->cell_map(cell).apply(ref);
  PointCoefs c = coefs_at(model, x);
  return point_residual(mode, c, model.params, uv.value, ov.value, uv.grad,
                        sv.value, sv.div);
}

ResidualSample residual_derivative_at(const State& state, const ModelData& model,
                                      Mode mode, const Spaces& sp, int cell,
                                      const Vec2& ref, const DirectionSample& dir) {
  auto uv = evaluate_velocity(*sp.mesh, sp.vel, sp.order, state.u.coeffs, cell, ref);
  Vec2 x = sp.mesh->cell_map(cell).apply(ref);
  PointCoefs c = coefs_at(model, x);
  return point_residual_derivative(mode, c, model.params, uv.value, dir);
}

DirectionSample direction_at(const Spaces& sp, std::span<const double> x,
                             int cell, const Vec2& ref) {
  DirectionSample d;
  auto uv = evaluate_velocity(*sp.mesh, sp.vel, sp.order, x.subspan(0, sp.n_u),
                              cell, ref);
  d.v = uv.value;
  d.grad_v = uv.grad;
  auto sv = evaluate_stress(*sp.mesh, sp.srow, sp.order - 1,
                            x.subspan(sp.n_u, 2 * sp.n_srow), cell, ref);
  d.tau = sv.value;
  d.div_tau = sv.div;
  return d;
}

std::vector<double> local_indicators(const State& state, const ModelData& model,
                                     Mode mode, const Spaces& sp) {
  const QuadratureRule& q = quad();
  std::vector<double> eta_sq(sp.mesh->n_cells(), 0.0);
  CellData cd;
  for (int cell = 0; cell < sp.mesh->n_cells(); ++cell) {
    cd.fill(sp, cell, q);
    double acc = 0.0;
    for (int k = 0; k < q.size(); ++k) {
      PointCoefs c = coefs_at(model, cd.phys_points[k]);
      StateAtPoint s = state_at(sp, state, cd, cell, k);
      ResidualSample r = point_residual(mode, c, model.params, s.u, s.u_old,
                                        s.grad_u, s.sigma, s.div_sigma);
      acc += q.weights[k] * cd.map.det * (dot(r.r1, r.r1) + ddot(r.r2, r.r2));
    }
    eta_sq[cell] = acc;
  }
  return eta_sq;
}

double functional(const State& state, const ModelData& model, Mode mode,
                  const Spaces& sp) {
  std::vector<double> eta_sq = local_indicators(state, model, mode, sp);
  double sum = 0.0;
  for (double v : eta_sq) sum += v;
  return sum;
}

namespace {

void assemble_impl(const State& state, const ModelData& model, Mode mode,
                   const Spaces& sp, SparseMatrix* matrix,
                   std::vector<double>& rhs) {
  const QuadratureRule& q = quad();
  const int nloc = 2 * lagrange_size(sp.order) + 2 * rt_size(sp.order - 1);

  rhs.assign(sp.n_total, 0.0);
  CellData cd;
  std::vector<int> dofs;
  std::vector<ResidualSample> dr;
  std::vector<double> local_m(static_cast<size_t>(nloc) * nloc);
  std::vector<double> local_r(nloc);

  for (int cell = 0; cell < sp.mesh->n_cells(); ++cell) {
    cd.fill(sp, cell, q);
    global_dofs(sp, cell, dofs);
    std::fill(local_m.begin(), local_m.end(), 0.0);
    std::fill(local_r.begin(), local_r.end(), 0.0);

    for (int k = 0; k < q.size(); ++k) {
      const double w = q.weights[k] * cd.map.det;
      PointCoefs c = coefs_at(model, cd.phys_points[k]);
      StateAtPoint s = state_at(sp, state, cd, cell, k);
      ResidualSample r = point_residual(mode, c, model.params, s.u, s.u_old,
                                        s.grad_u, s.sigma, s.div_sigma);
      basis_derivatives(sp, mode, c, model.params, cd, s.u, k, dr);
      for (int i = 0; i < nloc; ++i) {
        local_r[i] -= w * inner(r, dr[i]);
        if (!matrix) continue;
        for (int j = i; j < nloc; ++j)
          local_m[static_cast<size_t>(i) * nloc + j] += w * inner(dr[i], dr[j]);
      }
    }

    for (int i = 0; i < nloc; ++i) {
      int gi = dofs[i];
      if (is_constrained(sp, gi)) continue;
      rhs[gi] += local_r[i];
      if (!matrix) continue;
      for (int j = 0; j < nloc; ++j) {
        int gj = dofs[j];
        if (is_constrained(sp, gj)) continue;
        double v = i <= j ? local_m[static_cast<size_t>(i) * nloc + j]
                          : local_m[static_cast<size_t>(j) * nloc + i];
        matrix->at(gi, gj) += v;
      }
    }
  }

  if (matrix) {
    for (int d = 0; d < sp.n_total; ++d)
      if (is_constrained(sp, d)) matrix->at(d, d) = 1.0;
  }
}

}  // namespace

GaussNewtonSystem assemble(const State& state, const ModelData& model, Mode mode,
                           const Spaces& sp) {
  // sparsity pattern from cell couplings, diagonal always present
  std::vector<std::vector<int>> pattern(sp.n_total);
  std::vector<int> dofs;
  for (int cell = 0; cell < sp.mesh->n_cells(); ++cell) {
    global_dofs(sp, cell, dofs);
    for (int gi : dofs) {
      if (is_constrained(sp, gi)) continue;
      auto& row = pattern[gi];
      for (int gj : dofs)
        if (!is_constrained(sp, gj)) row.push_back(gj);
    }
  }
  for (int d = 0; d < sp.n_total; ++d) pattern[d].push_back(d);

  GaussNewtonSystem sys;
  sys.matrix = make_csr(sp.n_total, pattern);
  assemble_impl(state, model, mode, sp, &sys.matrix, sys.rhs);
  return sys;
}

std::vector<double> assemble_gradient(const State& state, const ModelData& model,
                                      Mode mode, const Spaces& sp) {
  std::vector<double> rhs;
  assemble_impl(state, model, mode, sp, nullptr, rhs);
  return rhs;
}

double l2_norm_sq_velocity(const Spaces& sp, std::span<const double> u_coeffs) {
  return l2_diff_sq_velocity(sp, u_coeffs, [](const Vec2&) { return Vec2{0.0, 0.0}; });
}

double l2_diff_sq_velocity(const Spaces& sp, std::span<const double> u_coeffs,
                           const VectorField& exact) {
  const QuadratureRule& q = quad();
  const int nl = lagrange_size(sp.order);
  CellData cd;
  double acc = 0.0;
  for (int cell = 0; cell < sp.mesh->n_cells(); ++cell) {
    cd.fill(sp, cell, q);
    for (int k = 0; k < q.size(); ++k) {
      Vec2 u{0.0, 0.0};
      for (int a = 0; a < nl; ++a) {
        double val = cd.lag_vals[static_cast<size_t>(k) * nl + a];
        u += val * Vec2{u_coeffs[sp.vel.dof(cell, 2 * a)],
                        u_coeffs[sp.vel.dof(cell, 2 * a + 1)]};
      }
      Vec2 diff = u - exact(cd.phys_points[k]);
      acc += q.weights[k] * cd.map.det * dot(diff, diff);
    }
  }
  return acc;
}

double triple_norm_sq(const Spaces& sp, std::span<const double> u_coeffs,
                      std::span<const double> sigma_coeffs) {
  AnalyticPair zero{[](const Vec2&) { return Vec2{0.0, 0.0}; },
                    [](const Vec2&) { return Mat2{}; },
                    [](const Vec2&) { return Mat2{}; },
                    [](const Vec2&) { return Vec2{0.0, 0.0}; }};
  return triple_norm_sq_error(sp, u_coeffs, sigma_coeffs, zero);
}

double triple_norm_sq_error(const Spaces& sp, std::span<const double> u_coeffs,
                            std::span<const double> sigma_coeffs,
                            const AnalyticPair& exact) {
  const QuadratureRule& q = quad();
  const int nl = lagrange_size(sp.order);
  const int nr = rt_size(sp.order - 1);
  CellData cd;
  double acc = 0.0;
  for (int cell = 0; cell < sp.mesh->n_cells(); ++cell) {
    cd.fill(sp, cell, q);
    for (int k = 0; k < q.size(); ++k) {
      Vec2 u{0.0, 0.0};
      Mat2 grad_u;
      for (int a = 0; a < nl; ++a) {
        double val = cd.lag_vals[static_cast<size_t>(k) * nl + a];
        Vec2 g = cd.lag_grads[static_cast<size_t>(k) * nl + a];
        double cx = u_coeffs[sp.vel.dof(cell, 2 * a)];
        double cy = u_coeffs[sp.vel.dof(cell, 2 * a + 1)];
        u += val * Vec2{cx, cy};
        grad_u += Mat2{cx * g.x, cx * g.y, cy * g.x, cy * g.y};
      }
      Mat2 sigma;
      Vec2 div_sigma;
      for (int row = 0; row < 2; ++row) {
        Vec2 v{0.0, 0.0};
        double dv = 0.0;
        const double* coeffs = sigma_coeffs.data() + row * sp.n_srow;
        for (int kk = 0; kk < nr; ++kk) {
          double cval = coeffs[sp.srow.dof(cell, kk)];
          v += cval * cd.rt_vals[static_cast<size_t>(k) * nr + kk];
          dv += cval * cd.rt_divs[static_cast<size_t>(k) * nr + kk];
        }
        if (row == 0) {
          sigma.xx = v.x;
          sigma.xy = v.y;
          div_sigma.x = dv;
        } else {
          sigma.yx = v.x;
          sigma.yy = v.y;
          div_sigma.y = dv;
        }
      }
      const Vec2& x = cd.phys_points[k];
      Vec2 du = u - exact.u(x);
      Mat2 dg = grad_u - exact.grad_u(x);
      Mat2 ds = sigma - exact.sigma(x);
      Vec2 dd = div_sigma - exact.div_sigma(x);
      acc += q.weights[k] * cd.map.det *
             (dot(du, du) + ddot(dg, dg) + ddot(ds, ds) + dot(dd, dd));
    }
  }
  return acc;
}

}  // namespace icefem
