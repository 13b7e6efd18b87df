#include "icefem/model.hpp"

#include <algorithm>
#include <cmath>

#include "icefem/errors.hpp"

namespace icefem {

void PhysicalParams::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw ModelError(std::string("physical parameter '") + name +
                       "' must be strictly positive");
  };
  positive(rho, "rho");
  positive(rho_o, "rho_o");
  positive(C_o, "C_o");
  positive(P_star, "P_star");
  positive(c_m, "c_m");
  positive(C_hard, "C_hard");
  positive(h_min, "h_min");
  positive(dt, "dt");
}

DerivedBounds derived_bounds(const PhysicalParams& p, double h_max) {
  DerivedBounds b;
  b.eta_min = p.h_min * p.P_star / p.c_m * std::exp(-p.C_hard);
  b.eta_max = h_max * p.P_star / p.c_m;
  b.beta_min = p.dt / (h_max * p.rho);
  b.beta_max = p.dt / (p.h_min * p.rho);
  return b;
}

double eta(double A_val, double h_val, const PhysicalParams& p) {
  if (A_val < 0.0 || A_val > 1.0)
    throw ModelError("eta: concentration A outside [0,1]");
  if (h_val < p.h_min)
    throw ModelError("eta: thickness below h_min (inactive point)");
  return h_val * p.P_star / p.c_m * std::exp(p.C_hard * (A_val - 1.0));
}

double beta(double h_val, const PhysicalParams& p) {
  if (h_val < p.h_min)
    throw ModelError("beta: thickness below h_min (inactive point)");
  return p.dt / (h_val * p.rho);
}

Vec2 ocean_drag(const Vec2& u, const Vec2& v_o, const PhysicalParams& p) {
  Vec2 w = u - v_o;
  return p.rho_o * p.C_o * norm(w) * w;
}

Vec2 ocean_drag_derivative(const Vec2& u, const Vec2& v_o, const Vec2& direction,
                           const PhysicalParams& p) {
  Vec2 w = u - v_o;
  double wn = norm(w);
  if (wn == 0.0) return {0.0, 0.0};  // |w| w is differentiable at 0
  return p.rho_o * p.C_o * (wn * direction + (dot(w, direction) / wn) * w);
}

double ModelData::eta_at(const Vec2& p) const {
  double A = fields.A(p, time);
  double h = std::max(fields.h(p, time), params.h_min);
  return eta(A, h, params);
}

double ModelData::beta_at(const Vec2& p) const {
  double h = std::max(fields.h(p, time), params.h_min);
  return beta(h, params);
}

}  // namespace icefem
