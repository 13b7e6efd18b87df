#ifndef ICEFEM_MODEL_HPP
#define ICEFEM_MODEL_HPP

#include <functional>
#include <optional>

#include "icefem/geometry.hpp"

namespace icefem {

/// Physical parameters; defaults are the standard values
/// (rho 900 kg/m^3, rho_o 1028 kg/m^3, C_o 5e-3, P* 25 kPa,
/// c_m 2e-9 1/s, C 20).
struct PhysicalParams {
  double rho = 900.0;       // ice density, kg/m^3
  double rho_o = 1028.0;    // seawater density, kg/m^3
  double C_o = 5.0e-3;      // water drag coefficient
  double P_star = 25.0e3;   // compressive strength, Pa
  double c_m = 2.0e-9;      // maximum creep, 1/s
  double C_hard = 20.0;     // compaction hardening
  double h_min = 0.1;       // minimum ice thickness, m
  double dt = 600.0;        // time step, s

  void validate() const;
};

struct DerivedBounds {
  double eta_min = 0.0, eta_max = 0.0;
  double beta_min = 0.0, beta_max = 0.0;
};

/// Viscosity and scaling bounds on the active domain h in [h_min, h_max].
DerivedBounds derived_bounds(const PhysicalParams& p, double h_max);

/// Shear viscosity h P*/c_m exp(C (A-1)).  A outside [0,1] and h below
/// h_min are rejected.
double eta(double A_val, double h_val, const PhysicalParams& p);

/// Time-step scaling dt / (h rho).
double beta(double h_val, const PhysicalParams& p);

/// Quadratic ocean drag rho_o C_o |u - v_o| (u - v_o).
Vec2 ocean_drag(const Vec2& u, const Vec2& v_o, const PhysicalParams& p);

/// Gateaux derivative of the drag in the given direction:
/// rho_o C_o (|w| d + (w.d)/|w| w) with w = u - v_o, and 0 at w = 0.
Vec2 ocean_drag_derivative(const Vec2& u, const Vec2& v_o, const Vec2& direction,
                           const PhysicalParams& p);

using TimeScalarField = std::function<double(const Vec2&, double)>;
using TimeVectorField = std::function<Vec2(const Vec2&, double)>;

/// Prescribed coefficient fields A(x,t) in [0,1], h(x,t) >= 0 and the
/// ocean velocity v_o(x,t).
struct CoefficientFields {
  TimeScalarField A;
  TimeScalarField h;
  TimeVectorField v_o;
};

/// Everything the residual evaluation needs at a fixed time.
struct ModelData {
  PhysicalParams params;
  CoefficientFields fields;
  std::optional<TimeVectorField> body_force;
  double time = 0.0;

  // Coefficients at a quadrature point of an active cell.  Cell activity is
  // decided from the cellwise thickness average, so h may dip below h_min
  // pointwise inside an active cell; it is clamped there.
  double eta_at(const Vec2& p) const;
  double beta_at(const Vec2& p) const;
  Vec2 v_o_at(const Vec2& p) const { return fields.v_o(p, time); }
  Vec2 body_force_at(const Vec2& p) const {
    return body_force ? (*body_force)(p, time) : Vec2{0.0, 0.0};
  }
};

}  // namespace icefem

#endif
