#ifndef ICEFEM_LSQ_HPP
#define ICEFEM_LSQ_HPP

#include <span>
#include <vector>

#include "icefem/fe_function.hpp"
#include "icefem/model.hpp"
#include "icefem/sparse.hpp"

namespace icefem {

/// Which first-order system is minimized: the time-discrete one including
/// the beta^{-1/2} (u - u_old) term, or its stationary counterpart.
enum class Mode { TimeDependent, Stationary };

/// Discrete spaces of the method: vector Lagrange velocity of the given
/// order k paired with row-wise Raviart-Thomas stress of order k-1.
struct Spaces {
  const Triangulation* mesh = nullptr;
  int order = 2;
  SpaceDescriptor vel_desc, stress_desc;
  DofMap vel;   // velocity dofs
  DofMap srow;  // one stress row
  int n_u = 0, n_srow = 0, n_total = 0;

  int sigma_offset(int row) const { return n_u + row * n_srow; }
};

Spaces make_spaces(const Triangulation& tri, int order = 2);

/// Solver state: velocity and stress coefficients plus the previous-step
/// velocity.
struct State {
  FeFunction u;
  FeFunction u_old;
  FeFunction sigma;  // two stacked rows
};

State make_zero_state(const Spaces& sp);

/// Scaled pointwise residuals of the first-order system:
///   r1 = beta^{-1/2}(u - u_old) + beta^{1/2}(drag - div sigma - g)
///   r2 = (2 eta)^{-1/2} sigma - (2 eta)^{1/2} eps(u)
/// Stationary mode drops the (u - u_old) term.
struct ResidualSample {
  Vec2 r1;
  Mat2 r2;
};

/// A direction (v, tau) evaluated at a point.
struct DirectionSample {
  Vec2 v;
  Mat2 grad_v;
  Mat2 tau;
  Vec2 div_tau;
};

ResidualSample residual_at(const State& state, const ModelData& model, Mode mode,
                           const Spaces& sp, int cell, const Vec2& ref);

/// Gateaux derivative of the residual in the given direction:
///   Dr1 = beta^{-1/2} v + beta^{1/2}(D drag[v] - div tau)
///   Dr2 = (2 eta)^{-1/2} tau - (2 eta)^{1/2} eps(v)
ResidualSample residual_derivative_at(const State& state, const ModelData& model,
                                      Mode mode, const Spaces& sp, int cell,
                                      const Vec2& ref, const DirectionSample& dir);

/// Evaluates a product-space coefficient vector (velocity ++ sigma rows) as
/// a direction at a point.
DirectionSample direction_at(const Spaces& sp, std::span<const double> x,
                             int cell, const Vec2& ref);

/// Global least-squares functional: sum over cells of int |r1|^2 + |r2|^2.
double functional(const State& state, const ModelData& model, Mode mode,
                  const Spaces& sp);

/// Element-local functional values; they sum to the global functional.
std::vector<double> local_indicators(const State& state, const ModelData& model,
                                     Mode mode, const Spaces& sp);

/// Normal equations of one Gauss-Newton step:
///   matrix_ij = int DR[phi_i] . DR[phi_j],   rhs_i = -int R . DR[phi_i]
/// with dof layout velocity ++ stress row 1 ++ stress row 2 and constrained
/// dofs eliminated to identity rows with zero right-hand side.
struct GaussNewtonSystem {
  SparseMatrix matrix;
  std::vector<double> rhs;
};

GaussNewtonSystem assemble(const State& state, const ModelData& model, Mode mode,
                           const Spaces& sp);

/// Right-hand side only (the functional's negative half-gradient).
std::vector<double> assemble_gradient(const State& state, const ModelData& model,
                                      Mode mode, const Spaces& sp);

// Quadrature-evaluated norms on the discrete spaces.
double l2_norm_sq_velocity(const Spaces& sp, std::span<const double> u_coeffs);
double l2_diff_sq_velocity(const Spaces& sp, std::span<const double> u_coeffs,
                           const VectorField& exact);

/// Graph norm ||u||^2 + ||grad u||^2 + ||sigma||^2 + ||div sigma||^2.
double triple_norm_sq(const Spaces& sp, std::span<const double> u_coeffs,
                      std::span<const double> sigma_coeffs);

/// Exact fields for error norms against an analytic pair.
struct AnalyticPair {
  VectorField u;
  MatrixField grad_u;
  MatrixField sigma;
  VectorField div_sigma;
};

/// ||| (u* - u_h, sigma* - sigma_h) |||^2.
double triple_norm_sq_error(const Spaces& sp, std::span<const double> u_coeffs,
                            std::span<const double> sigma_coeffs,
                            const AnalyticPair& exact);

}  // namespace icefem

#endif
