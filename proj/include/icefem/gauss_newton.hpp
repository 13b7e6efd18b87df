#ifndef ICEFEM_GAUSS_NEWTON_HPP
#define ICEFEM_GAUSS_NEWTON_HPP

#include <vector>

#include "icefem/lsq.hpp"

namespace icefem {

struct GaussNewtonConfig {
  double tol = 1e-4;   // relative functional decrease
  int max_iter = 50;
  bool damping = true;  // halve the step (up to 10 times) on an increase
  double cg_tol = 1e-10;
  int cg_max_iter = 0;  // 0: automatic

  void validate() const;
};

struct GnIterLog {
  int iter = 0;
  double functional = 0.0;
  double tau_stop = 0.0;
  int halvings = 0;
  int cg_iterations = 0;
};

struct GnResult {
  bool converged = false;
  int iterations = 0;
  double functional_initial = 0.0;
  double functional = 0.0;
  std::vector<GnIterLog> log;
};

/// Minimizes the least-squares functional by damped Gauss-Newton steps,
/// solving the normal equations each iteration and stopping once the
/// relative decrease tau_stop = 1 - H_k / H_{k-1} falls into [0, tol].
/// Hitting max_iter returns converged = false instead of throwing.
GnResult gauss_newton(State& state, const ModelData& model, Mode mode,
                      const Spaces& sp, const GaussNewtonConfig& cfg);

struct TimeLoopConfig {
  double dt = 600.0;
  int n_steps = 1;
  bool sigma_zero_init = false;  // start sigma at 0 instead of 2 eta eps(u0)

  void validate() const;
};

struct StepLog {
  int step = 0;
  int gn_iterations = 0;
  double functional = 0.0;
  double tau_stop = 0.0;
  double u_minus_vo_norm = 0.0;
  bool gn_converged = true;
};

/// One backward-Euler step: shift u_old, advance the model time and run
/// Gauss-Newton in time-dependent mode.
StepLog advance_step(State& state, ModelData& model, const Spaces& sp, int step,
                     const GaussNewtonConfig& cfg);

/// Consistent stress initialization: RT interpolation of 2 eta eps(u).
void initialize_sigma(State& state, const ModelData& model, const Spaces& sp);

/// Backward-Euler time marching on a fixed active mesh.
std::vector<StepLog> time_march(State& state, ModelData& model, const Spaces& sp,
                                const TimeLoopConfig& loop,
                                const GaussNewtonConfig& cfg);

}  // namespace icefem

#endif
