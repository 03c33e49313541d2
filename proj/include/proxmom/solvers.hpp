#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "proxmom/objective.hpp"

namespace proxmom {

enum class MomentumKind { none, nesterov_t, ratio_k, adaptive };

struct MomentumSchedule {
  MomentumKind kind = MomentumKind::none;
  double beta0 = 0.5;     // adaptive only: starting coefficient, in (0,1]
  double t_shrink = 0.5;  // adaptive only: shrink factor, in (0,1)
};

// Per-iteration error magnitude, k starting at 1. A null function means zero.
using ErrorSchedule = std::function<double(int)>;

struct SolverConfig {
  double eta = 0.0;
  MomentumSchedule momentum;
  int max_iters = 1000;
  double residual_tol = 0.0;  // 0 disables the tolerance stop
  ErrorSchedule grad_error_schedule;
  ErrorSchedule prox_error_schedule;
  std::uint64_t rng_seed = 0;
};

struct IterationRecord {
  int k = 0;
  double F_x = 0.0;
  double F_y = 0.0;
  double step_norm = 0.0;  // ||x_k - y_k|| of the accepted prox step
  double residual = 0.0;   // (L + 1/eta) * step_norm
  double beta = 0.0;
  double passes = 0.0;  // cumulative effective data passes
  bool chose_extrapolation = false;
  double eps_realized = 0.0;       // achieved prox gap (per-epoch sum for svrg)
  double grad_err_realized = 0.0;  // injected gradient error norm
};

// One variance-reduced epoch; k is the epoch index from 0.
struct EpochRecord {
  int k = 0;
  double F_y = 0.0;
  double F_xm = 0.0;
  std::vector<double> inner_step_norms;
  double passes = 0.0;
  bool chose_extrapolation = false;
  double eps_scheduled_sum = 0.0;
  double eps_realized_sum = 0.0;
};

enum class StopReason { tolerance, max_iters };

// Largest ratios seen along an inexact run, for checking error-vs-step
// conditions after the fact. Scheduled epsilons are used, not realized gaps.
struct InexactMonitor {
  double max_grad_err_ratio = 0.0;  // ||e_k|| / ||x_k - y_k||
  double max_eps_ratio = 0.0;       // eps_k / ||x_k - y_k||^2
};

struct Trace {
  std::vector<IterationRecord> records;
  std::vector<EpochRecord> epochs;  // svrg solvers only
  Vector final_x;
  double final_F = 0.0;
  StopReason terminated_by = StopReason::max_iters;
  std::vector<std::string> warnings;
  InexactMonitor inexact;
  // x_k^t for t = 0..m-1 per epoch, only when SvrgConfig asks for them.
  std::vector<std::vector<Vector>> inner_points;
};

// (sqrt(4 t^2 + 1) + 1) / 2; t_update(0) = 1.
double t_update(double t);

// Coefficient for iteration k. none: 0; ratio_k: k/(k+3); adaptive: the
// caller-held state passed in. nesterov_t has no closed-form beta and
// rejects the call.
double momentum_beta(const MomentumSchedule& schedule, int k, double adaptive_beta = 0.0);

enum class StepChoice { prox, extrapolated };

// prox iff F_prox <= F_extrap (ties keep the prox point). Throws
// DivergedError when both are +inf or either is NaN.
StepChoice accept_step(double F_prox, double F_extrap);

Trace run_proximal_gradient(const CompositeObjective& obj, const Vector& x0,
                            const SolverConfig& cfg);
Trace run_apg(const CompositeObjective& obj, const Vector& x0, const SolverConfig& cfg);
Trace run_mapg(const CompositeObjective& obj, const Vector& x0, const SolverConfig& cfg);
Trace run_apgnc(const CompositeObjective& obj, const Vector& x0, const SolverConfig& cfg);
Trace run_apgnc_plus(const CompositeObjective& obj, const Vector& x0, const SolverConfig& cfg);
Trace run_inexact_apgnc(const CompositeObjective& obj, const Vector& x0, const SolverConfig& cfg);

}  // namespace proxmom
