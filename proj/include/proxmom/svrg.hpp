#pragma once

#include <cstdint>
#include <functional>

#include "proxmom/objective.hpp"
#include "proxmom/solvers.hpp"

namespace proxmom {

struct SvrgConfig {
  int m = 0;         // inner steps per epoch
  double eta = 0.0;  // ignored when rho > 0
  double rho = 0.0;  // if > 0: eta = rho / L, requires rho < 1/2
  int max_epochs = 0;
  MomentumSchedule momentum;
  // Per-inner-step prox gap bound (epoch k from 0, inner t from 0); null = exact.
  std::function<double(int, int)> prox_error_schedule;
  std::uint64_t rng_seed = 0;
  double residual_tol = 0.0;  // 0 disables the tolerance stop
  bool record_inner_points = false;
};

// grad f_xi(x) - grad f_xi(snapshot) + g_full, 0-based xi.
Vector svrg_gradient_estimate(const CompositeObjective& obj, const Vector& x,
                              const Vector& snapshot, const Vector& g_full, int xi);

// Step-size admissibility: rho < 1/2 and 4 rho^2 m^2 + rho <= 1 (exact) or
// 8 rho^2 m^2 + rho <= 1 (inexact). Reported by diagnostics, never enforced.
bool check_rho_condition(double rho, int m, bool inexact);

Trace run_prox_svrg(const CompositeObjective& obj, const Vector& x0, const SvrgConfig& cfg);
Trace run_svrg_apgnc(const CompositeObjective& obj, const Vector& x0, const SvrgConfig& cfg);
Trace run_svrg_apgnc_plus(const CompositeObjective& obj, const Vector& x0, const SvrgConfig& cfg);
Trace run_inexact_svrg_apgnc(const CompositeObjective& obj, const Vector& x0,
                             const SvrgConfig& cfg);

}  // namespace proxmom
