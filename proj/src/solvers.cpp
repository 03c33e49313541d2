#include "proxmom/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <stdexcept>
#include <string>

#include "proxmom/errors.hpp"
#include "proxmom/prox.hpp"
#include "proxmom/rng.hpp"

namespace proxmom {

double t_update(double t) {
  if (!(t >= 0)) throw std::invalid_argument("t_update: t must be >= 0");
  return (std::sqrt(4.0 * t * t + 1.0) + 1.0) / 2.0;
}

double momentum_beta(const MomentumSchedule& schedule, int k, double adaptive_beta) {
  switch (schedule.kind) {
    case MomentumKind::none:
      return 0.0;
    case MomentumKind::ratio_k:
      if (k < 0) throw std::invalid_argument("momentum_beta: k must be >= 0");
      return static_cast<double>(k) / (k + 3.0);
    case MomentumKind::adaptive:
      return adaptive_beta;
    case MomentumKind::nesterov_t:
      throw std::invalid_argument(
          "momentum_beta: nesterov_t momentum comes from the t-sequence, not a beta");
  }
  throw std::invalid_argument("momentum_beta: unknown momentum kind");
}

StepChoice accept_step(double F_prox, double F_extrap) {
  if (std::isnan(F_prox) || std::isnan(F_extrap))
    throw DivergedError("accept_step: objective value is NaN");
  if (std::isinf(F_prox) && F_prox > 0 && std::isinf(F_extrap) && F_extrap > 0)
    throw DivergedError("accept_step: both candidate values are +inf");
  return F_prox <= F_extrap ? StepChoice::prox : StepChoice::extrapolated;
}

namespace {

void validate_common(const CompositeObjective& obj, const Vector& x0, double eta, int max_iters) {
  if (obj.dim < 1) throw std::invalid_argument("solver: objective dimension must be >= 1");
  if (x0.size() != obj.dim) throw std::invalid_argument("solver: x0 dimension mismatch");
  if (!(eta > 0)) throw std::invalid_argument("solver: eta must be positive");
  if (max_iters < 1) throw std::invalid_argument("solver: max_iters must be >= 1");
}

void warn_step_size(Trace& tr, double eta, double L) {
  if (L > 0 && eta >= 1.0 / L)
    tr.warnings.push_back("eta >= 1/L (" + std::to_string(eta) + " vs 1/L = " +
                          std::to_string(1.0 / L) + "); proceeding anyway");
}

double feasible_start_value(const CompositeObjective& obj, const Vector& x0) {
  double F0 = eval_F(obj, x0);
  if (!std::isfinite(F0))
    throw std::invalid_argument("solver: x0 must have a finite objective value");
  return F0;
}

// Shared engine for the accept-step family. momentum none reproduces plain
// proximal gradient bit-for-bit (beta = 0 keeps v identical to x), and zero
// error schedules reproduce the exact run bit-for-bit (no rng draws happen).
Trace run_accept_engine(const CompositeObjective& obj, const Vector& x0, const SolverConfig& cfg,
                        bool inexact) {
  validate_common(obj, x0, cfg.eta, cfg.max_iters);
  const MomentumKind kind = cfg.momentum.kind;
  if (kind == MomentumKind::adaptive) {
    if (!(cfg.momentum.beta0 > 0 && cfg.momentum.beta0 <= 1))
      throw std::invalid_argument("solver: adaptive beta0 must lie in (0,1]");
    if (!(cfg.momentum.t_shrink > 0 && cfg.momentum.t_shrink < 1))
      throw std::invalid_argument("solver: adaptive t_shrink must lie in (0,1)");
  }

  Trace tr;
  const double eta = cfg.eta;
  const double L = obj.smooth.lipschitz;
  const double resid_scale = L + 1.0 / eta;
  warn_step_size(tr, eta, L);

  Rng rng(cfg.rng_seed);
  Vector y = x0;
  Vector x_prev = x0;
  double F_y = feasible_start_value(obj, x0);
  double adaptive_beta = cfg.momentum.beta0;

  for (int k = 1; k <= cfg.max_iters; ++k) {
    Vector grad = obj.smooth.gradient(y);
    double grad_err = 0.0;
    if (inexact && cfg.grad_error_schedule) {
      grad_err = cfg.grad_error_schedule(k);
      if (!(grad_err >= 0))
        throw std::invalid_argument("solver: gradient error schedule must be >= 0");
      if (grad_err > 0) grad += grad_err * rng.unit_vector(obj.dim);
    }
    double eps_k = 0.0;
    if (inexact && cfg.prox_error_schedule) {
      eps_k = cfg.prox_error_schedule(k);
      if (!(eps_k >= 0)) throw std::invalid_argument("solver: prox error schedule must be >= 0");
    }

    Vector w = y - eta * grad;
    Vector x;
    double gap = 0.0;
    if (eps_k > 0) {
      InexactProxRequest req;
      req.target_gap = eps_k;
      req.rng_seed = rng.next_u64();
      InexactProxResult res = inexact_prox(obj.nonsmooth, w, eta, req);
      x = std::move(res.u);
      gap = res.achieved_gap;
    } else {
      x = obj.nonsmooth.prox(w, eta);
    }
    double F_x = eval_F(obj, x);
    if (!std::isfinite(F_x))
      throw DivergedError("solver: prox point has non-finite objective at iteration " +
                          std::to_string(k));

    double beta = momentum_beta(cfg.momentum, k, adaptive_beta);
    Vector v = x + beta * (x - x_prev);
    double F_v = eval_F(obj, v);
    StepChoice choice = accept_step(F_x, F_v);

    double step = (x - y).norm();
    double residual = resid_scale * step;
    if (inexact && step > 0) {
      tr.inexact.max_grad_err_ratio = std::max(tr.inexact.max_grad_err_ratio, grad_err / step);
      tr.inexact.max_eps_ratio = std::max(tr.inexact.max_eps_ratio, eps_k / (step * step));
    }

    IterationRecord rec;
    rec.k = k;
    rec.F_x = F_x;
    rec.F_y = F_y;
    rec.step_norm = step;
    rec.residual = residual;
    rec.beta = beta;
    rec.passes = static_cast<double>(k);
    rec.chose_extrapolation = (choice == StepChoice::extrapolated);
    rec.eps_realized = gap;
    rec.grad_err_realized = grad_err;
    tr.records.push_back(rec);

    if (choice == StepChoice::prox) {
      y = x;
      F_y = F_x;
      if (kind == MomentumKind::adaptive) adaptive_beta *= cfg.momentum.t_shrink;
    } else {
      if (!std::isfinite(F_v))
        throw DivergedError("solver: accepted point has non-finite objective at iteration " +
                            std::to_string(k));
      y = std::move(v);
      F_y = F_v;
      if (kind == MomentumKind::adaptive)
        adaptive_beta = std::min(adaptive_beta / cfg.momentum.t_shrink, 1.0);
    }
    x_prev = x;
    tr.final_x = std::move(x);
    tr.final_F = F_x;

    if (cfg.residual_tol > 0 && residual <= cfg.residual_tol) {
      tr.terminated_by = StopReason::tolerance;
      return tr;
    }
  }
  tr.terminated_by = StopReason::max_iters;
  return tr;
}

void require_kind(const SolverConfig& cfg, std::initializer_list<MomentumKind> allowed,
                  const char* who) {
  for (MomentumKind k : allowed)
    if (cfg.momentum.kind == k) return;
  throw std::invalid_argument(std::string(who) + ": momentum kind not supported by this solver");
}

}  // namespace

Trace run_proximal_gradient(const CompositeObjective& obj, const Vector& x0,
                            const SolverConfig& cfg) {
  require_kind(cfg, {MomentumKind::none}, "run_proximal_gradient");
  return run_accept_engine(obj, x0, cfg, false);
}

Trace run_apgnc(const CompositeObjective& obj, const Vector& x0, const SolverConfig& cfg) {
  require_kind(cfg, {MomentumKind::ratio_k, MomentumKind::none}, "run_apgnc");
  return run_accept_engine(obj, x0, cfg, false);
}

Trace run_apgnc_plus(const CompositeObjective& obj, const Vector& x0, const SolverConfig& cfg) {
  require_kind(cfg, {MomentumKind::adaptive}, "run_apgnc_plus");
  return run_accept_engine(obj, x0, cfg, false);
}

Trace run_inexact_apgnc(const CompositeObjective& obj, const Vector& x0, const SolverConfig& cfg) {
  require_kind(cfg, {MomentumKind::ratio_k, MomentumKind::none}, "run_inexact_apgnc");
  return run_accept_engine(obj, x0, cfg, true);
}

Trace run_apg(const CompositeObjective& obj, const Vector& x0, const SolverConfig& cfg) {
  require_kind(cfg, {MomentumKind::nesterov_t}, "run_apg");
  validate_common(obj, x0, cfg.eta, cfg.max_iters);

  Trace tr;
  const double eta = cfg.eta;
  const double L = obj.smooth.lipschitz;
  const double resid_scale = L + 1.0 / eta;
  warn_step_size(tr, eta, L);
  feasible_start_value(obj, x0);

  Vector x = x0, x_prev = x0;
  double t_prev = 0.0, t = 1.0;
  for (int k = 1; k <= cfg.max_iters; ++k) {
    double beta = (t_prev - 1.0) / t;
    Vector y = x + beta * (x - x_prev);
    double F_y = eval_F(obj, y);
    Vector x_next = obj.nonsmooth.prox(y - eta * obj.smooth.gradient(y), eta);
    double F_x = eval_F(obj, x_next);
    if (!std::isfinite(F_x))
      throw DivergedError("run_apg: non-finite objective at iteration " + std::to_string(k));

    double step = (x_next - y).norm();
    IterationRecord rec;
    rec.k = k;
    rec.F_x = F_x;
    rec.F_y = F_y;
    rec.step_norm = step;
    rec.residual = resid_scale * step;
    rec.beta = beta;
    rec.passes = static_cast<double>(k);
    tr.records.push_back(rec);

    x_prev = x;
    x = std::move(x_next);
    double t_next = t_update(t);
    t_prev = t;
    t = t_next;
    tr.final_x = x;
    tr.final_F = F_x;
    if (cfg.residual_tol > 0 && rec.residual <= cfg.residual_tol) {
      tr.terminated_by = StopReason::tolerance;
      return tr;
    }
  }
  tr.terminated_by = StopReason::max_iters;
  return tr;
}

Trace run_mapg(const CompositeObjective& obj, const Vector& x0, const SolverConfig& cfg) {
  require_kind(cfg, {MomentumKind::nesterov_t}, "run_mapg");
  validate_common(obj, x0, cfg.eta, cfg.max_iters);

  Trace tr;
  const double eta = cfg.eta;
  const double L = obj.smooth.lipschitz;
  const double resid_scale = L + 1.0 / eta;
  warn_step_size(tr, eta, L);
  feasible_start_value(obj, x0);

  Vector x = x0, x_prev = x0, z = x0;
  double t_prev = 0.0, t = 1.0;
  for (int k = 1; k <= cfg.max_iters; ++k) {
    double beta = (t_prev - 1.0) / t;
    Vector y = x + (t_prev / t) * (z - x) + beta * (x - x_prev);
    double F_y = eval_F(obj, y);
    Vector z_next = obj.nonsmooth.prox(y - eta * obj.smooth.gradient(y), eta);
    Vector v_next = obj.nonsmooth.prox(x - eta * obj.smooth.gradient(x), eta);
    double F_z = eval_F(obj, z_next);
    double F_v = eval_F(obj, v_next);
    // Ties keep the momentum branch z, so z sits in the preferred slot.
    StepChoice choice = accept_step(F_z, F_v);
    bool z_taken = (choice == StepChoice::prox);
    double F_x = z_taken ? F_z : F_v;
    if (!std::isfinite(F_x))
      throw DivergedError("run_mapg: non-finite objective at iteration " + std::to_string(k));

    double step = z_taken ? (z_next - y).norm() : (v_next - x).norm();
    IterationRecord rec;
    rec.k = k;
    rec.F_x = F_x;
    rec.F_y = F_y;
    rec.step_norm = step;
    rec.residual = resid_scale * step;
    rec.beta = beta;
    rec.passes = 2.0 * k;  // two prox-gradient steps per iteration
    rec.chose_extrapolation = z_taken;
    tr.records.push_back(rec);

    x_prev = x;
    x = z_taken ? z_next : v_next;
    z = std::move(z_next);
    double t_next = t_update(t);
    t_prev = t;
    t = t_next;
    tr.final_x = x;
    tr.final_F = F_x;
    if (cfg.residual_tol > 0 && rec.residual <= cfg.residual_tol) {
      tr.terminated_by = StopReason::tolerance;
      return tr;
    }
  }
  tr.terminated_by = StopReason::max_iters;
  return tr;
}

}  // namespace proxmom
