#include "proxmom/svrg.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <utility>

#include "proxmom/errors.hpp"
#include "proxmom/prox.hpp"
#include "proxmom/rng.hpp"

namespace proxmom {

Vector svrg_gradient_estimate(const CompositeObjective& obj, const Vector& x,
                              const Vector& snapshot, const Vector& g_full, int xi) {
  if (x.size() != obj.dim || snapshot.size() != obj.dim || g_full.size() != obj.dim)
    throw std::invalid_argument("svrg_gradient_estimate: dimension mismatch");
  if (xi < 0 || xi >= obj.smooth.n_components)
    throw std::invalid_argument("svrg_gradient_estimate: component index out of range");
  return obj.smooth.component_gradient(xi, x) - obj.smooth.component_gradient(xi, snapshot) +
         g_full;
}

bool check_rho_condition(double rho, int m, bool inexact) {
  if (m < 1) throw std::invalid_argument("check_rho_condition: m must be >= 1");
  if (!(rho > 0) || rho >= 0.5) return false;
  double quad = (inexact ? 8.0 : 4.0) * rho * rho * static_cast<double>(m) * m;
  return quad + rho <= 1.0;
}

namespace {

// Variance-reduced engine shared by all four svrg entry points. momentum
// none keeps z identical to x_k^m bit-for-bit, and a null/zero error
// schedule takes the exact prox path with no extra rng draws, so the
// documented reductions hold exactly.
Trace run_svrg_engine(const CompositeObjective& obj, const Vector& x0, const SvrgConfig& cfg,
                      bool inexact) {
  const int n = obj.smooth.n_components;
  if (obj.dim < 1) throw std::invalid_argument("svrg: objective dimension must be >= 1");
  if (x0.size() != obj.dim) throw std::invalid_argument("svrg: x0 dimension mismatch");
  if (n < 1) throw std::invalid_argument("svrg: n_components must be >= 1");
  if (cfg.m < 1) throw std::invalid_argument("svrg: m must be >= 1");
  if (cfg.max_epochs < 1) throw std::invalid_argument("svrg: max_epochs must be >= 1");
  const MomentumKind kind = cfg.momentum.kind;
  if (kind == MomentumKind::nesterov_t)
    throw std::invalid_argument("svrg: nesterov_t momentum is not supported");
  if (kind == MomentumKind::adaptive) {
    if (!(cfg.momentum.beta0 > 0 && cfg.momentum.beta0 <= 1))
      throw std::invalid_argument("svrg: adaptive beta0 must lie in (0,1]");
    if (!(cfg.momentum.t_shrink > 0 && cfg.momentum.t_shrink < 1))
      throw std::invalid_argument("svrg: adaptive t_shrink must lie in (0,1)");
  }
  if (inexact && !obj.nonsmooth.is_convex)
    throw UnsupportedModeError("svrg: inexact prox steps need a convex g");

  const double L = obj.smooth.lipschitz;
  double eta = cfg.eta;
  if (cfg.rho > 0) {
    if (!(cfg.rho < 0.5)) throw std::invalid_argument("svrg: rho must lie in (0, 1/2)");
    if (!(L > 0)) throw std::invalid_argument("svrg: rho-based step size needs lipschitz > 0");
    eta = cfg.rho / L;
  }
  if (!(eta > 0)) throw std::invalid_argument("svrg: eta must be positive");

  Trace tr;
  if (L > 0 && eta >= 1.0 / L)
    tr.warnings.push_back("eta >= 1/L (" + std::to_string(eta) + " vs 1/L = " +
                          std::to_string(1.0 / L) + "); proceeding anyway");
  if (n == 1 && cfg.m > 1)
    tr.warnings.push_back("n_components = 1 makes sampling deterministic; m > 1 adds no variance reduction");

  double F_y = eval_F(obj, x0);
  if (!std::isfinite(F_y)) throw std::invalid_argument("svrg: x0 must have a finite objective value");

  const double resid_scale = L + 1.0 / eta;
  Rng rng(cfg.rng_seed);
  Vector y = x0;
  Vector xm_prev = x0;
  double adaptive_beta = cfg.momentum.beta0;

  for (int k = 0; k < cfg.max_epochs; ++k) {
    Vector g_full = obj.smooth.gradient(y);
    Vector x = y;

    EpochRecord er;
    er.k = k;
    er.F_y = F_y;
    std::vector<Vector> pts;
    for (int t = 0; t < cfg.m; ++t) {
      if (cfg.record_inner_points) pts.push_back(x);
      int xi = static_cast<int>(rng.index(static_cast<std::size_t>(n)));
      Vector v = obj.smooth.component_gradient(xi, x) -
                 obj.smooth.component_gradient(xi, y) + g_full;
      Vector w = x - eta * v;
      double eps_sched = 0.0;
      if (inexact && cfg.prox_error_schedule) {
        eps_sched = cfg.prox_error_schedule(k, t);
        if (!(eps_sched >= 0))
          throw std::invalid_argument("svrg: prox error schedule must be >= 0");
      }
      Vector x_next;
      double gap = 0.0;
      if (eps_sched > 0) {
        InexactProxRequest req;
        req.target_gap = eps_sched;
        req.rng_seed = rng.next_u64();
        InexactProxResult res = inexact_prox(obj.nonsmooth, w, eta, req);
        x_next = std::move(res.u);
        gap = res.achieved_gap;
      } else {
        x_next = obj.nonsmooth.prox(w, eta);
      }
      er.inner_step_norms.push_back((x_next - x).norm());
      er.eps_scheduled_sum += eps_sched;
      er.eps_realized_sum += gap;
      x = std::move(x_next);
    }

    double F_xm = eval_F(obj, x);
    if (!std::isfinite(F_xm))
      throw DivergedError("svrg: epoch endpoint has non-finite objective at epoch " +
                          std::to_string(k));
    double beta = momentum_beta(cfg.momentum, k, adaptive_beta);
    Vector z = x + beta * (x - xm_prev);
    double F_z = eval_F(obj, z);
    StepChoice choice = accept_step(F_xm, F_z);

    // Closed form keeps the pass count exact: one snapshot gradient plus two
    // component gradients per inner step.
    double passes = (k + 1) * (1.0 + 2.0 * static_cast<double>(cfg.m) / n);
    er.passes = passes;
    er.chose_extrapolation = (choice == StepChoice::extrapolated);

    // At t = 0 the estimate equals the snapshot gradient exactly, so the
    // first inner step is the full prox-gradient step from y_k and its norm
    // certifies the stationarity residual at y_k.
    double step = er.inner_step_norms.front();
    double residual = resid_scale * step;

    IterationRecord rec;
    rec.k = k;
    rec.F_x = F_xm;
    rec.F_y = F_y;
    rec.step_norm = step;
    rec.residual = residual;
    rec.beta = beta;
    rec.passes = passes;
    rec.chose_extrapolation = er.chose_extrapolation;
    rec.eps_realized = er.eps_realized_sum;
    tr.records.push_back(rec);
    tr.epochs.push_back(std::move(er));
    if (cfg.record_inner_points) tr.inner_points.push_back(std::move(pts));

    if (choice == StepChoice::prox) {
      y = x;
      F_y = F_xm;
      if (kind == MomentumKind::adaptive) adaptive_beta *= cfg.momentum.t_shrink;
    } else {
      if (!std::isfinite(F_z))
        throw DivergedError("svrg: accepted point has non-finite objective at epoch " +
                            std::to_string(k));
      y = std::move(z);
      F_y = F_z;
      if (kind == MomentumKind::adaptive)
        adaptive_beta = std::min(adaptive_beta / cfg.momentum.t_shrink, 1.0);
    }
    xm_prev = x;
    tr.final_x = std::move(x);
    tr.final_F = F_xm;

    if (cfg.residual_tol > 0 && residual <= cfg.residual_tol) {
      tr.terminated_by = StopReason::tolerance;
      return tr;
    }
  }
  tr.terminated_by = StopReason::max_iters;
  return tr;
}

void require_svrg_kind(const SvrgConfig& cfg, std::initializer_list<MomentumKind> allowed,
                       const char* who) {
  for (MomentumKind k : allowed)
    if (cfg.momentum.kind == k) return;
  throw std::invalid_argument(std::string(who) + ": momentum kind not supported by this solver");
}

}  // namespace

Trace run_prox_svrg(const CompositeObjective& obj, const Vector& x0, const SvrgConfig& cfg) {
  require_svrg_kind(cfg, {MomentumKind::none}, "run_prox_svrg");
  return run_svrg_engine(obj, x0, cfg, false);
}

Trace run_svrg_apgnc(const CompositeObjective& obj, const Vector& x0, const SvrgConfig& cfg) {
  require_svrg_kind(cfg, {MomentumKind::ratio_k, MomentumKind::none}, "run_svrg_apgnc");
  return run_svrg_engine(obj, x0, cfg, false);
}

Trace run_svrg_apgnc_plus(const CompositeObjective& obj, const Vector& x0,
                          const SvrgConfig& cfg) {
  require_svrg_kind(cfg, {MomentumKind::adaptive}, "run_svrg_apgnc_plus");
  return run_svrg_engine(obj, x0, cfg, false);
}

Trace run_inexact_svrg_apgnc(const CompositeObjective& obj, const Vector& x0,
                             const SvrgConfig& cfg) {
  require_svrg_kind(cfg, {MomentumKind::ratio_k, MomentumKind::none}, "run_inexact_svrg_apgnc");
  if (!obj.nonsmooth.is_convex)
    throw UnsupportedModeError("run_inexact_svrg_apgnc: g must be convex");
  return run_svrg_engine(obj, x0, cfg, true);
}

}  // namespace proxmom
