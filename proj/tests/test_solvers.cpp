#include <cmath>
#include <limits>
#include <stdexcept>

#include "doctest.h"
#include "proxmom/errors.hpp"
#include "proxmom/objective.hpp"
#include "proxmom/problems.hpp"
#include "proxmom/prox.hpp"
#include "proxmom/rng.hpp"
#include "proxmom/solvers.hpp"

using namespace proxmom;

namespace {

// f(x) = x^2/2, g = 0, in dimension 1. Every quantity the solvers produce on
// it is dyadic, so the traces below are asserted bit for bit.
CompositeObjective scalar_quadratic() {
  CompositeObjective obj;
  obj.dim = 1;
  obj.smooth.value = [](const Vector& x) { return 0.5 * x[0] * x[0]; };
  obj.smooth.gradient = [](const Vector& x) { return x; };
  obj.smooth.lipschitz = 1.0;
  obj.nonsmooth.value = [](const Vector&) { return 0.0; };
  obj.nonsmooth.prox = [](const Vector& y, double) { return y; };
  return obj;
}

CompositeObjective scalar_concave() {
  CompositeObjective obj;
  obj.dim = 1;
  obj.smooth.value = [](const Vector& x) { return -x[0] * x[0]; };
  obj.smooth.gradient = [](const Vector& x) { return (-2.0 * x).eval(); };
  obj.smooth.lipschitz = 2.0;
  obj.nonsmooth.value = [](const Vector&) { return 0.0; };
  obj.nonsmooth.prox = [](const Vector& y, double) { return y; };
  return obj;
}

Vector one(double v) {
  Vector x(1);
  x << v;
  return x;
}

}  // namespace

TEST_CASE("the t-sequence is frozen and rejects negative input") {
  CHECK(t_update(0.0) == 1.0);
  CHECK(t_update(1.0) == 1.6180339887498949);
  CHECK(t_update(1.6180339887498949) == 2.1935270853310539);
  CHECK_THROWS_AS(t_update(-0.1), std::invalid_argument);
  double t = 1.0;
  for (int k = 1; k <= 100; ++k) {
    CHECK(t >= 0.5 * (k + 1));
    t = t_update(t);
  }
}

TEST_CASE("momentum coefficients per kind") {
  MomentumSchedule none;
  CHECK(momentum_beta(none, 5) == 0.0);
  MomentumSchedule ratio;
  ratio.kind = MomentumKind::ratio_k;
  CHECK(momentum_beta(ratio, 0) == 0.0);
  CHECK(momentum_beta(ratio, 1) == 0.25);
  CHECK(momentum_beta(ratio, 2) == 0.4);
  CHECK(momentum_beta(ratio, 3) == 0.5);
  CHECK_THROWS_AS(momentum_beta(ratio, -1), std::invalid_argument);
  MomentumSchedule adaptive;
  adaptive.kind = MomentumKind::adaptive;
  CHECK(momentum_beta(adaptive, 3, 0.125) == 0.125);
  MomentumSchedule nesterov;
  nesterov.kind = MomentumKind::nesterov_t;
  CHECK_THROWS_AS(momentum_beta(nesterov, 1), std::invalid_argument);
}

TEST_CASE("accept_step prefers the prox point on ties and flags divergence") {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(accept_step(1.0, 2.0) == StepChoice::prox);
  CHECK(accept_step(2.0, 1.0) == StepChoice::extrapolated);
  CHECK(accept_step(1.0, 1.0) == StepChoice::prox);
  CHECK(accept_step(1.0, inf) == StepChoice::prox);
  CHECK(accept_step(inf, 1.0) == StepChoice::extrapolated);
  CHECK_THROWS_AS(accept_step(nan, 1.0), DivergedError);
  CHECK_THROWS_AS(accept_step(1.0, nan), DivergedError);
  CHECK_THROWS_AS(accept_step(inf, inf), DivergedError);
}

TEST_CASE("three hand-computed accept-step iterations, bit for bit") {
  CompositeObjective obj = scalar_quadratic();
  SolverConfig cfg;
  cfg.eta = 0.5;
  cfg.max_iters = 3;
  cfg.momentum.kind = MomentumKind::ratio_k;
  Trace tr = run_apgnc(obj, one(1.0), cfg);
  REQUIRE(tr.records.size() == 3);

  CHECK(tr.records[0].F_y == 0.5);
  CHECK(tr.records[0].F_x == 0.125);
  CHECK(tr.records[0].step_norm == 0.5);
  CHECK(tr.records[0].residual == 1.5);
  CHECK(tr.records[0].beta == 0.25);
  CHECK(tr.records[0].chose_extrapolation);

  CHECK(tr.records[1].F_y == 0.0703125);
  CHECK(tr.records[1].F_x == 0.017578125);
  CHECK(tr.records[1].step_norm == 0.1875);
  CHECK(tr.records[1].beta == 0.4);
  CHECK(tr.records[1].chose_extrapolation);

  CHECK(tr.records[2].F_y == 0.001953125);
  CHECK(tr.records[2].F_x == 0.00048828125);
  CHECK(tr.records[2].step_norm == 0.03125);
  CHECK(tr.records[2].beta == 0.5);
  CHECK(!tr.records[2].chose_extrapolation);

  CHECK(tr.final_F == 0.00048828125);
  CHECK(tr.final_x[0] == 0.03125);
  CHECK(tr.terminated_by == StopReason::max_iters);
}

TEST_CASE("adaptive momentum shrinks on prox steps and grows on extrapolations") {
  CompositeObjective obj = scalar_quadratic();
  SolverConfig cfg;
  cfg.eta = 0.5;
  cfg.max_iters = 3;
  cfg.momentum.kind = MomentumKind::adaptive;
  cfg.momentum.beta0 = 0.5;
  cfg.momentum.t_shrink = 0.5;
  Trace tr = run_apgnc_plus(obj, one(1.0), cfg);
  REQUIRE(tr.records.size() == 3);
  CHECK(tr.records[0].beta == 0.5);
  CHECK(tr.records[0].chose_extrapolation);
  CHECK(tr.records[1].beta == 1.0);  // grew and hit the cap
  CHECK(!tr.records[1].chose_extrapolation);
  CHECK(tr.records[2].beta == 0.5);  // shrank after the prox step
  CHECK(tr.records[2].chose_extrapolation);
  CHECK(tr.records[0].F_x == 0.125);
  CHECK(tr.records[1].F_x == 0.0078125);
  CHECK(tr.records[2].F_x == 0.001953125);
}

TEST_CASE("the two-prox solver uses the frozen t-sequence coefficients") {
  CompositeObjective obj = scalar_quadratic();
  SolverConfig cfg;
  cfg.eta = 0.5;
  cfg.max_iters = 3;
  cfg.momentum.kind = MomentumKind::nesterov_t;
  for (const Trace& tr : {run_apg(obj, one(1.0), cfg), run_mapg(obj, one(1.0), cfg)}) {
    REQUIRE(tr.records.size() == 3);
    CHECK(tr.records[0].beta == -1.0);
    CHECK(tr.records[1].beta == 0.0);
    CHECK(tr.records[2].beta == (1.6180339887498949 - 1.0) / 2.1935270853310539);
  }
}

TEST_CASE("solvers validate their configuration") {
  CompositeObjective obj = scalar_quadratic();
  SolverConfig cfg;
  cfg.eta = 0.5;
  SUBCASE("eta must be positive") {
    cfg.eta = 0.0;
    CHECK_THROWS_AS(run_apgnc(obj, one(1.0), cfg), std::invalid_argument);
  }
  SUBCASE("max_iters must be at least one") {
    cfg.max_iters = 0;
    CHECK_THROWS_AS(run_apgnc(obj, one(1.0), cfg), std::invalid_argument);
  }
  SUBCASE("x0 must match the objective dimension") {
    CHECK_THROWS_AS(run_apgnc(obj, Vector::Ones(2), cfg), std::invalid_argument);
  }
  SUBCASE("x0 must be feasible") {
    obj.nonsmooth.value = [](const Vector& x) {
      return x[0] >= 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    };
    obj.nonsmooth.prox = [](const Vector& y, double) { return prox_nonneg(y, 1.0); };
    CHECK_THROWS_AS(run_apgnc(obj, one(-1.0), cfg), std::invalid_argument);
  }
  SUBCASE("momentum kinds are checked per solver") {
    cfg.momentum.kind = MomentumKind::ratio_k;
    CHECK_THROWS_AS(run_proximal_gradient(obj, one(1.0), cfg), std::invalid_argument);
    CHECK_THROWS_AS(run_apg(obj, one(1.0), cfg), std::invalid_argument);
    CHECK_THROWS_AS(run_mapg(obj, one(1.0), cfg), std::invalid_argument);
    CHECK_THROWS_AS(run_apgnc_plus(obj, one(1.0), cfg), std::invalid_argument);
    cfg.momentum.kind = MomentumKind::nesterov_t;
    CHECK_THROWS_AS(run_apgnc(obj, one(1.0), cfg), std::invalid_argument);
  }
  SUBCASE("adaptive parameters have open-interval domains") {
    cfg.momentum.kind = MomentumKind::adaptive;
    cfg.momentum.beta0 = 0.0;
    CHECK_THROWS_AS(run_apgnc_plus(obj, one(1.0), cfg), std::invalid_argument);
    cfg.momentum.beta0 = 1.5;
    CHECK_THROWS_AS(run_apgnc_plus(obj, one(1.0), cfg), std::invalid_argument);
    cfg.momentum.beta0 = 0.5;
    cfg.momentum.t_shrink = 1.0;
    CHECK_THROWS_AS(run_apgnc_plus(obj, one(1.0), cfg), std::invalid_argument);
  }
}

TEST_CASE("an aggressive step size is warned about, a safe one is not") {
  CompositeObjective obj = quartic_problem(3);
  SolverConfig cfg;
  cfg.momentum.kind = MomentumKind::none;
  cfg.max_iters = 2;
  cfg.eta = 0.1;  // 1/L = 1/12
  Trace loud = run_proximal_gradient(obj, Vector::Ones(3), cfg);
  REQUIRE(loud.warnings.size() == 1);
  CHECK(loud.warnings[0].find("eta >= 1/L") != std::string::npos);
  cfg.eta = 1.0 / 24.0;
  CHECK(run_proximal_gradient(obj, Vector::Ones(3), cfg).warnings.empty());
}

TEST_CASE("the residual tolerance stops a strongly convex run early") {
  CompositeObjective obj = scalar_quadratic();
  SolverConfig cfg;
  cfg.eta = 0.5;
  cfg.max_iters = 10000;
  cfg.residual_tol = 1e-6;
  cfg.momentum.kind = MomentumKind::none;
  Trace tr = run_proximal_gradient(obj, one(1.0), cfg);
  CHECK(tr.terminated_by == StopReason::tolerance);
  CHECK(tr.records.size() < 200);
  CHECK(tr.records.back().residual <= 1e-6);
}

TEST_CASE("an unbounded objective raises DivergedError instead of looping") {
  CompositeObjective obj = scalar_concave();
  SolverConfig cfg;
  cfg.eta = 0.25;
  cfg.max_iters = 5000;
  cfg.momentum.kind = MomentumKind::ratio_k;
  CHECK_THROWS_AS(run_apgnc(obj, one(1.0), cfg), DivergedError);
}

TEST_CASE("injected errors are recorded and the monitor tracks their ratios") {
  auto [inst, nn] = generate_nnpca(12, 6, 1.0, 41);
  SolverConfig cfg;
  cfg.eta = 0.1 / inst.L;
  cfg.max_iters = 40;
  cfg.momentum.kind = MomentumKind::ratio_k;
  cfg.grad_error_schedule = [](int) { return 1e-3; };
  cfg.prox_error_schedule = [](int) { return 1e-6; };
  cfg.rng_seed = 5;
  Rng rng(3);
  Trace tr = run_inexact_apgnc(nn, rng.unit_vector(6).cwiseAbs(), cfg);

  double grad_ratio = 0.0, eps_ratio = 0.0;
  for (const IterationRecord& rec : tr.records) {
    CHECK(rec.grad_err_realized == 1e-3);
    CHECK(rec.eps_realized <= 1e-6 * (1.0 + 1e-12));
    CHECK(rec.eps_realized >= 0.25e-6 * (1.0 - 1e-12));
    if (rec.step_norm > 0) {
      grad_ratio = std::max(grad_ratio, 1e-3 / rec.step_norm);
      eps_ratio = std::max(eps_ratio, 1e-6 / (rec.step_norm * rec.step_norm));
    }
  }
  CHECK(std::abs(tr.inexact.max_grad_err_ratio - grad_ratio) <= 1e-12 * grad_ratio);
  CHECK(std::abs(tr.inexact.max_eps_ratio - eps_ratio) <= 1e-12 * eps_ratio);
}

TEST_CASE("negative error schedules are rejected") {
  CompositeObjective obj = scalar_quadratic();
  SolverConfig cfg;
  cfg.eta = 0.5;
  cfg.max_iters = 5;
  cfg.momentum.kind = MomentumKind::ratio_k;
  cfg.grad_error_schedule = [](int) { return -1.0; };
  CHECK_THROWS_AS(run_inexact_apgnc(obj, one(1.0), cfg), std::invalid_argument);
  cfg.grad_error_schedule = nullptr;
  cfg.prox_error_schedule = [](int) { return -1.0; };
  CHECK_THROWS_AS(run_inexact_apgnc(obj, one(1.0), cfg), std::invalid_argument);
}

TEST_CASE("the two-prox solver is monotone even with heavy extrapolation") {
  auto [inst, obj] = generate_nnpca(30, 10, 1.0, 43);
  SolverConfig cfg;
  cfg.eta = 0.9 / inst.L;
  cfg.max_iters = 300;
  cfg.momentum.kind = MomentumKind::nesterov_t;
  Rng rng(8);
  Trace tr = run_mapg(obj, rng.unit_vector(10).cwiseAbs(), cfg);
  for (std::size_t i = 1; i < tr.records.size(); ++i)
    CHECK(tr.records[i].F_x <= tr.records[i - 1].F_x + 1e-10);
}
