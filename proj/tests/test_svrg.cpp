#include <cmath>
#include <limits>
#include <stdexcept>

#include "doctest.h"
#include "proxmom/diagnostics.hpp"
#include "proxmom/errors.hpp"
#include "proxmom/objective.hpp"
#include "proxmom/problems.hpp"
#include "proxmom/prox.hpp"
#include "proxmom/rng.hpp"
#include "proxmom/solvers.hpp"
#include "proxmom/svrg.hpp"

using namespace proxmom;

namespace {

std::pair<NnpcaInstance, CompositeObjective> coercive(int n, int d, std::uint64_t seed) {
  auto base = generate_nnpca(n, d, 0.0, seed);
  return generate_nnpca(n, d, base.first.L, seed);
}

}  // namespace

TEST_CASE("the gradient estimate is exhaustively unbiased") {
  auto [inst, obj] = generate_nnpca(8, 5, 0.1, 33);
  Rng rng(1);
  for (int trial = 0; trial < 10; ++trial) {
    Vector x = rng.normal_vector(5);
    Vector s = rng.normal_vector(5);
    Vector gs = obj.smooth.gradient(s);
    Vector mean = Vector::Zero(5);
    for (int xi = 0; xi < 8; ++xi) mean += svrg_gradient_estimate(obj, x, s, gs, xi);
    mean /= 8.0;
    Vector g = obj.smooth.gradient(x);
    CHECK((mean - g).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + g.cwiseAbs().maxCoeff()));
  }
  CHECK_THROWS_AS(svrg_gradient_estimate(obj, Vector::Zero(4), Vector::Zero(5),
                                         Vector::Zero(5), 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(svrg_gradient_estimate(obj, Vector::Zero(5), Vector::Zero(5),
                                         Vector::Zero(5), 8),
                  std::invalid_argument);
}

TEST_CASE("a deliberately broken estimator would be caught by the same assertion") {
  // Guard against the unbiasedness test being vacuous: drop the full-gradient
  // correction and the exhaustive mean must drift away from the true gradient
  // (it lands on grad(x) - grad(s) instead).
  auto [inst, obj] = generate_nnpca(8, 5, 0.1, 33);
  Rng rng(2);
  Vector x = rng.normal_vector(5);
  Vector s = rng.normal_vector(5);
  Vector mean = Vector::Zero(5);
  for (int xi = 0; xi < 8; ++xi)
    mean += obj.smooth.component_gradient(xi, x) - obj.smooth.component_gradient(xi, s);
  mean /= 8.0;
  Vector g = obj.smooth.gradient(x);
  CHECK((mean - g).cwiseAbs().maxCoeff() > 1e-6);
}

TEST_CASE("at the snapshot the estimate collapses to the full gradient") {
  auto [inst, obj] = generate_nnpca(8, 5, 0.1, 33);
  Rng rng(3);
  Vector x = rng.normal_vector(5);
  Vector gs = obj.smooth.gradient(x);
  for (int xi = 0; xi < 8; ++xi)
    CHECK((svrg_gradient_estimate(obj, x, x, gs, xi) - gs).norm() == 0.0);
}

TEST_CASE("variance-reduced runs validate their configuration") {
  auto [inst, obj] = coercive(6, 4, 11);
  Rng rng(4);
  Vector x0 = rng.unit_vector(4).cwiseAbs();
  SvrgConfig cfg;
  cfg.m = 3;
  cfg.eta = 0.1 / inst.L;
  cfg.max_epochs = 2;
  cfg.momentum.kind = MomentumKind::ratio_k;
  SUBCASE("m must be positive") {
    cfg.m = 0;
    CHECK_THROWS_AS(run_svrg_apgnc(obj, x0, cfg), std::invalid_argument);
  }
  SUBCASE("max_epochs must be positive") {
    cfg.max_epochs = 0;
    CHECK_THROWS_AS(run_svrg_apgnc(obj, x0, cfg), std::invalid_argument);
  }
  SUBCASE("the t-sequence momentum is not available here") {
    cfg.momentum.kind = MomentumKind::nesterov_t;
    CHECK_THROWS_AS(run_svrg_apgnc(obj, x0, cfg), std::invalid_argument);
  }
  SUBCASE("rho must stay below one half") {
    cfg.rho = 0.5;
    CHECK_THROWS_AS(run_svrg_apgnc(obj, x0, cfg), std::invalid_argument);
  }
  SUBCASE("momentum kinds are checked per entry point") {
    CHECK_THROWS_AS(run_prox_svrg(obj, x0, cfg), std::invalid_argument);
    CHECK_THROWS_AS(run_svrg_apgnc_plus(obj, x0, cfg), std::invalid_argument);
    cfg.momentum.kind = MomentumKind::adaptive;
    CHECK_THROWS_AS(run_svrg_apgnc(obj, x0, cfg), std::invalid_argument);
  }
  SUBCASE("inexact steps need a convex g") {
    CompositeObjective nc = obj;
    nc.nonsmooth.is_convex = false;
    cfg.prox_error_schedule = [](int, int) { return 1e-6; };
    CHECK_THROWS_AS(run_inexact_svrg_apgnc(nc, x0, cfg), UnsupportedModeError);
  }
}

TEST_CASE("rho overrides eta as rho over L") {
  auto [inst, obj] = coercive(6, 4, 11);
  Rng rng(5);
  Vector x0 = rng.unit_vector(4).cwiseAbs();
  SvrgConfig a;
  a.m = 3;
  a.rho = 0.05;
  a.eta = 123.0;  // ignored
  a.max_epochs = 4;
  a.momentum.kind = MomentumKind::ratio_k;
  a.rng_seed = 7;
  SvrgConfig b = a;
  b.rho = 0.0;
  b.eta = 0.05 / inst.L;
  Trace ta = run_svrg_apgnc(obj, x0, a);
  Trace tb = run_svrg_apgnc(obj, x0, b);
  REQUIRE(ta.records.size() == tb.records.size());
  for (std::size_t i = 0; i < ta.records.size(); ++i) {
    CHECK(ta.records[i].F_x == tb.records[i].F_x);
    CHECK(ta.records[i].step_norm == tb.records[i].step_norm);
  }
}

TEST_CASE("a single-component problem with one inner step is plain proximal gradient") {
  CompositeObjective obj;
  obj.dim = 2;
  obj.smooth.n_components = 1;
  obj.smooth.value = [](const Vector& x) { return 0.5 * x.squaredNorm(); };
  obj.smooth.gradient = [](const Vector& x) { return x; };
  obj.smooth.component_gradient = [](int, const Vector& x) { return x; };
  obj.smooth.lipschitz = 1.0;
  obj.nonsmooth.value = [](const Vector& x) {
    return x.minCoeff() >= 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  };
  obj.nonsmooth.prox = [](const Vector& y, double eta) { return prox_nonneg(y, eta); };

  Vector x0(2);
  x0 << 1.0, 0.5;
  SvrgConfig sv;
  sv.m = 1;
  sv.eta = 0.25;
  sv.max_epochs = 8;
  sv.momentum.kind = MomentumKind::none;
  Trace epochs = run_prox_svrg(obj, x0, sv);

  SolverConfig pg;
  pg.eta = 0.25;
  pg.max_iters = 8;
  pg.momentum.kind = MomentumKind::none;
  Trace plain = run_proximal_gradient(obj, x0, pg);

  REQUIRE(epochs.records.size() == plain.records.size());
  for (std::size_t i = 0; i < epochs.records.size(); ++i) {
    CHECK(epochs.records[i].F_x == plain.records[i].F_x);
    CHECK(epochs.records[i].F_y == plain.records[i].F_y);
    CHECK(epochs.records[i].step_norm == plain.records[i].step_norm);
    CHECK(!epochs.records[i].chose_extrapolation);
  }
  CHECK((epochs.final_x - plain.final_x).norm() == 0.0);
}

TEST_CASE("single-component sampling with many inner steps warns") {
  CompositeObjective obj;
  obj.dim = 1;
  obj.smooth.n_components = 1;
  obj.smooth.value = [](const Vector& x) { return 0.5 * x[0] * x[0]; };
  obj.smooth.gradient = [](const Vector& x) { return x; };
  obj.smooth.component_gradient = [](int, const Vector& x) { return x; };
  obj.smooth.lipschitz = 1.0;
  obj.nonsmooth.value = [](const Vector&) { return 0.0; };
  obj.nonsmooth.prox = [](const Vector& y, double) { return y; };
  Vector x0(1);
  x0 << 1.0;
  SvrgConfig cfg;
  cfg.m = 4;
  cfg.eta = 0.25;
  cfg.max_epochs = 2;
  cfg.momentum.kind = MomentumKind::ratio_k;
  Trace tr = run_svrg_apgnc(obj, x0, cfg);
  REQUIRE(tr.warnings.size() == 1);
  CHECK(tr.warnings[0].find("m > 1") != std::string::npos);
}

TEST_CASE("the first inner step is the exact full prox-gradient step from the anchor") {
  auto [inst, obj] = coercive(10, 6, 17);
  SvrgConfig cfg;
  cfg.m = 4;
  cfg.eta = 0.1 / inst.L;
  cfg.max_epochs = 5;
  cfg.momentum.kind = MomentumKind::ratio_k;
  cfg.record_inner_points = true;
  cfg.rng_seed = 21;
  Rng rng(6);
  Vector x0 = rng.unit_vector(6).cwiseAbs();
  Trace tr = run_svrg_apgnc(obj, x0, cfg);
  REQUIRE(tr.inner_points.size() == 5);

  CHECK((tr.inner_points[0][0] - x0).norm() == 0.0);
  for (std::size_t k = 0; k < tr.epochs.size(); ++k) {
    REQUIRE(tr.inner_points[k].size() == 4);
    // The anchor is the first recorded inner point; the second one is the
    // deterministic full-gradient step from it.
    Vector y = tr.inner_points[k][0];
    CHECK(eval_F(obj, y) == tr.records[k].F_y);
    Vector probe = reference_inner_probe(obj, y, cfg.eta);
    CHECK((tr.inner_points[k][1] - probe).norm() == 0.0);
    CHECK(tr.records[k].step_norm == tr.epochs[k].inner_step_norms[0]);
    CHECK(tr.records[k].residual ==
          (inst.L + 1.0 / cfg.eta) * tr.records[k].step_norm);
  }
}

TEST_CASE("anchors never increase the objective between epochs") {
  auto [inst, obj] = coercive(10, 6, 17);
  SvrgConfig cfg;
  cfg.m = 4;
  cfg.eta = 0.1 / inst.L;
  cfg.max_epochs = 30;
  cfg.momentum.kind = MomentumKind::ratio_k;
  cfg.rng_seed = 22;
  Rng rng(7);
  Trace tr = run_svrg_apgnc(obj, rng.unit_vector(6).cwiseAbs(), cfg);
  for (std::size_t k = 0; k + 1 < tr.records.size(); ++k) {
    CHECK(tr.records[k + 1].F_y <= tr.records[k].F_x);
    if (tr.records[k].chose_extrapolation) {
      CHECK(tr.records[k + 1].F_y < tr.records[k].F_x);
    } else {
      CHECK(tr.records[k + 1].F_y == tr.records[k].F_x);
    }
  }
}

TEST_CASE("pass accounting follows the closed form per epoch") {
  auto [inst, obj] = coercive(10, 6, 17);
  SvrgConfig cfg;
  cfg.eta = 0.1 / inst.L;
  cfg.max_epochs = 4;
  cfg.momentum.kind = MomentumKind::ratio_k;
  cfg.m = 10;
  Rng rng(8);
  Vector x0 = rng.unit_vector(6).cwiseAbs();
  Trace full = run_svrg_apgnc(obj, x0, cfg);
  for (const IterationRecord& r : full.records) CHECK(r.passes == 3.0 * (r.k + 1));
  cfg.m = 5;
  Trace half = run_svrg_apgnc(obj, x0, cfg);
  for (const IterationRecord& r : half.records) CHECK(r.passes == 2.0 * (r.k + 1));
}

TEST_CASE("epoch betas follow the ratio schedule from zero") {
  auto [inst, obj] = coercive(10, 6, 17);
  SvrgConfig cfg;
  cfg.m = 2;
  cfg.eta = 0.1 / inst.L;
  cfg.max_epochs = 4;
  cfg.momentum.kind = MomentumKind::ratio_k;
  Rng rng(9);
  Trace tr = run_svrg_apgnc(obj, rng.unit_vector(6).cwiseAbs(), cfg);
  REQUIRE(tr.records.size() == 4);
  CHECK(tr.records[0].beta == 0.0);
  CHECK(tr.records[1].beta == 0.25);
  CHECK(tr.records[2].beta == 0.4);
  CHECK(tr.records[3].beta == 0.5);
  CHECK(tr.records[0].k == 0);
}

TEST_CASE("scheduled per-step inexactness is summed and realized within budget") {
  auto [inst, obj] = coercive(10, 6, 17);
  SvrgConfig cfg;
  cfg.m = 4;
  cfg.eta = 0.1 / inst.L;
  cfg.max_epochs = 3;
  cfg.momentum.kind = MomentumKind::ratio_k;
  cfg.rng_seed = 33;
  cfg.prox_error_schedule = [](int, int) { return 1e-7; };
  Rng rng(10);
  Trace tr = run_inexact_svrg_apgnc(obj, rng.unit_vector(6).cwiseAbs(), cfg);
  for (const EpochRecord& er : tr.epochs) {
    CHECK(er.eps_scheduled_sum == 4e-7);
    CHECK(er.eps_realized_sum <= er.eps_scheduled_sum * (1.0 + 1e-12));
    CHECK(er.eps_realized_sum > 0.0);
  }
  for (std::size_t k = 0; k < tr.records.size(); ++k)
    CHECK(tr.records[k].eps_realized == tr.epochs[k].eps_realized_sum);
}

TEST_CASE("negative inexactness schedules are rejected") {
  auto [inst, obj] = coercive(6, 4, 11);
  SvrgConfig cfg;
  cfg.m = 2;
  cfg.eta = 0.1 / inst.L;
  cfg.max_epochs = 2;
  cfg.momentum.kind = MomentumKind::ratio_k;
  cfg.prox_error_schedule = [](int, int) { return -1e-6; };
  Rng rng(11);
  CHECK_THROWS_AS(run_inexact_svrg_apgnc(obj, rng.unit_vector(4).cwiseAbs(), cfg),
                  std::invalid_argument);
}

TEST_CASE("the residual tolerance also stops epoch runs") {
  auto [inst, obj] = coercive(10, 6, 17);
  SvrgConfig cfg;
  cfg.m = 10;
  cfg.eta = 0.2 / inst.L;
  cfg.max_epochs = 100000;
  cfg.momentum.kind = MomentumKind::ratio_k;
  cfg.residual_tol = 1e-6;
  Rng rng(12);
  Trace tr = run_svrg_apgnc(obj, rng.unit_vector(6).cwiseAbs(), cfg);
  CHECK(tr.terminated_by == StopReason::tolerance);
  CHECK(tr.records.back().residual <= 1e-6);
  CHECK(tr.records.size() < 100000);
}
