#include "proxmom/checks.hpp"

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "proxmom/config.hpp"
#include "proxmom/diagnostics.hpp"
#include "proxmom/errors.hpp"
#include "proxmom/format.hpp"
#include "proxmom/objective.hpp"
#include "proxmom/problems.hpp"
#include "proxmom/prox.hpp"
#include "proxmom/rng.hpp"
#include "proxmom/runner.hpp"
#include "proxmom/solvers.hpp"
#include "proxmom/svrg.hpp"
#include "proxmom/trace_io.hpp"

namespace proxmom {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct CheckFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool cond, const std::string& msg) {
  if (!cond) throw CheckFailure(msg);
}

std::string num(double v) { return format_sig17(v); }

bool rel_close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({std::abs(a), std::abs(b), 1e-300});
}

void run_one(std::vector<CheckResult>& out, const std::string& name,
             const std::function<std::string()>& body) {
  CheckResult r;
  r.name = name;
  try {
    r.detail = body();
    r.passed = true;
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = e.what();
  }
  out.push_back(r);
}

// gamma = lambda_max(Z'Z) makes the orthant-constrained objective strongly
// convex; the second generate call reuses the seed so Z is identical.
std::pair<NnpcaInstance, CompositeObjective> coercive_nnpca(int n, int d, std::uint64_t seed) {
  auto base = generate_nnpca(n, d, 0.0, seed);
  return generate_nnpca(n, d, base.first.L, seed);
}

NonsmoothOracle make_nonneg_oracle() {
  NonsmoothOracle g;
  g.value = [](const Vector& x) { return x.minCoeff() >= 0.0 ? 0.0 : kInf; };
  g.prox = [](const Vector& y, double eta) { return prox_nonneg(y, eta); };
  g.is_convex = true;
  return g;
}

NonsmoothOracle make_l1_oracle(double lambda) {
  NonsmoothOracle g;
  g.value = [lambda](const Vector& x) { return lambda * x.lpNorm<1>(); };
  g.prox = [lambda](const Vector& y, double eta) { return prox_l1(y, eta, lambda); };
  g.is_convex = true;
  return g;
}

// f(x) = x^2/2 in one dimension with g = 0; every quantity along a short run
// is a dyadic rational, so the hand-computed trace can be compared bit for
// bit (this doubles as a canary for fused-multiply-add contraction).
CompositeObjective scalar_quadratic() {
  CompositeObjective obj;
  obj.dim = 1;
  obj.smooth.value = [](const Vector& x) { return 0.5 * x[0] * x[0]; };
  obj.smooth.gradient = [](const Vector& x) { return x; };
  obj.smooth.component_gradient = [](int, const Vector& x) { return x; };
  obj.smooth.n_components = 1;
  obj.smooth.lipschitz = 1.0;
  obj.nonsmooth.value = [](const Vector&) { return 0.0; };
  obj.nonsmooth.prox = [](const Vector& y, double) { return y; };
  obj.nonsmooth.is_convex = true;
  return obj;
}

double prox_objective(const NonsmoothOracle& op, const Vector& u, const Vector& y, double eta) {
  double gv = op.value(u);
  if (!std::isfinite(gv)) return gv;
  return gv + (u - y).squaredNorm() / (2.0 * eta);
}

// ---------------------------------------------------------------- core ----

std::string check_gradient_consistency() {
  struct Case {
    const char* label;
    CompositeObjective obj;
  };
  std::vector<Case> cases;
  cases.push_back({"nnpca", generate_nnpca(12, 8, 0.05, 11).second});
  cases.push_back({"quadratic", quadratic_problem({1.0, 2.0, 3.5, 5.0, 8.0, 10.0}, 4).objective});
  cases.push_back({"quartic", quartic_problem(6)});
  Rng rng(101);
  double worst = 0.0;
  for (const Case& c : cases) {
    for (int p = 0; p < 20; ++p) {
      Vector x = 0.8 * rng.normal_vector(c.obj.dim);
      Vector g = c.obj.smooth.gradient(x);
      Vector fd = finite_diff_gradient(c.obj, x, 1e-6);
      double tol = 1e-5 * (1.0 + g.cwiseAbs().maxCoeff());
      double dev = (g - fd).cwiseAbs().maxCoeff();
      worst = std::max(worst, dev / tol);
      require(dev <= tol, std::string(c.label) + ": finite-difference deviation " + num(dev) +
                              " exceeds " + num(tol));
    }
  }
  return "3 objectives x 20 points, worst deviation/tol = " + num(worst);
}

std::string check_finite_sum_mean() {
  struct Case {
    const char* label;
    CompositeObjective obj;
  };
  std::vector<Case> cases;
  cases.push_back({"nnpca", generate_nnpca(14, 6, 0.2, 12).second});
  cases.push_back({"quadratic", quadratic_problem({1.0, 1.8, 4.2, 6.0, 9.0}, 5).objective});
  cases.push_back({"quartic", quartic_problem(5)});
  Rng rng(102);
  double worst = 0.0;
  for (const Case& c : cases) {
    for (int p = 0; p < 20; ++p) {
      Vector x = rng.normal_vector(c.obj.dim);
      double scale = 1.0 + c.obj.smooth.gradient(x).cwiseAbs().maxCoeff();
      double dev = mean_gradient_check(c.obj, x).max_abs_deviation;
      worst = std::max(worst, dev / (1e-10 * scale));
      require(dev <= 1e-10 * scale, std::string(c.label) + ": component mean deviates by " +
                                        num(dev) + " (allowed " + num(1e-10 * scale) + ")");
    }
  }
  return "component means match full gradients, worst deviation/tol = " + num(worst);
}

std::string check_lipschitz_pairs() {
  struct Case {
    const char* label;
    CompositeObjective obj;
    bool box;  // draw inside [-1,1]^d, where the quartic constant is valid
  };
  std::vector<Case> cases;
  cases.push_back({"nnpca", generate_nnpca(16, 8, 0.1, 13).second, false});
  cases.push_back({"quadratic", quadratic_problem({1.0, 2.2, 3.1, 7.7, 10.0}, 6).objective, false});
  cases.push_back({"quartic", quartic_problem(6), true});
  Rng rng(103);
  double worst = 0.0;
  for (const Case& c : cases) {
    double L = c.obj.smooth.lipschitz;
    require(L > 0, std::string(c.label) + ": lipschitz constant not set");
    for (int p = 0; p < 100; ++p) {
      Vector x(c.obj.dim), y(c.obj.dim);
      if (c.box) {
        for (int i = 0; i < c.obj.dim; ++i) x[i] = 2.0 * rng.uniform01() - 1.0;
        for (int i = 0; i < c.obj.dim; ++i) y[i] = 2.0 * rng.uniform01() - 1.0;
      } else {
        x = rng.normal_vector(c.obj.dim);
        y = rng.normal_vector(c.obj.dim);
      }
      double lhs = (c.obj.smooth.gradient(x) - c.obj.smooth.gradient(y)).norm();
      double rhs = L * (x - y).norm() * (1.0 + 1e-9) + 1e-12;
      worst = std::max(worst, lhs / rhs);
      require(lhs <= rhs, std::string(c.label) + ": gradient difference " + num(lhs) +
                              " exceeds L*dist = " + num(rhs));
    }
  }
  return "3 objectives x 100 pairs, worst lhs/rhs = " + num(worst);
}

// ---------------------------------------------------------------- prox ----

std::string check_grid_optimality() {
  std::vector<std::pair<std::string, NonsmoothOracle>> ops;
  ops.emplace_back("nonneg", make_nonneg_oracle());
  ops.emplace_back("l1(0.3)", make_l1_oracle(0.3));
  Rng rng(104);
  double worst_excess = -kInf;
  for (const auto& [label, op] : ops) {
    for (double eta : {0.25, 1.0}) {
      for (int trial = 0; trial < 50; ++trial) {
        Vector y(1);
        y[0] = std::clamp(1.2 * rng.normal(), -2.4, 2.4);
        Vector u_star = op.prox(y, eta);
        double g_star = prox_objective(op, u_star, y, eta);
        double best = kInf;
        Vector u(1);
        for (int i = 0; i <= 6000; ++i) {
          u[0] = -3.0 + i * 1e-3;
          best = std::min(best, prox_objective(op, u, y, eta));
        }
        worst_excess = std::max(worst_excess, g_star - best);
        require(g_star <= best + 1e-9, label + " d=1: prox value " + num(g_star) +
                                           " beaten by grid value " + num(best));
      }
      for (int trial = 0; trial < 20; ++trial) {
        Vector y(2);
        y[0] = std::clamp(1.2 * rng.normal(), -2.4, 2.4);
        y[1] = std::clamp(1.2 * rng.normal(), -2.4, 2.4);
        Vector u_star = op.prox(y, eta);
        double g_star = prox_objective(op, u_star, y, eta);
        auto grid2 = [&](double lo0, double hi0, double lo1, double hi1, double step) {
          double best = kInf;
          Vector u(2);
          int n0 = static_cast<int>(std::lround((hi0 - lo0) / step));
          int n1 = static_cast<int>(std::lround((hi1 - lo1) / step));
          for (int i = 0; i <= n0; ++i) {
            u[0] = lo0 + i * step;
            for (int j = 0; j <= n1; ++j) {
              u[1] = lo1 + j * step;
              best = std::min(best, prox_objective(op, u, y, eta));
            }
          }
          return best;
        };
        double best = std::min(grid2(-3.0, 3.0, -3.0, 3.0, 0.05),
                               grid2(u_star[0] - 0.06, u_star[0] + 0.06, u_star[1] - 0.06,
                                     u_star[1] + 0.06, 1e-3));
        worst_excess = std::max(worst_excess, g_star - best);
        require(g_star <= best + 1e-9, label + " d=2: prox value " + num(g_star) +
                                           " beaten by grid value " + num(best));
      }
    }
  }
  return "prox never beaten on 1e-3 grids, worst excess = " + num(worst_excess);
}

std::string check_nonexpansiveness() {
  std::vector<std::pair<std::string, NonsmoothOracle>> ops;
  ops.emplace_back("nonneg", make_nonneg_oracle());
  ops.emplace_back("l1(0.3)", make_l1_oracle(0.3));
  Rng rng(105);
  double worst = 0.0;
  for (const auto& [label, op] : ops) {
    for (double eta : {0.3, 1.0}) {
      for (int trial = 0; trial < 100; ++trial) {
        Vector a = 2.0 * rng.normal_vector(6);
        Vector b = 2.0 * rng.normal_vector(6);
        double lhs = (op.prox(a, eta) - op.prox(b, eta)).norm();
        double rhs = (a - b).norm() * (1.0 + 1e-12) + 1e-15;
        worst = std::max(worst, lhs / rhs);
        require(lhs <= rhs, label + ": prox expanded a pair, " + num(lhs) + " > " + num(rhs));
      }
    }
  }
  return "2 operators x 2 step sizes x 100 pairs, worst ratio = " + num(worst);
}

std::string check_inexact_band() {
  std::vector<std::pair<std::string, NonsmoothOracle>> ops;
  ops.emplace_back("nonneg", make_nonneg_oracle());
  ops.emplace_back("l1(0.3)", make_l1_oracle(0.3));
  Rng rng(106);
  const double eta = 0.4;
  int calls = 0, fallbacks = 0;
  for (const auto& [label, op] : ops) {
    for (double eps : {1e-2, 1e-4}) {
      for (int trial = 0; trial < 25; ++trial) {
        Vector y = 1.5 * rng.normal_vector(6);
        InexactProxRequest req;
        req.target_gap = eps;
        req.rng_seed = rng.next_u64();
        InexactProxResult res = inexact_prox(op, y, eta, req);
        ++calls;
        if (res.exact_fallback) ++fallbacks;
        require(std::isfinite(op.value(res.u)), label + ": inexact point is infeasible");
        Vector u_star = op.prox(y, eta);
        double gap_true =
            prox_objective(op, res.u, y, eta) - prox_objective(op, u_star, y, eta);
        require(std::abs(gap_true - res.achieved_gap) <= 1e-10,
                label + ": reported gap " + num(res.achieved_gap) +
                    " disagrees with recomputed gap " + num(gap_true));
        require(res.achieved_gap <= eps * (1.0 + 1e-12),
                label + ": gap " + num(res.achieved_gap) + " exceeds target " + num(eps));
        if (!res.exact_fallback)
          require(res.achieved_gap >= 0.25 * eps * (1.0 - 1e-12),
                  label + ": gap " + num(res.achieved_gap) + " below band floor " +
                      num(0.25 * eps));
      }
    }
  }
  // Both operators have full-dimensional domains, so a feasible perturbation
  // always exists and the fallback must never trigger here.
  require(fallbacks == 0, std::to_string(fallbacks) + " unexpected exact fallbacks");
  return std::to_string(calls) + " calls all landed in [0.25 eps, eps]";
}

std::string check_inexact_determinism() {
  NonsmoothOracle op = make_l1_oracle(0.3);
  Rng rng(107);
  Vector y = rng.normal_vector(8);
  InexactProxRequest req;
  req.target_gap = 1e-3;
  req.rng_seed = 424242;
  InexactProxResult a = inexact_prox(op, y, 0.5, req);
  InexactProxResult b = inexact_prox(op, y, 0.5, req);
  require((a.u - b.u).norm() == 0.0, "same seed produced different points");
  require(a.achieved_gap == b.achieved_gap, "same seed produced different gaps");
  req.rng_seed = 424243;
  InexactProxResult c = inexact_prox(op, y, 0.5, req);
  require(c.achieved_gap <= 1e-3 && c.achieved_gap >= 0.25e-3 * (1.0 - 1e-12),
          "different seed left the gap band");
  return "repeated calls are bitwise identical";
}

// ---------------------------------------------------------- algorithms ----

std::string check_accept_rules() {
  require(accept_step(1.0, 2.0) == StepChoice::prox, "prox not kept when strictly better");
  require(accept_step(2.0, 1.0) == StepChoice::extrapolated,
          "extrapolation not taken when strictly better");
  require(accept_step(1.0, 1.0) == StepChoice::prox, "tie did not keep the prox point");
  require(accept_step(kInf, 1.0) == StepChoice::extrapolated, "finite candidate not preferred");
  require(accept_step(1.0, kInf) == StepChoice::prox, "finite prox point not preferred");
  bool threw = false;
  try {
    accept_step(std::numeric_limits<double>::quiet_NaN(), 1.0);
  } catch (const DivergedError&) {
    threw = true;
  }
  require(threw, "NaN objective value did not raise DivergedError");
  threw = false;
  try {
    accept_step(kInf, kInf);
  } catch (const DivergedError&) {
    threw = true;
  }
  require(threw, "two infinite values did not raise DivergedError");

  require(momentum_beta({MomentumKind::none, 0.5, 0.5}, 7) == 0.0, "none momentum not zero");
  require(momentum_beta({MomentumKind::ratio_k, 0.5, 0.5}, 0) == 0.0, "k=0 ratio not zero");
  require(momentum_beta({MomentumKind::ratio_k, 0.5, 0.5}, 1) == 0.25, "k=1 ratio not 1/4");
  require(momentum_beta({MomentumKind::ratio_k, 0.5, 0.5}, 2) == 0.4, "k=2 ratio not 2/5");
  require(momentum_beta({MomentumKind::adaptive, 0.5, 0.5}, 3, 0.37) == 0.37,
          "adaptive beta not passed through");
  threw = false;
  try {
    momentum_beta({MomentumKind::nesterov_t, 0.5, 0.5}, 1);
  } catch (const std::invalid_argument&) {
    threw = true;
  }
  require(threw, "nesterov_t beta request did not throw");
  return "selection and momentum rules match their definitions";
}

std::string check_hand_trace_scalar() {
  CompositeObjective obj = scalar_quadratic();
  SolverConfig cfg;
  cfg.eta = 0.5;
  cfg.momentum.kind = MomentumKind::ratio_k;
  cfg.max_iters = 3;
  Vector x0 = Vector::Ones(1);
  Trace tr = run_apgnc(obj, x0, cfg);
  require(tr.records.size() == 3, "expected 3 records");
  const IterationRecord& r1 = tr.records[0];
  const IterationRecord& r2 = tr.records[1];
  const IterationRecord& r3 = tr.records[2];
  require(r1.k == 1 && r2.k == 2 && r3.k == 3, "iteration indices wrong");
  require(r1.F_y == 0.5, "F(y_1) != 1/2, got " + num(r1.F_y));
  require(r1.F_x == 0.125, "F(x_1) != 1/8, got " + num(r1.F_x));
  require(r1.step_norm == 0.5 && r1.residual == 1.5, "step or residual wrong at k=1");
  require(r1.beta == 0.25 && r1.chose_extrapolation, "k=1 extrapolation not taken");
  require(r2.F_y == 0.0703125, "F(y_2) != F(3/8), got " + num(r2.F_y));
  require(r2.F_x == 0.017578125, "F(x_2) != F(3/16), got " + num(r2.F_x));
  require(r2.step_norm == 0.1875 && r2.beta == 0.4 && r2.chose_extrapolation,
          "k=2 record wrong");
  require(r3.F_y == 0.001953125, "F(y_3) != F(1/16), got " + num(r3.F_y));
  require(r3.F_x == 0.00048828125, "F(x_3) != F(1/32), got " + num(r3.F_x));
  require(r3.step_norm == 0.03125 && r3.beta == 0.5 && !r3.chose_extrapolation,
          "k=3 record wrong");
  require(tr.final_F == 0.00048828125 && tr.final_x[0] == 0.03125, "final state wrong");
  require(tr.terminated_by == StopReason::max_iters, "stop reason wrong");
  require(r1.passes == 1.0 && r2.passes == 2.0 && r3.passes == 3.0, "pass counts wrong");
  return "12 hand-computed dyadic values reproduced bit for bit";
}

std::string check_descent_chain() {
  auto [inst, obj] = coercive_nnpca(40, 16, 7);
  Rng rng(108);
  Vector x0 = rng.unit_vector(16).cwiseAbs();
  SolverConfig cfg;
  cfg.eta = 0.05 / inst.L;
  cfg.max_iters = 200;
  const double slack = 1e-10;

  cfg.momentum.kind = MomentumKind::ratio_k;
  Trace a = run_apgnc(obj, x0, cfg);
  cfg.momentum.kind = MomentumKind::adaptive;
  Trace b = run_apgnc_plus(obj, x0, cfg);
  for (const Trace* tr : {&a, &b}) {
    const auto& rs = tr->records;
    for (std::size_t i = 0; i < rs.size(); ++i) {
      require(rs[i].F_x <= rs[i].F_y + slack,
              "prox step increased F at k=" + std::to_string(rs[i].k));
      if (i + 1 < rs.size())
        require(rs[i + 1].F_y <= rs[i].F_x + slack,
                "anchor increased F at k=" + std::to_string(rs[i].k));
    }
  }

  cfg.momentum.kind = MomentumKind::nesterov_t;
  Trace c = run_mapg(obj, x0, cfg);
  for (std::size_t i = 1; i < c.records.size(); ++i)
    require(c.records[i].F_x <= c.records[i - 1].F_x + slack,
            "monotone solver increased F at k=" + std::to_string(c.records[i].k));
  return "descent chains hold over 200 iterations for 3 solvers";
}

std::string check_descent_lemma_sweep() {
  auto [inst, obj] = coercive_nnpca(30, 12, 5);
  Rng rng(109);
  double eta = 0.5 / inst.L;
  double min_margin = kInf;
  for (int i = 0; i < 200; ++i) {
    double scale = 0.1 + 1.9 * rng.uniform01();
    Vector y = scale * rng.unit_vector(12).cwiseAbs();
    DescentLemmaReport rep = descent_lemma_check(obj, y, eta);
    min_margin = std::min(min_margin, rep.rhs - rep.lhs);
    require(rep.holds, "sufficient decrease failed, lhs=" + num(rep.lhs) +
                           " rhs=" + num(rep.rhs));
  }
  return "200 random feasible points, min margin = " + num(min_margin);
}

std::string check_residual_kkt_soundness() {
  auto [inst, obj] = coercive_nnpca(30, 12, 9);
  const double L = inst.L;
  const double eta = 0.3 / L;
  Rng rng(110);
  double worst = -kInf;
  auto check_pair = [&](const Vector& y, const Vector& x) {
    double bound = residual_bound(L, eta, y, x);
    double kkt = kkt_residual_nonneg(obj.smooth.gradient(x), x);
    worst = std::max(worst, kkt - bound);
    require(kkt <= bound + 1e-8,
            "stationarity residual " + num(kkt) + " above certified bound " + num(bound));
  };
  Vector y = rng.unit_vector(12).cwiseAbs();
  for (int k = 0; k < 100; ++k) {
    Vector x = prox_gradient_step(obj, y, eta);
    check_pair(y, x);
    y = x;
  }
  for (int i = 0; i < 50; ++i) {
    Vector z = (0.1 + 2.0 * rng.uniform01()) * rng.unit_vector(12).cwiseAbs();
    check_pair(z, prox_gradient_step(obj, z, eta));
  }
  return "150 prox steps, worst kkt-minus-bound = " + num(worst);
}

std::string check_reduction_identities() {
  auto [inst, obj] = coercive_nnpca(20, 10, 13);
  Rng rng(111);
  Vector x0 = rng.unit_vector(10).cwiseAbs();
  const double eta = 0.1 / inst.L;

  SolverConfig plain;
  plain.eta = eta;
  plain.momentum.kind = MomentumKind::none;
  plain.max_iters = 50;
  plain.rng_seed = 21;
  Trace pg = run_proximal_gradient(obj, x0, plain);
  Trace apgnc0 = run_apgnc(obj, x0, plain);
  require(trace_csv_string("s", 1, pg) == trace_csv_string("s", 1, apgnc0),
          "zero momentum does not reproduce plain proximal gradient");
  require((pg.final_x - apgnc0.final_x).norm() == 0.0, "final points differ under zero momentum");
  for (const IterationRecord& r : pg.records)
    require(!r.chose_extrapolation, "zero-momentum run took an extrapolated point");

  SolverConfig mom = plain;
  mom.momentum.kind = MomentumKind::ratio_k;
  mom.rng_seed = 22;
  Trace exact = run_apgnc(obj, x0, mom);
  Trace inexact_null = run_inexact_apgnc(obj, x0, mom);
  SolverConfig zeroed = mom;
  zeroed.grad_error_schedule = [](int) { return 0.0; };
  zeroed.prox_error_schedule = [](int) { return 0.0; };
  Trace inexact_zero = run_inexact_apgnc(obj, x0, zeroed);
  require(trace_csv_string("s", 1, exact) == trace_csv_string("s", 1, inexact_null),
          "null error schedules changed the exact run");
  require(trace_csv_string("s", 1, exact) == trace_csv_string("s", 1, inexact_zero),
          "zero error schedules changed the exact run");
  require((exact.final_x - inexact_zero.final_x).norm() == 0.0,
          "zero-schedule run drifted from the exact run");

  SvrgConfig sv;
  sv.m = 10;
  sv.eta = eta;
  sv.max_epochs = 8;
  sv.momentum.kind = MomentumKind::ratio_k;
  sv.rng_seed = 23;
  Trace sexact = run_svrg_apgnc(obj, x0, sv);
  Trace snull = run_inexact_svrg_apgnc(obj, x0, sv);
  SvrgConfig svz = sv;
  svz.prox_error_schedule = [](int, int) { return 0.0; };
  Trace szero = run_inexact_svrg_apgnc(obj, x0, svz);
  require(trace_csv_string("s", 1, sexact) == trace_csv_string("s", 1, snull),
          "null schedule changed the variance-reduced run");
  require(trace_csv_string("s", 1, sexact) == trace_csv_string("s", 1, szero),
          "zero schedule changed the variance-reduced run");
  require((sexact.final_x - szero.final_x).norm() == 0.0,
          "zero-schedule variance-reduced run drifted");

  SvrgConfig sv0 = sv;
  sv0.momentum.kind = MomentumKind::none;
  Trace psv = run_prox_svrg(obj, x0, sv0);
  for (std::size_t i = 0; i < psv.records.size(); ++i) {
    require(!psv.records[i].chose_extrapolation, "zero-momentum epoch extrapolated");
    if (i + 1 < psv.records.size())
      require(psv.records[i + 1].F_y == psv.records[i].F_x,
              "zero-momentum epoch anchor is not the epoch endpoint");
  }
  return "4 reduction identities hold bit for bit";
}

std::string check_t_sequence() {
  require(t_update(0.0) == 1.0, "t_update(0) != 1");
  require(t_update(1.0) == 1.6180339887498949, "t_update(1) drifted: " + num(t_update(1.0)));
  require(t_update(1.6180339887498949) == 2.1935270853310539,
          "t_update(t_2) drifted: " + num(t_update(1.6180339887498949)));
  double t = 1.0;
  for (int k = 1; k <= 200; ++k) {
    require(t >= (k + 1) / 2.0,
            "t_" + std::to_string(k) + " = " + num(t) + " below (k+1)/2");
    t = t_update(t);
  }
  bool threw = false;
  try {
    t_update(-1.0);
  } catch (const std::invalid_argument&) {
    threw = true;
  }
  require(threw, "negative t accepted");
  return "t_k >= (k+1)/2 for 200 steps, frozen values exact";
}

// ---------------------------------------------------------------- svrg ----

std::string check_unbiased_estimate() {
  CompositeObjective obj = generate_nnpca(10, 6, 0.05, 3).second;
  Rng rng(112);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    Vector x = rng.normal_vector(6);
    Vector s = rng.normal_vector(6);
    Vector g = obj.smooth.gradient(x);
    Vector gs = obj.smooth.gradient(s);
    Vector mean = Vector::Zero(6);
    for (int xi = 0; xi < 10; ++xi) mean += svrg_gradient_estimate(obj, x, s, gs, xi);
    mean /= 10.0;
    double tol = 1e-12 * (1.0 + g.cwiseAbs().maxCoeff());
    double dev = (mean - g).cwiseAbs().maxCoeff();
    worst = std::max(worst, dev / tol);
    require(dev <= tol, "estimator mean off by " + num(dev));
  }
  for (int trial = 0; trial < 5; ++trial) {
    Vector x = rng.normal_vector(6);
    Vector gs = obj.smooth.gradient(x);
    for (int xi = 0; xi < 10; ++xi)
      require((svrg_gradient_estimate(obj, x, x, gs, xi) - gs).norm() == 0.0,
              "estimate at the snapshot is not the snapshot gradient");
  }
  return "exhaustive estimator mean matches the gradient, worst deviation/tol = " + num(worst);
}

std::string check_snapshot_identity() {
  auto [inst, obj] = coercive_nnpca(12, 8, 6);
  Rng rng(113);
  Vector x0 = rng.unit_vector(8).cwiseAbs();
  SvrgConfig cfg;
  cfg.m = 4;
  cfg.eta = 0.1 / inst.L;
  cfg.max_epochs = 5;
  cfg.momentum.kind = MomentumKind::ratio_k;
  cfg.rng_seed = 24;
  cfg.record_inner_points = true;
  Trace tr = run_svrg_apgnc(obj, x0, cfg);
  require(tr.inner_points.size() == 5, "inner points not recorded per epoch");
  const double resid_scale = inst.L + 1.0 / cfg.eta;
  for (std::size_t k = 0; k < tr.epochs.size(); ++k) {
    const auto& pts = tr.inner_points[k];
    require(pts.size() == 4, "expected m inner points");
    Vector probe = reference_inner_probe(obj, pts[0], cfg.eta);
    require((probe - pts[1]).norm() == 0.0,
            "first inner step differs from the exact full prox-gradient step");
    require(tr.epochs[k].inner_step_norms.front() == (pts[1] - pts[0]).norm(),
            "recorded first step norm is wrong");
    require(tr.records[k].step_norm == tr.epochs[k].inner_step_norms.front(),
            "record step norm is not the first inner step");
    require(tr.records[k].residual == resid_scale * tr.records[k].step_norm,
            "record residual is not the certified bound");
  }
  return "first inner step equals the exact prox-gradient step in all 5 epochs";
}

std::string check_epoch_selection() {
  auto [inst, obj] = coercive_nnpca(15, 8, 8);
  Rng rng(114);
  Vector x0 = rng.unit_vector(8).cwiseAbs();
  SvrgConfig cfg;
  cfg.m = 6;
  cfg.eta = 0.1 / inst.L;
  cfg.max_epochs = 12;
  cfg.momentum.kind = MomentumKind::ratio_k;
  cfg.rng_seed = 25;
  Trace tr = run_svrg_apgnc(obj, x0, cfg);
  int extrapolations = 0;
  for (std::size_t k = 1; k < tr.records.size(); ++k) {
    const IterationRecord& prev = tr.records[k - 1];
    const IterationRecord& cur = tr.records[k];
    require(cur.F_y <= prev.F_x, "epoch anchor is above the epoch endpoint");
    if (prev.chose_extrapolation) {
      ++extrapolations;
      require(cur.F_y < prev.F_x, "extrapolation accepted without strict improvement");
    } else {
      require(cur.F_y == prev.F_x, "rejected extrapolation still moved the anchor");
    }
  }
  return "anchor always the argmin of the two candidates (" +
         std::to_string(extrapolations) + "/11 extrapolations taken)";
}

std::string check_pass_accounting() {
  auto [inst, obj] = coercive_nnpca(10, 6, 10);
  Rng rng(115);
  Vector x0 = rng.unit_vector(6).cwiseAbs();
  const double eta = 0.1 / inst.L;

  SolverConfig s;
  s.eta = eta;
  s.max_iters = 5;
  s.momentum.kind = MomentumKind::none;
  Trace pg = run_proximal_gradient(obj, x0, s);
  for (const IterationRecord& r : pg.records)
    require(r.passes == static_cast<double>(r.k), "plain prox gradient pass count wrong");
  s.momentum.kind = MomentumKind::ratio_k;
  Trace ap = run_apgnc(obj, x0, s);
  for (const IterationRecord& r : ap.records)
    require(r.passes == static_cast<double>(r.k), "accept-step pass count wrong");
  s.momentum.kind = MomentumKind::nesterov_t;
  Trace ma = run_mapg(obj, x0, s);
  for (const IterationRecord& r : ma.records)
    require(r.passes == 2.0 * r.k, "two-prox solver pass count wrong");

  SvrgConfig sv;
  sv.eta = eta;
  sv.max_epochs = 5;
  sv.momentum.kind = MomentumKind::ratio_k;
  sv.m = 10;  // m = n: 3 passes per epoch
  Trace full = run_svrg_apgnc(obj, x0, sv);
  for (const IterationRecord& r : full.records)
    require(r.passes == 3.0 * (r.k + 1), "m=n epoch pass count wrong");
  sv.m = 5;  // m = n/2: 2 passes per epoch
  Trace half = run_svrg_apgnc(obj, x0, sv);
  for (const IterationRecord& r : half.records)
    require(r.passes == 2.0 * (r.k + 1), "m=n/2 epoch pass count wrong");
  return "pass counts match their closed forms for 5 solvers";
}

std::string check_rho_conditions() {
  require(check_rho_condition(0.25, 1, false), "(0.25, m=1, exact) should satisfy");
  require(!check_rho_condition(0.25, 2, false), "(0.25, m=2, exact) should fail");
  require(check_rho_condition(0.1, 1, false), "(0.1, m=1, exact) should satisfy");
  require(check_rho_condition(0.1, 2, false), "(0.1, m=2, exact) should satisfy");
  require(check_rho_condition(0.25, 1, true), "(0.25, m=1, inexact) should satisfy");
  require(!check_rho_condition(0.25, 2, true), "(0.25, m=2, inexact) should fail");
  require(check_rho_condition(0.1, 1, true), "(0.1, m=1, inexact) should satisfy");
  require(check_rho_condition(0.1, 2, true), "(0.1, m=2, inexact) should satisfy");
  require(!check_rho_condition(0.5, 1, false), "rho = 1/2 should be rejected");
  require(!check_rho_condition(0.0, 1, false), "rho = 0 should be rejected");
  bool threw = false;
  try {
    check_rho_condition(0.1, 0, false);
  } catch (const std::invalid_argument&) {
    threw = true;
  }
  require(threw, "m = 0 accepted");
  return "step-size admissibility truth table reproduced";
}

// --------------------------------------------------------- diagnostics ----

std::string check_fit_exactness() {
  std::vector<double> lin, pow_r;
  for (int k = 0; k < 50; ++k) {
    lin.push_back(std::pow(0.5, k));
    pow_r.push_back(std::pow(k + 1.0, -2.0));
  }
  RateFit lf = fit_linear_rate(lin, 0.5);
  require(std::abs(lf.parameter - 0.5) <= 1e-10,
          "linear fit on 0.5^k gave " + num(lf.parameter));
  require(lf.r_squared >= 1.0 - 1e-12, "linear fit R^2 = " + num(lf.r_squared));
  require(lf.tail_start == 25, "tail start " + std::to_string(lf.tail_start) + " != 25");
  RateFit pf = fit_power_rate(pow_r, 0.5);
  require(std::abs(pf.parameter - 2.0) <= 1e-10,
          "power fit on k^-2 gave " + num(pf.parameter));
  require(pf.r_squared >= 1.0 - 1e-12, "power fit R^2 = " + num(pf.r_squared));
  bool threw = false;
  try {
    fit_linear_rate({1.0, 0.5, 0.25}, 0.5);
  } catch (const std::invalid_argument&) {
    threw = true;
  }
  require(threw, "tail with fewer than 5 points accepted");
  return "synthetic sequences recovered exactly (R^2 = 1)";
}

std::string check_constants_frozen() {
  KLParameters half{0.5, 1.0};
  Theorem2Constants c1 = theorem2_constants(1.0, 0.2, half, 1.0);
  require(rel_close(c1.d1, 18.0, 1e-12), "d1(L=1, eta=0.2) = " + num(c1.d1) + " != 18");
  require(rel_close(c1.d2, 1.0 / 36.0, 1e-12), "d2 = " + num(c1.d2) + " != 1/36");
  Theorem2Constants c2 = theorem2_constants(1.0, 0.25, half, 1.0);
  require(rel_close(c2.d1, 50.0 / 3.0, 1e-12), "d1(L=1, eta=0.25) = " + num(c2.d1));
  Theorem2Constants c3 = theorem2_constants(1.0, 0.2, KLParameters{0.25, 0.1}, 1.0);
  require(rel_close(c3.d2, 0.051984209978974641, 1e-12),
          "theta<1/2 finite-termination branch gave " + num(c3.d2));
  Theorem2Constants c4 = theorem2_constants(1.0, 0.2, KLParameters{0.25, 10.0}, 1.0);
  require(rel_close(c4.d2, 1.0 / 360.0, 1e-12), "theta<1/2 min branch gave " + num(c4.d2));

  require(rel_close(theorem3_constant(1.0, 0.25, 0.5), 30.25, 1e-12),
          "perturbed constant (C=0.5) wrong");
  require(rel_close(theorem3_constant(1.0, 0.25, 0.0), c2.d1, 1e-12),
          "C=0 does not recover the exact constant");

  SvrgTheoreticalD e1 = svrg_theoretical_d(1.0, 0.25, 1, 1.0);
  require(rel_close(e1.d, 25.25, 1e-12), "variance-reduced d = " + num(e1.d) + " != 25.25");
  require(rel_close(e1.contraction, 25.25 / 26.25, 1e-12), "contraction wrong");
  SvrgTheoreticalD e2 = svrg_theoretical_d(1.0, 0.25, 2, 1.0);
  require(rel_close(e2.d, 25.5, 1e-12), "variance-reduced d(m=2) = " + num(e2.d));
  SvrgTheoreticalD e3 = svrg_theoretical_d(1.0, 0.25, 1, 1.0, 0.0);
  require(rel_close(e3.d, 27.5, 1e-12), "inexact d(alpha=0) = " + num(e3.d) + " != 27.5");
  require(rel_close(e3.contraction, 27.5 / 28.5, 1e-12), "inexact contraction wrong");

  int thrown = 0;
  auto expect_domain = [&](const std::function<void()>& f) {
    try {
      f();
    } catch (const std::domain_error&) {
      ++thrown;
    }
  };
  expect_domain([&] { theorem2_constants(1.0, 1.0, half, 1.0); });
  expect_domain([&] { theorem2_constants(1.0, 2.0, half, 1.0); });
  expect_domain([&] { theorem3_constant(1.0, 0.25, 2.0); });
  expect_domain([&] { svrg_theoretical_d(1.0, 0.5, 1, 1.0); });
  expect_domain([&] { svrg_theoretical_d(1.0, 0.25, 1, 1.0, 1.0); });
  require(thrown == 5, "only " + std::to_string(thrown) + "/5 out-of-domain calls threw");

  Vector y(2), x(2);
  y << 1.0, 0.0;
  x << 0.8, 0.0;
  require(rel_close(residual_bound(1.0, 0.5, y, x), 0.6, 1e-12), "residual bound wrong");

  Vector g(2), p(2);
  p << 2.0, 0.0;
  g << 0.5, -0.3;
  require(kkt_residual_nonneg(g, p) == 0.5, "interior coordinate residual wrong");
  p << 0.0, 0.0;
  g << 0.2, -0.3;
  require(kkt_residual_nonneg(g, p) == 0.3, "boundary residual wrong");
  p << 1.0, 2.0;
  g << 0.0, 0.0;
  require(kkt_residual_nonneg(g, p) == 0.0, "zero gradient not stationary");
  p << 0.0, 1.0;
  g << 0.4, 0.0;
  require(kkt_residual_nonneg(g, p) == 0.0, "inward-pointing boundary gradient not stationary");
  bool threw = false;
  try {
    p << -1.0, 0.0;
    kkt_residual_nonneg(g, p);
  } catch (const std::invalid_argument&) {
    threw = true;
  }
  require(threw, "infeasible point accepted");

  CompositeObjective obj = scalar_quadratic();
  Vector y1 = Vector::Ones(1);
  DescentLemmaReport rep = descent_lemma_check(obj, y1, 0.5);
  require(rep.lhs == 0.125 && rep.rhs == 0.375 && rep.holds,
          "scalar sufficient-decrease example wrong: lhs=" + num(rep.lhs) +
              " rhs=" + num(rep.rhs));
  return "constant formulas, stationarity examples and domain guards all frozen";
}

// ----------------------------------------------------------------- cli ----

std::string check_trace_determinism() {
  ProblemSpec ps;
  ps.kind = ProblemKind::nnpca;
  ps.n = 12;
  ps.d = 8;
  ps.gamma = 0.05;
  ps.seed = 2;
  BuiltProblem p1 = build_problem(ps);
  BuiltProblem p2 = build_problem(ps);

  SolverSpec ss;
  ss.kind = SolverKind::apgnc;
  ss.name = "apgnc";
  RunResult a = execute_run(p1, ss, 40.0, 5);
  RunResult b = execute_run(p2, ss, 40.0, 5);
  require(!a.diverged && !b.diverged, "short runs diverged unexpectedly");
  require(trace_csv_string(a.solver, a.seed, a.trace) ==
              trace_csv_string(b.solver, b.seed, b.trace),
          "rebuilt problem produced a different trace");
  RunResult c = execute_run(p1, ss, 40.0, 6);
  require(trace_csv_string(c.solver, c.seed, c.trace) !=
              trace_csv_string(a.solver, a.seed, a.trace),
          "different seeds produced identical traces");
  for (std::size_t i = 1; i < a.trace.records.size(); ++i)
    require(a.trace.records[i].passes > a.trace.records[i - 1].passes,
            "pass counter not strictly increasing");

  SolverSpec sv;
  sv.kind = SolverKind::svrg_apgnc;
  sv.name = "svrg_apgnc";
  RunResult d = execute_run(p1, sv, 40.0, 5);
  RunResult e = execute_run(p2, sv, 40.0, 5);
  require(!d.diverged && !e.diverged, "variance-reduced runs diverged unexpectedly");
  require(trace_csv_string(d.solver, d.seed, d.trace) ==
              trace_csv_string(e.solver, e.seed, e.trace),
          "variance-reduced trace not reproducible");
  return "identical seeds reproduce CSV bytes, distinct seeds differ";
}

std::string check_summary_roundtrip() {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / ("proxmom_check_" + std::to_string(::getpid()));
  struct Cleanup {
    fs::path p;
    ~Cleanup() {
      std::error_code ec;
      fs::remove_all(p, ec);
    }
  } cleanup{dir};

  ExperimentConfig cfg;
  cfg.problem.kind = ProblemKind::nnpca;
  cfg.problem.n = 12;
  cfg.problem.d = 8;
  cfg.problem.gamma = 0.05;
  cfg.problem.seed = 2;
  SolverSpec s1;
  s1.kind = SolverKind::pg;
  s1.name = "pg";
  SolverSpec s2;
  s2.kind = SolverKind::apgnc;
  s2.name = "apgnc";
  cfg.solvers = {s1, s2};
  cfg.budget_passes = 25.0;
  cfg.output_dir = dir.string();
  cfg.seeds = {3, 4};

  std::ostringstream sink;
  int rc = cmd_run(cfg, sink);
  require(rc == 0, "run command returned " + std::to_string(rc));

  std::ifstream sf(dir / "summary.txt");
  require(static_cast<bool>(sf), "summary.txt missing");
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(sf, line)) {
    auto eq = line.find('=');
    if (eq != std::string::npos) kv[line.substr(0, eq)] = line.substr(eq + 1);
  }

  int compared = 0;
  for (const char* name_c : {"pg", "apgnc"}) {
    const std::string name = name_c;
    for (int seed : {3, 4}) {
      fs::path csv = dir / (name + "_seed" + std::to_string(seed) + ".csv");
      std::ifstream cf(csv);
      require(static_cast<bool>(cf), "missing " + csv.string());
      std::string last, row;
      std::getline(cf, row);  // header
      while (std::getline(cf, row))
        if (!row.empty()) last = row;
      std::vector<std::string> fields;
      std::stringstream rs(last);
      std::string field;
      while (std::getline(rs, field, ',')) fields.push_back(field);
      require(fields.size() >= 5, "malformed last CSV row: " + last);
      std::string key = "run." + name + ".seed" + std::to_string(seed) + ".final_F";
      require(kv.count(key) == 1, "summary key missing: " + key);
      require(kv[key] == fields[4],
              "summary " + kv[key] + " != last CSV objective " + fields[4]);
      ++compared;
    }
  }
  require(compared == 4, "expected 4 run comparisons");
  return "summary final objectives equal the last CSV rows byte for byte";
}

// --------------------------------------------------------- full extras ----

std::string check_quadratic_linear_fit() {
  std::vector<double> eigs = {1.0, 1.7, 2.6, 3.4, 4.3, 5.2, 6.4, 7.5, 8.8, 10.0};
  QuadraticProblem qp = quadratic_problem(eigs, 17);
  const double L = qp.objective.smooth.lipschitz;
  const double lam_min = 1.0;
  Rng rng(116);
  SolverConfig cfg;
  cfg.eta = 0.05 / L;
  cfg.momentum.kind = MomentumKind::ratio_k;
  cfg.max_iters = 400;
  Trace tr = run_apgnc(qp.objective, rng.unit_vector(10).cwiseAbs(), cfg);
  std::vector<double> r;
  for (const IterationRecord& rec : tr.records) r.push_back(rec.F_x);
  RateFit fit = fit_linear_rate(r, 0.5);
  require(fit.parameter > 0.0 && fit.parameter < 1.0,
          "fitted ratio " + num(fit.parameter) + " not in (0,1)");
  require(fit.r_squared >= 0.99, "log-linear fit R^2 = " + num(fit.r_squared) + " < 0.99");
  KLParameters kl{0.5, 1.0 / std::sqrt(2.0 * lam_min)};
  double d1 = theorem2_constants(L, cfg.eta, kl, r.front()).d1;
  double rho_thm = kl.c * kl.c * d1 / (1.0 + kl.c * kl.c * d1);
  require(fit.parameter <= rho_thm + 1e-3, "fitted ratio " + num(fit.parameter) +
                                               " above theoretical " + num(rho_thm));
  return "fitted ratio " + num(fit.parameter) + " (R^2 = " + num(fit.r_squared) +
         ") within theoretical " + num(rho_thm);
}

std::string check_quartic_power_fit() {
  CompositeObjective obj = quartic_problem(5);
  SolverConfig cfg;
  cfg.eta = 1.0 / obj.smooth.lipschitz;
  cfg.momentum.kind = MomentumKind::none;
  cfg.max_iters = 2000;
  Trace tr = run_proximal_gradient(obj, Vector::Ones(5), cfg);
  std::vector<double> r;
  for (const IterationRecord& rec : tr.records) r.push_back(rec.F_x);
  RateFit fit = fit_power_rate(r, 0.5);
  require(fit.parameter >= 1.5 && fit.parameter <= 2.5,
          "flat-curvature decay exponent " + num(fit.parameter) + " outside [1.5, 2.5]");
  require(fit.r_squared >= 0.98, "power fit R^2 = " + num(fit.r_squared));
  return "decay exponent " + num(fit.parameter) + " (R^2 = " + num(fit.r_squared) + ")";
}

std::string check_accelerated_budget() {
  std::vector<double> eigs = {1.0, 1.7, 2.6, 3.4, 4.3, 5.2, 6.4, 7.5, 8.8, 10.0};
  QuadraticProblem qp = quadratic_problem(eigs, 18);
  const double L = qp.objective.smooth.lipschitz;
  const int budget = static_cast<int>(std::ceil(10.0 * L / 1.0));
  Rng rng(117);
  SolverConfig cfg;
  cfg.eta = 0.95 / L;
  cfg.momentum.kind = MomentumKind::nesterov_t;
  cfg.max_iters = budget;
  Trace tr = run_mapg(qp.objective, rng.unit_vector(10).cwiseAbs(), cfg);
  double best = kInf;
  int at = -1;
  for (const IterationRecord& rec : tr.records)
    if (rec.F_x < best) {
      best = rec.F_x;
      at = rec.k;
    }
  require(best <= 1e-10, "objective only reached " + num(best) + " within " +
                             std::to_string(budget) + " iterations");
  return "reached F = " + num(best) + " at iteration " + std::to_string(at) + " of " +
         std::to_string(budget);
}

std::string check_statistical_descent() {
  auto [inst, obj] = coercive_nnpca(50, 20, 31);
  const int m = 50, epochs = 25, seeds = 10;
  SvrgConfig cfg;
  cfg.m = m;
  cfg.eta = 1.0 / (8.0 * m * inst.L);
  cfg.max_epochs = epochs;
  cfg.momentum.kind = MomentumKind::ratio_k;
  std::vector<double> mean_F(epochs, 0.0);
  for (int s = 0; s < seeds; ++s) {
    Rng rng(1000 + s);
    cfg.rng_seed = rng.next_u64();
    Trace tr = run_svrg_apgnc(obj, rng.unit_vector(20).cwiseAbs(), cfg);
    require(tr.records.size() == epochs, "unexpected epoch count");
    for (int k = 0; k < epochs; ++k) mean_F[k] += tr.records[k].F_y / seeds;
  }
  int down = 0;
  for (int k = 1; k < epochs; ++k)
    if (mean_F[k] <= mean_F[k - 1] + 1e-12) ++down;
  double frac = static_cast<double>(down) / (epochs - 1);
  require(frac >= 0.95, "mean anchor objective decreased on only fraction " + num(frac) + " of steps");
  require(mean_F.back() < mean_F.front(), "mean anchor objective did not improve overall");
  return "mean anchor objective non-increasing on fraction " + num(frac) + " of steps over " +
         std::to_string(seeds) + " seeds";
}

std::string check_alpha_ratio() {
  auto [inst, obj] = coercive_nnpca(12, 8, 19);
  Rng rng(118);
  SvrgConfig cfg;
  cfg.m = 6;
  cfg.eta = 0.1 / inst.L;
  cfg.max_epochs = 4;
  cfg.momentum.kind = MomentumKind::ratio_k;
  cfg.prox_error_schedule = [](int, int) { return 1e-8; };
  cfg.rng_seed = 27;
  cfg.record_inner_points = true;
  Trace tr = run_inexact_svrg_apgnc(obj, rng.unit_vector(8).cwiseAbs(), cfg);
  std::vector<double> alphas = svrg_epoch_alpha(obj, tr, cfg.eta);
  require(alphas.size() == 4, "expected one ratio per epoch");
  for (double a : alphas)
    require(std::isfinite(a) && a >= 0.0, "error-budget ratio not finite and nonnegative");
  double denom = 0.0;
  for (const Vector& pt : tr.inner_points[0])
    denom += (reference_inner_probe(obj, pt, cfg.eta) - pt).squaredNorm();
  double manual = 3.0 * tr.epochs[0].eps_scheduled_sum / denom;
  require(rel_close(alphas[0], manual, 1e-12),
          "epoch 0 ratio " + num(alphas[0]) + " != recomputed " + num(manual));
  return "error-budget ratios finite and reproducible (alpha_0 = " + num(alphas[0]) + ")";
}

}  // namespace

std::vector<CheckResult> run_fast_checks() {
  std::vector<CheckResult> out;
  run_one(out, "core.gradient_consistency", check_gradient_consistency);
  run_one(out, "core.finite_sum_mean", check_finite_sum_mean);
  run_one(out, "core.lipschitz_pairs", check_lipschitz_pairs);
  run_one(out, "prox.grid_optimality", check_grid_optimality);
  run_one(out, "prox.nonexpansiveness", check_nonexpansiveness);
  run_one(out, "prox.inexact_band", check_inexact_band);
  run_one(out, "prox.inexact_determinism", check_inexact_determinism);
  run_one(out, "algorithms.accept_rules", check_accept_rules);
  run_one(out, "algorithms.hand_trace_scalar", check_hand_trace_scalar);
  run_one(out, "algorithms.descent_chain", check_descent_chain);
  run_one(out, "algorithms.descent_lemma_sweep", check_descent_lemma_sweep);
  run_one(out, "algorithms.residual_kkt_soundness", check_residual_kkt_soundness);
  run_one(out, "algorithms.reduction_identities", check_reduction_identities);
  run_one(out, "algorithms.t_sequence", check_t_sequence);
  run_one(out, "svrg.unbiased_estimate", check_unbiased_estimate);
  run_one(out, "svrg.snapshot_identity", check_snapshot_identity);
  run_one(out, "svrg.epoch_selection", check_epoch_selection);
  run_one(out, "svrg.pass_accounting", check_pass_accounting);
  run_one(out, "svrg.rho_conditions", check_rho_conditions);
  run_one(out, "diagnostics.fit_exactness", check_fit_exactness);
  run_one(out, "diagnostics.constants_frozen", check_constants_frozen);
  run_one(out, "cli.trace_determinism", check_trace_determinism);
  run_one(out, "cli.summary_roundtrip", check_summary_roundtrip);
  return out;
}

std::vector<CheckResult> run_full_checks() {
  std::vector<CheckResult> out = run_fast_checks();
  run_one(out, "rates.quadratic_linear_fit", check_quadratic_linear_fit);
  run_one(out, "rates.quartic_power_fit", check_quartic_power_fit);
  run_one(out, "rates.accelerated_budget", check_accelerated_budget);
  run_one(out, "svrg.statistical_descent", check_statistical_descent);
  run_one(out, "svrg.alpha_ratio", check_alpha_ratio);
  return out;
}

int cmd_check(bool full, std::ostream& out) {
  std::vector<CheckResult> results = full ? run_full_checks() : run_fast_checks();
  int failed = 0;
  for (const CheckResult& r : results) {
    out << (r.passed ? "[PASS] " : "[FAIL] ") << r.name;
    if (!r.detail.empty()) out << ": " << r.detail;
    out << "\n";
    if (!r.passed) ++failed;
  }
  if (failed == 0)
    out << "all " << results.size() << " checks passed\n";
  else
    out << failed << " of " << results.size() << " checks failed\n";
  return failed == 0 ? 0 : 1;
}

}  // namespace proxmom
