#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "proxmom/checks.hpp"
#include "proxmom/config.hpp"
#include "proxmom/diagnostics.hpp"
#include "proxmom/errors.hpp"
#include "proxmom/objective.hpp"
#include "proxmom/problems.hpp"
#include "proxmom/prox.hpp"
#include "proxmom/rng.hpp"
#include "proxmom/runner.hpp"
#include "proxmom/solvers.hpp"
#include "proxmom/svrg.hpp"
#include "proxmom/trace_io.hpp"

namespace py = pybind11;

namespace proxmom {
namespace {

BuiltProblem make_nnpca_problem(int n, int d, double gamma, std::uint64_t seed) {
  ProblemSpec ps;
  ps.kind = ProblemKind::nnpca;
  ps.n = n;
  ps.d = d;
  ps.gamma = gamma;
  ps.seed = seed;
  return build_problem(ps);
}

BuiltProblem make_quadratic_problem(const std::vector<double>& eigs, std::uint64_t seed) {
  ProblemSpec ps;
  ps.kind = ProblemKind::quadratic;
  ps.eigs = eigs;
  ps.seed = seed;
  return build_problem(ps);
}

BuiltProblem make_quartic_problem(int d) {
  ProblemSpec ps;
  ps.kind = ProblemKind::quartic;
  ps.d = d;
  return build_problem(ps);
}

BuiltProblem make_file_problem(const std::string& path) {
  ProblemSpec ps;
  ps.kind = ProblemKind::file;
  ps.path = path;
  return build_problem(ps);
}

Trace run_named(const BuiltProblem& prob, const std::string& solver, const Vector& x0,
                double eta, int max_iters, std::uint64_t seed, double beta0, double t_shrink,
                int m, int max_epochs, double rho, double residual_tol,
                const std::string& grad_err, const std::string& prox_eps) {
  SolverKind kind;
  if (!solver_kind_from(solver, kind)) throw std::invalid_argument("unknown solver: " + solver);
  const CompositeObjective& obj = prob.objective;

  if (solver_kind_is_svrg(kind)) {
    SvrgConfig cfg;
    cfg.m = m > 0 ? m : obj.smooth.n_components;
    cfg.eta = eta;
    cfg.rho = rho;
    cfg.max_epochs = max_epochs > 0 ? max_epochs : 30;
    cfg.rng_seed = seed;
    cfg.residual_tol = residual_tol;
    cfg.momentum.beta0 = beta0;
    cfg.momentum.t_shrink = t_shrink;
    switch (kind) {
      case SolverKind::prox_svrg:
        cfg.momentum.kind = MomentumKind::none;
        return run_prox_svrg(obj, x0, cfg);
      case SolverKind::svrg_apgnc:
        cfg.momentum.kind = MomentumKind::ratio_k;
        return run_svrg_apgnc(obj, x0, cfg);
      case SolverKind::svrg_apgnc_plus:
        cfg.momentum.kind = MomentumKind::adaptive;
        return run_svrg_apgnc_plus(obj, x0, cfg);
      default: {
        cfg.momentum.kind = MomentumKind::ratio_k;
        if (!prox_eps.empty()) {
          ErrorSchedule sched = parse_schedule(prox_eps);
          int mm = cfg.m;
          cfg.prox_error_schedule = [sched, mm](int k, int t) { return sched(k * mm + t + 1); };
        }
        return run_inexact_svrg_apgnc(obj, x0, cfg);
      }
    }
  }

  SolverConfig cfg;
  cfg.eta = eta;
  cfg.max_iters = max_iters;
  cfg.rng_seed = seed;
  cfg.residual_tol = residual_tol;
  cfg.momentum.beta0 = beta0;
  cfg.momentum.t_shrink = t_shrink;
  switch (kind) {
    case SolverKind::pg:
      cfg.momentum.kind = MomentumKind::none;
      return run_proximal_gradient(obj, x0, cfg);
    case SolverKind::apg:
      cfg.momentum.kind = MomentumKind::nesterov_t;
      return run_apg(obj, x0, cfg);
    case SolverKind::mapg:
      cfg.momentum.kind = MomentumKind::nesterov_t;
      return run_mapg(obj, x0, cfg);
    case SolverKind::apgnc:
      cfg.momentum.kind = MomentumKind::ratio_k;
      return run_apgnc(obj, x0, cfg);
    case SolverKind::apgnc_plus:
      cfg.momentum.kind = MomentumKind::adaptive;
      return run_apgnc_plus(obj, x0, cfg);
    default: {
      cfg.momentum.kind = MomentumKind::ratio_k;
      if (!grad_err.empty()) cfg.grad_error_schedule = parse_schedule(grad_err);
      if (!prox_eps.empty()) cfg.prox_error_schedule = parse_schedule(prox_eps);
      return run_inexact_apgnc(obj, x0, cfg);
    }
  }
}

std::vector<double> collect(const Trace& tr, double IterationRecord::*field) {
  std::vector<double> v;
  v.reserve(tr.records.size());
  for (const IterationRecord& r : tr.records) v.push_back(r.*field);
  return v;
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "proximal-gradient solvers with momentum for composite minimization";

  py::register_exception<DivergedError>(mod, "DivergedError", PyExc_RuntimeError);

  py::class_<BuiltProblem>(mod, "Problem")
      .def_property_readonly("dim", [](const BuiltProblem& p) { return p.objective.dim; })
      .def_property_readonly(
          "n_components", [](const BuiltProblem& p) { return p.objective.smooth.n_components; })
      .def_property_readonly(
          "lipschitz", [](const BuiltProblem& p) { return p.objective.smooth.lipschitz; })
      .def_property_readonly("f_star", [](const BuiltProblem& p) { return p.f_star; })
      .def("F", [](const BuiltProblem& p, const Vector& x) { return eval_F(p.objective, x); })
      .def("gradient",
           [](const BuiltProblem& p, const Vector& x) { return p.objective.smooth.gradient(x); })
      .def("prox_gradient_step",
           [](const BuiltProblem& p, const Vector& x, double eta) {
             return prox_gradient_step(p.objective, x, eta);
           })
      .def(
          "initial_point",
          [](const BuiltProblem& p, std::uint64_t seed) {
            Rng rng(seed);
            return initial_point(p, rng);
          },
          py::arg("seed"));

  py::class_<Trace>(mod, "Trace")
      .def_property_readonly("iterations",
                             [](const Trace& t) { return static_cast<int>(t.records.size()); })
      .def_property_readonly("F_x", [](const Trace& t) { return collect(t, &IterationRecord::F_x); })
      .def_property_readonly("F_y", [](const Trace& t) { return collect(t, &IterationRecord::F_y); })
      .def_property_readonly(
          "step_norms", [](const Trace& t) { return collect(t, &IterationRecord::step_norm); })
      .def_property_readonly(
          "residuals", [](const Trace& t) { return collect(t, &IterationRecord::residual); })
      .def_property_readonly("betas",
                             [](const Trace& t) { return collect(t, &IterationRecord::beta); })
      .def_property_readonly("passes",
                             [](const Trace& t) { return collect(t, &IterationRecord::passes); })
      .def_property_readonly("chose_extrapolation",
                             [](const Trace& t) {
                               std::vector<bool> v;
                               for (const IterationRecord& r : t.records)
                                 v.push_back(r.chose_extrapolation);
                               return v;
                             })
      .def_property_readonly("final_x", [](const Trace& t) { return t.final_x; })
      .def_readonly("final_F", &Trace::final_F)
      .def_readonly("warnings", &Trace::warnings)
      .def_property_readonly("terminated_by", [](const Trace& t) {
        return std::string(t.terminated_by == StopReason::tolerance ? "tolerance" : "max_iters");
      });

  py::class_<RateFit>(mod, "RateFit")
      .def_readonly("parameter", &RateFit::parameter)
      .def_readonly("r_squared", &RateFit::r_squared)
      .def_readonly("tail_start", &RateFit::tail_start)
      .def_property_readonly("model", [](const RateFit& f) {
        return std::string(f.model == RateModel::linear ? "linear" : "power");
      });

  mod.def("nnpca", &make_nnpca_problem, py::arg("n") = 200, py::arg("d") = 50,
          py::arg("gamma") = 1e-3, py::arg("seed") = 1,
          "nonnegative-PCA instance with unit-norm rows");
  mod.def("quadratic", &make_quadratic_problem, py::arg("eigs"), py::arg("seed") = 1,
          "orthant-constrained quadratic with a prescribed spectrum");
  mod.def("quartic", &make_quartic_problem, py::arg("d"),
          "separable quartic with no curvature at the minimizer");
  mod.def("load_problem", &make_file_problem, py::arg("path"),
          "nonnegative-PCA instance from a saved text file");

  mod.def("run", &run_named, py::arg("problem"), py::arg("solver"), py::arg("x0"),
          py::arg("eta"), py::arg("max_iters") = 1000, py::arg("seed") = 0,
          py::arg("beta0") = 0.5, py::arg("t_shrink") = 0.5, py::arg("m") = 0,
          py::arg("max_epochs") = 0, py::arg("rho") = 0.0, py::arg("residual_tol") = 0.0,
          py::arg("grad_err") = std::string(), py::arg("prox_eps") = std::string(),
          "run a solver by name (pg, apg, mapg, apgnc, apgnc_plus, inexact_apgnc, prox_svrg, "
          "svrg_apgnc, svrg_apgnc_plus, inexact_svrg_apgnc)");

  mod.def("t_update", &t_update, py::arg("t"));
  mod.def("check_rho_condition", &check_rho_condition, py::arg("rho"), py::arg("m"),
          py::arg("inexact") = false);
  mod.def("residual_bound", &residual_bound, py::arg("L"), py::arg("eta"), py::arg("y"),
          py::arg("x"));
  mod.def("kkt_residual_nonneg", &kkt_residual_nonneg, py::arg("grad"), py::arg("x"));
  mod.def(
      "descent_lemma",
      [](const BuiltProblem& p, const Vector& y, double eta) {
        DescentLemmaReport r = descent_lemma_check(p.objective, y, eta);
        return py::make_tuple(r.lhs, r.rhs, r.holds);
      },
      py::arg("problem"), py::arg("y"), py::arg("eta"),
      "(F(x+), certified upper bound, holds) at a prox-gradient step from y");
  mod.def("fit_linear_rate", &fit_linear_rate, py::arg("r"), py::arg("tail_fraction") = 0.5);
  mod.def("fit_power_rate", &fit_power_rate, py::arg("r"), py::arg("tail_fraction") = 0.5);
  mod.def(
      "theorem_constants",
      [](double L, double eta, double theta, double c, double r_k0) {
        Theorem2Constants t = theorem2_constants(L, eta, KLParameters{theta, c}, r_k0);
        return py::make_tuple(t.d1, t.d2);
      },
      py::arg("L"), py::arg("eta"), py::arg("theta") = 0.5, py::arg("c") = 1.0,
      py::arg("r_k0") = 1.0, "(d1, d2) convergence constants for the exact solvers");
  mod.def("perturbed_constant", &theorem3_constant, py::arg("L"), py::arg("eta"), py::arg("C"));
  mod.def(
      "svrg_constants",
      [](double L, double eta, int m, double c, std::optional<double> inexact_alpha) {
        SvrgTheoreticalD d = svrg_theoretical_d(L, eta, m, c, inexact_alpha);
        return py::make_tuple(d.d, d.contraction);
      },
      py::arg("L"), py::arg("eta"), py::arg("m"), py::arg("c") = 1.0,
      py::arg("inexact_alpha") = std::nullopt,
      "(d, d/(d+1)) per-epoch contraction constants");

  mod.def(
      "trace_csv",
      [](const std::string& solver, std::uint64_t seed, const Trace& tr) {
        return trace_csv_string(solver, seed, tr);
      },
      py::arg("solver"), py::arg("seed"), py::arg("trace"));

  mod.def(
      "run_checks",
      [](bool full) {
        std::vector<CheckResult> rs = full ? run_full_checks() : run_fast_checks();
        py::list out;
        for (const CheckResult& r : rs) out.append(py::make_tuple(r.name, r.passed, r.detail));
        return out;
      },
      py::arg("full") = false, "library self-checks as (name, passed, detail) tuples");
}

}  // namespace proxmom
