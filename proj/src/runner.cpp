#include "proxmom/runner.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "proxmom/diagnostics.hpp"
#include "proxmom/errors.hpp"
#include "proxmom/format.hpp"
#include "proxmom/problems.hpp"
#include "proxmom/svrg.hpp"
#include "proxmom/trace_io.hpp"

namespace proxmom {

BuiltProblem build_problem(const ProblemSpec& spec) {
  BuiltProblem out;
  out.kind = spec.kind;
  switch (spec.kind) {
    case ProblemKind::nnpca:
      out.objective = generate_nnpca(spec.n, spec.d, spec.gamma, spec.seed).second;
      break;
    case ProblemKind::quadratic: {
      QuadraticProblem qp = quadratic_problem(spec.eigs, spec.seed);
      out.objective = std::move(qp.objective);
      out.min_eig = qp.eigs.minCoeff();
      out.f_star = 0.0;
      break;
    }
    case ProblemKind::quartic:
      out.objective = quartic_problem(spec.d);
      out.f_star = 0.0;
      break;
    case ProblemKind::file:
      out.objective = make_nnpca_objective(load_nnpca_instance(spec.path));
      break;
  }
  return out;
}

Vector initial_point(const BuiltProblem& prob, Rng& rng) {
  if (prob.kind == ProblemKind::quartic) return Vector::Ones(prob.objective.dim);
  return rng.unit_vector(prob.objective.dim).cwiseAbs();
}

namespace {

double passes_per_iteration(SolverKind kind) {
  return kind == SolverKind::mapg ? 2.0 : 1.0;
}

int derived_iters(double budget, double per_iter, int explicit_cap) {
  int derived = std::max(1, static_cast<int>(std::floor(budget / per_iter)));
  if (explicit_cap > 0) derived = std::min(derived, explicit_cap);
  return derived;
}

}  // namespace

RunResult execute_run(const BuiltProblem& prob, const SolverSpec& spec, double budget_passes,
                      std::uint64_t seed) {
  if (!(budget_passes > 0)) throw std::invalid_argument("execute_run: budget must be positive");
  const CompositeObjective& obj = prob.objective;
  const double L = obj.smooth.lipschitz;
  const int n = obj.smooth.n_components;

  RunResult res;
  res.solver = spec.name;
  res.seed = seed;

  Rng rng(seed);
  Vector x0 = initial_point(prob, rng);
  std::uint64_t solver_seed = rng.next_u64();

  auto resolve_eta = [&](double fallback_scale) {
    if (spec.eta > 0) return spec.eta;
    double scale = spec.eta_scale > 0 ? spec.eta_scale : fallback_scale;
    if (!(L > 0))
      throw std::invalid_argument("execute_run: solver '" + spec.name +
                                  "' needs an explicit eta (problem has no Lipschitz constant)");
    return scale / L;
  };

  try {
    if (solver_kind_is_svrg(spec.kind)) {
      SvrgConfig cfg;
      cfg.m = spec.m > 0 ? spec.m : n;
      cfg.rho = spec.rho;
      if (spec.rho <= 0) {
        // Default step size for variance-reduced runs: 1/(8 m L).
        cfg.eta = spec.eta > 0
                      ? spec.eta
                      : (spec.eta_scale > 0 ? spec.eta_scale / L : 1.0 / (8.0 * cfg.m * L));
      }
      double per_epoch = 1.0 + 2.0 * static_cast<double>(cfg.m) / n;
      cfg.max_epochs = derived_iters(budget_passes, per_epoch, spec.max_epochs);
      cfg.residual_tol = spec.residual_tol;
      cfg.rng_seed = solver_seed;
      switch (spec.kind) {
        case SolverKind::prox_svrg:
          cfg.momentum.kind = MomentumKind::none;
          res.trace = run_prox_svrg(obj, x0, cfg);
          break;
        case SolverKind::svrg_apgnc:
          cfg.momentum.kind = MomentumKind::ratio_k;
          res.trace = run_svrg_apgnc(obj, x0, cfg);
          break;
        case SolverKind::svrg_apgnc_plus:
          cfg.momentum.kind = MomentumKind::adaptive;
          cfg.momentum.beta0 = spec.beta0;
          cfg.momentum.t_shrink = spec.t_shrink;
          res.trace = run_svrg_apgnc_plus(obj, x0, cfg);
          break;
        default: {
          cfg.momentum.kind = MomentumKind::ratio_k;
          if (!spec.prox_eps.empty()) {
            ErrorSchedule sched = parse_schedule(spec.prox_eps);
            int m = cfg.m;
            // Inner steps see a global 1-based counter so the error budget
            // stays summable across epochs.
            cfg.prox_error_schedule = [sched, m](int k, int t) { return sched(k * m + t + 1); };
          }
          res.trace = run_inexact_svrg_apgnc(obj, x0, cfg);
          break;
        }
      }
    } else {
      SolverConfig cfg;
      cfg.eta = resolve_eta(0.05);
      cfg.max_iters = derived_iters(budget_passes, passes_per_iteration(spec.kind),
                                    spec.max_iters);
      cfg.residual_tol = spec.residual_tol;
      cfg.rng_seed = solver_seed;
      switch (spec.kind) {
        case SolverKind::pg:
          cfg.momentum.kind = MomentumKind::none;
          res.trace = run_proximal_gradient(obj, x0, cfg);
          break;
        case SolverKind::apg:
          cfg.momentum.kind = MomentumKind::nesterov_t;
          res.trace = run_apg(obj, x0, cfg);
          break;
        case SolverKind::mapg:
          cfg.momentum.kind = MomentumKind::nesterov_t;
          res.trace = run_mapg(obj, x0, cfg);
          break;
        case SolverKind::apgnc:
          cfg.momentum.kind = MomentumKind::ratio_k;
          res.trace = run_apgnc(obj, x0, cfg);
          break;
        case SolverKind::apgnc_plus:
          cfg.momentum.kind = MomentumKind::adaptive;
          cfg.momentum.beta0 = spec.beta0;
          cfg.momentum.t_shrink = spec.t_shrink;
          res.trace = run_apgnc_plus(obj, x0, cfg);
          break;
        default:
          cfg.momentum.kind = MomentumKind::ratio_k;
          if (!spec.grad_err.empty()) cfg.grad_error_schedule = parse_schedule(spec.grad_err);
          if (!spec.prox_eps.empty()) cfg.prox_error_schedule = parse_schedule(spec.prox_eps);
          res.trace = run_inexact_apgnc(obj, x0, cfg);
          break;
      }
    }
  } catch (const DivergedError& e) {
    res.diverged = true;
    res.error = e.what();
  }
  return res;
}

namespace {

std::string run_label(const RunResult& r) {
  return r.solver + ".seed" + std::to_string(r.seed);
}

void append_problem_lines(Report& rep, const ExperimentConfig& cfg, const BuiltProblem& prob) {
  const ProblemSpec& p = cfg.problem;
  switch (p.kind) {
    case ProblemKind::nnpca:
      rep.emplace_back("problem.kind", "nnpca");
      rep.emplace_back("problem.n", std::to_string(p.n));
      rep.emplace_back("problem.d", std::to_string(p.d));
      rep.emplace_back("problem.gamma", format_sig17(p.gamma));
      rep.emplace_back("problem.seed", std::to_string(p.seed));
      break;
    case ProblemKind::quadratic: {
      rep.emplace_back("problem.kind", "quadratic");
      std::ostringstream eigs;
      for (std::size_t i = 0; i < p.eigs.size(); ++i) {
        if (i) eigs << ',';
        eigs << format_sig17(p.eigs[i]);
      }
      rep.emplace_back("problem.eigs", eigs.str());
      rep.emplace_back("problem.seed", std::to_string(p.seed));
      break;
    }
    case ProblemKind::quartic:
      rep.emplace_back("problem.kind", "quartic");
      rep.emplace_back("problem.d", std::to_string(p.d));
      break;
    case ProblemKind::file:
      rep.emplace_back("problem.kind", "file");
      rep.emplace_back("problem.path", p.path);
      break;
  }
  rep.emplace_back("problem.lipschitz", format_sig17(prob.objective.smooth.lipschitz));
  rep.emplace_back("budget_passes", format_sig17(cfg.budget_passes));
}

void append_run_lines(Report& rep, const RunResult& r) {
  std::string base = "run." + run_label(r);
  if (r.diverged) {
    rep.emplace_back(base + ".diverged", "1");
    rep.emplace_back(base + ".error", r.error);
    return;
  }
  const Trace& tr = r.trace;
  rep.emplace_back(base + ".diverged", "0");
  rep.emplace_back(base + ".final_F", format_sig17(tr.final_F));
  rep.emplace_back(base + ".iterations", std::to_string(tr.records.size()));
  rep.emplace_back(base + ".passes",
                   format_sig17(tr.records.empty() ? 0.0 : tr.records.back().passes));
  rep.emplace_back(base + ".terminated_by",
                   tr.terminated_by == StopReason::tolerance ? "tolerance" : "max_iters");
  rep.emplace_back(base + ".final_residual",
                   format_sig17(tr.records.empty() ? 0.0 : tr.records.back().residual));
  for (const std::string& w : tr.warnings) rep.emplace_back(base + ".warning", w);
}

}  // namespace

int cmd_run(const ExperimentConfig& cfg, std::ostream& out) {
  BuiltProblem prob = build_problem(cfg.problem);
  std::filesystem::create_directories(cfg.output_dir);

  Report rep;
  append_problem_lines(rep, cfg, prob);

  int total = 0, diverged = 0;
  std::map<std::string, std::vector<double>> finals;
  for (const SolverSpec& spec : cfg.solvers) {
    for (std::uint64_t seed : cfg.seeds) {
      RunResult r = execute_run(prob, spec, cfg.budget_passes, seed);
      ++total;
      if (r.diverged) {
        ++diverged;
        out << "diverged " << run_label(r) << ": " << r.error << "\n";
      } else {
        std::string csv = cfg.output_dir + "/" + r.solver + "_seed" +
                          std::to_string(r.seed) + ".csv";
        write_trace_csv_file(csv, r.solver, r.seed, r.trace);
        finals[spec.name].push_back(r.trace.final_F);
        out << "wrote " << csv << " (final_F=" << format_sig17(r.trace.final_F) << ")\n";
      }
      append_run_lines(rep, r);
    }
  }
  for (const auto& [name, vals] : finals) {
    double mean = 0;
    for (double v : vals) mean += v;
    rep.emplace_back("solver." + name + ".mean_final_F",
                     format_sig17(mean / static_cast<double>(vals.size())));
    rep.emplace_back("solver." + name + ".completed_runs", std::to_string(vals.size()));
  }

  std::ofstream summary(cfg.output_dir + "/summary.txt", std::ios::binary);
  if (!summary) throw std::invalid_argument("cmd_run: cannot open summary.txt for writing");
  write_report(summary, rep);
  out << "wrote " << cfg.output_dir << "/summary.txt\n";
  return diverged == total ? 3 : 0;
}

int cmd_compare(const ExperimentConfig& cfg, std::ostream& out) {
  if (cfg.solvers.size() < 2)
    throw std::invalid_argument("cmd_compare: need at least two solvers");
  BuiltProblem prob = build_problem(cfg.problem);
  std::filesystem::create_directories(cfg.output_dir);

  // Collected traces per solver, across seeds.
  std::map<std::string, std::vector<Trace>> traces;
  std::set<double> grid;
  int total = 0, diverged = 0;
  for (const SolverSpec& spec : cfg.solvers) {
    for (std::uint64_t seed : cfg.seeds) {
      RunResult r = execute_run(prob, spec, cfg.budget_passes, seed);
      ++total;
      if (r.diverged) {
        ++diverged;
        out << "diverged " << run_label(r) << ": " << r.error << "\n";
        continue;
      }
      for (const IterationRecord& rec : r.trace.records) grid.insert(rec.passes);
      traces[spec.name].push_back(std::move(r.trace));
    }
  }
  if (diverged == total) return 3;

  // Step-wise interpolation: objective value after p passes is the F_x of
  // the last completed record, or F(x0) before the first one.
  auto value_at = [](const Trace& tr, double p) {
    double v = tr.records.front().F_y;
    for (const IterationRecord& rec : tr.records) {
      if (rec.passes > p) break;
      v = rec.F_x;
    }
    return v;
  };

  std::string path = cfg.output_dir + "/compare.csv";
  std::ofstream csv(path, std::ios::binary);
  if (!csv) throw std::invalid_argument("cmd_compare: cannot open " + path);
  csv << "passes";
  for (const SolverSpec& spec : cfg.solvers)
    if (traces.count(spec.name))
      csv << ',' << spec.name << "_mean," << spec.name << "_min," << spec.name << "_max";
  csv << '\n';
  for (double p : grid) {
    csv << format_sig17(p);
    for (const SolverSpec& spec : cfg.solvers) {
      auto it = traces.find(spec.name);
      if (it == traces.end()) continue;
      double mean = 0, lo = std::numeric_limits<double>::infinity(), hi = -lo;
      for (const Trace& tr : it->second) {
        double v = value_at(tr, p);
        mean += v;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      mean /= static_cast<double>(it->second.size());
      csv << ',' << format_sig17(mean) << ',' << format_sig17(lo) << ',' << format_sig17(hi);
    }
    csv << '\n';
  }
  if (!csv) throw std::invalid_argument("cmd_compare: write failed for " + path);
  out << "wrote " << path << " (" << grid.size() << " checkpoints)\n";
  for (const auto& [name, trs] : traces) {
    double mean = 0;
    for (const Trace& tr : trs) mean += tr.final_F;
    out << name << ": mean final F = " << format_sig17(mean / trs.size()) << " over "
        << trs.size() << " seeds\n";
  }
  return 0;
}

}  // namespace proxmom
