#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "proxmom/checks.hpp"
#include "proxmom/config.hpp"
#include "proxmom/runner.hpp"
#include "proxmom/solvers.hpp"
#include "proxmom/svrg.hpp"
#include "proxmom/trace_io.hpp"

using namespace proxmom;

namespace {

struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const char* tag)
      : path(std::filesystem::temp_directory_path() /
             ("proxmom_runner_" + std::to_string(::getpid()) + "_" + tag)) {
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
};

ProblemSpec small_nnpca() {
  ProblemSpec p;
  p.kind = ProblemKind::nnpca;
  p.n = 20;
  p.d = 8;
  p.gamma = 6.0;  // comfortably above lambda_max(Z'Z), so runs converge
  p.seed = 5;
  return p;
}

}  // namespace

TEST_CASE("build_problem fills the known optimum where one exists") {
  ProblemSpec quad;
  quad.kind = ProblemKind::quadratic;
  quad.eigs = {1.0, 4.0, 2.0};
  quad.seed = 2;
  BuiltProblem qp = build_problem(quad);
  CHECK(qp.f_star == 0.0);
  CHECK(qp.min_eig == 1.0);
  CHECK(qp.objective.smooth.lipschitz == 4.0);

  ProblemSpec quartic;
  quartic.kind = ProblemKind::quartic;
  quartic.d = 3;
  BuiltProblem qr = build_problem(quartic);
  CHECK(qr.f_star == 0.0);

  BuiltProblem nn = build_problem(small_nnpca());
  CHECK(std::isnan(nn.f_star));
  CHECK(nn.objective.dim == 8);
  CHECK(nn.objective.smooth.n_components == 20);
}

TEST_CASE("initial points are feasible and shaped per problem") {
  BuiltProblem nn = build_problem(small_nnpca());
  Rng rng(3);
  Vector x0 = initial_point(nn, rng);
  CHECK(std::abs(x0.norm() - 1.0) <= 1e-12);
  CHECK(x0.minCoeff() >= 0.0);

  ProblemSpec quartic;
  quartic.kind = ProblemKind::quartic;
  quartic.d = 4;
  BuiltProblem qr = build_problem(quartic);
  Rng rng2(3);
  CHECK((initial_point(qr, rng2) - Vector::Ones(4)).norm() == 0.0);
}

TEST_CASE("execute_run seeds the start point and solver stream from the run seed") {
  BuiltProblem prob = build_problem(small_nnpca());
  SolverSpec spec;
  spec.kind = SolverKind::apgnc;
  spec.name = "apgnc";
  RunResult run = execute_run(prob, spec, 50.0, 9);

  Rng rng(9);
  Vector x0 = initial_point(prob, rng);
  SolverConfig cfg;
  cfg.eta = 0.05 / prob.objective.smooth.lipschitz;  // default derivation
  cfg.max_iters = 50;                                // one pass per iteration
  cfg.momentum.kind = MomentumKind::ratio_k;
  cfg.rng_seed = rng.next_u64();
  Trace manual = run_apgnc(prob.objective, x0, cfg);
  CHECK(trace_csv_string("apgnc", 9, run.trace) == trace_csv_string("apgnc", 9, manual));
  CHECK(!run.diverged);
}

TEST_CASE("explicit eta beats eta_scale which beats the default") {
  BuiltProblem prob = build_problem(small_nnpca());
  const double L = prob.objective.smooth.lipschitz;
  Rng rng(4);
  Vector x0 = initial_point(prob, rng);
  std::uint64_t solver_seed = rng.next_u64();

  auto manual = [&](double eta) {
    SolverConfig cfg;
    cfg.eta = eta;
    cfg.max_iters = 30;
    cfg.momentum.kind = MomentumKind::ratio_k;
    cfg.rng_seed = solver_seed;
    return trace_csv_string("s", 4, run_apgnc(prob.objective, x0, cfg));
  };

  SolverSpec spec;
  spec.kind = SolverKind::apgnc;
  spec.name = "s";
  spec.eta = 0.001;
  spec.eta_scale = 0.2;
  CHECK(trace_csv_string("s", 4, execute_run(prob, spec, 30.0, 4).trace) == manual(0.001));
  spec.eta = 0.0;
  CHECK(trace_csv_string("s", 4, execute_run(prob, spec, 30.0, 4).trace) == manual(0.2 / L));
  spec.eta_scale = 0.0;
  CHECK(trace_csv_string("s", 4, execute_run(prob, spec, 30.0, 4).trace) == manual(0.05 / L));
}

TEST_CASE("pass budgets derive iteration and epoch counts") {
  BuiltProblem prob = build_problem(small_nnpca());
  SolverSpec pg;
  pg.kind = SolverKind::pg;
  pg.name = "pg";
  CHECK(execute_run(prob, pg, 10.9, 1).trace.records.size() == 10);

  SolverSpec mapg;
  mapg.kind = SolverKind::mapg;
  mapg.name = "mapg";
  RunResult two = execute_run(prob, mapg, 10.9, 1);
  CHECK(two.trace.records.size() == 5);
  CHECK(two.trace.records.back().passes == 10.0);

  SolverSpec svrg;
  svrg.kind = SolverKind::svrg_apgnc;
  svrg.name = "svrg";  // m defaults to n, so an epoch costs 3 passes
  RunResult ep = execute_run(prob, svrg, 10.0, 1);
  CHECK(ep.trace.records.size() == 3);
  CHECK(ep.trace.records.back().passes == 9.0);

  pg.max_iters = 4;  // explicit cap wins when tighter
  CHECK(execute_run(prob, pg, 10.9, 1).trace.records.size() == 4);
}

TEST_CASE("the variance-reduced default step size is 1/(8 m L)") {
  BuiltProblem prob = build_problem(small_nnpca());
  const double L = prob.objective.smooth.lipschitz;
  Rng rng(6);
  Vector x0 = initial_point(prob, rng);
  std::uint64_t solver_seed = rng.next_u64();

  SolverSpec spec;
  spec.kind = SolverKind::svrg_apgnc;
  spec.name = "svrg";
  spec.m = 5;
  RunResult run = execute_run(prob, spec, 30.0, 6);

  SvrgConfig cfg;
  cfg.m = 5;
  cfg.eta = 1.0 / (8.0 * 5.0 * L);
  cfg.max_epochs = 20;  // floor(30 / 1.5)
  cfg.momentum.kind = MomentumKind::ratio_k;
  cfg.rng_seed = solver_seed;
  Trace manual = run_svrg_apgnc(prob.objective, x0, cfg);
  CHECK(trace_csv_string("svrg", 6, run.trace) == trace_csv_string("svrg", 6, manual));
}

TEST_CASE("divergence is captured in the result instead of thrown") {
  ProblemSpec p;
  p.kind = ProblemKind::nnpca;
  p.n = 20;
  p.d = 8;
  p.gamma = 0.0;  // unbounded below on the orthant
  p.seed = 5;
  BuiltProblem prob = build_problem(p);
  SolverSpec spec;
  spec.kind = SolverKind::apgnc;
  spec.name = "apgnc";
  RunResult run = execute_run(prob, spec, 20000.0, 1);
  CHECK(run.diverged);
  CHECK(!run.error.empty());
}

TEST_CASE("the trace CSV header is frozen") {
  CHECK(std::string(kTraceCsvHeader) ==
        "solver,seed,k,passes,F_x,F_y,step_norm,residual,beta,chose_extrapolation,"
        "eps_realized,grad_err_realized");
}

TEST_CASE("trace CSVs have one row per record and escape nothing") {
  BuiltProblem prob = build_problem(small_nnpca());
  SolverSpec spec;
  spec.kind = SolverKind::pg;
  spec.name = "pg";
  RunResult run = execute_run(prob, spec, 5.0, 2);
  std::string csv = trace_csv_string("pg", 2, run.trace);
  std::istringstream lines(csv);
  std::string line;
  int rows = 0;
  REQUIRE(std::getline(lines, line));
  CHECK(line == kTraceCsvHeader);
  while (std::getline(lines, line)) {
    ++rows;
    CHECK(line.rfind("pg,2,", 0) == 0);
    int commas = 0;
    for (char ch : line) commas += (ch == ',');
    CHECK(commas == 11);
  }
  CHECK(rows == 5);
}

TEST_CASE("cmd_run writes one CSV per run plus a summary") {
  TempDir dir("cmdrun");
  ExperimentConfig cfg;
  cfg.problem = small_nnpca();
  SolverSpec s;
  s.kind = SolverKind::apgnc;
  s.name = "apgnc";
  cfg.solvers = {s};
  cfg.seeds = {1, 2};
  cfg.budget_passes = 25.0;
  cfg.output_dir = dir.path.string();
  std::ostringstream out;
  CHECK(cmd_run(cfg, out) == 0);
  CHECK(std::filesystem::exists(dir.path / "apgnc_seed1.csv"));
  CHECK(std::filesystem::exists(dir.path / "apgnc_seed2.csv"));
  CHECK(std::filesystem::exists(dir.path / "summary.txt"));

  std::ifstream summary(dir.path / "summary.txt");
  std::string text((std::istreambuf_iterator<char>(summary)),
                   std::istreambuf_iterator<char>());
  CHECK(text.find("problem.kind=nnpca\n") != std::string::npos);
  CHECK(text.find("run.apgnc.seed1.final_F=") != std::string::npos);
  CHECK(text.find("run.apgnc.seed2.terminated_by=max_iters\n") != std::string::npos);
  CHECK(text.find("solver.apgnc.completed_runs=2\n") != std::string::npos);
}

TEST_CASE("cmd_run reports total divergence with a distinct exit code") {
  TempDir dir("diverged");
  ExperimentConfig cfg;
  cfg.problem = small_nnpca();
  cfg.problem.gamma = 0.0;
  SolverSpec s;
  s.kind = SolverKind::apgnc;
  s.name = "apgnc";
  cfg.solvers = {s};
  cfg.seeds = {1};
  cfg.budget_passes = 20000.0;
  cfg.output_dir = dir.path.string();
  std::ostringstream out;
  CHECK(cmd_run(cfg, out) == 3);
  std::ifstream summary(dir.path / "summary.txt");
  std::string text((std::istreambuf_iterator<char>(summary)),
                   std::istreambuf_iterator<char>());
  CHECK(text.find("run.apgnc.seed1.diverged=1\n") != std::string::npos);
}

TEST_CASE("cmd_compare aligns solvers on a shared pass grid") {
  TempDir dir("compare");
  ExperimentConfig cfg;
  cfg.problem = small_nnpca();
  SolverSpec a, b;
  a.kind = SolverKind::pg;
  a.name = "pg";
  b.kind = SolverKind::mapg;
  b.name = "mapg";
  cfg.solvers = {a, b};
  cfg.seeds = {1, 2};
  cfg.budget_passes = 12.0;
  cfg.output_dir = dir.path.string();
  std::ostringstream out;
  CHECK(cmd_compare(cfg, out) == 0);

  std::ifstream csv(dir.path / "compare.csv");
  std::string header;
  REQUIRE(std::getline(csv, header));
  CHECK(header == "passes,pg_mean,pg_min,pg_max,mapg_mean,mapg_min,mapg_max");
  int rows = 0;
  std::string line;
  while (std::getline(csv, line)) ++rows;
  // pg stops at integer passes 1..12, mapg at even passes; the union is 12.
  CHECK(rows == 12);

  ExperimentConfig solo = cfg;
  solo.solvers = {a};
  std::ostringstream sink;
  CHECK_THROWS_AS(cmd_compare(solo, sink), std::invalid_argument);
}

TEST_CASE("the library's fast self-checks all pass") {
  for (const CheckResult& r : run_fast_checks()) {
    INFO(r.name, ": ", r.detail);
    CHECK(r.passed);
  }
}
