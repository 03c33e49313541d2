#pragma once

#include <cstdint>
#include <limits>
#include <ostream>
#include <string>

#include "proxmom/config.hpp"
#include "proxmom/objective.hpp"
#include "proxmom/rng.hpp"
#include "proxmom/solvers.hpp"

namespace proxmom {

struct BuiltProblem {
  CompositeObjective objective;
  ProblemKind kind = ProblemKind::nnpca;
  double min_eig = 0.0;  // quadratic spectra only
  double f_star = std::numeric_limits<double>::quiet_NaN();  // exact when known
};

BuiltProblem build_problem(const ProblemSpec& spec);

// Run starting point: all-ones for the quartic box, otherwise a unit-norm
// nonnegative direction drawn from rng.
Vector initial_point(const BuiltProblem& prob, Rng& rng);

struct RunResult {
  std::string solver;
  std::uint64_t seed = 0;
  bool diverged = false;
  std::string error;
  Trace trace;
};

// One (solver, seed) run: seeds the starting point and the solver stream
// from `seed`, derives iteration budgets from the pass budget, dispatches on
// the solver kind. Divergence is captured in the result, not thrown.
RunResult execute_run(const BuiltProblem& prob, const SolverSpec& spec, double budget_passes,
                      std::uint64_t seed);

int cmd_run(const ExperimentConfig& cfg, std::ostream& out);
int cmd_compare(const ExperimentConfig& cfg, std::ostream& out);
int cmd_check(bool full, std::ostream& out);

}  // namespace proxmom
