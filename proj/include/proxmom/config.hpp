#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "proxmom/solvers.hpp"

namespace proxmom {

// Config syntax error carrying its 1-based position.
struct ConfigError : std::invalid_argument {
  int line;
  int column;
  ConfigError(const std::string& what, int line_, int column_)
      : std::invalid_argument(what + " (line " + std::to_string(line_) + ", column " +
                              std::to_string(column_) + ")"),
        line(line_),
        column(column_) {}
};

enum class ProblemKind { nnpca, quadratic, quartic, file };

struct ProblemSpec {
  ProblemKind kind = ProblemKind::nnpca;
  int n = 200;
  int d = 50;
  double gamma = 1e-3;
  std::uint64_t seed = 1;
  std::vector<double> eigs;
  std::string path;
};

enum class SolverKind {
  pg,
  apg,
  mapg,
  apgnc,
  apgnc_plus,
  inexact_apgnc,
  prox_svrg,
  svrg_apgnc,
  svrg_apgnc_plus,
  inexact_svrg_apgnc,
};

const char* solver_kind_name(SolverKind kind);
bool solver_kind_from(const std::string& name, SolverKind& out);
bool solver_kind_is_svrg(SolverKind kind);

struct SolverSpec {
  SolverKind kind = SolverKind::pg;
  std::string name;       // section label, also the CSV solver column
  double eta = 0.0;       // absolute step size; 0 = derive
  double eta_scale = 0.0; // eta = eta_scale / L when > 0
  double rho = 0.0;       // svrg only: eta = rho / L
  int max_iters = 0;      // 0 = derive from the pass budget
  int m = 0;              // svrg inner steps; 0 = n
  int max_epochs = 0;     // 0 = derive from the pass budget
  double residual_tol = 0.0;
  double beta0 = 0.5;
  double t_shrink = 0.5;
  std::string grad_err;   // schedule expression; empty = exact
  std::string prox_eps;   // schedule expression; empty = exact
};

struct ExperimentConfig {
  ProblemSpec problem;
  std::vector<SolverSpec> solvers;
  double budget_passes = 0.0;  // required, > 0: cap on effective data passes
  std::string output_dir = ".";
  std::vector<std::uint64_t> seeds;
};

// Schedule expressions: "zero", "const:V", "invcube:S" (1/(S k^3)),
// "invcube_capped:S,CAP" (min(CAP, 1/(S k^3))); k counts from 1.
ErrorSchedule parse_schedule(const std::string& expr);

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config(const std::string& path);

}  // namespace proxmom
