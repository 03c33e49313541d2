#include "proxmom/config.hpp"

#include <algorithm>
#include <climits>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <utility>

namespace proxmom {

const char* solver_kind_name(SolverKind kind) {
  switch (kind) {
    case SolverKind::pg: return "pg";
    case SolverKind::apg: return "apg";
    case SolverKind::mapg: return "mapg";
    case SolverKind::apgnc: return "apgnc";
    case SolverKind::apgnc_plus: return "apgnc_plus";
    case SolverKind::inexact_apgnc: return "inexact_apgnc";
    case SolverKind::prox_svrg: return "prox_svrg";
    case SolverKind::svrg_apgnc: return "svrg_apgnc";
    case SolverKind::svrg_apgnc_plus: return "svrg_apgnc_plus";
    case SolverKind::inexact_svrg_apgnc: return "inexact_svrg_apgnc";
  }
  return "?";
}

bool solver_kind_is_svrg(SolverKind kind) {
  switch (kind) {
    case SolverKind::prox_svrg:
    case SolverKind::svrg_apgnc:
    case SolverKind::svrg_apgnc_plus:
    case SolverKind::inexact_svrg_apgnc:
      return true;
    default:
      return false;
  }
}

bool solver_kind_from(const std::string& s, SolverKind& out) {
  static const std::pair<const char*, SolverKind> table[] = {
      {"pg", SolverKind::pg},
      {"apg", SolverKind::apg},
      {"mapg", SolverKind::mapg},
      {"apgnc", SolverKind::apgnc},
      {"apgnc_plus", SolverKind::apgnc_plus},
      {"inexact_apgnc", SolverKind::inexact_apgnc},
      {"prox_svrg", SolverKind::prox_svrg},
      {"svrg_apgnc", SolverKind::svrg_apgnc},
      {"svrg_apgnc_plus", SolverKind::svrg_apgnc_plus},
      {"inexact_svrg_apgnc", SolverKind::inexact_svrg_apgnc},
  };
  for (const auto& [name, kind] : table)
    if (s == name) {
      out = kind;
      return true;
    }
  return false;
}

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

bool parse_double_full(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* begin = s.c_str();
  char* end = nullptr;
  out = std::strtod(begin, &end);
  return end == begin + s.size();
}

bool parse_u64_full(const std::string& s, std::uint64_t& out) {
  if (s.empty() || s[0] == '-' || s[0] == '+') return false;
  const char* begin = s.c_str();
  char* end = nullptr;
  out = std::strtoull(begin, &end, 10);
  return end == begin + s.size();
}

bool parse_int_full(const std::string& s, int& out) {
  if (s.empty()) return false;
  const char* begin = s.c_str();
  char* end = nullptr;
  long v = std::strtol(begin, &end, 10);
  if (end != begin + s.size()) return false;
  if (v < INT_MIN || v > INT_MAX) return false;
  out = static_cast<int>(v);
  return true;
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (true) {
    std::size_t comma = s.find(',', pos);
    parts.push_back(trim(s.substr(pos, comma == std::string::npos ? std::string::npos
                                                                  : comma - pos)));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return parts;
}

}  // namespace

ErrorSchedule parse_schedule(const std::string& expr) {
  if (expr == "zero") return [](int) { return 0.0; };
  std::size_t colon = expr.find(':');
  std::string head = colon == std::string::npos ? expr : expr.substr(0, colon);
  std::string args = colon == std::string::npos ? "" : expr.substr(colon + 1);
  if (head == "const") {
    double v;
    if (!parse_double_full(args, v) || !(v >= 0))
      throw std::invalid_argument("parse_schedule: const needs a value >= 0, got '" + expr + "'");
    return [v](int) { return v; };
  }
  if (head == "invcube") {
    double s;
    if (!parse_double_full(args, s) || !(s > 0))
      throw std::invalid_argument("parse_schedule: invcube needs a scale > 0, got '" + expr +
                                  "'");
    return [s](int k) {
      double kk = static_cast<double>(k);
      return 1.0 / (s * kk * kk * kk);
    };
  }
  if (head == "invcube_capped") {
    std::vector<std::string> parts = split_commas(args);
    double s, cap;
    if (parts.size() != 2 || !parse_double_full(parts[0], s) || !(s > 0) ||
        !parse_double_full(parts[1], cap) || !(cap >= 0))
      throw std::invalid_argument("parse_schedule: invcube_capped needs 'scale,cap', got '" +
                                  expr + "'");
    return [s, cap](int k) {
      double kk = static_cast<double>(k);
      return std::min(cap, 1.0 / (s * kk * kk * kk));
    };
  }
  throw std::invalid_argument("parse_schedule: unknown schedule '" + expr + "'");
}

namespace {

struct ParserState {
  ExperimentConfig cfg;
  std::vector<char> kind_known;  // parallel to cfg.solvers
  bool have_problem = false;
};

void apply_problem_key(ProblemSpec& p, const std::string& key, const std::string& value,
                       int line, int kcol, int vcol) {
  if (key == "kind") {
    if (value == "nnpca")
      p.kind = ProblemKind::nnpca;
    else if (value == "quadratic")
      p.kind = ProblemKind::quadratic;
    else if (value == "quartic")
      p.kind = ProblemKind::quartic;
    else if (value == "file")
      p.kind = ProblemKind::file;
    else
      throw ConfigError("unknown problem kind '" + value + "'", line, vcol);
  } else if (key == "n") {
    if (!parse_int_full(value, p.n) || p.n < 1)
      throw ConfigError("n must be a positive integer", line, vcol);
  } else if (key == "d") {
    if (!parse_int_full(value, p.d) || p.d < 1)
      throw ConfigError("d must be a positive integer", line, vcol);
  } else if (key == "gamma") {
    if (!parse_double_full(value, p.gamma) || !(p.gamma >= 0))
      throw ConfigError("gamma must be a number >= 0", line, vcol);
  } else if (key == "seed") {
    if (!parse_u64_full(value, p.seed))
      throw ConfigError("seed must be an unsigned integer", line, vcol);
  } else if (key == "eigs") {
    p.eigs.clear();
    for (const std::string& part : split_commas(value)) {
      double e;
      if (!parse_double_full(part, e) || !(e > 0))
        throw ConfigError("eigs must be a comma list of positive numbers", line, vcol);
      p.eigs.push_back(e);
    }
  } else if (key == "path") {
    p.path = value;
  } else {
    throw ConfigError("unknown [problem] key '" + key + "'", line, kcol);
  }
}

void apply_output_key(ExperimentConfig& cfg, const std::string& key, const std::string& value,
                      int line, int kcol, int vcol) {
  if (key == "dir") {
    cfg.output_dir = value;
  } else if (key == "seeds") {
    cfg.seeds.clear();
    for (const std::string& part : split_commas(value)) {
      std::uint64_t s;
      if (!parse_u64_full(part, s))
        throw ConfigError("seeds must be a comma list of unsigned integers", line, vcol);
      cfg.seeds.push_back(s);
    }
    if (cfg.seeds.empty()) throw ConfigError("seeds list is empty", line, vcol);
  } else if (key == "budget") {
    if (!parse_double_full(value, cfg.budget_passes) || !(cfg.budget_passes > 0))
      throw ConfigError("budget must be a positive number of passes", line, vcol);
  } else {
    throw ConfigError("unknown [output] key '" + key + "'", line, kcol);
  }
}

void apply_solver_key(SolverSpec& s, char& kind_known, const std::string& key,
                      const std::string& value, int line, int kcol, int vcol) {
  if (key == "kind") {
    SolverKind k;
    if (!solver_kind_from(value, k))
      throw ConfigError("unknown solver kind '" + value + "'", line, vcol);
    s.kind = k;
    kind_known = 1;
  } else if (key == "eta") {
    if (!parse_double_full(value, s.eta) || !(s.eta > 0))
      throw ConfigError("eta must be positive", line, vcol);
  } else if (key == "eta_scale") {
    if (!parse_double_full(value, s.eta_scale) || !(s.eta_scale > 0))
      throw ConfigError("eta_scale must be positive", line, vcol);
  } else if (key == "rho") {
    if (!parse_double_full(value, s.rho) || !(s.rho > 0))
      throw ConfigError("rho must be positive", line, vcol);
  } else if (key == "max_iters") {
    if (!parse_int_full(value, s.max_iters) || s.max_iters < 1)
      throw ConfigError("max_iters must be a positive integer", line, vcol);
  } else if (key == "m") {
    if (!parse_int_full(value, s.m) || s.m < 1)
      throw ConfigError("m must be a positive integer", line, vcol);
  } else if (key == "max_epochs") {
    if (!parse_int_full(value, s.max_epochs) || s.max_epochs < 1)
      throw ConfigError("max_epochs must be a positive integer", line, vcol);
  } else if (key == "residual_tol") {
    if (!parse_double_full(value, s.residual_tol) || !(s.residual_tol >= 0))
      throw ConfigError("residual_tol must be >= 0", line, vcol);
  } else if (key == "beta0") {
    if (!parse_double_full(value, s.beta0) || !(s.beta0 > 0 && s.beta0 <= 1))
      throw ConfigError("beta0 must lie in (0,1]", line, vcol);
  } else if (key == "t_shrink") {
    if (!parse_double_full(value, s.t_shrink) || !(s.t_shrink > 0 && s.t_shrink < 1))
      throw ConfigError("t_shrink must lie in (0,1)", line, vcol);
  } else if (key == "grad_err") {
    try {
      parse_schedule(value);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what(), line, vcol);
    }
    s.grad_err = value;
  } else if (key == "prox_eps") {
    try {
      parse_schedule(value);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what(), line, vcol);
    }
    s.prox_eps = value;
  } else {
    throw ConfigError("unknown [solver] key '" + key + "'", line, kcol);
  }
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  ParserState st;
  enum class Section { none, problem, solver, output };
  Section sec = Section::none;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    std::size_t first = raw.find_first_not_of(" \t");
    if (first == std::string::npos || raw[first] == '#') continue;

    if (raw[first] == '[') {
      std::size_t close = raw.find(']', first);
      if (close == std::string::npos)
        throw ConfigError("unterminated section header", lineno, static_cast<int>(first) + 1);
      std::string name = raw.substr(first + 1, close - first - 1);
      std::size_t rest = raw.find_first_not_of(" \t", close + 1);
      if (rest != std::string::npos && raw[rest] != '#')
        throw ConfigError("unexpected text after section header", lineno,
                          static_cast<int>(rest) + 1);
      if (name == "problem") {
        sec = Section::problem;
        st.have_problem = true;
      } else if (name == "output") {
        sec = Section::output;
      } else if (name.rfind("solver.", 0) == 0) {
        std::string label = trim(name.substr(7));
        if (label.empty())
          throw ConfigError("empty solver name", lineno, static_cast<int>(first) + 1);
        for (const SolverSpec& s : st.cfg.solvers)
          if (s.name == label)
            throw ConfigError("duplicate solver section '" + label + "'", lineno,
                              static_cast<int>(first) + 1);
        SolverSpec spec;
        spec.name = label;
        SolverKind k;
        bool known = solver_kind_from(label, k);
        if (known) spec.kind = k;
        st.cfg.solvers.push_back(std::move(spec));
        st.kind_known.push_back(known ? 1 : 0);
        sec = Section::solver;
      } else {
        throw ConfigError("unknown section [" + name + "]", lineno,
                          static_cast<int>(first) + 1);
      }
      continue;
    }

    std::size_t eq = raw.find('=', first);
    if (eq == std::string::npos)
      throw ConfigError("expected key=value", lineno, static_cast<int>(first) + 1);
    std::string key = trim(raw.substr(first, eq - first));
    if (key.empty()) throw ConfigError("empty key", lineno, static_cast<int>(first) + 1);
    std::string value = trim(raw.substr(eq + 1));
    std::size_t vpos = raw.find_first_not_of(" \t", eq + 1);
    int vcol = static_cast<int>(vpos == std::string::npos ? eq + 2 : vpos + 1);
    int kcol = static_cast<int>(first) + 1;
    if (value.empty()) throw ConfigError("empty value for key '" + key + "'", lineno, vcol);

    switch (sec) {
      case Section::none:
        throw ConfigError("key outside any section", lineno, kcol);
      case Section::problem:
        apply_problem_key(st.cfg.problem, key, value, lineno, kcol, vcol);
        break;
      case Section::output:
        apply_output_key(st.cfg, key, value, lineno, kcol, vcol);
        break;
      case Section::solver:
        apply_solver_key(st.cfg.solvers.back(), st.kind_known.back(), key, value, lineno, kcol,
                         vcol);
        break;
    }
  }

  if (!st.have_problem) throw std::invalid_argument("config: missing [problem] section");
  if (st.cfg.solvers.empty()) throw std::invalid_argument("config: no [solver.*] sections");
  for (std::size_t i = 0; i < st.cfg.solvers.size(); ++i)
    if (!st.kind_known[i])
      throw std::invalid_argument("config: solver '" + st.cfg.solvers[i].name +
                                  "' needs a kind= key (its name is not a solver kind)");
  if (!(st.cfg.budget_passes > 0))
    throw std::invalid_argument("config: [output] budget must be set to a positive value");
  if (st.cfg.seeds.empty()) st.cfg.seeds = {1};
  if (st.cfg.problem.kind == ProblemKind::quadratic && st.cfg.problem.eigs.empty())
    throw std::invalid_argument("config: quadratic problem needs eigs");
  if (st.cfg.problem.kind == ProblemKind::file && st.cfg.problem.path.empty())
    throw std::invalid_argument("config: file problem needs path");
  for (const SolverSpec& s : st.cfg.solvers) {
    bool svrg = solver_kind_is_svrg(s.kind);
    bool inexact =
        s.kind == SolverKind::inexact_apgnc || s.kind == SolverKind::inexact_svrg_apgnc;
    if (!inexact && (!s.grad_err.empty() || !s.prox_eps.empty()))
      throw std::invalid_argument("config: solver '" + s.name +
                                  "' is exact; error schedules are only for inexact solvers");
    if (!svrg && (s.rho > 0 || s.m > 0 || s.max_epochs > 0))
      throw std::invalid_argument("config: solver '" + s.name +
                                  "' is not variance-reduced; rho/m/max_epochs do not apply");
    if (s.kind == SolverKind::inexact_svrg_apgnc && !s.grad_err.empty())
      throw std::invalid_argument("config: solver '" + s.name +
                                  "' takes prox_eps only (no gradient error injection)");
  }
  return st.cfg;
}

ExperimentConfig parse_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

}  // namespace proxmom
