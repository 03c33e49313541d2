#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "proxmom/objective.hpp"

namespace proxmom {

// Nonnegative-PCA instance. Rows of Z are unit-norm samples; the objective is
//   f(x) = -1/2 x' (Z'Z) x + gamma ||x||^2,   g = indicator{x >= 0},
// split as f_i(x) = -(n/2) (z_i'x)^2 + gamma ||x||^2. For 2*gamma below
// lambda_min(Z'Z) this is unbounded on the orthant (solvers race downhill);
// gamma >= lambda_max(Z'Z) makes it strongly convex, hence solvable to
// stationarity. Both regimes are useful and both are supported.
struct NnpcaInstance {
  Eigen::MatrixXd Z;  // n x d
  double gamma = 0.0;
  double L = 0.0;  // lambda_max(Z'Z) + 2 gamma
};

// Largest eigenvalue of a symmetric PSD operator given by its matvec.
// Stops when the Rayleigh residual ||Av - lambda v|| <= tol * lambda;
// throws NumericalError after 10000 iterations, returns 0 for the zero map.
double power_iteration(const std::function<Vector(const Vector&)>& apply, int dim, double tol,
                       std::uint64_t seed);

// lambda_max(Z'Z) + 2 gamma, via power_iteration on v -> Z'(Zv).
double nnpca_lipschitz(const Eigen::MatrixXd& Z, double gamma);

CompositeObjective make_nnpca_objective(const NnpcaInstance& inst);

// Z rows drawn iid standard normal then normalized to unit length.
std::pair<NnpcaInstance, CompositeObjective> generate_nnpca(int n, int d, double gamma,
                                                            std::uint64_t seed);

// Text format: header line "n d gamma", then n rows of d floats,
// 17 significant digits, LF endings. Row norms are validated on load.
void save_nnpca_instance(const NnpcaInstance& inst, const std::string& path);
NnpcaInstance load_nnpca_instance(const std::string& path);

// f(x) = 1/2 x' A x with A = Q' diag(eigs) Q for a seeded random orthogonal
// Q, g = indicator{x >= 0}. The unique critical point on the orthant is
// x* = 0 with F* = 0. Split: f_i(x) = (d/2) eigs_i (q_i'x)^2, q_i = row i of Q.
struct QuadraticProblem {
  CompositeObjective objective;
  Vector eigs;
  Eigen::MatrixXd A;
};
QuadraticProblem quadratic_problem(const std::vector<double>& eigs, std::uint64_t seed);

// f(x) = sum_i x_i^4, g = 0, split as f_i = d * x_i^4. The gradient is
// 12 R^2-Lipschitz on the box ||x||_inf <= R, and prox-gradient iterates
// started inside the box never leave it for eta <= 1/L.
CompositeObjective quartic_problem(int d, double start_radius = 1.0);

}  // namespace proxmom
