#pragma once

#include <Eigen/Core>
#include <functional>

namespace proxmom {

using Vector = Eigen::VectorXd;

// Smooth part f of a composite objective, presented as a finite sum
// f = (1/n) sum_i f_i with an L-Lipschitz gradient. component_gradient(i, x)
// is grad f_i(x), 0-based i; a plain smooth f uses n_components = 1.
struct SmoothOracle {
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> gradient;
  std::function<Vector(int, const Vector&)> component_gradient;
  int n_components = 1;
  double lipschitz = 0.0;
};

// Nonsmooth part g: proper, closed, possibly nonconvex. value may return
// +inf (indicator outside its set); prox(y, eta) solves
// argmin_u g(u) + ||u - y||^2 / (2 eta).
struct NonsmoothOracle {
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&, double)> prox;
  bool is_convex = true;
};

struct CompositeObjective {
  SmoothOracle smooth;
  NonsmoothOracle nonsmooth;
  int dim = 0;
};

// F(x) = f(x) + g(x); +inf exactly when g(x) = +inf.
double eval_F(const CompositeObjective& obj, const Vector& x);

struct MeanGradientReport {
  double max_abs_deviation = 0.0;
};

// Max-norm deviation between (1/n) sum_i grad f_i(x) and gradient(x).
MeanGradientReport mean_gradient_check(const CompositeObjective& obj, const Vector& x);

// Central differences on f, for checking gradient oracles.
Vector finite_diff_gradient(const CompositeObjective& obj, const Vector& x, double h);

}  // namespace proxmom
