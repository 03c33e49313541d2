#include "proxmom/objective.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace proxmom {

namespace {

void require_dim(const CompositeObjective& obj, const Vector& x, const char* where) {
  if (x.size() != obj.dim)
    throw std::invalid_argument(std::string(where) + ": dimension mismatch");
}

}  // namespace

double eval_F(const CompositeObjective& obj, const Vector& x) {
  require_dim(obj, x, "eval_F");
  double g = obj.nonsmooth.value(x);
  if (std::isinf(g) && g > 0) return std::numeric_limits<double>::infinity();
  return obj.smooth.value(x) + g;
}

MeanGradientReport mean_gradient_check(const CompositeObjective& obj, const Vector& x) {
  require_dim(obj, x, "mean_gradient_check");
  int n = obj.smooth.n_components;
  if (n < 1) throw std::invalid_argument("mean_gradient_check: n_components < 1");
  Vector mean = Vector::Zero(obj.dim);
  for (int i = 0; i < n; ++i) mean += obj.smooth.component_gradient(i, x);
  mean /= static_cast<double>(n);
  return {(mean - obj.smooth.gradient(x)).cwiseAbs().maxCoeff()};
}

Vector finite_diff_gradient(const CompositeObjective& obj, const Vector& x, double h) {
  require_dim(obj, x, "finite_diff_gradient");
  if (!(h > 0)) throw std::invalid_argument("finite_diff_gradient: h must be positive");
  Vector g(obj.dim);
  Vector e = x;
  for (int i = 0; i < obj.dim; ++i) {
    double xi = x[i];
    e[i] = xi + h;
    double fp = obj.smooth.value(e);
    e[i] = xi - h;
    double fm = obj.smooth.value(e);
    e[i] = xi;
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

}  // namespace proxmom
