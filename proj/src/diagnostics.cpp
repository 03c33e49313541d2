#include "proxmom/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "proxmom/prox.hpp"

namespace proxmom {

double residual_bound(double L, double eta, const Vector& y, const Vector& x) {
  if (!(L >= 0)) throw std::invalid_argument("residual_bound: L must be >= 0");
  if (!(eta > 0)) throw std::invalid_argument("residual_bound: eta must be positive");
  if (y.size() != x.size()) throw std::invalid_argument("residual_bound: dimension mismatch");
  return (L + 1.0 / eta) * (y - x).norm();
}

double kkt_residual_nonneg(const Vector& grad, const Vector& x) {
  if (grad.size() != x.size())
    throw std::invalid_argument("kkt_residual_nonneg: dimension mismatch");
  double r = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x[i] < 0) throw std::invalid_argument("kkt_residual_nonneg: x must be nonnegative");
    double ri = x[i] > 0 ? std::abs(grad[i]) : std::max(0.0, -grad[i]);
    r = std::max(r, ri);
  }
  return r;
}

DescentLemmaReport descent_lemma_check(const CompositeObjective& obj, const Vector& y,
                                       double eta) {
  Vector x = prox_gradient_step(obj, y, eta);
  double lhs = eval_F(obj, x);
  double rhs = eval_F(obj, y) -
               (1.0 / (2.0 * eta) - obj.smooth.lipschitz / 2.0) * (x - y).squaredNorm();
  return {lhs, rhs, lhs <= rhs + 1e-10};
}

namespace {

struct LeastSquares {
  double slope = 0.0;
  double r_squared = 0.0;
};

LeastSquares fit_ls(const std::vector<double>& xs, const std::vector<double>& ys) {
  const std::size_t n = xs.size();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double dx = xs[i] - mx, dy = ys[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0) throw std::invalid_argument("rate fit: degenerate abscissa");
  double slope = sxy / sxx;
  double ss_res = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double pred = my + slope * (xs[i] - mx);
    double d = ys[i] - pred;
    ss_res += d * d;
  }
  double r2 = syy == 0 ? 1.0 : 1.0 - ss_res / syy;
  return {slope, r2};
}

int tail_begin(std::size_t n, double tail_fraction) {
  if (!(tail_fraction > 0 && tail_fraction <= 1))
    throw std::invalid_argument("rate fit: tail_fraction must lie in (0,1]");
  std::size_t count = static_cast<std::size_t>(std::ceil(n * tail_fraction));
  if (count > n) count = n;
  if (count < 5) throw std::invalid_argument("rate fit: need at least 5 tail points");
  return static_cast<int>(n - count);
}

}  // namespace

RateFit fit_linear_rate(const std::vector<double>& r, double tail_fraction) {
  int start = tail_begin(r.size(), tail_fraction);
  std::vector<double> xs, ys;
  for (std::size_t i = start; i < r.size(); ++i) {
    if (!(r[i] > 0)) throw std::invalid_argument("fit_linear_rate: tail values must be positive");
    xs.push_back(static_cast<double>(i));
    ys.push_back(std::log(r[i]));
  }
  LeastSquares ls = fit_ls(xs, ys);
  return {RateModel::linear, std::exp(ls.slope), ls.r_squared, start};
}

RateFit fit_power_rate(const std::vector<double>& r, double tail_fraction) {
  int start = tail_begin(r.size(), tail_fraction);
  std::vector<double> xs, ys;
  for (std::size_t i = start; i < r.size(); ++i) {
    if (!(r[i] > 0)) throw std::invalid_argument("fit_power_rate: tail values must be positive");
    xs.push_back(std::log(static_cast<double>(i + 1)));  // 1-based k
    ys.push_back(std::log(r[i]));
  }
  LeastSquares ls = fit_ls(xs, ys);
  return {RateModel::power, -ls.slope, ls.r_squared, start};
}

Theorem2Constants theorem2_constants(double L, double eta, const KLParameters& kl, double r_k0) {
  if (!(L > 0) || !(eta > 0)) throw std::invalid_argument("theorem2_constants: L, eta > 0");
  if (!(kl.theta > 0 && kl.theta <= 1))
    throw std::invalid_argument("theorem2_constants: theta must lie in (0,1]");
  if (!(kl.c > 0)) throw std::invalid_argument("theorem2_constants: c must be positive");
  if (!(r_k0 >= 0)) throw std::invalid_argument("theorem2_constants: r_k0 must be >= 0");
  double denom = 1.0 / (2.0 * eta) - L / 2.0;
  if (!(denom > 0)) throw std::domain_error("theorem2_constants: requires eta < 1/L");
  double s = 1.0 / eta + L;
  double d1 = s * s / denom;
  double d2 = 1.0 / (2.0 * kl.c * d1);
  if (kl.theta < 0.5) {
    double expo = (2.0 * kl.theta - 1.0) / (2.0 * kl.theta - 2.0);
    double branch = (kl.c / (1.0 - 2.0 * kl.theta)) * (std::pow(2.0, expo) - 1.0) *
                    std::pow(r_k0, 2.0 * kl.theta - 1.0);
    d2 = std::min(d2, branch);
  }
  return {d1, d2};
}

double theorem3_constant(double L, double eta, double C) {
  if (!(L > 0) || !(eta > 0)) throw std::invalid_argument("theorem3_constant: L, eta > 0");
  if (!(C >= 0)) throw std::invalid_argument("theorem3_constant: C must be >= 0");
  double denom = 1.0 / (2.0 * eta) - L / 2.0 - C;
  if (!(denom > 0)) throw std::domain_error("theorem3_constant: requires eta < 1/(2C + L)");
  double s = 1.0 / eta + L + C;
  return s * s / denom;
}

SvrgTheoreticalD svrg_theoretical_d(double L, double eta, int m, double c,
                                    std::optional<double> inexact_alpha) {
  if (!(L > 0) || !(eta > 0)) throw std::invalid_argument("svrg_theoretical_d: L, eta > 0");
  if (m < 1) throw std::invalid_argument("svrg_theoretical_d: m must be >= 1");
  if (!(c > 0)) throw std::invalid_argument("svrg_theoretical_d: c must be positive");
  double s = L + 1.0 / eta;
  double d;
  if (inexact_alpha) {
    double alpha = *inexact_alpha;
    if (!(alpha >= 0)) throw std::invalid_argument("svrg_theoretical_d: alpha must be >= 0");
    double denom = 1.0 / (2.0 * eta) - L - alpha;
    if (!(denom > 0))
      throw std::domain_error("svrg_theoretical_d: requires eta < 1/(2(L + alpha))");
    d = (c * c * s * s + 2.0 * eta * L * L * m + 1.0 / (2.0 * eta)) / denom;
  } else {
    double denom = 1.0 / (2.0 * eta) - L;
    if (!(denom > 0)) throw std::domain_error("svrg_theoretical_d: requires eta < 1/(2L)");
    d = (c * c * s * s + eta * L * L * m) / denom;
  }
  return {d, d / (d + 1.0)};
}

Vector reference_inner_probe(const CompositeObjective& obj, const Vector& x, double eta) {
  return prox_gradient_step(obj, x, eta);
}

std::vector<double> svrg_epoch_alpha(const CompositeObjective& obj, const Trace& tr,
                                     double eta) {
  if (tr.inner_points.empty() || tr.inner_points.size() != tr.epochs.size())
    throw std::invalid_argument("svrg_epoch_alpha: trace lacks recorded inner points");
  std::vector<double> alphas;
  for (std::size_t k = 0; k < tr.epochs.size(); ++k) {
    double denom = 0.0;
    for (const Vector& xt : tr.inner_points[k])
      denom += (reference_inner_probe(obj, xt, eta) - xt).squaredNorm();
    double num = 3.0 * tr.epochs[k].eps_scheduled_sum;
    alphas.push_back(denom > 0 ? num / denom
                               : (num > 0 ? std::numeric_limits<double>::infinity() : 0.0));
  }
  return alphas;
}

double estimate_f_star(const CompositeObjective& obj, const Vector& x0, double eta, int budget) {
  if (budget < 1) throw std::invalid_argument("estimate_f_star: budget must be >= 1");
  SolverConfig cfg;
  cfg.eta = eta;
  cfg.momentum.kind = MomentumKind::nesterov_t;
  cfg.max_iters = 10 * budget;
  cfg.residual_tol = 1e-12;
  return run_mapg(obj, x0, cfg).final_F;
}

void write_report(std::ostream& os, const Report& kv) {
  for (const auto& [name, value] : kv) os << name << '=' << value << '\n';
}

}  // namespace proxmom
