#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "proxmom/objective.hpp"
#include "proxmom/solvers.hpp"

namespace proxmom {

// Kurdyka-Lojasiewicz description of the objective near its critical set:
// theta in (0,1], c > 0. Quadratic-like objectives have theta = 1/2 with
// c = 1/sqrt(2 lambda_min).
struct KLParameters {
  double theta = 0.5;
  double c = 1.0;
};

enum class RateModel { linear, power };

struct RateFit {
  RateModel model = RateModel::linear;
  double parameter = 0.0;  // linear: per-step ratio exp(slope); power: decay exponent
  double r_squared = 0.0;
  int tail_start = 0;  // first index of r used by the fit
};

// (L + 1/eta) * ||y - x||: certified bound on dist(0, dF(x)) for the
// prox-gradient step x taken at y.
double residual_bound(double L, double eta, const Vector& y, const Vector& x);

// Stationarity residual for g = indicator{x >= 0}: max over coordinates of
// |grad_i| where x_i > 0 and max(0, -grad_i) where x_i = 0. Infeasible x is
// an input error.
double kkt_residual_nonneg(const Vector& grad, const Vector& x);

struct DescentLemmaReport {
  double lhs = 0.0;  // F(x+) at the prox-gradient point
  double rhs = 0.0;  // F(y) - (1/(2 eta) - L/2) ||x+ - y||^2
  bool holds = false;
};

// Sufficient-decrease inequality at y with slack 1e-10.
DescentLemmaReport descent_lemma_check(const CompositeObjective& obj, const Vector& y,
                                       double eta);

// Least squares of log r against k over the last tail_fraction of points
// (at least 5); parameter = exp(slope). Tail values must be positive.
RateFit fit_linear_rate(const std::vector<double>& r, double tail_fraction);

// Least squares of log r against log k (k 1-based); parameter = -slope.
RateFit fit_power_rate(const std::vector<double>& r, double tail_fraction);

struct Theorem2Constants {
  double d1 = 0.0;
  double d2 = 0.0;
};

// d1 = (1/eta + L)^2 / (1/(2 eta) - L/2); requires eta < 1/L.
// d2 = min of 1/(2 c d1) and, for theta < 1/2, the finite-termination branch
// (c/(1-2 theta)) (2^((2 theta-1)/(2 theta-2)) - 1) r_k0^(2 theta-1).
Theorem2Constants theorem2_constants(double L, double eta, const KLParameters& kl, double r_k0);

// d1 = (1/eta + L + C)^2 / (1/(2 eta) - L/2 - C); the denominator must be
// positive (eta < 1/(2C + L)). C = 0 recovers the exact-case constant.
double theorem3_constant(double L, double eta, double C);

struct SvrgTheoreticalD {
  double d = 0.0;
  double contraction = 0.0;  // d / (d + 1)
};

// Exact: d = (c^2 (L + 1/eta)^2 + eta L^2 m) / (1/(2 eta) - L).
// Inexact (alpha given): d = (c^2 (L + 1/eta)^2 + 2 eta L^2 m + 1/(2 eta))
//                            / (1/(2 eta) - L - alpha).
SvrgTheoreticalD svrg_theoretical_d(double L, double eta, int m, double c,
                                    std::optional<double> inexact_alpha = std::nullopt);

// Exact full-gradient prox step from x; reference point for inner-loop
// error diagnostics.
Vector reference_inner_probe(const CompositeObjective& obj, const Vector& x, double eta);

// Per-epoch error-budget ratio alpha_k = 3 sum_t eps_k^t divided by
// sum_t ||probe(x_k^t) - x_k^t||^2; needs a trace recorded with
// record_inner_points.
std::vector<double> svrg_epoch_alpha(const CompositeObjective& obj, const Trace& tr, double eta);

// High-accuracy F* reference: monotone two-prox solver with a tight residual
// tolerance and a 10x iteration budget.
double estimate_f_star(const CompositeObjective& obj, const Vector& x0, double eta, int budget);

// Flat name=value serialization used by summaries and check reports.
using Report = std::vector<std::pair<std::string, std::string>>;
void write_report(std::ostream& os, const Report& kv);

}  // namespace proxmom
