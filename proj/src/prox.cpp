#include "proxmom/prox.hpp"

#include <cmath>
#include <stdexcept>

#include "proxmom/errors.hpp"
#include "proxmom/rng.hpp"

namespace proxmom {

Vector prox_nonneg(const Vector& y, double eta) {
  if (!(eta > 0)) throw std::invalid_argument("prox_nonneg: eta must be positive");
  return y.cwiseMax(0.0);
}

Vector prox_l1(const Vector& y, double eta, double lambda) {
  if (!(eta > 0)) throw std::invalid_argument("prox_l1: eta must be positive");
  if (!(lambda >= 0)) throw std::invalid_argument("prox_l1: lambda must be nonnegative");
  double t = eta * lambda;
  Vector u(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    double v = std::abs(y[i]) - t;
    u[i] = v > 0 ? (y[i] > 0 ? v : -v) : 0.0;
  }
  return u;
}

Vector prox_gradient_step(const CompositeObjective& obj, const Vector& y, double eta) {
  if (y.size() != obj.dim) throw std::invalid_argument("prox_gradient_step: dimension mismatch");
  if (!(eta > 0)) throw std::invalid_argument("prox_gradient_step: eta must be positive");
  return obj.nonsmooth.prox(y - eta * obj.smooth.gradient(y), eta);
}

namespace {

double moreau_value(const NonsmoothOracle& op, const Vector& y, double eta, const Vector& u) {
  return op.value(u) + (u - y).squaredNorm() / (2.0 * eta);
}

}  // namespace

InexactProxResult inexact_prox(const NonsmoothOracle& op, const Vector& y, double eta,
                               const InexactProxRequest& req) {
  if (!(eta > 0)) throw std::invalid_argument("inexact_prox: eta must be positive");
  if (!(req.target_gap >= 0)) throw std::invalid_argument("inexact_prox: target_gap must be >= 0");
  if (!(req.band_floor > 0 && req.band_floor < 1))
    throw std::invalid_argument("inexact_prox: band_floor must lie in (0,1)");

  Vector u_star = op.prox(y, eta);
  if (req.target_gap == 0.0) return {u_star, 0.0, false};
  if (!op.is_convex)
    throw UnsupportedModeError("inexact_prox: nonconvex g with target_gap > 0 is unsupported");

  const double eps = req.target_gap;
  const double gap_floor = req.band_floor * eps;
  const double g_star = moreau_value(op, y, eta, u_star);

  // Perturb the exact point along a random direction. An infeasible candidate
  // is pulled back with the operator's own prox, which for an indicator is
  // the metric projection; a finite g never needs pulling back.
  Rng rng(req.rng_seed);
  const int dim = static_cast<int>(y.size());
  for (int attempt = 0; attempt < 16; ++attempt) {
    Vector dir = rng.unit_vector(dim);
    auto candidate = [&](double delta) {
      Vector w = u_star + delta * dir;
      if (std::isinf(op.value(w))) w = op.prox(w, eta);
      return w;
    };
    auto gap_at = [&](double delta) {
      return moreau_value(op, y, eta, candidate(delta)) - g_star;
    };

    double lo = 0.0;
    double hi = std::sqrt(2.0 * eta * eps);  // lands on eps exactly when g is locally flat
    double ghi = gap_at(hi);
    if (ghi >= gap_floor && ghi <= eps) return {candidate(hi), ghi, false};

    bool bracketed = ghi > eps;
    if (!bracketed) {
      lo = hi;
      for (int grow = 0; grow < 64 && !bracketed; ++grow) {
        hi *= 2.0;
        ghi = gap_at(hi);
        if (ghi >= gap_floor && ghi <= eps) return {candidate(hi), ghi, false};
        if (ghi > eps)
          bracketed = true;
        else
          lo = hi;
      }
      if (!bracketed) continue;  // gap plateaus below the band: dead direction, redraw
    }

    // Bisect gap(lo) <= eps < gap(hi); the band has width (1-band_floor)*eps,
    // so continuity lands a midpoint inside it.
    double best_delta = -1.0, best_gap = 0.0;
    for (int step = 0; step < 64; ++step) {
      double mid = 0.5 * (lo + hi);
      double gm = gap_at(mid);
      if (gm >= gap_floor && gm <= eps) return {candidate(mid), gm, false};
      if (gm > eps) {
        hi = mid;
      } else {
        lo = mid;
        if (gm > best_gap) {
          best_gap = gm;
          best_delta = mid;
        }
      }
    }
    if (best_delta > 0) return {candidate(best_delta), best_gap, false};
  }
  // No direction yields a positive feasible gap: isolated point.
  return {u_star, 0.0, true};
}

}  // namespace proxmom
