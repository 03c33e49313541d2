#pragma once

#include <cstdint>

#include "proxmom/objective.hpp"

namespace proxmom {

// Projection onto the nonnegative orthant (eta-independent).
Vector prox_nonneg(const Vector& y, double eta);

// Soft threshold at eta * lambda.
Vector prox_l1(const Vector& y, double eta, double lambda);

// prox_{eta g}(y - eta grad f(y)).
Vector prox_gradient_step(const CompositeObjective& obj, const Vector& y, double eta);

// Controlled-inexactness prox. The returned u satisfies
//   G(u) - G(u*) <= target_gap,  G(u) = g(u) + ||u - y||^2 / (2 eta),
// and, whenever a feasible perturbation exists, also
//   G(u) - G(u*) >= band_floor * target_gap,
// so an "inexact" call is verifiably inexact. target_gap = 0 means exact.
struct InexactProxRequest {
  double target_gap = 0.0;
  double band_floor = 0.25;
  std::uint64_t rng_seed = 0;
};

struct InexactProxResult {
  Vector u;
  double achieved_gap = 0.0;
  bool exact_fallback = false;  // the exact prox point is isolated; returned as-is
};

InexactProxResult inexact_prox(const NonsmoothOracle& op, const Vector& y, double eta,
                               const InexactProxRequest& req);

}  // namespace proxmom
