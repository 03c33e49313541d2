#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <random>

namespace proxmom {

// Deterministic random source. mt19937_64 is specified bit-for-bit by the
// C++ standard, and the transforms below are written out explicitly because
// std::*_distribution carries no cross-platform reproducibility guarantee.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform on [0, 1): top 53 bits scaled by 2^-53.
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1], safe under log().
  double uniform01_pos() { return (static_cast<double>(gen_() >> 11) + 1.0) * 0x1.0p-53; }

  // Box-Muller; consumes exactly two draws per call, no caching.
  double normal() {
    double u1 = uniform01_pos();
    double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
  }

  // Index in [0, n) via multiply-shift; bias is at most n * 2^-64.
  std::size_t index(std::size_t n) {
    return static_cast<std::size_t>((static_cast<unsigned __int128>(gen_()) * n) >> 64);
  }

  Eigen::VectorXd normal_vector(int dim) {
    Eigen::VectorXd v(dim);
    for (int i = 0; i < dim; ++i) v[i] = normal();
    return v;
  }

  // Uniform direction on the unit sphere; redraws on a (measure-zero) tiny norm.
  Eigen::VectorXd unit_vector(int dim) {
    for (;;) {
      Eigen::VectorXd v = normal_vector(dim);
      double n = v.norm();
      if (n > 1e-12) return v / n;
    }
  }

 private:
  static constexpr double kTwoPi = 6.283185307179586476925286766559;
  std::mt19937_64 gen_;
};

}  // namespace proxmom
