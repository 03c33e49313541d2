#include <cstdint>
#include <numbers>
#include <random>
#include <set>

#include "doctest.h"
#include "proxmom/rng.hpp"

using proxmom::Rng;

TEST_CASE("raw stream matches the standard mt19937_64 sequence") {
  // The standard pins the 10000th draw of a default-seeded engine.
  Rng rng(std::mt19937_64::default_seed);
  std::uint64_t v = 0;
  for (int i = 0; i < 10000; ++i) v = rng.next_u64();
  CHECK(v == 9981545732273789042ULL);
}

TEST_CASE("uniform01 is the top-53-bit transform of the raw stream") {
  Rng rng(42);
  std::mt19937_64 ref(42);
  for (int i = 0; i < 1000; ++i) {
    double u = rng.uniform01();
    double expect = static_cast<double>(ref() >> 11) * 0x1.0p-53;
    CHECK(u == expect);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("uniform01_pos stays in (0,1] and never feeds log a zero") {
  Rng rng(7);
  for (int i = 0; i < 2000; ++i) {
    double u = rng.uniform01_pos();
    CHECK(u > 0.0);
    CHECK(u <= 1.0);
  }
}

TEST_CASE("normal consumes exactly two raw draws") {
  Rng a(12345);
  Rng b(12345);
  a.normal();
  b.next_u64();
  b.next_u64();
  for (int i = 0; i < 4; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("normal matches the two-draw Box-Muller transform bit for bit") {
  Rng rng(9);
  std::mt19937_64 ref(9);
  for (int i = 0; i < 200; ++i) {
    double got = rng.normal();
    double u1 = (static_cast<double>(ref() >> 11) + 1.0) * 0x1.0p-53;
    double u2 = static_cast<double>(ref() >> 11) * 0x1.0p-53;
    double expect = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    CHECK(got == expect);
  }
}

TEST_CASE("index matches the multiply-shift reduction and stays in range") {
  Rng rng(11);
  std::mt19937_64 ref(11);
  std::set<std::size_t> seen;
  for (int i = 0; i < 1000; ++i) {
    std::size_t got = rng.index(7);
    std::size_t expect =
        static_cast<std::size_t>((static_cast<unsigned __int128>(ref()) * 7) >> 64);
    CHECK(got == expect);
    CHECK(got < 7);
    seen.insert(got);
  }
  CHECK(seen.size() == 7);
}

TEST_CASE("unit_vector is unit norm and seed-deterministic") {
  Rng a(3);
  Rng b(3);
  Eigen::VectorXd u = a.unit_vector(20);
  Eigen::VectorXd v = b.unit_vector(20);
  CHECK(std::abs(u.norm() - 1.0) <= 1e-12);
  CHECK((u - v).norm() == 0.0);
  Rng c(4);
  CHECK((u - c.unit_vector(20)).norm() > 0.0);
}

TEST_CASE("normal_vector has the requested length") {
  Rng rng(5);
  CHECK(rng.normal_vector(13).size() == 13);
}
