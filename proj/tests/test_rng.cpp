#include <doctest.h>

#include <cmath>

#include "gfbm/rng.hpp"

using namespace gfbm;

TEST_SUITE("rng") {
  TEST_CASE("Philox4x32-10 known-answer vectors") {
    using C = Philox4x32::Counter;
    using K = Philox4x32::Key;
    CHECK(Philox4x32::generate(C{0, 0, 0, 0}, K{0, 0}) ==
          C{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
    CHECK(Philox4x32::generate(C{~0u, ~0u, ~0u, ~0u}, K{~0u, ~0u}) ==
          C{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
    CHECK(Philox4x32::generate(C{0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                               K{0xa4093822u, 0x299f31d0u}) ==
          C{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
  }

  TEST_CASE("open unit interval") {
    CHECK(to_open_unit(0) > 0.0);
    CHECK(to_open_unit(~0ull) < 1.0);
  }

  TEST_CASE("keyed normals are reproducible and roughly standard") {
    CHECK(keyed_normal(42, 7, 3) == keyed_normal(42, 7, 3));
    CHECK(keyed_normal(42, 7, 3) != keyed_normal(43, 7, 3));
    CHECK(keyed_normal(42, 7, 3) != keyed_normal(42, 8, 3));
    CHECK(keyed_normal(42, 7, 3) != keyed_normal(42, 7, 4));
    constexpr int n = 100000;
    double s1 = 0.0;
    double s2 = 0.0;
    double s4 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = keyed_normal(2024, static_cast<std::uint64_t>(i), 1);
      s1 += x;
      s2 += x * x;
      s4 += x * x * x * x;
    }
    CHECK(std::abs(s1 / n) < 5.0 / std::sqrt(n));
    CHECK(std::abs(s2 / n - 1.0) < 5.0 * std::sqrt(2.0 / n));
    CHECK(std::abs(s4 / n - 3.0) < 5.0 * std::sqrt(96.0 / n));
  }
}
