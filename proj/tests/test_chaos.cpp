#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "gfbm/chaos.hpp"
#include "gfbm/error.hpp"
#include "gfbm/rng.hpp"

using namespace gfbm;
using doctest::Approx;

namespace {

MultiIndex e(std::uint32_t k, std::uint32_t a = 1) { return MultiIndex::unit(k, a); }

ChaosSeries random_series(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> terms(1, 5);
  std::uniform_int_distribution<std::uint32_t> pos(1, 4);
  std::uniform_int_distribution<std::uint32_t> exp(0, 2);
  std::normal_distribution<double> c;
  ChaosSeries f;
  const int n = terms(rng);
  for (int i = 0; i < n; ++i) {
    f.add(MultiIndex({{pos(rng), exp(rng)}, {pos(rng), exp(rng)}}), Complex(c(rng), c(rng)));
  }
  return f;
}

double distance(const ChaosSeries& a, const ChaosSeries& b) {
  return std::sqrt((a + b * Complex(-1.0)).norm_squared());
}

}  // namespace

TEST_SUITE("chaos") {
  TEST_CASE("multi-indices") {
    const MultiIndex a({{3, 2}, {1, 1}, {3, 1}, {5, 0}});
    CHECK(a.to_string() == "1:1,3:3");
    CHECK(MultiIndex::parse(a.to_string()) == a);
    CHECK(MultiIndex().to_string() == "0");
    CHECK(MultiIndex::parse("0").empty());
    CHECK(a.order() == 4u);
    CHECK(a.factorial() == 6u);
    CHECK(a.weight() == 2u * 216u);
    CHECK_THROWS_AS(e(1, 40).factorial(), std::overflow_error);
    CHECK_THROWS(MultiIndex::parse("1:x"));
    GradedLex less;
    CHECK(less(e(9), e(1, 2)));
    CHECK(less(e(1), e(2)));
  }

  TEST_CASE("Wick products") {
    const ChaosSeries h1 = ChaosSeries::monomial(e(1));
    CHECK(wick_product(h1, h1) == ChaosSeries::monomial(e(1, 2)));
    const ChaosSeries f = ChaosSeries::monomial(e(1), 2.0) + ChaosSeries::monomial(e(2));
    ChaosSeries expected = ChaosSeries::monomial(e(1, 2), 2.0) + ChaosSeries::monomial(e(1) + e(2));
    CHECK(wick_product(f, h1) == expected);
    CHECK(wick_product(f, ChaosSeries::unit()) == f);

    std::mt19937_64 rng(11);
    for (int i = 0; i < 50; ++i) {
      const ChaosSeries a = random_series(rng);
      const ChaosSeries b = random_series(rng);
      const ChaosSeries c = random_series(rng);
      CHECK(distance(wick_product(a, b), wick_product(b, a)) < 1e-12);
      CHECK(distance(wick_product(wick_product(a, b), c), wick_product(a, wick_product(b, c))) < 1e-10);
      CHECK(distance(wick_product(a, b + c), wick_product(a, b) + wick_product(a, c)) < 1e-11);
    }
  }

  TEST_CASE("Hermite transform") {
    std::vector<Complex> z = {2.0, 0.0, 5.0};
    CHECK(hermite_transform(ChaosSeries::monomial(e(3)), z) == Complex(5.0));
    CHECK(hermite_transform(ChaosSeries::monomial(e(1, 2)), z) == Complex(4.0));
    CHECK_THROWS_AS(hermite_transform(ChaosSeries::monomial(e(4)), z), DomainError);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 100; ++i) {
      const ChaosSeries a = random_series(rng);
      const ChaosSeries b = random_series(rng);
      std::vector<Complex> w(4);
      for (auto& x : w) x = Complex(u(rng), u(rng));
      const Complex lhs = hermite_transform(wick_product(a, b), w);
      const Complex rhs = hermite_transform(a, w) * hermite_transform(b, w);
      CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(std::abs(rhs), 1e-300));
    }
  }

  TEST_CASE("Kondratiev norms and pairing") {
    CHECK(kondratiev_norm(ChaosSeries::monomial(e(1)), KondratievSpace::s_minus_1(2)) == Approx(0.25));
    CHECK(kondratiev_norm(ChaosSeries::monomial(e(2)), KondratievSpace::s1(1)) == Approx(4.0));
    CHECK(kondratiev_norm(ChaosSeries::monomial(e(1, 2)), KondratievSpace::s1(1)) == Approx(16.0));
    CHECK(dual_pairing(ChaosSeries::monomial(e(1)), ChaosSeries::monomial(e(1))) == Complex(1.0));
    CHECK(dual_pairing(ChaosSeries::monomial(e(1, 2)), ChaosSeries::monomial(e(1, 2))) == Complex(2.0));
    CHECK(dual_pairing(ChaosSeries::monomial(e(1)), ChaosSeries::monomial(e(2))) == Complex(0.0));
  }

  TEST_CASE("realizations") {
    CHECK(evaluate_realization(ChaosSeries::monomial(e(1)), std::vector<double>{1.7}) == Complex(1.7));
    CHECK(evaluate_realization(ChaosSeries::monomial(e(1, 2)), std::vector<double>{2.0}) == Complex(3.0));
    // Chaos of order >= 1 has mean zero.
    const MultiIndex alphas[] = {e(1), e(2, 2), e(1) + e(3), e(1, 3)};
    constexpr int n = 100000;
    for (const auto& alpha : alphas) {
      const ChaosSeries f = ChaosSeries::monomial(alpha);
      double s1 = 0.0;
      double s2 = 0.0;
      for (int p = 0; p < n; ++p) {
        std::vector<double> xi(3);
        for (int k = 0; k < 3; ++k) xi[k] = keyed_normal(5, static_cast<std::uint64_t>(p), static_cast<std::uint32_t>(k + 1));
        const double v = evaluate_realization(f, xi).real();
        s1 += v;
        s2 += v * v;
      }
      const double mean = s1 / n;
      const double se = std::sqrt((s2 / n - mean * mean) / n);
      CHECK(std::abs(mean) <= 5.0 * se);
    }
  }

  TEST_CASE("Wick powers of a Gaussian") {
    const double s = 0.7;
    CHECK(wick_power_gaussian_closed(s, 1) == std::vector<double>{0.0, 1.0});
    const auto two = wick_power_gaussian_closed(s, 2);
    CHECK(two[0] == Approx(-s));
    CHECK(two[1] == 0.0);
    CHECK(two[2] == Approx(1.0));
    const auto three = wick_power_gaussian_closed(s, 3);
    CHECK(three[1] == Approx(-3.0 * s));
    CHECK(three[3] == Approx(1.0));
    CHECK(wick_power_gaussian_algebraic(std::vector<double>{0.3, 0.4}, 0) == ChaosSeries::unit());
    CHECK(wick_power_gaussian_algebraic(std::vector<double>{1.0}, 2) == ChaosSeries::monomial(e(1, 2)));

    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 30; ++trial) {
      std::vector<double> c(3);
      std::vector<double> xi(3);
      double sigma2 = 0.0;
      double q = 0.0;
      for (int k = 0; k < 3; ++k) {
        c[k] = u(rng);
        xi[k] = g(rng);
        sigma2 += c[k] * c[k];
        q += c[k] * xi[k];
      }
      for (int n = 0; n <= 6; ++n) {
        const ChaosSeries alg = wick_power_gaussian_algebraic(c, n);
        CHECK(distance(alg, wick_power_multinomial(c, n)) < 1e-11);
        CHECK(std::abs(evaluate_realization(alg, xi) - polynomial_value(wick_power_gaussian_closed(sigma2, n), q)) < 1e-9);
      }
    }
  }

  TEST_CASE("K_q neighbourhoods") {
    const std::vector<Complex> zero(4, 0.0);
    CHECK(kq_sum(zero, 2) == 1.0);
    CHECK(kq_delta_membership(zero, 2, 1.01));
    CHECK_FALSE(kq_delta_membership(zero, 2, 1.0));
    CHECK_FALSE(kq_delta_membership(std::vector<Complex>{0.5}, 2, 100.0));
    CHECK(kq_sum(std::vector<Complex>{0.1}, 2) == Approx(1.0 / 0.96));
    CHECK(kq_delta_membership(std::vector<Complex>{0.1}, 2, 2.0));
    // product formula against the direct multi-index sum
    const std::vector<Complex> z = {Complex(0.1, 0.05), 0.07, Complex(0.0, 0.02)};
    double direct = 0.0;
    for (int a = 0; a < 30; ++a) {
      for (int b = 0; b < 30; ++b) {
        for (int c = 0; c < 30; ++c) {
          direct += std::pow(std::norm(z[0]) * 4.0, a) * std::pow(std::norm(z[1]) * 16.0, b) *
                    std::pow(std::norm(z[2]) * 36.0, c);
        }
      }
    }
    CHECK(kq_sum(z, 2) == Approx(direct).epsilon(1e-12));
  }

  TEST_CASE("serialization round trip") {
    ChaosSeries f = ChaosSeries::constant(Complex(0.1, -2.0)) +
                    ChaosSeries::monomial(e(1) + e(4, 2), Complex(1.0 / 3.0, 1e-300)) +
                    ChaosSeries::monomial(e(2), -7.25);
    std::stringstream buffer;
    write_chaos(buffer, f);
    CHECK(read_chaos(buffer) == f);
  }
}
