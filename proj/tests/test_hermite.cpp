#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "gfbm/error.hpp"
#include "gfbm/hermite.hpp"
#include "gfbm/quadrature.hpp"
#include "oracles.hpp"

using namespace gfbm;
using doctest::Approx;

namespace {

// Direct transform int e^{-iux} h~_n(x) dx by dense trapezoid.
std::complex<double> dense_transform(int n, double u) {
  const double re = oracle::trapezoid([&](double x) { return std::cos(u * x) * oracle::hermite_function(n, x); },
                                      -20.0, 20.0, 40000);
  const double im = oracle::trapezoid([&](double x) { return -std::sin(u * x) * oracle::hermite_function(n, x); },
                                      -20.0, 20.0, 40000);
  return {re, im};
}

}  // namespace

TEST_SUITE("hermite") {
  TEST_CASE("polynomials against symbolic differentiation") {
    CHECK(hermite_poly(0, 1.234) == 1.0);
    CHECK(hermite_poly(1, 3.0) == 3.0);
    CHECK(hermite_poly(2, 2.0) == 3.0);
    for (int n = 0; n <= 16; ++n) {
      for (double x : {-2.5, -0.3, 0.0, 0.7, 1.9, 3.1}) {
        const double expected = oracle::rodrigues_hermite(n, x);
        CHECK(hermite_poly(n, x) == Approx(expected).epsilon(1e-12).scale(1.0));
      }
    }
    CHECK_THROWS_AS(hermite_poly(-1, 0.0), DomainError);
  }

  TEST_CASE("normalised functions") {
    CHECK(hermite_function(1, 0.0) == Approx(std::pow(std::numbers::pi, -0.25)).epsilon(1e-15));
    CHECK(std::abs(hermite_function(2, 0.0)) < 1e-300);
    for (int n = 1; n <= 16; ++n) {
      for (double x : {-3.0, -1.1, 0.2, 0.9, 2.4, 4.0}) {
        CHECK(hermite_function(n, x) == Approx(oracle::hermite_function(n, x)).epsilon(1e-12).scale(1e-3));
      }
    }
    const auto norm3 = quad::integrate_interval(
        [](double x) { return hermite_function(3, x) * hermite_function(3, x); }, -15.0, 15.0, 1e-13);
    CHECK(norm3.value == Approx(1.0).epsilon(1e-8));
    for (int a = 1; a <= 8; ++a) {
      for (int b = a + 1; b <= 8; ++b) {
        const auto ip = quad::integrate_interval(
            [&](double x) { return hermite_function(a, x) * hermite_function(b, x); }, -15.0, 15.0, 1e-13);
        CHECK(std::abs(ip.value) < 1e-12);
      }
    }
  }

  TEST_CASE("large arguments and indices stay finite") {
    CHECK(std::isfinite(hermite_function(2000, 3.0)));
    CHECK(hermite_function(5, 60.0) == 0.0);
    CHECK(std::abs(hermite_function(1500, 40.0)) < 1.0);
    std::vector<double> batch(600);
    for (double x : {0.4, 35.0, 50.0}) {
      hermite_functions(600, x, batch);
      for (int n : {1, 2, 300, 599, 600}) {
        CHECK(batch[n - 1] == Approx(hermite_function(n, x)).epsilon(1e-11).scale(1e-300));
      }
    }
  }

  TEST_CASE("Fourier eigenfunction property") {
    const std::vector<double> freqs = {-4.0, -1.3, 0.0, 0.8, 2.5, 5.0};
    CHECK(fourier_property_check(1, freqs) <= 1e-6);
    CHECK(fourier_property_check(2, freqs) <= 1e-6);
    CHECK(fourier_property_check(5, freqs) <= 1e-5);
    // n = 1 maps the Gaussian to sqrt(2 pi) times itself
    for (double u : freqs) {
      const double gauss = std::pow(std::numbers::pi, -0.25) * std::exp(-u * u / 2.0);
      CHECK(std::abs(dense_transform(1, u) - std::sqrt(2.0 * std::numbers::pi) * gauss) < 1e-6);
    }
  }

  TEST_CASE("eigenvalue phase is (-i)^{n-1}, not a real sign") {
    const double root = std::sqrt(2.0 * std::numbers::pi);
    for (int n = 2; n <= 5; ++n) {
      static constexpr std::complex<double> phase[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
      for (double u : {0.6, 1.7}) {
        const std::complex<double> direct = dense_transform(n, u);
        const double h = oracle::hermite_function(n, u);
        CHECK(std::abs(direct - root * phase[(n - 1) % 4] * h) < 1e-6);
      }
    }
    // A real sign (-1)^{n-1} is wrong for even n.
    const double u = 0.6;
    const std::complex<double> direct = dense_transform(2, u);
    CHECK(std::abs(direct - (-root) * oracle::hermite_function(2, u)) > 0.1);
  }

  TEST_CASE("fitted bound holds") {
    const HermiteBoundConstants c = fit_hermite_bound(60);
    CHECK(c.c > 0.0);
    CHECK(c.gamma > 0.0);
    CHECK(hermite_bound_ratio(c, 60, 0.05) <= 1.0);
    CHECK(hermite_bound_ratio(c, 60, 0.013) <= 1.0);
  }

  TEST_CASE("basis tables") {
    HermiteBasis basis(12);
    const auto& t = basis.table(-2.0, 0.5, 9);
    REQUIRE(t.size() == 12u * 9u);
    std::vector<double> column(12);
    for (std::size_t i = 0; i < 9; ++i) {
      hermite_functions(12, -2.0 + 0.5 * static_cast<double>(i), column);
      for (int n = 1; n <= 12; ++n) CHECK(t[(n - 1) * 9 + i] == column[n - 1]);
    }
    CHECK(&basis.table(-2.0, 0.5, 9) == &t);
  }
}
