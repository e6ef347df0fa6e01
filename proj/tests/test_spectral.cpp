#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "gfbm/error.hpp"
#include "gfbm/spectral.hpp"
#include "oracles.hpp"

using namespace gfbm;
using doctest::Approx;

TEST_SUITE("spectral") {
  TEST_CASE("fBm density values") {
    const SpectralDensity half = make_fbm_density(0.5);
    for (double u : {0.01, 1.0, 37.0}) CHECK(half(u) == Approx(1.0 / (2.0 * std::numbers::pi)));
    CHECK(make_fbm_density(0.75)(1.0) == Approx(1.0 / (2.0 * std::numbers::pi)));
    CHECK(make_fbm_density(0.75)(-4.0) == make_fbm_density(0.75)(4.0));
    CHECK_THROWS_AS(make_fbm_density(1.2), DomainError);
    CHECK_THROWS_AS(make_fbm_density(0.0), DomainError);
    CHECK(make_fbm_density(0.75).satisfies_bound());
    CHECK_FALSE(make_fbm_density(0.25).satisfies_bound());
    CHECK_FALSE(make_fbm_density(0.5).summable());
  }

  TEST_CASE("quartic density is admissible") {
    const SpectralDensity m = make_quartic_gaussian_density();
    CHECK(m(0.0) == 0.0);
    CHECK(m(1.0) == Approx(std::exp(-2.0)).epsilon(1e-15));
    CHECK(m.summable());
    const DensityValidation v = validate_density(m, 1e-12);
    CHECK(v.ok());
    CHECK(v.integral_error < 1e-10);
    const double reference = oracle::trapezoid(
        [&](double u) { return m(u) / (u * u + 1.0); }, -40.0, 40.0, 10'000'000);
    CHECK(v.integral == Approx(reference).epsilon(1e-10));
  }

  TEST_CASE("admissibility gate") {
    DensityBounds steep;
    steep.singularity_exponent = 2.5;
    const SpectralDensity too_singular = make_expression_density("u^-2.5", steep);
    const DensityValidation v = validate_density(too_singular);
    CHECK_FALSE(v.exponent_ok);
    CHECK_THROWS_AS(require_admissible(too_singular), DomainError);

    DensityBounds plain;
    plain.near_zero_constant = 1.0;
    plain.tail_constant = 1.0;
    CHECK_FALSE(validate_density(make_expression_density("sin(u)", plain)).nonnegative);
    CHECK_FALSE(validate_density(make_expression_density("3*exp(-u^2)", plain)).bound_ok);
    CHECK(validate_density(make_expression_density("exp(-u^2)", plain)).ok());
  }

  TEST_CASE("table densities") {
    const auto path = std::filesystem::temp_directory_path() / "gfbm_table_density.csv";
    {
      std::ofstream out(path);
      out.precision(17);
      out << "u,m\n";
      for (int i = 1; i <= 400; ++i) {
        const double u = i / 100.0;
        out << u << "," << std::exp(-u * u) << "\n";
      }
    }
    DensityBounds bounds;
    bounds.near_zero_constant = 1.0;
    bounds.tail_constant = 1.0;
    const SpectralDensity m = load_table_density(path.string(), bounds);
    CHECK(m(0.505) == Approx(0.5 * (std::exp(-0.25) + std::exp(-0.51 * 0.51))).epsilon(1e-12));
    CHECK(m(0.005) == Approx(std::exp(-1e-4)).epsilon(1e-12));  // flat below the first node (b = 0)
    CHECK(m(4.5) == 0.0);
    CHECK(validate_density(m).ok());
    std::filesystem::remove(path);
    CHECK_THROWS_AS(make_table_density({0.0}, {1.0}, bounds), DomainError);
    CHECK_THROWS_AS(make_table_density({1.0, 0.5}, {1.0, 1.0}, bounds), DomainError);
  }

  TEST_CASE("descriptor hash identifies the density") {
    CHECK(make_fbm_density(0.75).hash() == make_fbm_density(0.75).hash());
    CHECK(make_fbm_density(0.75).hash() != make_fbm_density(0.7500001).hash());
    CHECK(make_quartic_gaussian_density().hash() != make_fbm_density(0.5).hash());
  }

  TEST_CASE("structure function") {
    const SpectralDensity half = make_fbm_density(0.5);
    CHECK(structure_function_r(half, 2.0).value == Approx(1.0).epsilon(1e-9));
    CHECK(structure_function_r(half, 0.0).value == 0.0);
    CHECK(structure_function_r(make_quartic_gaussian_density(), 0.0).value == 0.0);
    for (double hurst : {0.25, 0.75}) {
      const SpectralDensity m = make_fbm_density(hurst);
      for (double t : {0.3, 2.5}) {
        const double exact = fbm_variance_constant(hurst) / 2.0 * std::pow(t, 2.0 * hurst);
        CHECK(structure_function_r(m, t).value == Approx(exact).epsilon(1e-8));
        CHECK(structure_function_r(m, -t).value == Approx(exact).epsilon(1e-8));
      }
    }
    const SpectralDensity quartic = make_quartic_gaussian_density();
    const double reference = oracle::trapezoid(
        [&](double u) {
          if (u == 0.0) return 0.0;
          const double h = std::sin(0.5 * u);
          return 2.0 * h * h / (u * u) * quartic(u);
        },
        -40.0, 40.0, 10'000'000);
    CHECK(structure_function_r(quartic, 1.0, 1e-12).value == Approx(reference).epsilon(1e-10));
  }

  TEST_CASE("fBm variance constant") {
    CHECK(fbm_variance_constant(0.5) == Approx(1.0).epsilon(1e-15));
    for (double h : {0.1, 0.25, 0.75, 0.9}) {
      const double printed = std::tgamma(2.0 - 2.0 * h) * std::cos(std::numbers::pi * h) /
                             (std::numbers::pi * (1.0 - 2.0 * h) * h);
      CHECK(fbm_variance_constant(h) == Approx(printed).epsilon(1e-13));
    }
    CHECK(fbm_variance_constant(0.5 + 1e-10) == Approx(1.0).epsilon(1e-8));
  }
}
