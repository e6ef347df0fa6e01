#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "gfbm/error.hpp"
#include "gfbm/hermite.hpp"
#include "gfbm/kernel.hpp"
#include "gfbm/operator.hpp"
#include "gfbm/quadrature.hpp"
#include "gfbm/tm_cache.hpp"

using namespace gfbm;
using doctest::Approx;

namespace {

constexpr Convention kLiteral = Convention::paper_literal;
constexpr Convention kConsistent = Convention::covariance_consistent;

// Phi(s) = s e^{-s^2/4} / (4 sqrt(pi)); T_m 1_[0,t] = Phi(s) - Phi(s - t).
double phi(double s) { return s * std::exp(-s * s / 4.0) / (4.0 * std::sqrt(std::numbers::pi)); }

}  // namespace

TEST_SUITE("operator") {
  TEST_CASE("indicator transform for the quartic density") {
    const SpectralDensity m = make_quartic_gaussian_density();
    const Grid grid{-6.0, 0.05, 281};
    for (double t : {0.4, 1.0, 2.3}) {
      const SampledFunction f = apply_tm_indicator(m, t, grid, kLiteral);
      double worst = 0.0;
      for (std::size_t i = 0; i < grid.count; ++i) {
        const double s = grid.at(i);
        worst = std::max(worst, std::abs(f.values[i] - (phi(s) - phi(s - t))));
      }
      CHECK(worst < 1e-9);
    }
    // 1_[t,0] for t < 0 is the reflection of 1_[0,|t|]
    const SampledFunction neg = apply_tm_indicator(m, -1.5, grid, kLiteral);
    for (std::size_t i = 0; i < grid.count; i += 7) {
      const double s = grid.at(i);
      CHECK(std::abs(neg.values[i] - (phi(s + 1.5) - phi(s))) < 1e-9);
    }
    // the covariance-consistent scaling multiplies by sqrt(2 pi)
    CHECK(tm_indicator_value(m, 1.0, 0.3, kConsistent).value ==
          Approx(std::sqrt(2.0 * std::numbers::pi) * (phi(0.3) - phi(-0.7))).epsilon(1e-10));
  }

  TEST_CASE("indicator of an empty interval") {
    const Grid grid{-2.0, 0.5, 9};
    for (const auto& m : {make_quartic_gaussian_density(), make_fbm_density(0.3)}) {
      const SampledFunction f = apply_tm_indicator(m, 0.0, grid, kConsistent);
      for (const auto& v : f.values) CHECK(v == std::complex<double>(0.0));
    }
  }

  TEST_CASE("fBm H=1/2 with the consistent scaling is the identity") {
    const SpectralDensity m = make_fbm_density(0.5);
    const Grid grid{-1.0, 0.125, 25};
    const SampledFunction f = apply_tm_indicator(m, 1.5, grid, kConsistent);
    for (std::size_t i = 0; i < grid.count; ++i) {
      const double s = grid.at(i);
      const double exact = (s == 0.0 || s == 1.5) ? 0.5 : (s > 0.0 && s < 1.5 ? 1.0 : 0.0);
      CHECK(std::abs(f.values[i].real() - exact) < 1e-8);
    }
    for (int k : {1, 2, 5}) {
      for (double s : {-1.2, 0.0, 0.4, 2.2}) {
        CHECK(tm_hermite_value(m, k, s, kConsistent).value ==
              Approx(hermite_function(k, s)).epsilon(1e-9).scale(1.0));
      }
      for (double t : {0.7, -1.1}) {
        const double direct = quad::integrate_interval(
                                  [&](double x) { return hermite_function(k, x); }, 0.0, t, 1e-14)
                                  .value;
        CHECK(b_coefficient(m, k, t, kConsistent) == Approx(direct).epsilon(1e-10).scale(1.0));
      }
    }
  }

  TEST_CASE("the indicator transform is not local") {
    const SpectralDensity m = make_quartic_gaussian_density();
    CHECK(std::abs(tm_indicator_value(m, 1.0, -3.0, kLiteral).value) > 1e-3);
    CHECK(std::abs(tm_indicator_value(m, 1.0, 4.0, kLiteral).value) > 1e-3);
    CHECK(std::abs(tm_indicator_value(m, 1.0, 10.0, kLiteral).value) > 1e-10);
    for (double s : {15.0, 20.0, -15.0}) {
      CHECK(std::abs(tm_indicator_value(m, 1.0, s, kLiteral).value) < 1e-10);
    }
  }

  TEST_CASE("batched Hermite modes agree with pointwise quadrature") {
    const Grid grid{-3.0, 0.5, 13};
    for (const auto& m : {make_quartic_gaussian_density(), make_fbm_density(0.75)}) {
      for (int k : {1, 2, 3, 4, 7, 20}) {
        const SampledFunction batched = apply_tm_hermite(m, k, grid, kConsistent);
        for (std::size_t i = 0; i < grid.count; i += 3) {
          const double ref = tm_hermite_value(m, k, grid.at(i), kConsistent).value;
          CHECK(batched.values[i].real() == Approx(ref).epsilon(1e-9).scale(1.0));
          CHECK(batched.values[i].imag() == 0.0);
        }
        for (double t : {-0.8, 0.6, 1.9}) {
          CHECK(b_coefficient(m, k, t, kConsistent) ==
                Approx(b_coefficient_value(m, k, t, kConsistent).value).epsilon(1e-10).scale(1.0));
        }
        CHECK(b_coefficient(m, k, 0.0, kConsistent) == 0.0);
      }
    }
  }

  TEST_CASE("densities without the tail bound are rejected for Hermite modes") {
    const SpectralDensity rough = make_fbm_density(0.25);
    CHECK_THROWS_AS(apply_tm_hermite(rough, 1, Grid{0.0, 0.1, 3}, kConsistent), DomainError);
    CHECK_THROWS_AS(b_coefficient(rough, 1, 0.5, kConsistent), DomainError);
    CHECK(std::isfinite(tm_indicator_value(rough, 1.0, 0.5, kConsistent).value));
  }

  TEST_CASE("sup and Lipschitz bounds on T h~_k for k <= 100") {
    const HermiteBoundConstants hermite = fit_hermite_bound(100);
    const Grid grid{-6.0, 0.05, 241};
    for (const auto& m : {make_quartic_gaussian_density(), make_fbm_density(0.75), make_fbm_density(0.5)}) {
      const TmBoundConstants c = tm_bound_constants(m, kConsistent, hermite);
      const TmBoundReport report = check_tm_bounds(m, kConsistent, c, 100, grid);
      CHECK(report.worst_sup_ratio <= 1.0);
      CHECK(report.worst_lipschitz_ratio <= 1.0);
      CHECK(c.sup_bound(3) == Approx(c.c1 * std::pow(3.0, 5.0 / 12.0) + c.c2));
    }
  }

  TEST_CASE("self-adjointness") {
    const Grid grid{-12.0, 0.05, 481};
    const SpectralDensity quartic = make_quartic_gaussian_density();
    const SampledFunction f = gaussian_bump(grid, -0.7, 0.8, kConsistent);
    const SampledFunction g = gaussian_bump(grid, 1.1, 0.5, kConsistent);
    CHECK(adjoint_check(quartic, f, f) < 1e-14);
    CHECK(adjoint_check(quartic, f, g) <= 1e-8);
    const SampledFunction shifted = gaussian_bump(grid, 2.1, 0.8, kConsistent);
    CHECK(adjoint_check(make_fbm_density(0.75), f, shifted) <= 1e-8);
    CHECK_THROWS_AS(adjoint_check(quartic, f, gaussian_bump(Grid{-12.0, 0.1, 241}, 0.0, 1.0, kConsistent)),
                    DomainError);
  }

  TEST_CASE("operator norm ratio") {
    CHECK(operator_norm_ratio(make_fbm_density(0.5), 0.7, kConsistent) == Approx(1.0).epsilon(1e-10));
    const double sup_symbol = std::sqrt(2.0 * std::numbers::pi) * std::exp(-1.0);
    const double ratio = operator_norm_ratio(make_quartic_gaussian_density(), 1.0, kConsistent);
    CHECK(ratio > 0.0);
    CHECK(ratio <= sup_symbol);
  }

  TEST_CASE("sampled transform of a smooth bump matches the spectral route") {
    const SpectralDensity m = make_fbm_density(0.5);
    const Grid grid{-10.0, 0.05, 401};
    const SampledFunction f = gaussian_bump(grid, 0.3, 0.9, kConsistent);
    const SampledFunction tf = apply_tm_sampled(m, f);
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.count; ++i) worst = std::max(worst, std::abs(tf.values[i] - f.values[i]));
    CHECK(worst < 1e-9);
  }

  TEST_CASE("T_m cache stores, reloads and survives corruption") {
    const SpectralDensity m = make_quartic_gaussian_density();
    const auto path = (std::filesystem::temp_directory_path() / "gfbm_tm_cache_test.bin").string();
    std::filesystem::remove(path);
    const Grid grid = Grid::anchored(0.0, 1.0, 0.05);

    TmCache cold(path, m.hash(), kConsistent);
    CHECK_FALSE(cold.load());
    CHECK_FALSE(cold.rebuilt());
    const HermiteModes first(m, 12, grid, kConsistent, &cold);
    CHECK_FALSE(first.loaded_from_cache());
    REQUIRE(std::filesystem::exists(path));

    TmCache warm(path, m.hash(), kConsistent);
    CHECK(warm.load());
    const HermiteModes second(m, 12, grid, kConsistent, &warm);
    CHECK(second.loaded_from_cache());
    CHECK(second.table().tm == first.table().tm);
    CHECK(second.table().b == first.table().b);

    {
      std::fstream file(path, std::ios::in | std::ios::out | std::ios::binary);
      file.seekp(static_cast<std::streamoff>(std::filesystem::file_size(path) / 2));
      const char junk = 0x5a;
      file.write(&junk, 1);
    }
    TmCache corrupt(path, m.hash(), kConsistent);
    CHECK_FALSE(corrupt.load());
    CHECK(corrupt.rebuilt());
    const HermiteModes third(m, 12, grid, kConsistent, &corrupt);
    CHECK_FALSE(third.loaded_from_cache());
    CHECK(third.table().tm == first.table().tm);

    TmCache other(path, make_fbm_density(0.75).hash(), kConsistent);
    CHECK_THROWS_AS(HermiteModes(m, 12, grid, kConsistent, &other), DomainError);
    TmCache truncated_file(path, m.hash(), kConsistent);
    std::filesystem::resize_file(path, 30);
    CHECK_FALSE(truncated_file.load());
    CHECK(truncated_file.rebuilt());
    std::filesystem::remove(path);
  }
}
