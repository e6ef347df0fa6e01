#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gfbm/error.hpp"
#include "gfbm/hermite.hpp"
#include "gfbm/kernel.hpp"
#include "gfbm/process.hpp"
#include "gfbm/rng.hpp"

using namespace gfbm;
using doctest::Approx;

namespace {

constexpr Convention kConsistent = Convention::covariance_consistent;

double mean_stat(double n, double s1, double, double, double) { return s1 / n; }

}  // namespace

TEST_SUITE("process") {
  TEST_CASE("Gaussian draws are keyed") {
    const std::vector<double> xi = gaussian_sample(17, 3, 5);
    REQUIRE(xi.size() == 5u);
    for (int k = 1; k <= 5; ++k) CHECK(xi[k - 1] == keyed_normal(17, 3, static_cast<std::uint32_t>(k)));
  }

  TEST_CASE("Brownian motion from the flat density") {
    const SpectralDensity m = make_fbm_density(0.5);
    const std::vector<double> times = {0.0, 0.5, 0.7, 1.0};
    const HermiteModes modes(m, 400, times, kConsistent);
    const PathEnsemble e = simulate_bm(modes, 10000, 31);
    for (std::size_t p = 0; p < e.n_paths; ++p) CHECK(e.at(p, 0) == 0.0);

    const MomentCheck var = variance_check(e, modes, 1.0);
    CHECK(std::abs(var.z_score()) <= 5.0);
    CHECK(std::abs(var.analytic - 1.0) <= 0.05);
    CHECK(std::abs(kurtosis_check(e, 1.0).z_score()) <= 5.0);
    for (int order : {1, 3}) {
      const MomentCheck odd = moment_check(e, modes, 1.0, order);
      CHECK(odd.analytic == 0.0);
      CHECK(std::abs(odd.z_score()) <= 5.0);
    }
    const MomentCheck second = moment_check(e, modes, 1.0, 2);
    CHECK(second.analytic == Approx(var.analytic));
    CHECK(std::abs(second.z_score()) <= 5.0);

    const auto rows = empirical_covariance(e, modes, {{0.0, 0.0}, {1.0, 0.7}, {1.0, 0.5}});
    CHECK(rows[0].covariance.empirical == 0.0);
    CHECK(rows[0].covariance.analytic == 0.0);
    CHECK(std::abs(rows[1].covariance.z_score()) <= 5.0);
    CHECK(std::abs(rows[1].covariance.analytic - 0.7) <= 0.05 * 0.7);
    CHECK(std::abs(rows[2].increment.z_score()) <= 5.0);
    CHECK(std::abs(rows[2].increment.analytic - 2.0 * structure_function_r(m, 0.5).value) <= 0.05);

    const PathEnsemble serial = simulate_bm(modes, 300, 31, false);
    const PathEnsemble parallel = simulate_bm(modes, 300, 31, true);
    CHECK(serial.paths == parallel.paths);
    CHECK(std::equal(serial.paths.begin(), serial.paths.end(), e.paths.begin()));
    CHECK_THROWS_AS(e.index_of(0.25), DomainError);
  }

  TEST_CASE("fourth moment for H = 3/4") {
    const SpectralDensity m = make_fbm_density(0.75);
    const HermiteModes modes(m, 400, std::vector<double>{1.0}, kConsistent);
    const PathEnsemble e = simulate_bm(modes, 100000, 4);
    const MomentCheck fourth = moment_check(e, modes, 1.0, 4);
    const double v = modes.truncated_covariance(0, 0);
    CHECK(fourth.analytic == Approx(3.0 * v * v));
    CHECK(std::abs(fourth.empirical / fourth.analytic - 1.0) <= 5.0 * fourth.se / fourth.analytic);
  }

  TEST_CASE("simulation needs the consistent scaling") {
    const HermiteModes literal(make_quartic_gaussian_density(), 10, std::vector<double>{1.0},
                               Convention::paper_literal);
    CHECK_THROWS_AS(simulate_bm(literal, 10, 1), DomainError);
  }

  TEST_CASE("white noise values") {
    const SpectralDensity m = make_quartic_gaussian_density();
    const HermiteModes modes(m, 50, Grid::anchored(0.0, 1.0, 0.1).points(), kConsistent);
    const std::vector<double> zero(50, 0.0);
    for (double w : white_noise_values(modes, zero).values) CHECK(w == 0.0);
    for (double b : bm_values(modes, zero)) CHECK(b == 0.0);
    std::vector<double> first(50, 0.0);
    first[0] = 1.0;
    const WhiteNoiseSlice slice = white_noise_values(modes, first);
    for (std::size_t j = 0; j < slice.values.size(); ++j) CHECK(slice.values[j] == modes.tm(1, j));
  }

  TEST_CASE("white-noise coefficients are summable") {
    const HermiteModes modes(make_quartic_gaussian_density(), 1000, std::vector<double>{0.0, 1.0}, kConsistent);
    for (std::size_t j = 0; j < 2; ++j) {
      const std::vector<double> sums = white_noise_coefficient_sums(modes, j, 2);
      for (std::size_t k = 1; k < sums.size(); ++k) CHECK(sums[k] >= sums[k - 1]);
      CHECK(sums[999] - sums[499] < 1e-6);
    }
  }

  TEST_CASE("B is the integral of W") {
    const SpectralDensity m = make_quartic_gaussian_density();
    constexpr int n = 50;
    const HermiteModes coarse(m, n, Grid::anchored(0.0, 1.0, 1e-2).points(), kConsistent);
    const HermiteModes fine(m, n, Grid::anchored(0.0, 1.0, 5e-3).points(), kConsistent);
    const std::vector<double> zero(n, 0.0);
    CHECK(integral_relation_check(coarse, zero, zero) == 0.0);
    const std::vector<double> xi = gaussian_sample(12, 0, n);
    const double e1 = integral_relation_check(coarse, xi, xi);
    const double e2 = integral_relation_check(fine, xi, xi);
    CHECK(e2 <= 0.35 * e1);
    // Independent samples for B and W break the relation.
    const std::vector<double> other = gaussian_sample(12, 1, n);
    CHECK(integral_relation_check(fine, xi, other) > 1e3 * e2);
  }

  TEST_CASE("single mode: b_1 against the trapezoid of T h~_1") {
    const SpectralDensity m = make_quartic_gaussian_density();
    const double step = 1e-3;
    const HermiteModes modes(m, 1, Grid::anchored(0.0, 1.0, step).points(), kConsistent);
    const std::vector<double> xi = {1.0};
    const double residual = integral_relation_check(modes, xi, xi);
    // Euler-Maclaurin: trapezoid error on [0, t] is (h^2/12)(f'(t) - f'(0)) + O(h^4).
    const HermiteModes probe(m, 1, std::vector<double>{-step, 0.0, step, 1.0 - step, 1.0, 1.0 + step}, kConsistent);
    const double d0 = (probe.tm(1, 2) - probe.tm(1, 0)) / (2.0 * step);
    const double d1 = (probe.tm(1, 5) - probe.tm(1, 3)) / (2.0 * step);
    const double predicted = std::abs(step * step / 12.0 * (d1 - d0));
    CHECK(residual > 0.0);
    CHECK(residual <= 1.2 * std::max(predicted, 1e-12) + 1e-12);
  }

  TEST_CASE("derivative of the Hermite transform") {
    const SpectralDensity m = make_quartic_gaussian_density();
    std::vector<Complex> z(50, 0.0);
    CHECK(hermite_transform_derivative_check(m, 0.6, 50, z, 2.0, 1e-3).residual == 0.0);
    z[0] = 0.05;
    const double r1 = hermite_transform_derivative_check(m, 0.6, 50, z, 2.0, 1e-3).residual;
    const double r2 = hermite_transform_derivative_check(m, 0.6, 50, z, 2.0, 5e-4).residual;
    CHECK(r1 <= 1e-5);
    CHECK(r2 <= r1 / 3.5);

    const TmBoundConstants bounds = tm_bound_constants(m, kConsistent, fit_hermite_bound(50));
    for (int k = 1; k <= 50; ++k) z[k - 1] = std::polar(0.3 * std::pow(2.0 * k, -2.5), 0.4 * k);
    for (double t : {-1.0, 0.2, 2.5}) {
      const DerivativeCheck d = hermite_transform_derivative_check(m, t, 50, z, 2.0, 1e-3, &bounds);
      CHECK(d.transform_w <= d.bound);
    }
    std::vector<Complex> big(3, 0.6);
    CHECK_THROWS_AS(hermite_transform_derivative_check(m, 0.0, 3, big, 2.0, 1e-3), DomainError);
  }

  TEST_CASE("statistics helpers") {
    const std::vector<double> x = {0.3, -1.2, 2.2, 0.7, -0.1, 1.4, 0.9};
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / (static_cast<double>(x.size()) - 1.0));
    CHECK(jackknife_se(x, mean_stat) == Approx(sd / std::sqrt(static_cast<double>(x.size()))).epsilon(1e-12));

    const std::vector<double> h = {1e-2, 5e-3, 2.5e-3};
    const std::vector<double> r = {3e-4, 7.5e-5, 1.875e-5};
    CHECK(convergence_order(h, r) == Approx(2.0).epsilon(1e-12));
    MomentCheck m;
    m.empirical = 1.2;
    m.analytic = 1.0;
    m.se = 0.1;
    CHECK(m.z_score() == Approx(2.0));
  }

  TEST_CASE("paths CSV") {
    const HermiteModes modes(make_quartic_gaussian_density(), 5, std::vector<double>{0.0, 1.0}, kConsistent);
    const PathEnsemble e = simulate_bm(modes, 2, 3);
    std::ostringstream out;
    write_paths_csv(out, e);
    const std::string text = out.str();
    CHECK(text.rfind("path_id,t,B\n0,0,0\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 5);
  }
}
