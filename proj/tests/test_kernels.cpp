#include <doctest.h>

#include <omp.h>

#include <cmath>

#include "gfbm/kernels.hpp"
#include "gfbm/operator.hpp"

using namespace gfbm;

TEST_SUITE("parallel") {
  TEST_CASE("OpenMP kernels reproduce the serial reference bit for bit") {
    const int saved = omp_get_max_threads();
    omp_set_num_threads(4);

    std::vector<double> times;
    for (int j = 0; j <= 40; ++j) times.push_back(-1.0 + 0.05 * j);
    for (const auto& m : {make_quartic_gaussian_density(), make_fbm_density(0.75)}) {
      const ProjectionInput in = projection_input(m, 60, times, Convention::covariance_consistent);
      const ProjectionTable a = serial::hermite_projection(in);
      const ProjectionTable b = omp::hermite_projection(in);
      CHECK(a.tm == b.tm);
      CHECK(a.b == b.b);
      CHECK(a.error_estimate == b.error_estimate);

      SynthesisInput synth;
      synth.coefficients = &a.b;
      synth.n_modes = a.n_modes;
      synth.n_times = times.size();
      synth.n_paths = 257;
      synth.seed = 99;
      CHECK(serial::synthesize_paths(synth) == omp::synthesize_paths(synth));
    }

    auto k = [](double t, double s) { return std::exp(-(t - s) * (t - s)) + 1e-3 * t * s; };
    const std::vector<double> grid = {0.1, 0.4, 0.45, 1.7, 2.0, 3.3};
    const std::vector<double> ks = serial::kernel_table(k, grid);
    CHECK(ks == omp::kernel_table(k, grid));
    for (std::size_t i = 0; i < grid.size(); ++i) {
      for (std::size_t j = 0; j < grid.size(); ++j) CHECK(ks[i * grid.size() + j] == k(grid[std::min(i, j)], grid[std::max(i, j)]));
    }
    CHECK(omp::max_threads() >= 1);
    omp_set_num_threads(saved);
  }

  TEST_CASE("projection error estimate is small") {
    const ProjectionInput in = projection_input(make_quartic_gaussian_density(), 200, {0.0, 0.5, 1.0},
                                                Convention::covariance_consistent);
    CHECK(omp::hermite_projection(in).error_estimate < 1e-12);
  }
}
