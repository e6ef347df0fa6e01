#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gfbm/sampled.hpp"
#include "gfbm/spectral.hpp"

namespace gfbm {

struct CheckResult {
  int id = 0;            ///< acceptance criterion number, 0 for extra checks
  std::string name;
  std::string property;  ///< plain-language statement of what is checked
  bool passed = false;
  bool informational = false;  ///< reported but never fails the run
  double measured = 0.0;
  double tolerance = 0.0;
  double seconds = 0.0;
  std::string detail;
};

namespace checks {

CheckResult min_kernel_exactness();
CheckResult fbm_closed_form();
CheckResult indicator_closed_form();
CheckResult hermite_fourier();
CheckResult parseval_truncation(Convention conv, const std::vector<SpectralDensity>& extra = {});
CheckResult wick_homomorphism(std::uint64_t seed);
CheckResult wick_power(std::uint64_t seed);

/// Monte Carlo statistics of B(1) for one ensemble: variance and excess
/// kurtosis (criterion 8), fourth moment (criterion 9).
struct MonteCarloSetup {
  std::optional<SpectralDensity> density;  ///< default fBm H = 1/2
  std::size_t n_paths = 10000;
  int truncation = 400;
  std::uint64_t seed = 20240601;
  Convention convention = Convention::covariance_consistent;
};
std::vector<CheckResult> monte_carlo(const MonteCarloSetup& setup);

CheckResult integral_relation();
CheckResult derivative_order();
CheckResult structure_function(const std::vector<SpectralDensity>& extra = {});
CheckResult gram_positivity(const std::vector<SpectralDensity>& extra = {});
CheckResult self_adjointness(const std::vector<SpectralDensity>& extra = {});
CheckResult summability(const std::vector<SpectralDensity>& extra = {});

}  // namespace checks

struct SuiteOptions {
  Convention convention = Convention::covariance_consistent;
  checks::MonteCarloSetup monte_carlo;
  std::uint64_t seed = 20240601;
  std::vector<SpectralDensity> extra_densities;  ///< custom densities from a config
};

/// Runs every acceptance check in criterion order, handing each result to
/// `report` as soon as it is available.
std::vector<CheckResult> run_suite(const SuiteOptions& options,
                                   const std::function<void(const CheckResult&)>& report = {});

/// "name,property,status,measured,tolerance,seconds,detail"
std::string report_header();
std::string report_line(const CheckResult& result);

}  // namespace gfbm
