#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gfbm/kernel.hpp"
#include "gfbm/sampled.hpp"
#include "gfbm/spectral.hpp"

namespace gfbm {

/// [density] section (TOML).
///   kind = "fbm" | "quartic_gaussian" | "custom"
///   hurst = 0.5                      (fbm)
///   expression = "u^2*exp(-u^2)"     (custom, or)
///   table = "density.csv"            (custom)
///   b, K, K_prime, tail = "gaussian" | "power" | "compact", tail_parameter
struct DensityConfig {
  std::string kind = "fbm";
  double hurst = 0.5;
  std::string expression;
  std::string table;
  double b = 0.0;
  double K = 1.0;
  double K_prime = 1.0;
  std::string tail = "gaussian";
  double tail_parameter = 1.0;

  bool operator==(const DensityConfig&) const = default;
};

/// A complete run description. Every key is optional in the file; missing
/// keys keep the defaults below. Unknown sections or keys are errors.
struct RunConfig {
  DensityConfig density;

  // [quad]
  double quad_tol = 1e-10;
  int max_refinements = 4000;

  // [grid] uniform points j*dt in [t_min, t_max], or an explicit list.
  double t_min = 0.0;
  double t_max = 1.0;
  double dt = 0.01;
  std::optional<std::vector<double>> points;

  // [simulation]
  Convention convention = Convention::covariance_consistent;
  int truncation = 400;
  std::uint64_t n_paths = 1000;
  std::uint64_t seed = 1;

  // [kernel]
  std::vector<KernelMethod> kernel_methods{KernelMethod::spectral_quadrature};
  int parseval_n = 400;

  // [tm]
  std::string tm_target = "indicator";  ///< "indicator" | "hermite"
  double tm_t = 1.0;
  int tm_k = 1;

  // [output]
  std::string output_dir = "out";
  std::string cache_path;  ///< empty: no persistent T_m cache

  bool operator==(const RunConfig&) const = default;
};

/// Parses TOML-style text. All problems are collected and reported in one
/// ConfigError.
RunConfig parse_config(const std::string& text, const std::string& source = "<config>");
RunConfig load_config(const std::string& path);

/// Canonical text; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& config);

/// Built-in profiles: "fbm-half", "fbm-3q", "quartic".
RunConfig builtin_profile(const std::string& name);
std::vector<std::string> profile_names();

/// Builds the configured density; ConfigError if it cannot be built or fails
/// admissibility.
SpectralDensity make_density(const RunConfig& config);

/// The time grid as a list (explicit points or the anchored uniform grid).
std::vector<double> time_points(const RunConfig& config);

/// The uniform grid; ConfigError when explicit points were given.
Grid uniform_grid(const RunConfig& config);

}  // namespace gfbm
