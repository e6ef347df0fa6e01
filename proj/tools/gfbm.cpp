// gfbm: kernel tables, path simulation, validation and T_m application from a config.
#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

#include "gfbm/config.hpp"
#include "gfbm/error.hpp"
#include "gfbm/hermite.hpp"
#include "gfbm/kernel.hpp"
#include "gfbm/operator.hpp"
#include "gfbm/process.hpp"
#include "gfbm/provenance.hpp"
#include "gfbm/tm_cache.hpp"
#include "gfbm/validation.hpp"

namespace fs = std::filesystem;
using namespace gfbm;

namespace {

enum Exit { kOk = 0, kCheckFailed = 1, kConfigError = 2, kNumericFailure = 3 };

struct Flags {
  std::string config_path;
  std::string profile;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<double> indicator;
  std::optional<int> hermite;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config_path, "TOML config file")->check(CLI::ExistingFile);
  cmd->add_option("--profile", f.profile, "built-in config")
      ->check(CLI::IsMember(profile_names()));
  cmd->add_option("--out", f.out, "output directory (overrides output.dir)");
  cmd->add_option("--seed", f.seed, "RNG seed (overrides simulation.seed)");
}

RunConfig resolve_config(const Flags& f) {
  if (!f.config_path.empty() && !f.profile.empty()) {
    throw ConfigError("give either --config or --profile, not both");
  }
  RunConfig c = !f.config_path.empty() ? load_config(f.config_path)
                : !f.profile.empty()   ? builtin_profile(f.profile)
                                       : RunConfig{};
  if (!f.out.empty()) c.output_dir = f.out;
  if (f.seed) c.seed = *f.seed;
  if (f.indicator && f.hermite) throw ConfigError("give either --indicator or --hermite, not both");
  if (f.indicator) {
    c.tm_target = "indicator";
    c.tm_t = *f.indicator;
  }
  if (f.hermite) {
    if (*f.hermite < 1) throw ConfigError("--hermite needs k >= 1");
    c.tm_target = "hermite";
    c.tm_k = *f.hermite;
  }
  return c;
}

// The fBm variance constant must agree with the spectral kernel at (1, 1).
void self_test(const SpectralDensity& m) {
  if (m.kind() != DensityKind::fbm) return;
  const double expected = fbm_variance_constant(m.hurst());
  const double got = kernel_eval(m, 1.0, 1.0).value;
  if (std::abs(got - expected) > 1e-3) {
    throw NumericError("self-test failed: K(1,1) = " + std::to_string(got) + " but V_H = " +
                           std::to_string(expected),
                       std::abs(got - expected));
  }
}

std::ofstream open_output(const RunConfig& c, const std::string& name) {
  fs::create_directories(c.output_dir);
  const fs::path path = fs::path(c.output_dir) / name;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

Provenance provenance(const SpectralDensity& m, Convention conv,
                      std::optional<std::uint64_t> seed = std::nullopt) {
  return {m.descriptor(), m.hash(), conv, seed};
}

std::unique_ptr<TmCache> open_cache(const RunConfig& c, const SpectralDensity& m) {
  if (c.cache_path.empty()) return nullptr;
  auto cache = std::make_unique<TmCache>(c.cache_path, m.hash(), c.convention);
  cache->load();
  if (cache->rebuilt()) std::cerr << "note: T_m cache " << c.cache_path << " was unusable; rebuilding\n";
  return cache;
}

int cmd_kernel(const RunConfig& c) {
  const SpectralDensity m = make_density(c);
  self_test(m);
  const std::vector<double> grid = time_points(c);
  const KernelTable table =
      build_kernel_table(m, grid, grid, c.kernel_methods, c.convention, c.quad_tol, c.parseval_n);
  std::ofstream out = open_output(c, "kernel.csv");
  write_provenance(out, provenance(m, c.convention));
  write_kernel_csv(out, table);
  std::cout << "wrote " << table.entries.size() << " kernel entries to "
            << (fs::path(c.output_dir) / "kernel.csv").string() << '\n';
  if (table.any_failed()) {
    std::cerr << "error: quadrature failed for some cells (NaN in the table)\n";
    return kNumericFailure;
  }
  return kOk;
}

void summary_row(std::ostream& out, const std::string& quantity, const MomentCheck& m) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g,%.6g\n", quantity.c_str(), m.empirical,
                m.analytic, m.se, m.z_score());
  out << buf;
}

std::string at(const char* name, double t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s(%g)", name, t);
  return buf;
}

int cmd_simulate(const RunConfig& c) {
  if (c.convention != Convention::covariance_consistent) {
    throw ConfigError("simulate needs simulation.convention = \"covariance_consistent\"");
  }
  const SpectralDensity m = make_density(c);
  self_test(m);
  const std::vector<double> times = time_points(c);
  const auto paths_out = [&](const PathEnsemble& e) {
    std::ofstream out = open_output(c, "paths.csv");
    write_provenance(out, provenance(m, c.convention, c.seed));
    write_paths_csv(out, e);
  };

  std::ofstream summary;
  if (c.truncation == 0) {
    PathEnsemble zero;
    zero.times = times;
    zero.n_paths = static_cast<std::size_t>(c.n_paths);
    zero.seed = c.seed;
    zero.density_hash = m.hash();
    zero.paths.assign(zero.n_paths * times.size(), 0.0);
    paths_out(zero);
    summary = open_output(c, "summary.csv");
    write_provenance(summary, provenance(m, c.convention, c.seed));
    summary << "# degenerate_truncation: N = 0, every path is identically zero\n";
    summary << "quantity,empirical,analytic,se,z_score\n";
    std::cout << "N = 0: wrote " << zero.n_paths << " all-zero paths\n";
    return kOk;
  }

  auto cache = c.points ? nullptr : open_cache(c, m);
  const HermiteModes modes = c.points ? HermiteModes(m, c.truncation, times, c.convention)
                                      : HermiteModes(m, c.truncation, uniform_grid(c), c.convention,
                                                     cache.get());
  const PathEnsemble ensemble = simulate_bm(modes, static_cast<std::size_t>(c.n_paths), c.seed);
  paths_out(ensemble);

  summary = open_output(c, "summary.csv");
  write_provenance(summary, provenance(m, c.convention, c.seed));
  summary << "quantity,empirical,analytic,se,z_score\n";
  if (ensemble.n_paths >= 2 && !times.empty()) {
    double t_end = times.front();
    for (double t : times) {
      if (std::abs(t) > std::abs(t_end)) t_end = t;
    }
    if (t_end != 0.0) {
      summary_row(summary, at("variance", t_end), variance_check(ensemble, modes, t_end));
      summary_row(summary, at("excess_kurtosis", t_end), kurtosis_check(ensemble, t_end));
      summary_row(summary, at("fourth_moment", t_end), moment_check(ensemble, modes, t_end, 4));
      double t_mid = times.front();
      for (double t : times) {
        if (std::abs(t - 0.5 * t_end) < std::abs(t_mid - 0.5 * t_end)) t_mid = t;
      }
      if (t_mid != t_end) {
        for (const auto& row : empirical_covariance(ensemble, modes, {{t_end, t_mid}})) {
          char name[96];
          std::snprintf(name, sizeof name, "covariance(%g;%g)", row.t, row.s);
          summary_row(summary, name, row.covariance);
          std::snprintf(name, sizeof name, "increment(%g;%g)", row.t, row.s);
          summary_row(summary, name, row.increment);
        }
      }
    }
  }
  std::cout << "wrote " << ensemble.n_paths << " paths on " << times.size() << " times to "
            << c.output_dir << '\n';
  return kOk;
}

int cmd_validate(const RunConfig& c) {
  const SpectralDensity m = make_density(c);
  self_test(m);
  SuiteOptions options;
  options.convention = c.convention;
  options.seed = c.seed;
  options.monte_carlo.seed = c.seed;
  options.monte_carlo.n_paths = static_cast<std::size_t>(c.n_paths);
  options.monte_carlo.truncation = c.truncation;
  options.monte_carlo.density = m;
  if (m.kind() == DensityKind::custom) options.extra_densities.push_back(m);

  std::ofstream report = open_output(c, "validate.csv");
  write_provenance(report, provenance(m, c.convention, c.seed));
  report << report_header() << '\n';
  std::cout << report_header() << '\n';
  int failures = 0;
  run_suite(options, [&](const CheckResult& r) {
    if (!r.passed && !r.informational) ++failures;
    report << report_line(r) << '\n';
    std::cout << report_line(r) << std::endl;
  });
  if (failures > 0) {
    std::cerr << failures << " check(s) failed\n";
    return kCheckFailed;
  }
  return kOk;
}

int cmd_tm_apply(const RunConfig& c) {
  const SpectralDensity m = make_density(c);
  self_test(m);
  const Grid grid = uniform_grid(c);
  std::ofstream out = open_output(c, "tm.csv");
  write_provenance(out, provenance(m, c.convention));
  int status = kOk;
  SampledFunction f;
  if (c.tm_target == "indicator") {
    out << "# target: indicator(" << c.tm_t << ")\n";
    f = apply_tm_indicator(m, c.tm_t, grid, c.convention, c.quad_tol);
  } else {
    auto cache = open_cache(c, m);
    f = apply_tm_hermite(m, c.tm_k, grid, c.convention, cache.get());
    const TmBoundConstants bound = tm_bound_constants(m, c.convention, fit_hermite_bound(100));
    const double limit = bound.sup_bound(c.tm_k);
    double peak = 0.0;
    for (const auto& v : f.values) peak = std::max(peak, std::abs(v));
    out << "# target: hermite(" << c.tm_k << ")\n"
        << "# bound: sup|T h_k| <= c1 k^(5/12) + c2 = " << limit << " (c1 = " << bound.c1
        << ", c2 = " << bound.c2 << "); observed max " << peak << '\n';
    if (peak > limit) {
      std::cerr << "error: |T h_" << c.tm_k << "| = " << peak << " exceeds the bound " << limit << '\n';
      status = kCheckFailed;
    }
  }
  out << "s,re,im\n";
  char buf[96];
  for (std::size_t i = 0; i < grid.count; ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", grid.at(i), f.values[i].real(),
                  f.values[i].imag());
    out << buf;
  }
  std::cout << "wrote " << grid.count << " samples to " << (fs::path(c.output_dir) / "tm.csv").string()
            << '\n';
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral Gaussian processes: kernels, simulation, validation"};
  app.set_version_flag("--version", tool_version());
  app.require_subcommand(1);
  Flags flags;
  auto* kernel = app.add_subcommand("kernel", "write the covariance kernel table");
  auto* simulate = app.add_subcommand("simulate", "simulate paths and a moment summary");
  auto* validate = app.add_subcommand("validate", "run the validation suite");
  auto* tm = app.add_subcommand("tm-apply", "apply T_m to an indicator or a Hermite function");
  for (auto* cmd : {kernel, simulate, validate, tm}) add_common(cmd, flags);
  tm->add_option("--indicator", flags.indicator, "apply to the indicator of [0, T]");
  tm->add_option("--hermite", flags.hermite, "apply to the k-th Hermite function");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    const RunConfig config = resolve_config(flags);
    if (kernel->parsed()) return cmd_kernel(config);
    if (simulate->parsed()) return cmd_simulate(config);
    if (validate->parsed()) return cmd_validate(config);
    return cmd_tm_apply(config);
  } catch (const ConfigError& e) {
    std::cerr << e.what() << '\n';
    return kConfigError;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumericFailure;
  }
}
