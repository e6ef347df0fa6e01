#include "gfbm/process.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "gfbm/error.hpp"
#include "gfbm/kernels.hpp"
#include "gfbm/rng.hpp"

namespace gfbm {

namespace {

std::size_t time_index(const std::vector<double>& times, double t) {
  for (std::size_t j = 0; j < times.size(); ++j) {
    if (std::abs(times[j] - t) <= 1e-12) return j;
  }
  throw DomainError("time " + std::to_string(t) + " is not on the grid");
}

void require_sample(std::span<const double> xi, int n_modes) {
  if (xi.size() < static_cast<std::size_t>(n_modes)) {
    throw DomainError("Gaussian sample has " + std::to_string(xi.size()) + " entries, need " +
                      std::to_string(n_modes));
  }
}

std::vector<double> mode_sum(const HermiteModes& modes, std::span<const double> xi, bool white) {
  require_sample(xi, modes.n_modes());
  const std::size_t n_times = modes.times().size();
  std::vector<double> out(n_times, 0.0);
  for (int k = 1; k <= modes.n_modes(); ++k) {
    const double x = xi[k - 1];
    if (x == 0.0) continue;
    for (std::size_t j = 0; j < n_times; ++j) out[j] += (white ? modes.tm(k, j) : modes.b(k, j)) * x;
  }
  return out;
}

double mean_se(std::span<const double> x, double& mean) {
  const double n = static_cast<double>(x.size());
  double s1 = 0.0;
  for (double v : x) s1 += v;
  mean = s1 / n;
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / (n - 1.0) / n);
}

double variance_stat(double n, double s1, double s2, double, double) {
  const double mean = s1 / n;
  return (s2 - n * mean * mean) / (n - 1.0);
}

double excess_kurtosis_stat(double n, double s1, double s2, double s3, double s4) {
  const double mu = s1 / n;
  const double m2 = s2 / n - mu * mu;
  const double m4 = s4 / n - 4.0 * mu * s3 / n + 6.0 * mu * mu * s2 / n - 3.0 * mu * mu * mu * mu;
  return m4 / (m2 * m2) - 3.0;
}

}  // namespace

std::vector<double> PathEnsemble::column(std::size_t j) const {
  std::vector<double> out(n_paths);
  for (std::size_t p = 0; p < n_paths; ++p) out[p] = at(p, j);
  return out;
}

std::size_t PathEnsemble::index_of(double t) const { return time_index(times, t); }

std::vector<double> gaussian_sample(std::uint64_t seed, std::uint64_t path, int n_modes) {
  std::vector<double> xi(static_cast<std::size_t>(n_modes));
  for (int k = 1; k <= n_modes; ++k) xi[k - 1] = keyed_normal(seed, path, static_cast<std::uint32_t>(k));
  return xi;
}

PathEnsemble simulate_bm(const HermiteModes& modes, std::size_t n_paths, std::uint64_t seed,
                         bool parallel) {
  if (modes.convention() != Convention::covariance_consistent) {
    throw DomainError("path simulation needs covariance_consistent modes");
  }
  PathEnsemble out;
  out.times = modes.times();
  out.truncation = modes.n_modes();
  out.n_paths = n_paths;
  out.seed = seed;
  out.density_hash = modes.density_hash();
  out.convention = modes.convention();
  SynthesisInput in;
  in.coefficients = &modes.table().b;
  in.n_modes = modes.n_modes();
  in.n_times = out.times.size();
  in.n_paths = n_paths;
  in.seed = seed;
  out.paths = parallel ? omp::synthesize_paths(in) : serial::synthesize_paths(in);
  return out;
}

PathEnsemble simulate_bm(const SpectralDensity& m, const std::vector<double>& times, int n_modes,
                         std::size_t n_paths, std::uint64_t seed) {
  const HermiteModes modes(m, n_modes, times, Convention::covariance_consistent);
  return simulate_bm(modes, n_paths, seed);
}

WhiteNoiseSlice white_noise_values(const HermiteModes& modes, std::span<const double> xi) {
  WhiteNoiseSlice out;
  out.times = modes.times();
  out.truncation = modes.n_modes();
  out.xi.assign(xi.begin(), xi.begin() + modes.n_modes());
  out.values = mode_sum(modes, xi, true);
  return out;
}

std::vector<double> bm_values(const HermiteModes& modes, std::span<const double> xi) {
  return mode_sum(modes, xi, false);
}

std::vector<double> white_noise_coefficient_sums(const HermiteModes& modes, std::size_t j, int q) {
  std::vector<double> out(static_cast<std::size_t>(modes.n_modes()));
  double sum = 0.0;
  for (int k = 1; k <= modes.n_modes(); ++k) {
    const double v = modes.tm(k, j);
    sum += v * v * std::pow(2.0 * k, -q);
    out[k - 1] = sum;
  }
  return out;
}

double integral_relation_check(const HermiteModes& modes, std::span<const double> xi_b,
                               std::span<const double> xi_w) {
  const auto& times = modes.times();
  if (times.size() < 2 || times.front() != 0.0) {
    throw DomainError("integral relation needs a grid starting at 0");
  }
  const double step = times[1] - times[0];
  for (std::size_t j = 1; j < times.size(); ++j) {
    if (std::abs(times[j] - times[j - 1] - step) > 1e-9 * step) {
      throw DomainError("integral relation needs a uniform grid");
    }
  }
  const std::vector<double> b = bm_values(modes, xi_b);
  const std::vector<double> w = mode_sum(modes, xi_w, true);
  double integral = 0.0;
  double worst = std::abs(b[0]);
  for (std::size_t j = 1; j < times.size(); ++j) {
    integral += 0.5 * (times[j] - times[j - 1]) * (w[j] + w[j - 1]);
    worst = std::max(worst, std::abs(b[j] - integral));
  }
  return worst;
}

DerivativeCheck hermite_transform_derivative_check(const SpectralDensity& m, double t, int n_modes,
                                                   std::span<const Complex> z, double delta, double h,
                                                   const TmBoundConstants* bounds) {
  if (!(h > 0.0)) throw DomainError("difference step must be positive");
  if (!kq_delta_membership(z, 4, delta)) throw DomainError("z is not in K_4(delta)");
  const HermiteModes modes(m, n_modes, std::vector<double>{t - h, t, t + h},
                           Convention::covariance_consistent);
  const std::size_t used = std::min(z.size(), static_cast<std::size_t>(n_modes));
  Complex b_minus = 0.0;
  Complex b_plus = 0.0;
  Complex w = 0.0;
  for (std::size_t k = 1; k <= used; ++k) {
    const int kk = static_cast<int>(k);
    b_minus += modes.b(kk, 0) * z[k - 1];
    b_plus += modes.b(kk, 2) * z[k - 1];
    w += modes.tm(kk, 1) * z[k - 1];
  }
  DerivativeCheck out;
  out.residual = std::abs((b_plus - b_minus) / (2.0 * h) - w);
  out.transform_w = std::abs(w);
  if (bounds != nullptr) {
    double coeff_sum = 0.0;
    for (int k = 1; k <= n_modes; ++k) {
      const double s = bounds->sup_bound(k);
      coeff_sum += s * s * std::pow(2.0 * k, -2.0);
    }
    out.bound = std::sqrt(coeff_sum) * std::sqrt(kq_sum(z.first(used), 2));
  }
  return out;
}

double convergence_order(std::span<const double> h, std::span<const double> residual) {
  if (h.size() != residual.size() || h.size() < 2) {
    throw DomainError("convergence_order needs matching series of length >= 2");
  }
  const double n = static_cast<double>(h.size());
  double sx = 0.0;
  double sy = 0.0;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double x = std::log(h[i]);
    const double y = std::log(residual[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double MomentCheck::z_score() const {
  const double diff = empirical - analytic;
  if (se > 0.0) return diff / se;
  return diff == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), diff);
}

MomentCheck moment_check(const PathEnsemble& ensemble, const HermiteModes& modes, double t, int order) {
  if (order < 1) throw DomainError("moment order must be >= 1");
  const std::vector<double> x = ensemble.column(ensemble.index_of(t));
  const std::size_t jm = time_index(modes.times(), t);
  const double v = modes.truncated_covariance(jm, jm);
  std::vector<double> powers(x.size());
  for (std::size_t p = 0; p < x.size(); ++p) powers[p] = std::pow(x[p], order);
  MomentCheck out;
  out.se = mean_se(powers, out.empirical);
  if (order % 2 == 0) {
    double double_factorial = 1.0;
    for (int i = order - 1; i > 1; i -= 2) double_factorial *= i;
    out.analytic = double_factorial * std::pow(v, order / 2);
  }
  return out;
}

MomentCheck variance_check(const PathEnsemble& ensemble, const HermiteModes& modes, double t) {
  const std::vector<double> x = ensemble.column(ensemble.index_of(t));
  const std::size_t jm = time_index(modes.times(), t);
  double s1 = 0.0;
  double s2 = 0.0;
  for (double v : x) {
    s1 += v;
    s2 += v * v;
  }
  MomentCheck out;
  out.empirical = variance_stat(static_cast<double>(x.size()), s1, s2, 0.0, 0.0);
  out.analytic = modes.truncated_covariance(jm, jm);
  out.se = jackknife_se(x, variance_stat);
  return out;
}

MomentCheck kurtosis_check(const PathEnsemble& ensemble, double t) {
  const std::vector<double> x = ensemble.column(ensemble.index_of(t));
  double s[5] = {static_cast<double>(x.size()), 0.0, 0.0, 0.0, 0.0};
  for (double v : x) {
    const double v2 = v * v;
    s[1] += v;
    s[2] += v2;
    s[3] += v2 * v;
    s[4] += v2 * v2;
  }
  MomentCheck out;
  out.empirical = excess_kurtosis_stat(s[0], s[1], s[2], s[3], s[4]);
  out.se = jackknife_se(x, excess_kurtosis_stat);
  return out;
}

std::vector<CovarianceRow> empirical_covariance(const PathEnsemble& ensemble, const HermiteModes& modes,
                                                const std::vector<std::pair<double, double>>& pairs) {
  std::vector<CovarianceRow> rows;
  for (const auto& [t, s] : pairs) {
    const std::size_t it = ensemble.index_of(t);
    const std::size_t is = ensemble.index_of(s);
    const std::size_t mt = time_index(modes.times(), t);
    const std::size_t ms = time_index(modes.times(), s);
    std::vector<double> prod(ensemble.n_paths);
    std::vector<double> incr(ensemble.n_paths);
    for (std::size_t p = 0; p < ensemble.n_paths; ++p) {
      const double bt = ensemble.at(p, it);
      const double bs = ensemble.at(p, is);
      prod[p] = bt * bs;
      incr[p] = (bt - bs) * (bt - bs);
    }
    CovarianceRow row;
    row.t = t;
    row.s = s;
    row.covariance.se = mean_se(prod, row.covariance.empirical);
    row.covariance.analytic = modes.truncated_covariance(mt, ms);
    row.increment.se = mean_se(incr, row.increment.empirical);
    double inc = 0.0;
    for (int k = 1; k <= modes.n_modes(); ++k) {
      const double d = modes.b(k, mt) - modes.b(k, ms);
      inc += d * d;
    }
    row.increment.analytic = inc;
    rows.push_back(row);
  }
  return rows;
}

double jackknife_se(std::span<const double> x, double (*stat)(double, double, double, double, double)) {
  const std::size_t n = x.size();
  if (n < 3) throw DomainError("jackknife needs at least 3 samples");
  double s[4] = {0.0, 0.0, 0.0, 0.0};
  for (double v : x) {
    const double v2 = v * v;
    s[0] += v;
    s[1] += v2;
    s[2] += v2 * v;
    s[3] += v2 * v2;
  }
  const double m = static_cast<double>(n) - 1.0;
  std::vector<double> theta(n);
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = x[i];
    const double v2 = v * v;
    theta[i] = stat(m, s[0] - v, s[1] - v2, s[2] - v2 * v, s[3] - v2 * v2);
    mean += theta[i];
  }
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double th : theta) ss += (th - mean) * (th - mean);
  return std::sqrt(m / static_cast<double>(n) * ss);
}

void write_paths_csv(std::ostream& out, const PathEnsemble& ensemble) {
  out << "path_id,t,B\n";
  char buf[96];
  for (std::size_t p = 0; p < ensemble.n_paths; ++p) {
    for (std::size_t j = 0; j < ensemble.times.size(); ++j) {
      std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", p, ensemble.times[j], ensemble.at(p, j));
      out << buf;
    }
  }
}

}  // namespace gfbm
