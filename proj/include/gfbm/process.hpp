#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gfbm/chaos.hpp"
#include "gfbm/operator.hpp"

namespace gfbm {

/// Simulated m-Brownian motion paths B_m(t_j) = sum_{k<=N} b_k(t_j) xi_k.
struct PathEnsemble {
  std::vector<double> times;
  int truncation = 0;
  std::size_t n_paths = 0;
  std::uint64_t seed = 0;
  std::uint64_t density_hash = 0;
  Convention convention = Convention::covariance_consistent;
  std::vector<double> paths;  ///< p * times.size() + j

  double at(std::size_t p, std::size_t j) const { return paths[p * times.size() + j]; }
  /// Column of values at time index j.
  std::vector<double> column(std::size_t j) const;
  /// Index of t in times (exact match within 1e-12); throws DomainError.
  std::size_t index_of(double t) const;
};

/// The xi draws of one path: xi_k = keyed_normal(seed, path, k).
std::vector<double> gaussian_sample(std::uint64_t seed, std::uint64_t path, int n_modes);

/// Paths from precomputed modes (which must be covariance_consistent).
PathEnsemble simulate_bm(const HermiteModes& modes, std::size_t n_paths,
                         std::uint64_t seed, bool parallel = true);

/// Computes the modes for (m, times, N) then simulates.
PathEnsemble simulate_bm(const SpectralDensity& m, const std::vector<double>& times,
                         int n_modes, std::size_t n_paths, std::uint64_t seed);

/// W_m(t_j) = sum_k (T_m h~_k)(t_j) xi_k for one Gaussian sample.
struct WhiteNoiseSlice {
  std::vector<double> times;
  int truncation = 0;
  std::vector<double> xi;
  std::vector<double> values;
};

WhiteNoiseSlice white_noise_values(const HermiteModes& modes, std::span<const double> xi);

/// B_m(t_j) for the same Gaussian sample.
std::vector<double> bm_values(const HermiteModes& modes, std::span<const double> xi);

/// Partial sums S_N(t) = sum_{k<=N} |T_m h~_k(t)|^2 (2k)^{-q} at time index j.
std::vector<double> white_noise_coefficient_sums(const HermiteModes& modes,
                                                 std::size_t j, int q);

/// max_j |B_m(t_j) - trapezoid int_0^{t_j} W_m| using xi_b for B and xi_w
/// for W (the coupled construction uses the same sample for both).
/// The modes' times must be a uniform grid starting at 0.
double integral_relation_check(const HermiteModes& modes, std::span<const double> xi_b,
                               std::span<const double> xi_w);

/// Central-difference residual of d/dt I(B_m(t))(z) against I(W_m(t))(z).
struct DerivativeCheck {
  double residual = 0.0;
  double transform_w = 0.0;  ///< |I(W_m(t))(z)|
  double bound = 0.0;        ///< Cauchy-Schwarz bound on |I(W_m(t))(z)|
};

/// Requires z in K_4(delta). z[k-1] holds z_k; entries beyond N are ignored.
DerivativeCheck hermite_transform_derivative_check(const SpectralDensity& m, double t,
                                                   int n_modes, std::span<const Complex> z,
                                                   double delta, double h,
                                                   const TmBoundConstants* bounds = nullptr);

/// Log-log slope of residual against h (least squares).
double convergence_order(std::span<const double> h, std::span<const double> residual);

struct MomentCheck {
  double empirical = 0.0;
  double analytic = 0.0;
  double se = 0.0;
  double z_score() const;
};

/// order-th moment of B(t) against (order-1)!! v^{order/2} (0 for odd order),
/// v = sum_{k<=N} b_k(t)^2. Jackknife standard error.
MomentCheck moment_check(const PathEnsemble& ensemble, const HermiteModes& modes,
                         double t, int order);

/// Sample variance of B(t) against the truncated variance.
MomentCheck variance_check(const PathEnsemble& ensemble, const HermiteModes& modes, double t);

/// Excess kurtosis of B(t) against 0.
MomentCheck kurtosis_check(const PathEnsemble& ensemble, double t);

struct CovarianceRow {
  double t = 0.0;
  double s = 0.0;
  MomentCheck covariance;  ///< E B(t)B(s) vs sum b_k(t) b_k(s)
  MomentCheck increment;   ///< E (B(t)-B(s))^2 vs sum (b_k(t) - b_k(s))^2
  double exact_covariance = 0.0;  ///< K_r(t, s) when supplied
};

std::vector<CovarianceRow> empirical_covariance(const PathEnsemble& ensemble,
                                                const HermiteModes& modes,
                                                const std::vector<std::pair<double, double>>& pairs);

/// Jackknife standard error of a statistic of the first four raw power sums.
/// stat receives (n, sum x, sum x^2, sum x^3, sum x^4).
double jackknife_se(std::span<const double> x,
                    double (*stat)(double, double, double, double, double));

/// "path_id,t,B" rows.
void write_paths_csv(std::ostream& out, const PathEnsemble& ensemble);

}  // namespace gfbm
