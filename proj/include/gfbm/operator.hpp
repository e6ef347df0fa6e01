#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "gfbm/hermite.hpp"
#include "gfbm/kernels.hpp"
#include "gfbm/sampled.hpp"
#include "gfbm/spectral.hpp"

namespace gfbm {

class TmCache;

/// (T_m I_t)(s) on the grid, I_t = 1_[0,t] (t > 0) or 1_[t,0] (t < 0):
///   (1/2pi) int e^{isu} sqrt(mu(u)) I^_t(u) du,  mu = m or 2 pi m.
SampledFunction apply_tm_indicator(const SpectralDensity& m, double t,
                                   const Grid& grid, Convention conv,
                                   double tol = 1e-10);

/// Scalar (T_m I_t)(s) with its quadrature error estimate.
quad::Result tm_indicator_value(const SpectralDensity& m, double t, double s,
                                Convention conv, double tol = 1e-10);

/// (T_m h~_k)(s) by adaptive quadrature, one point at a time:
///   ((-i)^{k-1}/sqrt(2pi)) int e^{isu} sqrt(mu(u)) h~_k(u) du.
/// Used as the independent reference for the batched tables.
quad::Result tm_hermite_value(const SpectralDensity& m, int k, double s,
                              Convention conv, double tol = 1e-12);

/// b_k(t) = int_0^t (T_m h~_k)(s) ds evaluated in the spectral domain by
/// adaptive quadrature (reference route).
quad::Result b_coefficient_value(const SpectralDensity& m, int k, double t,
                                 Convention conv, double tol = 1e-12);

/// T_m h~_k and b_k for all k <= N on a set of times, computed together by
/// the batched kernel. Requires m to satisfy the near-zero/tail bound.
class HermiteModes {
 public:
  HermiteModes(const SpectralDensity& m, int n_modes, std::vector<double> times,
               Convention conv, bool parallel = true);

  /// Loads from / stores into `cache` when the times form a uniform grid.
  HermiteModes(const SpectralDensity& m, int n_modes, const Grid& grid,
               Convention conv, TmCache* cache, bool parallel = true);

  int n_modes() const { return table_.n_modes; }
  const std::vector<double>& times() const { return table_.times; }
  Convention convention() const { return conv_; }
  std::uint64_t density_hash() const { return density_hash_; }
  double error_estimate() const { return table_.error_estimate; }
  bool loaded_from_cache() const { return from_cache_; }

  double tm(int k, std::size_t j) const { return table_.tm_at(k, j); }
  double b(int k, std::size_t j) const { return table_.b_at(k, j); }
  const ProjectionTable& table() const { return table_; }

  /// sum_{k<=n} b_k(t_i) b_k(t_j); n defaults to all modes.
  double truncated_covariance(std::size_t i, std::size_t j, int n = -1) const;

 private:
  void compute(const SpectralDensity& m, bool parallel);

  ProjectionTable table_;
  Convention conv_;
  std::uint64_t density_hash_ = 0;
  bool from_cache_ = false;
};

/// Builds the projection input (symbol, singularity, cutoff) for a density.
ProjectionInput projection_input(const SpectralDensity& m, int n_modes,
                                 std::vector<double> times, Convention conv);

/// (T_m h~_k) samples on the grid (batched kernel, cached if cache given).
SampledFunction apply_tm_hermite(const SpectralDensity& m, int k, const Grid& grid,
                                 Convention conv, TmCache* cache = nullptr);

/// b_k(t) for a single (k, t) from the batched kernel; b_k(0) = 0 exactly.
double b_coefficient(const SpectralDensity& m, int k, double t, Convention conv);

/// T_m applied to a real sampled function: its discrete Fourier transform
/// (trapezoid in x) multiplied by sqrt(mu), then inverted by adaptive
/// quadrature at each output point. Output lives on f's grid.
SampledFunction apply_tm_sampled(const SpectralDensity& m, const SampledFunction& f,
                                 double tol = 1e-11);

/// |<T_m f, g> - <f, T_m g>| with grid inner products; each side uses its
/// own independent transform. f and g must share grid and convention.
double adjoint_check(const SpectralDensity& m, const SampledFunction& f,
                     const SampledFunction& g, double tol = 1e-11);

/// Samples of exp(-(x - center)^2 / (2 width^2)) on the grid.
SampledFunction gaussian_bump(const Grid& grid, double center, double width,
                              Convention conv);

/// ||T_m f|| / ||f|| for f(x) = exp(-x^2/(2 w^2)), evaluated spectrally:
/// (1/2pi) int mu |f^|^2 du over (1/2pi) int |f^|^2 du.
double operator_norm_ratio(const SpectralDensity& m, double width, Convention conv);

/// Constructive constants for
///   sup |T_m h~_k| <= c1 k^{5/12} + c2
///   |T_m h~_k(t) - T_m h~_k(s)| <= |t - s| (l1 k^{11/12} + l2)
/// derived from the Hermite bound constants and the density's (b, K, K').
struct TmBoundConstants {
  double c1 = 0.0;
  double c2 = 0.0;
  double l1 = 0.0;
  double l2 = 0.0;

  double sup_bound(int k) const;
  double lipschitz_bound(int k) const;
};

TmBoundConstants tm_bound_constants(const SpectralDensity& m, Convention conv,
                                    const HermiteBoundConstants& hermite);

struct TmBoundReport {
  double worst_sup_ratio = 0.0;        ///< max sup|T h~_k| / bound, k <= k_max
  double worst_lipschitz_ratio = 0.0;  ///< same for grid-neighbour differences
};

TmBoundReport check_tm_bounds(const SpectralDensity& m, Convention conv,
                              const TmBoundConstants& constants, int k_max,
                              const Grid& grid);

}  // namespace gfbm
