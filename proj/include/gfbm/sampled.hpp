#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace gfbm {

/// Scaling of the multiplier operator relative to the Fourier pair
/// f^(u) = int e^{-iux} f(x) dx, f(x) = (1/2pi) int e^{iux} f^(u) du.
///   paper_literal:         multiplier sqrt(m)
///   covariance_consistent: multiplier sqrt(2 pi m); with this scaling
///                          sum_k b_k(t) b_k(s) converges to K_r(t, s).
enum class Convention { paper_literal, covariance_consistent };

std::string to_string(Convention c);
Convention convention_from_string(const std::string& text);

/// Factor applied to sqrt(m): 1 or sqrt(2 pi).
double multiplier_scale(Convention c);

/// Uniform grid start + i * step, i = 0 .. count-1.
struct Grid {
  double start = 0.0;
  double step = 1.0;
  std::size_t count = 0;

  double at(std::size_t i) const { return start + static_cast<double>(i) * step; }
  double back() const { return at(count - 1); }
  std::vector<double> points() const;

  /// Grid anchored at 0: points j*step for ceil(lo/step) <= j <= floor(hi/step).
  static Grid anchored(double lo, double hi, double step);

  bool operator==(const Grid&) const = default;
};

/// Samples of a (complex) function on a uniform grid, tagged with the
/// operator convention that produced them.
struct SampledFunction {
  Grid grid;
  std::vector<std::complex<double>> values;
  Convention convention = Convention::covariance_consistent;

  SampledFunction() = default;
  SampledFunction(Grid g, std::vector<std::complex<double>> v, Convention c);

  std::size_t size() const { return values.size(); }

  /// Pointwise a*this + b*other; throws DomainError on convention or grid
  /// mismatch.
  SampledFunction combine(std::complex<double> a, const SampledFunction& other,
                          std::complex<double> b) const;

  /// Grid inner product int f g* dx (trapezoid).
  std::complex<double> inner(const SampledFunction& other) const;
  double norm() const;
};

}  // namespace gfbm
