#pragma once

#include <cstddef>
#include <map>
#include <mutex>
#include <span>
#include <vector>

namespace gfbm {

/// Probabilists' Hermite polynomial h_n(x): h_0 = 1, h_1 = x,
/// h_{n+1} = x h_n - n h_{n-1}.
double hermite_poly(int n, double x);

/// Normalised Hermite function, one-based:
///   h~_n(x) = h_{n-1}(sqrt(2) x) e^{-x^2/2} / (pi^{1/4} sqrt((n-1)!)).
/// Evaluated by the self-normalising recurrence
///   h~_{n+1} = sqrt(2/n) x h~_n - sqrt((n-1)/n) h~_{n-1},
/// with log-scaling for large |x| so nothing under/overflows.
double hermite_function(int n, double x);

/// Writes h~_1(x) .. h~_N(x) into out[0 .. N-1].
void hermite_functions(int n_max, double x, std::span<double> out);

/// Max over `frequencies` of |F[h~_n](u) - sqrt(2 pi) (-i)^{n-1} h~_n(u)|,
/// F[f](u) = int e^{-iux} f(x) dx computed by adaptive quadrature.
double fourier_property_check(int n, std::span<const double> frequencies,
                              double tol = 1e-12);

/// Constants in |h~_n(u)| <= C n^{-1/12} for |u| <= 2 sqrt(n) and
/// |h~_n(u)| <= C e^{-gamma u^2} for |u| > 2 sqrt(n).
struct HermiteBoundConstants {
  double c = 0.0;
  double gamma = 0.0;
};

/// Fits C and gamma over n <= n_max on a grid of spacing `step` (plus 5%
/// headroom on C so the fit transfers to finer grids).
HermiteBoundConstants fit_hermite_bound(int n_max, double step = 0.05);

/// Largest ratio |h~_n(u)| / bound(n, u) over n <= n_max on the grid; <= 1
/// means the bound holds everywhere tested.
double hermite_bound_ratio(const HermiteBoundConstants& constants, int n_max,
                           double step);

/// Tabulates h~_1..h~_N on uniform grids, caching per (grid start, step,
/// count). Safe for concurrent use.
class HermiteBasis {
 public:
  explicit HermiteBasis(int max_index);

  int max_index() const { return max_index_; }

  /// Row-major table: values[(n-1) * count + i] = h~_n(start + i step).
  const std::vector<double>& table(double start, double step, std::size_t count);

 private:
  struct Key {
    double start;
    double step;
    std::size_t count;
    auto operator<=>(const Key&) const = default;
  };
  int max_index_;
  std::mutex mutex_;
  std::map<Key, std::vector<double>> cache_;
};

}  // namespace gfbm
