#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

// Data-parallel kernels. Each kernel has a serial reference in
// gfbm::serial and an OpenMP version in gfbm::omp that performs the same
// arithmetic in the same order per output element, so results agree
// bit-for-bit.

namespace gfbm {

/// Input to the batched Hermite projection
///   T_k(t) = (2/sqrt(2pi)) s_k int_0^U w(u) h~_k(u) c_k(tu) du
///   b_k(t) = (2/sqrt(2pi)) s_k int_0^U w(u) h~_k(u) g_k(tu) / u du
/// with s_k = (-1)^{floor((k-1)/2)}, (c_k, g_k) = (cos, sin) for odd k and
/// (sin, 1 - cos) for even k. w = sqrt(mu) is the (even) operator symbol.
struct ProjectionInput {
  std::function<double(double)> symbol;
  double singular_exponent = 0.0;  ///< symbol ~ u^{-p} near 0
  double cutoff = 0.0;             ///< U
  int n_modes = 0;
  std::vector<double> times;
};

struct ProjectionTable {
  int n_modes = 0;
  std::vector<double> times;
  std::vector<double> tm;  ///< (k-1) * times.size() + j
  std::vector<double> b;
  double error_estimate = 0.0;  ///< max |fine - coarse| over both tables

  double tm_at(int k, std::size_t j) const { return tm[(k - 1) * times.size() + j]; }
  double b_at(int k, std::size_t j) const { return b[(k - 1) * times.size() + j]; }
};

/// Natural cutoff for the Hermite factor: h~_k is negligible past
/// sqrt(2k+1) + 12.
double hermite_cutoff(int n_modes);

/// Paths B[p][j] = sum_k coeff[k][j] xi_{p,k}, xi from the counter-based
/// generator keyed by (seed, p, k). coeff is row-major n_modes x n_times.
struct SynthesisInput {
  const std::vector<double>* coefficients = nullptr;
  int n_modes = 0;
  std::size_t n_times = 0;
  std::size_t n_paths = 0;
  std::uint64_t seed = 0;
};

/// Symmetric table K[i][j] = kernel(x_i, x_j); only i <= j is evaluated.
using PairFunction = std::function<double(double, double)>;

namespace serial {
ProjectionTable hermite_projection(const ProjectionInput& in);
std::vector<double> synthesize_paths(const SynthesisInput& in);
std::vector<double> kernel_table(const PairFunction& k, const std::vector<double>& x);
}  // namespace serial

namespace omp {
ProjectionTable hermite_projection(const ProjectionInput& in);
std::vector<double> synthesize_paths(const SynthesisInput& in);
std::vector<double> kernel_table(const PairFunction& k, const std::vector<double>& x);
int max_threads();
}  // namespace omp

}  // namespace gfbm
