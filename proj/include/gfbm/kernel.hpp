#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "gfbm/sampled.hpp"
#include "gfbm/spectral.hpp"

namespace gfbm {

/// K_r(t, s) = int chi_t(u) conj(chi_s(u)) m(u) du, chi_t = (e^{itu}-1)/(iu).
quad::Result kernel_eval(const SpectralDensity& m, double t, double s,
                         double tol = 1e-10);

/// r(t) + r(s) - r(t - s) (real case, r(0) = 0).
double kernel_from_r(const std::function<double(double)>& r, double t, double s);

/// Convenience: kernel_from_r with structure_function_r for m.
double kernel_from_structure(const SpectralDensity& m, double t, double s,
                             double tol = 1e-10);

/// sum_{k=1}^N b_k(t) b_k(s) in the given convention.
double parseval_truncation(const SpectralDensity& m, double t, double s, int n,
                           Convention conv);

/// Parseval sums for several N from one batched projection (N <= max).
std::vector<double> parseval_sequence(const SpectralDensity& m, double t, double s,
                                      const std::vector<int>& ns, Convention conv);

/// Smallest eigenvalue of [K(t_i, t_j)]; grid size <= 64.
double gram_psd_check(const SpectralDensity& m, const std::vector<double>& grid,
                      double tol = 1e-10);

/// Smallest eigenvalue of an explicit symmetric matrix (row-major n x n).
/// Throws std::logic_error if it is not symmetric.
double min_symmetric_eigenvalue(const std::vector<double>& matrix, std::size_t n);

struct QuadraticForm {
  double lhs = 0.0;  ///< int m(u) |f^(u)|^2 du
  double rhs = 0.0;  ///< double integral of f(t) f(s) m^(t - s)
};

/// Both sides of the double-integral identity for f(x) = amplitude *
/// exp(-x^2 / (2 width^2)). Requires a summable density.
QuadraticForm quadratic_form_identity(const SpectralDensity& m, double width,
                                      double amplitude = 1.0, double tol = 1e-12);

enum class KernelMethod { spectral_quadrature, closed_form_fbm, from_r, parseval };

std::string to_string(KernelMethod method);
KernelMethod kernel_method_from_string(const std::string& text);

struct KernelEntry {
  double t = 0.0;
  double s = 0.0;
  double value = 0.0;
  KernelMethod method = KernelMethod::spectral_quadrature;
  bool failed = false;  ///< quadrature failure; value is NaN
};

/// K_r on grid_t x grid_s for one method. Quadrature failures are recorded
/// per cell (NaN) rather than thrown.
struct KernelTable {
  std::vector<double> grid_t;
  std::vector<double> grid_s;
  std::vector<KernelEntry> entries;
  std::string density;
  Convention convention = Convention::covariance_consistent;

  bool any_failed() const;
};

KernelTable build_kernel_table(const SpectralDensity& m, const std::vector<double>& grid_t,
                               const std::vector<double>& grid_s,
                               const std::vector<KernelMethod>& methods,
                               Convention conv, double tol, int parseval_n = 400,
                               bool parallel = true);

/// Header "t,s,K,method,density,convention", values with 17 significant digits.
void write_kernel_csv(std::ostream& out, const KernelTable& table);

}  // namespace gfbm
