#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "gfbm/quadrature.hpp"

namespace gfbm {

enum class DensityKind { fbm, quartic_gaussian, custom };

/// Behaviour of m(u) for |u| > 1.
///   gaussian: m(u) <= K' e^{-rate u^2}
///   power:    m(u) ~ |u|^{exponent}, exponent < 1
///   compact:  m(u) = 0 for |u| > cutoff
struct DensityTail {
  quad::TailKind kind = quad::TailKind::gaussian;
  double parameter = 1.0;  ///< rate, exponent or cutoff depending on kind
};

/// Declared metadata for user-supplied densities.
struct DensityBounds {
  double singularity_exponent = 0.0;  ///< b in m(u) <= K|u|^{-b}, |u| <= 1
  double near_zero_constant = 1.0;    ///< K
  double tail_constant = 1.0;         ///< K' in m(u) <= K', |u| > 1
  DensityTail tail;
};

/// A real, even spectral density m(u) >= 0 with dsigma = m(u) du.
///
/// Immutable after construction and cheap to copy (shared state).
class SpectralDensity {
 public:
  using Function = std::function<double(double)>;

  SpectralDensity(DensityKind kind, Function evaluate, DensityBounds bounds,
                  std::string descriptor, double hurst = 0.0);

  /// m(u). Evaluated at |u|; the density is even by construction.
  double operator()(double u) const { return state_->evaluate(u < 0 ? -u : u); }

  DensityKind kind() const { return state_->kind; }
  double hurst() const { return state_->hurst; }
  double singularity_exponent() const { return state_->bounds.singularity_exponent; }
  double near_zero_constant() const { return state_->bounds.near_zero_constant; }
  double tail_constant() const { return state_->bounds.tail_constant; }
  const DensityTail& tail() const { return state_->bounds.tail; }
  const DensityBounds& bounds() const { return state_->bounds; }

  /// m(u) <= K|u|^{-b} (|u|<=1), m(u) <= K' (|u|>1) with b < 2, K' finite.
  bool satisfies_bound() const;
  /// int m(u) du < infinity.
  bool summable() const;

  /// Canonical text describing the density; stable across runs.
  const std::string& descriptor() const { return state_->descriptor; }
  /// FNV-1a hash of the descriptor.
  std::uint64_t hash() const { return state_->hash; }

 private:
  struct State {
    DensityKind kind;
    Function evaluate;
    DensityBounds bounds;
    std::string descriptor;
    std::uint64_t hash;
    double hurst;
  };
  std::shared_ptr<const State> state_;
};

/// m(u) = |u|^{1-2H} / (2 pi), 0 < H < 1.
SpectralDensity make_fbm_density(double hurst);

/// m(u) = u^4 e^{-2u^2}.
SpectralDensity make_quartic_gaussian_density();

/// Density given by a closed-form expression in `u` (see expression.hpp).
SpectralDensity make_expression_density(const std::string& expression,
                                        const DensityBounds& bounds);

/// Tabulated (u, m) samples, u >= 0 ascending. Linear interpolation between
/// nodes, power law u^{-b} below the first positive node, zero beyond the last.
SpectralDensity make_table_density(std::vector<double> u, std::vector<double> m,
                                   const DensityBounds& bounds,
                                   const std::string& source = "inline");

/// Reads a two-column "u,m" CSV (header optional, '#' comments allowed).
SpectralDensity load_table_density(const std::string& path,
                                   const DensityBounds& bounds);

/// Outcome of numeric admissibility checks.
struct DensityValidation {
  bool nonnegative = true;
  bool finite = true;
  bool exponent_ok = true;   ///< b < 2
  bool bound_ok = true;      ///< declared K, K', b hold with 20% slack
  bool integrable = true;    ///< int m/(u^2+1) du converges
  double integral = 0.0;     ///< value of int m/(u^2+1) du
  double integral_error = 0.0;
  std::vector<std::string> problems;

  bool ok() const { return problems.empty(); }
};

/// Verifies non-negativity, the declared bound on a log grid
/// u in [2^-20, 1] (and [1, 10^3] for K'), and integrability.
DensityValidation validate_density(const SpectralDensity& m, double tol = 1e-10);

/// Throws DomainError listing every failed check.
void require_admissible(const SpectralDensity& m, double tol = 1e-10);

/// r(t) = int (1 - cos(tu)) m(u) / u^2 du. Throws NumericError when the
/// quadrature error estimate exceeds tol.
quad::Result structure_function_r(const SpectralDensity& m, double t,
                                  double tol = 1e-10);

/// V_H = Gamma(2-2H) cos(pi H) / (pi (1-2H) H), continuous at H = 1/2.
double fbm_variance_constant(double hurst);

/// Closed form V_H/2 (|t|^{2H} + |s|^{2H} - |t-s|^{2H}).
double fbm_covariance(double hurst, double t, double s);

}  // namespace gfbm
