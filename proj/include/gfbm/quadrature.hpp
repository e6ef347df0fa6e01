#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace gfbm {

class SpectralDensity;
struct SampledFunction;

namespace quad {

struct Result {
  double value = 0.0;
  double error = 0.0;
};

struct ComplexResult {
  std::complex<double> value;
  double error = 0.0;
};

using RealFn = std::function<double(double)>;
using ComplexFn = std::function<std::complex<double>(double)>;

/// Shared tolerance defaults (config keys quad.tol / quad.max_refinements).
struct Options {
  double tol = 1e-10;
  int max_refinements = 4000;
};

/// Adaptive Gauss-Kronrod (7/15) on [a, b] with global bisection. The error
/// estimate is the sum of |K15 - G7| over the final panels. `initial_panels`
/// seeds a uniform partition, used to resolve oscillations.
Result integrate_interval(const RealFn& f, double a, double b, double tol,
                          int max_panels = 4000, int initial_panels = 1);

/// Same as integrate_interval for an integrand behaving like (u - a)^(-p),
/// p < 1, near the left endpoint. Uses u = a + (b - a) v^beta, beta = 1/(1-p);
/// negative p (a branch point such as u^{1/4}) is smoothed the same way.
Result integrate_singular_left(const RealFn& f, double a, double b, double p,
                               double tol, int max_panels = 4000,
                               int initial_panels = 1);

/// Integral over [a, inf) of f with |f(u)| ~ u^(-q), q > 1, no oscillation.
/// Maps u = a / v onto (0, 1].
Result integrate_power_tail(const RealFn& f, double a, double q, double tol,
                            int max_panels = 4000);

enum class Trig { cos, sin };

/// Integral over [a, inf) of f(u) * trig(omega u) for slowly decaying f.
/// Sums half-period panels and accelerates the partial sums with Wynn's
/// epsilon algorithm.
Result integrate_oscillatory_tail(const RealFn& f, double a, double omega,
                                  Trig trig, double tol, int max_panels = 4000);

/// Extrapolated limit of a sequence of partial sums; error is the distance
/// between the last two diagonal estimates.
Result wynn_epsilon(std::span<const double> partial_sums);

// ---------------------------------------------------------------------------
// Whole-line integrals with declared structure.

enum class TailKind { gaussian, power, compact };

/// Decay of |amplitude(u)| for |u| > 1: gaussian means <= e^{-rate u^2},
/// power means ~ |u|^{-rate} (rate > 1 when non-oscillatory), compact means
/// zero beyond |u| = rate.
struct TailDecay {
  TailKind kind = TailKind::gaussian;
  double rate = 1.0;
};

/// Integrand amplitude(u) * e^{i frequency u} on the real line.
struct IntegrandSpec {
  ComplexFn amplitude;
  bool singular_at_zero = false;
  double singular_exponent = 0.0;  ///< p < 1, amplitude ~ |u|^{-p}
  double frequency = 0.0;
  TailDecay tail;
};

/// Validates the IntegrandSpec invariants; throws DomainError.
void validate(const IntegrandSpec& spec);

/// Truncation point for a gaussian tail so the dropped mass is below tol/10.
double gaussian_cutoff(double rate, double tol);

/// Three-piece sum over (-inf,-1], [-1,1], [1,inf).
ComplexResult integrate_line(const IntegrandSpec& spec, double tol,
                             int max_panels = 4000);

// ---------------------------------------------------------------------------
// Even integrands on the half line [0, inf).

struct OscillatoryTerm {
  double coeff = 1.0;
  double omega = 0.0;
  Trig trig = Trig::cos;
};

/// Describes g on [0, inf). `full` is used on [0, 1] and, for gaussian or
/// compact tails, on the whole tail. For power tails the tail [1, inf) is
/// split as
///   g(u) = base_coeff * amplitude(u) + sum_i coeff_i amplitude(u) trig(omega_i u)
/// so that cancelling non-oscillatory parts are integrated exactly once.
struct HalfLineIntegrand {
  RealFn full;
  double singular_exponent = 0.0;  ///< full ~ u^{-p} near 0
  double max_frequency = 0.0;      ///< sets the initial paneling
  TailDecay tail;                  ///< decay of `full`
  RealFn amplitude;                ///< power tails only
  double amplitude_decay = 2.0;    ///< amplitude ~ u^{-q}
  double base_coeff = 0.0;
  std::vector<OscillatoryTerm> terms;
};

Result integrate_half_line(const HalfLineIntegrand& g, double tol,
                           int max_panels = 4000);

// ---------------------------------------------------------------------------
// Fixed composite Gauss-Legendre rules for batched (vectorised) transforms.

struct NodeSet {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre nodes/weights of the given order on [-1, 1] (Newton on P_n).
NodeSet gauss_legendre(int order);

/// Composite Gauss-Legendre rule on [a, b] with panels no wider than
/// `max_panel`. When `singular_exponent` p != 0 the part of [a, b] inside
/// [a, a+1] is mapped with u = a + v^beta, beta = 1/(1-p), which absorbs a
/// (u-a)^{-p} singularity or branch point.
NodeSet composite_rule(double a, double b, double max_panel, int order = 16,
                       double singular_exponent = 0.0);

// ---------------------------------------------------------------------------
// Spectral-density specific transforms.

enum class Weight { sqrt_m, m_over_u2_one_minus_cos, chi_product };

/// Oscillatory integrals over m(u) du needed by the kernel and operator code:
///   sqrt_m:                  int e^{i freq u} sqrt(m(u)) du
///   m_over_u2_one_minus_cos: int (1 - cos(freq u)) m(u) / u^2 du  (= r(freq))
///   chi_product:             int chi_t(u) conj(chi_s(u)) m(u) du,
///                            chi_t(u) = (e^{itu} - 1)/(iu)  (= K_r(t, s))
/// For chi_product, t and s are passed explicitly; freq is unused.
std::complex<double> oscillatory_transform(const SpectralDensity& m,
                                           Weight weight, double freq,
                                           double tol, double t = 0.0,
                                           double s = 0.0);

/// Composite trapezoid of samples over [a, b]; exact for linear f. The
/// endpoints need not be grid points (linear interpolation is used there).
double finite_integral(const SampledFunction& f, double a, double b);

}  // namespace quad
}  // namespace gfbm
