#include "gfbm/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "gfbm/error.hpp"
#include "gfbm/expression.hpp"
#include "gfbm/tm_cache.hpp"

namespace gfbm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string tail_descriptor(const DensityTail& tail) {
  const char* kind = tail.kind == quad::TailKind::gaussian ? "gaussian"
                     : tail.kind == quad::TailKind::power  ? "power"
                                                           : "compact";
  return std::string(kind) + ":" + format_double(tail.parameter);
}

std::string bounds_descriptor(const DensityBounds& b) {
  return "b=" + format_double(b.singularity_exponent) + ";K=" + format_double(b.near_zero_constant) +
         ";Kp=" + format_double(b.tail_constant) + ";tail=" + tail_descriptor(b.tail);
}

}  // namespace

SpectralDensity::SpectralDensity(DensityKind kind, Function evaluate, DensityBounds bounds,
                                 std::string descriptor, double hurst) {
  if (!evaluate) throw DomainError("spectral density needs an evaluation function");
  const std::uint64_t h = fnv1a(descriptor.data(), descriptor.size());
  state_ = std::make_shared<const State>(
      State{kind, std::move(evaluate), bounds, std::move(descriptor), h, hurst});
}

bool SpectralDensity::satisfies_bound() const {
  const auto& b = bounds();
  return b.singularity_exponent < 2.0 && std::isfinite(b.near_zero_constant) &&
         std::isfinite(b.tail_constant) && b.near_zero_constant > 0.0 && b.tail_constant > 0.0;
}

bool SpectralDensity::summable() const {
  if (singularity_exponent() >= 1.0) return false;
  switch (tail().kind) {
    case quad::TailKind::gaussian:
    case quad::TailKind::compact:
      return true;
    case quad::TailKind::power:
      return tail().parameter < -1.0;
  }
  return false;
}

SpectralDensity make_fbm_density(double hurst) {
  if (!(hurst > 0.0 && hurst < 1.0)) {
    throw DomainError("Hurst index must lie in (0, 1), got " + format_double(hurst));
  }
  const double exponent = 1.0 - 2.0 * hurst;
  const double scale = 1.0 / (2.0 * std::numbers::pi);
  DensityBounds bounds;
  bounds.singularity_exponent = std::max(0.0, 2.0 * hurst - 1.0);
  bounds.near_zero_constant = scale;
  bounds.tail_constant = hurst >= 0.5 ? scale : kInf;
  bounds.tail = {quad::TailKind::power, exponent};
  auto eval = [exponent, scale](double u) {
    if (u == 0.0) return exponent < 0.0 ? kInf : (exponent == 0.0 ? scale : 0.0);
    return scale * std::pow(u, exponent);
  };
  return SpectralDensity(DensityKind::fbm, eval, bounds, "fbm(H=" + format_double(hurst) + ")",
                         hurst);
}

SpectralDensity make_quartic_gaussian_density() {
  DensityBounds bounds;
  bounds.singularity_exponent = 0.0;
  bounds.near_zero_constant = std::exp(-2.0);
  bounds.tail_constant = std::exp(-2.0);
  bounds.tail = {quad::TailKind::gaussian, 2.0};
  auto eval = [](double u) {
    const double u2 = u * u;
    return u2 * u2 * std::exp(-2.0 * u2);
  };
  return SpectralDensity(DensityKind::quartic_gaussian, eval, bounds, "quartic_gaussian");
}

SpectralDensity make_expression_density(const std::string& expression,
                                        const DensityBounds& bounds) {
  Expression expr(expression);
  auto eval = [expr](double u) { return expr(u); };
  return SpectralDensity(DensityKind::custom, eval, bounds,
                         "expr(" + expression + ";" + bounds_descriptor(bounds) + ")");
}

SpectralDensity make_table_density(std::vector<double> u, std::vector<double> m,
                                   const DensityBounds& bounds, const std::string& source) {
  if (u.size() != m.size() || u.size() < 2) {
    throw DomainError("density table needs at least two (u, m) samples");
  }
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] < 0.0) throw DomainError("density table abscissae must be >= 0");
    if (i > 0 && !(u[i] > u[i - 1])) throw DomainError("density table abscissae must increase");
    if (!(m[i] >= 0.0) || !std::isfinite(m[i])) {
      throw DomainError("density table values must be finite and >= 0");
    }
  }
  DensityBounds b = bounds;
  b.tail = {quad::TailKind::compact, u.back()};
  const double exponent = b.singularity_exponent;
  std::uint64_t digest = fnv1a(u.data(), u.size() * sizeof(double));
  digest = fnv1a(m.data(), m.size() * sizeof(double), digest);

  auto eval = [u = std::move(u), m = std::move(m), exponent](double x) {
    const std::size_t first = u.front() > 0.0 ? 0 : 1;
    const double u0 = u[first];
    if (x < u0) {
      if (first == 1 && exponent == 0.0) {
        const double frac = x / u0;
        return (1.0 - frac) * m[0] + frac * m[1];
      }
      if (x == 0.0) return exponent > 0.0 ? kInf : m[first];
      return m[first] * std::pow(x / u0, -exponent);
    }
    if (x > u.back()) return 0.0;
    const auto it = std::upper_bound(u.begin(), u.end(), x);
    const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(it - u.begin()), u.size() - 1);
    if (i == 0) return m[0];
    const double frac = (x - u[i - 1]) / (u[i] - u[i - 1]);
    return (1.0 - frac) * m[i - 1] + frac * m[i];
  };
  char hex[20];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(digest));
  return SpectralDensity(DensityKind::custom, eval, b,
                         "table(" + source + ";" + hex + ";" + bounds_descriptor(b) + ")");
}

SpectralDensity load_table_density(const std::string& path, const DensityBounds& bounds) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open density table '" + path + "'");
  std::vector<double> u;
  std::vector<double> m;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    double a = 0.0;
    double b = 0.0;
    if (!(fields >> a >> b)) {
      if (u.empty()) continue;  // header row
      throw DomainError("density table '" + path + "' line " + std::to_string(line_no) +
                        " is not 'u,m'");
    }
    u.push_back(a);
    m.push_back(b);
  }
  return make_table_density(std::move(u), std::move(m), bounds, path);
}

DensityValidation validate_density(const SpectralDensity& m, double tol) {
  DensityValidation v;
  const double b = m.singularity_exponent();
  const double k_near = m.near_zero_constant();
  const double k_tail = m.tail_constant();
  constexpr double kSlack = 1.2;

  if (!(b < 2.0)) {
    v.exponent_ok = false;
    v.problems.push_back("singularity exponent b = " + format_double(b) + " must be < 2");
  }

  // Near zero: u = 2^{-20} .. 1, log spaced.
  constexpr int kPoints = 241;
  for (int i = 0; i < kPoints; ++i) {
    const double u = std::exp2(-20.0 + 20.0 * i / (kPoints - 1));
    const double value = m(u);
    if (!std::isfinite(value)) v.finite = false;
    if (value < 0.0) v.nonnegative = false;
    if (value > kSlack * k_near * std::pow(u, -b)) v.bound_ok = false;
  }
  // Beyond 1: u = 1 .. 10^3.
  for (int i = 1; i < kPoints; ++i) {
    const double u = std::pow(10.0, 3.0 * i / (kPoints - 1));
    const double value = m(u);
    if (!std::isfinite(value)) v.finite = false;
    if (value < 0.0) v.nonnegative = false;
    if (std::isfinite(k_tail) && value > kSlack * k_tail) v.bound_ok = false;
  }
  if (!v.finite) v.problems.push_back("density is not finite on the validation grid");
  if (!v.nonnegative) v.problems.push_back("density takes negative values");
  if (!v.bound_ok) {
    v.problems.push_back("declared bound m(u) <= K|u|^-b (|u|<=1), m(u) <= K' (|u|>1) fails "
                         "with 20% slack");
  }

  if (v.exponent_ok && v.finite && v.nonnegative) {
    quad::HalfLineIntegrand g;
    g.full = [&](double u) { return m(u) / (u * u + 1.0); };
    g.singular_exponent = std::max(0.0, b);
    const auto& tail = m.tail();
    if (tail.kind == quad::TailKind::power) {
      if (tail.parameter >= 1.0) {
        v.integrable = false;
      } else {
        g.tail = {quad::TailKind::power, 2.0 - tail.parameter};
        g.amplitude = g.full;
        g.amplitude_decay = 2.0 - tail.parameter;
        g.base_coeff = 1.0;
      }
    } else {
      g.tail = {tail.kind, tail.parameter};
    }
    if (v.integrable && g.singular_exponent < 1.0) {
      try {
        const quad::Result r = quad::integrate_half_line(g, tol);
        v.integral = 2.0 * r.value;
        v.integral_error = 2.0 * r.error;
      } catch (const std::exception&) {
        v.integrable = false;
      }
    } else {
      v.integrable = false;
    }
    if (!v.integrable) v.problems.push_back("int m(u)/(u^2+1) du does not converge");
  }
  return v;
}

void require_admissible(const SpectralDensity& m, double tol) {
  const DensityValidation v = validate_density(m, tol);
  if (v.ok()) return;
  std::string message = "inadmissible spectral density " + m.descriptor() + ":";
  for (const auto& p : v.problems) message += "\n  - " + p;
  throw DomainError(message);
}

quad::Result structure_function_r(const SpectralDensity& m, double t, double tol) {
  if (t == 0.0) return {0.0, 0.0};
  t = std::abs(t);
  quad::HalfLineIntegrand g;
  g.full = [&](double u) {
    const double h = std::sin(0.5 * t * u);
    return 2.0 * h * h / (u * u) * m(u);
  };
  g.singular_exponent = std::max(0.0, m.singularity_exponent());
  g.max_frequency = t;
  const auto& tail = m.tail();
  if (tail.kind == quad::TailKind::power) {
    g.tail = {quad::TailKind::power, 2.0 - tail.parameter};
    g.amplitude = [&](double u) { return m(u) / (u * u); };
    g.amplitude_decay = 2.0 - tail.parameter;
    g.base_coeff = 1.0;
    g.terms = {{-1.0, t, quad::Trig::cos}};
  } else {
    g.tail = {tail.kind, tail.parameter};
  }
  const quad::Result half = quad::integrate_half_line(g, tol / 2.0);
  const quad::Result r{2.0 * half.value, 2.0 * half.error};
  if (r.error > tol) throw NumericError("structure function quadrature exceeded tolerance", r.error);
  return r;
}

double fbm_variance_constant(double hurst) {
  if (!(hurst > 0.0 && hurst < 1.0)) throw DomainError("Hurst index must lie in (0, 1)");
  // cos(pi H) / (pi (1-2H)) = sinc(pi (1/2 - H)) / 2, finite at H = 1/2.
  const double x = std::numbers::pi * (0.5 - hurst);
  const double sinc = std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x;
  return std::tgamma(2.0 - 2.0 * hurst) * sinc / (2.0 * hurst);
}

double fbm_covariance(double hurst, double t, double s) {
  const double v = fbm_variance_constant(hurst);
  const double two_h = 2.0 * hurst;
  return 0.5 * v * (std::pow(std::abs(t), two_h) + std::pow(std::abs(s), two_h) -
                    std::pow(std::abs(t - s), two_h));
}

}  // namespace gfbm
