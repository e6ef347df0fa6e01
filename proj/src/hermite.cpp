#include "gfbm/hermite.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "gfbm/error.hpp"
#include "gfbm/quadrature.hpp"

namespace gfbm {

namespace {

const double kPiQuarter = std::pow(std::numbers::pi, -0.25);
constexpr double kRescaleAbove = 1e150;

// Runs the normalised recurrence, handing (n, mantissa, log scale) to `emit`
// for n = 1 .. n_max. The true value is mantissa * exp(log scale).
template <typename Emit>
void hermite_recurrence(int n_max, double x, Emit&& emit) {
  double log_scale = -0.5 * x * x;
  double prev = 0.0;
  double cur = kPiQuarter;
  emit(1, cur, log_scale);
  for (int n = 1; n < n_max; ++n) {
    const double next = std::sqrt(2.0 / n) * x * cur - std::sqrt((n - 1.0) / n) * prev;
    prev = cur;
    cur = next;
    if (std::abs(cur) > kRescaleAbove) {
      prev /= kRescaleAbove;
      cur /= kRescaleAbove;
      log_scale += std::log(kRescaleAbove);
    }
    emit(n + 1, cur, log_scale);
  }
}

double scaled(double mantissa, double log_scale) {
  if (mantissa == 0.0) return 0.0;
  const double log_abs = std::log(std::abs(mantissa)) + log_scale;
  if (log_abs < -745.0) return 0.0;
  return std::copysign(std::exp(log_abs), mantissa);
}

double log_abs_hermite(int n, double x) {
  double result = -std::numeric_limits<double>::infinity();
  hermite_recurrence(n, x, [&](int k, double mantissa, double log_scale) {
    if (k == n && mantissa != 0.0) result = std::log(std::abs(mantissa)) + log_scale;
  });
  return result;
}

}  // namespace

double hermite_poly(int n, double x) {
  if (n < 0) throw DomainError("Hermite polynomial degree must be >= 0");
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = x;
  for (int k = 1; k < n; ++k) {
    const double next = x * cur - k * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double hermite_function(int n, double x) {
  if (n < 1) throw DomainError("Hermite function index is one-based");
  double value = 0.0;
  hermite_recurrence(n, x, [&](int k, double mantissa, double log_scale) {
    if (k == n) value = scaled(mantissa, log_scale);
  });
  return value;
}

void hermite_functions(int n_max, double x, std::span<double> out) {
  if (n_max < 1) throw DomainError("Hermite function index is one-based");
  if (out.size() < static_cast<std::size_t>(n_max)) {
    throw DomainError("output span shorter than n_max");
  }
  // Fast path: no rescaling needed while e^{-x^2/2} stays representable.
  if (x * x < 1000.0) {
    double prev = 0.0;
    double cur = kPiQuarter * std::exp(-0.5 * x * x);
    out[0] = cur;
    for (int n = 1; n < n_max; ++n) {
      const double next = std::sqrt(2.0 / n) * x * cur - std::sqrt((n - 1.0) / n) * prev;
      prev = cur;
      cur = next;
      out[n] = cur;
    }
    return;
  }
  hermite_recurrence(n_max, x, [&](int k, double mantissa, double log_scale) {
    out[k - 1] = scaled(mantissa, log_scale);
  });
}

double fourier_property_check(int n, std::span<const double> frequencies, double tol) {
  if (n < 1) throw DomainError("Hermite function index is one-based");
  const double half_width = std::sqrt(2.0 * n + 1.0) + 12.0;
  // (-i)^{n-1}
  static constexpr std::complex<double> kPhase[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
  const std::complex<double> eigen = std::sqrt(2.0 * std::numbers::pi) * kPhase[(n - 1) % 4];
  double worst = 0.0;
  for (const double u : frequencies) {
    const int panels = 1 + static_cast<int>(std::ceil(2.0 * half_width *
                                                      (std::abs(u) + std::sqrt(2.0 * n + 1.0)) /
                                                      (2.0 * std::numbers::pi)));
    const auto re = quad::integrate_interval(
        [&](double x) { return std::cos(u * x) * hermite_function(n, x); }, -half_width,
        half_width, tol, 20000, panels);
    const auto im = quad::integrate_interval(
        [&](double x) { return -std::sin(u * x) * hermite_function(n, x); }, -half_width,
        half_width, tol, 20000, panels);
    const std::complex<double> transform(re.value, im.value);
    worst = std::max(worst, std::abs(transform - eigen * hermite_function(n, u)));
  }
  return worst;
}

HermiteBoundConstants fit_hermite_bound(int n_max, double step) {
  if (n_max < 1 || !(step > 0.0)) throw DomainError("fit_hermite_bound needs n_max >= 1, step > 0");
  double c = 0.0;
  for (int n = 1; n <= n_max; ++n) {
    const double edge = 2.0 * std::sqrt(static_cast<double>(n));
    const double scale = std::pow(static_cast<double>(n), 1.0 / 12.0);
    for (double u = 0.0; u <= edge; u += step) {
      c = std::max(c, std::abs(hermite_function(n, u)) * scale);
    }
  }
  c *= 1.05;

  double gamma = std::numeric_limits<double>::infinity();
  const double log_c = std::log(c);
  for (int n = 1; n <= n_max; ++n) {
    const double edge = 2.0 * std::sqrt(static_cast<double>(n));
    const double start = std::floor(edge / step) * step + step;
    for (double u = start; u <= edge + 30.0; u += step) {
      const double log_h = log_abs_hermite(n, u);
      if (!std::isfinite(log_h)) continue;
      gamma = std::min(gamma, (log_c - log_h) / (u * u));
    }
  }
  return {c, 0.95 * gamma};
}

double hermite_bound_ratio(const HermiteBoundConstants& constants, int n_max, double step) {
  double worst = 0.0;
  const double log_c = std::log(constants.c);
  for (int n = 1; n <= n_max; ++n) {
    const double edge = 2.0 * std::sqrt(static_cast<double>(n));
    const double inner_bound = constants.c * std::pow(static_cast<double>(n), -1.0 / 12.0);
    for (double u = 0.0; u <= edge + 30.0; u += step) {
      if (u <= edge) {
        worst = std::max(worst, std::abs(hermite_function(n, u)) / inner_bound);
      } else {
        const double log_h = log_abs_hermite(n, u);
        if (!std::isfinite(log_h)) continue;
        worst = std::max(worst, std::exp(log_h - log_c + constants.gamma * u * u));
      }
    }
  }
  return worst;
}

HermiteBasis::HermiteBasis(int max_index) : max_index_(max_index) {
  if (max_index < 1) throw DomainError("HermiteBasis needs at least one function");
}

const std::vector<double>& HermiteBasis::table(double start, double step, std::size_t count) {
  std::lock_guard lock(mutex_);
  const Key key{start, step, count};
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  std::vector<double> values(static_cast<std::size_t>(max_index_) * count);
  std::vector<double> column(static_cast<std::size_t>(max_index_));
  for (std::size_t i = 0; i < count; ++i) {
    hermite_functions(max_index_, start + static_cast<double>(i) * step, column);
    for (int n = 0; n < max_index_; ++n) values[static_cast<std::size_t>(n) * count + i] = column[n];
  }
  return cache_.emplace(key, std::move(values)).first->second;
}

}  // namespace gfbm
