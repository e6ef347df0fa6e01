#pragma once

// Independent reference computations for the unit tests. Deliberately
// simple and slow; none of them call into the library's quadrature.

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

// Composite trapezoid with n intervals on [a, b].
inline double trapezoid(const std::function<double(double)>& f, double a, double b, long n) {
  const double h = (b - a) / static_cast<double>(n);
  double sum = 0.5 * (f(a) + f(b));
  for (long i = 1; i < n; ++i) sum += f(a + h * static_cast<double>(i));
  return sum * h;
}

// Coefficients (ascending) of the polynomial p_n with
// d^n/dx^n e^{-x^2/2} = p_n(x) e^{-x^2/2}, via d/dx[p e^{-x^2/2}] = (p' - x p) e^{-x^2/2}.
inline std::vector<double> gaussian_derivative_poly(int n) {
  std::vector<double> p{1.0};
  for (int step = 0; step < n; ++step) {
    std::vector<double> next(p.size() + 1, 0.0);
    for (std::size_t i = 1; i < p.size(); ++i) next[i - 1] += static_cast<double>(i) * p[i];
    for (std::size_t i = 0; i < p.size(); ++i) next[i + 1] -= p[i];
    p = next;
  }
  return p;
}

inline double poly(const std::vector<double>& c, double x) {
  double v = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) v = v * x + c[i];
  return v;
}

// Probabilists' Hermite polynomial from the Rodrigues formula:
// h_n(x) = (-1)^n e^{x^2/2} d^n/dx^n e^{-x^2/2}.
inline double rodrigues_hermite(int n, double x) {
  const double sign = n % 2 == 0 ? 1.0 : -1.0;
  return sign * poly(gaussian_derivative_poly(n), x);
}

// h~_n(x) = pi^{-1/4} ((n-1)!)^{-1/2} h_{n-1}(sqrt2 x) e^{-x^2/2}, n >= 1.
inline double hermite_function(int n, double x) {
  const double norm = std::pow(std::numbers::pi, -0.25) / std::sqrt(std::tgamma(n));
  return norm * rodrigues_hermite(n - 1, std::sqrt(2.0) * x) * std::exp(-0.5 * x * x);
}

}  // namespace oracle
