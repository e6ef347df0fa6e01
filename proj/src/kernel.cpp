#include "gfbm/kernel.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "gfbm/error.hpp"
#include "gfbm/kernels.hpp"
#include "gfbm/operator.hpp"

namespace gfbm {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

quad::Result kernel_eval(const SpectralDensity& m, double t, double s, double tol) {
  if (t == 0.0 || s == 0.0) return {0.0, 0.0};
  const double value = quad::oscillatory_transform(m, quad::Weight::chi_product, 0.0, tol, t, s).real();
  return {value, tol};
}

double kernel_from_r(const std::function<double(double)>& r, double t, double s) {
  return r(t) + r(s) - r(t - s);
}

double kernel_from_structure(const SpectralDensity& m, double t, double s, double tol) {
  return kernel_from_r([&](double x) { return structure_function_r(m, x, tol / 3.0).value; }, t, s);
}

std::vector<double> parseval_sequence(const SpectralDensity& m, double t, double s,
                                      const std::vector<int>& ns, Convention conv) {
  int n_max = 0;
  for (int n : ns) {
    if (n < 0) throw DomainError("truncation N must be >= 0");
    n_max = std::max(n_max, n);
  }
  std::vector<double> out(ns.size(), 0.0);
  if (n_max == 0) return out;
  const HermiteModes modes(m, n_max, std::vector<double>{t, s}, conv);
  for (std::size_t i = 0; i < ns.size(); ++i) out[i] = modes.truncated_covariance(0, 1, ns[i]);
  return out;
}

double parseval_truncation(const SpectralDensity& m, double t, double s, int n, Convention conv) {
  return parseval_sequence(m, t, s, {n}, conv).front();
}

double min_symmetric_eigenvalue(const std::vector<double>& matrix, std::size_t n) {
  if (matrix.size() != n * n) throw std::logic_error("matrix size does not match n x n");
  double scale = 0.0;
  for (double v : matrix) scale = std::max(scale, std::abs(v));
  Eigen::MatrixXd a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (std::abs(matrix[i * n + j] - matrix[j * n + i]) > 1e-12 * scale) {
        throw std::logic_error("eigensolve needs a symmetric matrix");
      }
      a(i, j) = matrix[i * n + j];
    }
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::logic_error("symmetric eigensolve failed");
  return solver.eigenvalues().minCoeff();
}

double gram_psd_check(const SpectralDensity& m, const std::vector<double>& grid, double tol) {
  if (grid.empty() || grid.size() > 64) throw DomainError("gram_psd_check takes 1..64 points");
  const std::vector<double> gram =
      omp::kernel_table([&](double t, double s) { return kernel_eval(m, t, s, tol).value; }, grid);
  return min_symmetric_eigenvalue(gram, grid.size());
}

QuadraticForm quadratic_form_identity(const SpectralDensity& m, double width, double amplitude,
                                      double tol) {
  if (!m.summable()) throw DomainError("quadratic-form identity needs int m(u) du < infinity");
  if (!(width > 0.0)) throw DomainError("test function width must be positive");
  if (amplitude == 0.0) return {0.0, 0.0};
  const double w2 = width * width;
  const double a2 = amplitude * amplitude;
  const double gauss_rate = m.tail().kind == quad::TailKind::gaussian ? m.tail().parameter : 0.0;

  // |f^(u)|^2 = 2 pi a^2 w^2 e^{-w^2 u^2}
  quad::HalfLineIntegrand lhs_g;
  lhs_g.full = [&](double u) { return m(u) * std::exp(-w2 * u * u); };
  lhs_g.singular_exponent = std::max(0.0, m.singularity_exponent());
  lhs_g.tail = {quad::TailKind::gaussian, w2 + gauss_rate};
  const double lhs = 2.0 * std::numbers::pi * a2 * w2 * 2.0 *
                     quad::integrate_half_line(lhs_g, tol).value;

  // m^ on a dense grid, then int m^(x) (f * f~)(x) dx with the
  // autocorrelation a^2 w sqrt(pi) e^{-x^2/(4w^2)}.
  auto m_hat = [&](double x) {
    quad::HalfLineIntegrand g;
    g.full = [&](double u) { return std::cos(x * u) * m(u); };
    g.singular_exponent = std::max(0.0, m.singularity_exponent());
    g.max_frequency = std::abs(x);
    if (m.tail().kind == quad::TailKind::power) {
      g.tail = {quad::TailKind::power, -m.tail().parameter};
      g.amplitude = [&](double u) { return m(u); };
      g.amplitude_decay = -m.tail().parameter;
      g.terms = {{1.0, x, quad::Trig::cos}};
    } else {
      g.tail = {m.tail().kind, m.tail().parameter};
    }
    return 2.0 * quad::integrate_half_line(g, tol * 1e-2).value;
  };
  const double x_max = width * std::sqrt(4.0 * std::log(1e17));
  constexpr int kSteps = 2000;
  const double h = x_max / kSteps;
  double rhs = 0.5 * m_hat(0.0);
  for (int i = 1; i <= kSteps; ++i) {
    const double x = i * h;
    rhs += m_hat(x) * std::exp(-x * x / (4.0 * w2));
  }
  rhs *= 2.0 * h * a2 * width * std::sqrt(std::numbers::pi);
  return {lhs, rhs};
}

std::string to_string(KernelMethod method) {
  switch (method) {
    case KernelMethod::spectral_quadrature: return "spectral_quadrature";
    case KernelMethod::closed_form_fbm: return "closed_form_fbm";
    case KernelMethod::from_r: return "from_r";
    case KernelMethod::parseval: return "parseval";
  }
  return "unknown";
}

KernelMethod kernel_method_from_string(const std::string& text) {
  for (auto method : {KernelMethod::spectral_quadrature, KernelMethod::closed_form_fbm,
                      KernelMethod::from_r, KernelMethod::parseval}) {
    if (to_string(method) == text) return method;
  }
  throw ConfigError("unknown kernel method '" + text +
                    "' (expected spectral_quadrature, closed_form_fbm, from_r or parseval)");
}

bool KernelTable::any_failed() const {
  for (const auto& e : entries) {
    if (e.failed) return true;
  }
  return false;
}

KernelTable build_kernel_table(const SpectralDensity& m, const std::vector<double>& grid_t,
                               const std::vector<double>& grid_s,
                               const std::vector<KernelMethod>& methods, Convention conv,
                               double tol, int parseval_n, bool parallel) {
  KernelTable table;
  table.grid_t = grid_t;
  table.grid_s = grid_s;
  table.density = m.descriptor();
  table.convention = conv;
  const std::size_t nt = grid_t.size();
  const std::size_t ns = grid_s.size();

  for (const KernelMethod method : methods) {
    std::function<double(double, double)> pair;
    std::vector<double> parseval_values;
    switch (method) {
      case KernelMethod::spectral_quadrature:
        pair = [&](double t, double s) { return kernel_eval(m, t, s, tol).value; };
        break;
      case KernelMethod::from_r:
        pair = [&](double t, double s) { return kernel_from_structure(m, t, s, tol); };
        break;
      case KernelMethod::closed_form_fbm:
        if (m.kind() != DensityKind::fbm) {
          throw DomainError("closed_form_fbm needs an fBm density, got " + m.descriptor());
        }
        pair = [&](double t, double s) { return fbm_covariance(m.hurst(), t, s); };
        break;
      case KernelMethod::parseval: {
        std::vector<double> times = grid_t;
        times.insert(times.end(), grid_s.begin(), grid_s.end());
        const HermiteModes modes(m, parseval_n, times, conv, parallel);
        parseval_values.resize(nt * ns);
        for (std::size_t i = 0; i < nt; ++i) {
          for (std::size_t j = 0; j < ns; ++j) {
            parseval_values[i * ns + j] = modes.truncated_covariance(i, nt + j);
          }
        }
        break;
      }
    }

    std::vector<double> values(nt * ns, kNaN);
    if (method == KernelMethod::parseval) {
      values = std::move(parseval_values);
    } else {
      auto guarded = [&](double t, double s) {
        try {
          return pair(t, s);
        } catch (const NumericError&) {
          return kNaN;
        }
      };
      if (grid_t == grid_s) {
        values = parallel ? omp::kernel_table(guarded, grid_t) : serial::kernel_table(guarded, grid_t);
      } else {
        for (std::size_t i = 0; i < nt; ++i) {
          for (std::size_t j = 0; j < ns; ++j) values[i * ns + j] = guarded(grid_t[i], grid_s[j]);
        }
      }
    }
    for (std::size_t i = 0; i < nt; ++i) {
      for (std::size_t j = 0; j < ns; ++j) {
        const double v = values[i * ns + j];
        table.entries.push_back({grid_t[i], grid_s[j], v, method, std::isnan(v)});
      }
    }
  }
  return table;
}

void write_kernel_csv(std::ostream& out, const KernelTable& table) {
  out << "t,s,K,method,density,convention\n";
  char buf[128];
  for (const auto& e : table.entries) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,", e.t, e.s, e.value);
    out << buf << to_string(e.method) << ",\"" << table.density << "\"," << to_string(table.convention)
        << '\n';
  }
}

}  // namespace gfbm
