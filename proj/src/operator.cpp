#include "gfbm/operator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gfbm/error.hpp"
#include "gfbm/tm_cache.hpp"

namespace gfbm {

namespace {

constexpr double kPi = std::numbers::pi;

// sqrt(mu) ~ u^{-p} near 0; negative p is a branch point.
double symbol_exponent(const SpectralDensity& m) {
  if (m.kind() == DensityKind::fbm) return m.hurst() - 0.5;
  return 0.5 * m.singularity_exponent();
}

quad::RealFn symbol(const SpectralDensity& m, Convention conv) {
  const double scale = multiplier_scale(conv);
  return [m, scale](double u) { return scale * std::sqrt(m(u)); };
}

void require_bound(const SpectralDensity& m) {
  if (!m.satisfies_bound()) {
    throw DomainError("density " + m.descriptor() +
                      " does not satisfy m(u) <= K|u|^-b, m(u) <= K' with b < 2 and finite K'");
  }
}

void add_sin_term(std::vector<quad::OscillatoryTerm>& terms, double coeff, double omega) {
  if (omega != 0.0) terms.push_back({coeff, omega, quad::Trig::sin});
}

double sign_of_mode(int k) { return ((k - 1) / 2) % 2 == 0 ? 1.0 : -1.0; }

// int_0^U sqrt(mu) h~_k(u) f(u) du with the Hermite factor bounding the range.
quad::Result hermite_weighted(const SpectralDensity& m, Convention conv, int k, double freq,
                              const quad::RealFn& f, double tol) {
  if (k < 1) throw DomainError("Hermite mode index is one-based");
  const quad::RealFn sym = symbol(m, conv);
  quad::HalfLineIntegrand g;
  g.full = [&](double u) { return sym(u) * hermite_function(k, u) * f(u); };
  g.singular_exponent = symbol_exponent(m);
  g.max_frequency = std::abs(freq) + std::sqrt(2.0 * k + 1.0);
  g.tail = {quad::TailKind::compact, hermite_cutoff(k)};
  return quad::integrate_half_line(g, tol, 20000);
}

}  // namespace

quad::Result tm_indicator_value(const SpectralDensity& m, double t, double s, Convention conv,
                                double tol) {
  if (t == 0.0) return {0.0, 0.0};
  const quad::RealFn sym = symbol(m, conv);
  quad::HalfLineIntegrand g;
  g.full = [&](double u) { return sym(u) * (std::sin(s * u) - std::sin((s - t) * u)) / u; };
  g.singular_exponent = symbol_exponent(m);
  g.max_frequency = std::max(std::abs(s), std::abs(s - t));
  const auto& tail = m.tail();
  switch (tail.kind) {
    case quad::TailKind::gaussian:
      g.tail = {quad::TailKind::gaussian, 0.5 * tail.parameter};
      break;
    case quad::TailKind::compact:
      g.tail = {quad::TailKind::compact, tail.parameter};
      break;
    case quad::TailKind::power:
      g.tail = {quad::TailKind::power, 1.0 - 0.5 * tail.parameter};
      g.amplitude = [&](double u) { return sym(u) / u; };
      g.amplitude_decay = 1.0 - 0.5 * tail.parameter;
      add_sin_term(g.terms, 1.0, s);
      add_sin_term(g.terms, -1.0, s - t);
      break;
  }
  const quad::Result r = quad::integrate_half_line(g, kPi * tol);
  const double sign = t > 0.0 ? 1.0 : -1.0;
  return {sign * r.value / kPi, r.error / kPi};
}

SampledFunction apply_tm_indicator(const SpectralDensity& m, double t, const Grid& grid,
                                   Convention conv, double tol) {
  std::vector<std::complex<double>> values(grid.count);
  for (std::size_t i = 0; i < grid.count; ++i) {
    values[i] = tm_indicator_value(m, t, grid.at(i), conv, tol).value;
  }
  return SampledFunction(grid, std::move(values), conv);
}

quad::Result tm_hermite_value(const SpectralDensity& m, int k, double s, Convention conv,
                              double tol) {
  const double pre = 2.0 / std::sqrt(2.0 * kPi) * sign_of_mode(k);
  const bool odd = k % 2 == 1;
  const quad::Result r = hermite_weighted(
      m, conv, k, s, [&](double u) { return odd ? std::cos(s * u) : std::sin(s * u); },
      tol / std::abs(pre));
  return {pre * r.value, std::abs(pre) * r.error};
}

quad::Result b_coefficient_value(const SpectralDensity& m, int k, double t, Convention conv,
                                 double tol) {
  if (t == 0.0) return {0.0, 0.0};
  const double pre = 2.0 / std::sqrt(2.0 * kPi) * sign_of_mode(k);
  const bool odd = k % 2 == 1;
  const quad::Result r = hermite_weighted(
      m, conv, k, t,
      [&](double u) {
        if (odd) return std::sin(t * u) / u;
        const double h = std::sin(0.5 * t * u);
        return 2.0 * h * h / u;
      },
      tol / std::abs(pre));
  return {pre * r.value, std::abs(pre) * r.error};
}

ProjectionInput projection_input(const SpectralDensity& m, int n_modes, std::vector<double> times,
                                 Convention conv) {
  ProjectionInput in;
  in.symbol = symbol(m, conv);
  in.singular_exponent = symbol_exponent(m);
  in.cutoff = hermite_cutoff(n_modes);
  if (m.tail().kind == quad::TailKind::compact) in.cutoff = std::min(in.cutoff, m.tail().parameter);
  in.n_modes = n_modes;
  in.times = std::move(times);
  return in;
}

HermiteModes::HermiteModes(const SpectralDensity& m, int n_modes, std::vector<double> times,
                           Convention conv, bool parallel)
    : conv_(conv), density_hash_(m.hash()) {
  table_.n_modes = n_modes;
  table_.times = std::move(times);
  compute(m, parallel);
}

HermiteModes::HermiteModes(const SpectralDensity& m, int n_modes, const Grid& grid,
                           Convention conv, TmCache* cache, bool parallel)
    : conv_(conv), density_hash_(m.hash()) {
  table_.n_modes = n_modes;
  table_.times = grid.points();
  if (cache == nullptr) {
    compute(m, parallel);
    return;
  }
  if (cache->density_hash() != m.hash() || cache->convention() != conv) {
    throw DomainError("T_m cache belongs to a different density or convention");
  }
  const std::size_t n_times = grid.count;
  table_.tm.resize(static_cast<std::size_t>(n_modes) * n_times);
  table_.b.resize(table_.tm.size());
  bool complete = true;
  for (int k = 1; k <= n_modes && complete; ++k) {
    const auto tm = cache->find(TmCache::Quantity::tm, k, grid);
    const auto b = cache->find(TmCache::Quantity::b, k, grid);
    if (!tm || !b) {
      complete = false;
      break;
    }
    std::copy(tm->begin(), tm->end(), table_.tm.begin() + (k - 1) * n_times);
    std::copy(b->begin(), b->end(), table_.b.begin() + (k - 1) * n_times);
  }
  if (complete) {
    from_cache_ = true;
    return;
  }
  compute(m, parallel);
  for (int k = 1; k <= n_modes; ++k) {
    const auto offset = static_cast<std::ptrdiff_t>((k - 1) * n_times);
    cache->insert(TmCache::Quantity::tm, k, grid,
                  {table_.tm.begin() + offset, table_.tm.begin() + offset + n_times});
    cache->insert(TmCache::Quantity::b, k, grid,
                  {table_.b.begin() + offset, table_.b.begin() + offset + n_times});
  }
  cache->save();
}

void HermiteModes::compute(const SpectralDensity& m, bool parallel) {
  require_bound(m);
  if (table_.n_modes < 1) throw DomainError("HermiteModes needs at least one mode");
  const ProjectionInput in = projection_input(m, table_.n_modes, table_.times, conv_);
  table_ = parallel ? omp::hermite_projection(in) : serial::hermite_projection(in);
}

double HermiteModes::truncated_covariance(std::size_t i, std::size_t j, int n) const {
  if (n < 0 || n > table_.n_modes) n = table_.n_modes;
  double sum = 0.0;
  for (int k = 1; k <= n; ++k) sum += b(k, i) * b(k, j);
  return sum;
}

SampledFunction apply_tm_hermite(const SpectralDensity& m, int k, const Grid& grid, Convention conv,
                                 TmCache* cache) {
  const HermiteModes modes(m, k, grid, conv, cache);
  std::vector<std::complex<double>> values(grid.count);
  for (std::size_t j = 0; j < grid.count; ++j) values[j] = modes.tm(k, j);
  return SampledFunction(grid, std::move(values), conv);
}

double b_coefficient(const SpectralDensity& m, int k, double t, Convention conv) {
  if (t == 0.0) return 0.0;
  const HermiteModes modes(m, k, std::vector<double>{t}, conv, false);
  return modes.b(k, 0);
}

SampledFunction apply_tm_sampled(const SpectralDensity& m, const SampledFunction& f, double tol) {
  const Grid& grid = f.grid;
  if (grid.count < 2) throw DomainError("apply_tm_sampled needs at least two samples");
  const std::size_t n = grid.count;
  std::vector<double> w(n, grid.step);
  w.front() = w.back() = 0.5 * grid.step;

  auto transform = [&](double u) {
    std::complex<double> sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += w[i] * f.values[i].real() * std::polar(1.0, -u * grid.at(i));
    return sum;
  };

  const quad::RealFn sym = symbol(m, f.convention);
  const double nyquist = kPi / grid.step;
  constexpr int kScan = 2000;
  double peak = 0.0;
  std::vector<double> amplitude(kScan + 1);
  for (int i = 1; i <= kScan; ++i) {
    const double u = nyquist * i / kScan;
    amplitude[i] = std::abs(transform(u)) * std::max(1.0, sym(u));
    peak = std::max(peak, amplitude[i]);
  }
  int last = 1;
  for (int i = 1; i <= kScan; ++i) {
    if (amplitude[i] > 1e-3 * tol * std::max(1.0, peak)) last = i;
  }
  const double cutoff = nyquist * std::min(kScan, last + 1) / kScan;

  const double x_max = std::max(std::abs(grid.at(0)), std::abs(grid.back()));
  const double panel = std::min(0.5, kPi / (2.0 * x_max + 1.0));
  const double p = symbol_exponent(m);

  auto invert = [&](double width) {
    const quad::NodeSet rule = quad::composite_rule(0.0, cutoff, width, 16, p);
    std::vector<std::complex<double>> weighted(rule.nodes.size());
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      weighted[q] = rule.weights[q] * sym(rule.nodes[q]) * transform(rule.nodes[q]);
    }
    std::vector<double> out(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double s = grid.at(j);
      double sum = 0.0;
      for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        const double su = s * rule.nodes[q];
        sum += weighted[q].real() * std::cos(su) - weighted[q].imag() * std::sin(su);
      }
      out[j] = sum / kPi;
    }
    return out;
  };

  const std::vector<double> fine = invert(panel);
  const std::vector<double> coarse = invert(2.0 * panel);
  double err = 0.0;
  double scale = 1.0;
  std::vector<std::complex<double>> values(n);
  for (std::size_t j = 0; j < n; ++j) {
    err = std::max(err, std::abs(fine[j] - coarse[j]));
    scale = std::max(scale, std::abs(fine[j]));
    values[j] = fine[j];
  }
  if (err > tol * scale) throw NumericError("apply_tm_sampled exceeded tolerance", err);
  return SampledFunction(grid, std::move(values), f.convention);
}

double adjoint_check(const SpectralDensity& m, const SampledFunction& f, const SampledFunction& g,
                     double tol) {
  if (!(f.grid == g.grid) || f.convention != g.convention) {
    throw DomainError("adjoint_check needs functions on the same grid and convention");
  }
  const SampledFunction tf = apply_tm_sampled(m, f, tol);
  const SampledFunction tg = apply_tm_sampled(m, g, tol);
  return std::abs(tf.inner(g) - f.inner(tg));
}

SampledFunction gaussian_bump(const Grid& grid, double center, double width, Convention conv) {
  if (!(width > 0.0)) throw DomainError("bump width must be positive");
  std::vector<std::complex<double>> values(grid.count);
  for (std::size_t i = 0; i < grid.count; ++i) {
    const double z = (grid.at(i) - center) / width;
    values[i] = std::exp(-0.5 * z * z);
  }
  return SampledFunction(grid, std::move(values), conv);
}

double operator_norm_ratio(const SpectralDensity& m, double width, Convention conv) {
  if (!(width > 0.0)) throw DomainError("bump width must be positive");
  const double scale2 = multiplier_scale(conv) * multiplier_scale(conv);
  const double w2 = width * width;
  quad::HalfLineIntegrand g;
  g.full = [&](double u) { return scale2 * m(u) * std::exp(-w2 * u * u); };
  g.singular_exponent = std::max(0.0, m.singularity_exponent());
  const double extra = m.tail().kind == quad::TailKind::gaussian ? m.tail().parameter : 0.0;
  g.tail = {quad::TailKind::gaussian, w2 + extra};
  const double numerator = 2.0 * quad::integrate_half_line(g, 1e-12).value;
  const double denominator = std::sqrt(kPi) / width;  // int e^{-w^2 u^2} du
  return std::sqrt(numerator / denominator);
}

double TmBoundConstants::sup_bound(int k) const {
  return c1 * std::pow(static_cast<double>(k), 5.0 / 12.0) + c2;
}

double TmBoundConstants::lipschitz_bound(int k) const {
  return l1 * std::pow(static_cast<double>(k), 11.0 / 12.0) + l2;
}

TmBoundConstants tm_bound_constants(const SpectralDensity& m, Convention conv,
                                    const HermiteBoundConstants& hermite) {
  require_bound(m);
  const double c = hermite.c;
  const double gamma = hermite.gamma;
  const double b = m.singularity_exponent();
  const double root_k = std::sqrt(m.near_zero_constant());
  const double root_kp = std::sqrt(m.tail_constant());
  // sqrt(mu) = scale sqrt(m) and the 1/sqrt(2 pi) from the Fourier eigenvalue.
  const double factor = multiplier_scale(conv) / std::sqrt(2.0 * kPi);
  const double near = 4.0 * c * root_k / (2.0 - b);
  TmBoundConstants out;
  out.c1 = factor * 4.0 * c * root_kp;
  out.c2 = factor * (near + 4.0 * c * root_kp * std::sqrt(kPi / gamma));
  out.l1 = factor * 4.0 * c * root_kp;
  out.l2 = factor * (near + c * root_kp / gamma);
  return out;
}

TmBoundReport check_tm_bounds(const SpectralDensity& m, Convention conv,
                              const TmBoundConstants& constants, int k_max, const Grid& grid) {
  const HermiteModes modes(m, k_max, grid.points(), conv);
  TmBoundReport report;
  for (int k = 1; k <= k_max; ++k) {
    double sup = 0.0;
    double lip = 0.0;
    for (std::size_t j = 0; j < grid.count; ++j) {
      sup = std::max(sup, std::abs(modes.tm(k, j)));
      if (j > 0) lip = std::max(lip, std::abs(modes.tm(k, j) - modes.tm(k, j - 1)) / grid.step);
    }
    report.worst_sup_ratio = std::max(report.worst_sup_ratio, sup / constants.sup_bound(k));
    report.worst_lipschitz_ratio =
        std::max(report.worst_lipschitz_ratio, lip / constants.lipschitz_bound(k));
  }
  return report;
}

}  // namespace gfbm
