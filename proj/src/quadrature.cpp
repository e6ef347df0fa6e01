#include "gfbm/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>

#include "gfbm/error.hpp"
#include "gfbm/sampled.hpp"
#include "gfbm/spectral.hpp"

namespace gfbm::quad {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Gauss-Kronrod 7/15 abscissae on [-1, 1] (positive half, descending).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

Panel gk15(const RealFn& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  double abs_sum = std::abs(kronrod);
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    kronrod += kWgk[j] * (f1 + f2);
    abs_sum += kWgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
  }
  kronrod *= half;
  gauss *= half;
  abs_sum *= std::abs(half);
  const double err = std::max(std::abs(kronrod - gauss), 50.0 * kEps * abs_sum);
  return {a, b, kronrod, err};
}

}  // namespace

Result integrate_interval(const RealFn& f, double a, double b, double tol,
                          int max_panels, int initial_panels) {
  if (a == b) return {0.0, 0.0};
  initial_panels = std::max(1, initial_panels);
  max_panels = std::max(max_panels, 4 * initial_panels);

  std::priority_queue<Panel> heap;
  double total = 0.0;
  double total_err = 0.0;
  const double width = (b - a) / initial_panels;
  for (int i = 0; i < initial_panels; ++i) {
    const double lo = a + i * width;
    const double hi = (i + 1 == initial_panels) ? b : a + (i + 1) * width;
    Panel p = gk15(f, lo, hi);
    total += p.value;
    total_err += p.error;
    heap.push(p);
  }

  int panels = initial_panels;
  while (total_err > tol && panels < max_panels) {
    const Panel worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= std::min(worst.a, worst.b) || mid >= std::max(worst.a, worst.b)) break;
    heap.pop();
    const Panel left = gk15(f, worst.a, mid);
    const Panel right = gk15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++panels;
  }

  // Recompute sums to shed accumulated cancellation from the updates.
  total = 0.0;
  total_err = 0.0;
  while (!heap.empty()) {
    total += heap.top().value;
    total_err += heap.top().error;
    heap.pop();
  }
  if (!std::isfinite(total)) {
    throw NumericError("integrand produced a non-finite value",
                       std::numeric_limits<double>::infinity());
  }
  if (total_err > tol) {
    throw NumericError("adaptive quadrature did not converge on [" +
                           std::to_string(a) + ", " + std::to_string(b) + "]",
                       total_err);
  }
  return {total, total_err};
}

Result integrate_singular_left(const RealFn& f, double a, double b, double p,
                               double tol, int max_panels, int initial_panels) {
  if (p == 0.0) return integrate_interval(f, a, b, tol, max_panels, initial_panels);
  if (p >= 1.0) throw DomainError("singular exponent must be < 1");
  const double beta = 1.0 / (1.0 - p);
  const double len = b - a;
  auto mapped = [&](double v) {
    const double vb1 = std::pow(v, beta - 1.0);
    return f(a + len * vb1 * v) * len * beta * vb1;
  };
  return integrate_interval(mapped, 0.0, 1.0, tol, max_panels, initial_panels);
}

Result integrate_power_tail(const RealFn& f, double a, double q, double tol,
                            int max_panels) {
  if (q <= 1.0) throw DomainError("power tail exponent must exceed 1");
  if (a <= 0.0) throw DomainError("power tail must start at a > 0");
  auto mapped = [&](double v) { return f(a / v) * a / (v * v); };
  const double p = q < 2.0 ? 2.0 - q : 0.0;
  return integrate_singular_left(mapped, 0.0, 1.0, p, tol, max_panels);
}

Result wynn_epsilon(std::span<const double> sums) {
  const std::size_t n = sums.size();
  if (n == 0) return {0.0, std::numeric_limits<double>::infinity()};
  if (n < 3) {
    const double err = n == 2 ? std::abs(sums[1] - sums[0]) : std::abs(sums[0]);
    return {sums[n - 1], err};
  }
  // Columns eps_{-1} = 0, eps_0 = s; rolling update along the table.
  std::vector<double> prev(n + 1, 0.0);
  std::vector<double> cur(sums.begin(), sums.end());
  double best = sums[n - 1];
  double best_prev = sums[n - 2];
  for (std::size_t col = 1; cur.size() > 1; ++col) {
    std::vector<double> next(cur.size() - 1);
    bool degenerate = false;
    for (std::size_t j = 0; j + 1 < cur.size(); ++j) {
      const double diff = cur[j + 1] - cur[j];
      if (diff == 0.0 || !std::isfinite(diff)) {
        degenerate = true;
        break;
      }
      next[j] = prev[j + 1] + 1.0 / diff;
    }
    if (degenerate) break;
    if (col % 2 == 0) {
      best = next.back();
      best_prev = next.size() >= 2 ? next[next.size() - 2] : best_prev;
    }
    prev = std::move(cur);
    cur = std::move(next);
  }
  return {best, std::abs(best - best_prev)};
}

Result integrate_oscillatory_tail(const RealFn& f, double a, double omega,
                                  Trig trig, double tol, int max_panels) {
  if (omega == 0.0) throw DomainError("oscillatory tail needs a nonzero frequency");
  double sign = 1.0;
  if (omega < 0.0) {
    omega = -omega;
    if (trig == Trig::sin) sign = -1.0;
  }
  auto g = [&](double u) {
    return f(u) * (trig == Trig::cos ? std::cos(omega * u) : std::sin(omega * u));
  };
  const double half_period = std::numbers::pi / omega;
  const double panel_tol = tol * 1e-2;
  constexpr int kMaxPanels = 600;
  constexpr std::size_t kWindow = 40;

  std::vector<double> sums;
  double running = 0.0;
  double quad_err = 0.0;
  int small_run = 0;
  Result previous{0.0, std::numeric_limits<double>::infinity()};
  for (int j = 0; j < kMaxPanels; ++j) {
    const double lo = a + j * half_period;
    const Result piece = integrate_interval(g, lo, lo + half_period, panel_tol, max_panels);
    running += piece.value;
    quad_err += piece.error;
    sums.push_back(running);

    // Rapidly decaying amplitude: plain summation has converged.
    small_run = std::abs(piece.value) < tol * 1e-3 ? small_run + 1 : 0;
    if (small_run >= 3) return {sign * running, quad_err + std::abs(piece.value)};

    if (sums.size() >= 6) {
      const std::size_t start = sums.size() > kWindow ? sums.size() - kWindow : 0;
      const Result est = wynn_epsilon(std::span(sums).subspan(start));
      const double change = std::abs(est.value - previous.value);
      if (change < 0.5 * tol && est.error < tol) {
        return {sign * est.value, change + est.error + quad_err};
      }
      previous = est;
    }
  }
  throw NumericError("oscillatory tail did not converge", std::abs(previous.error));
}

void validate(const IntegrandSpec& spec) {
  if (!spec.amplitude) throw DomainError("integrand has no amplitude function");
  if (spec.singular_at_zero && spec.singular_exponent >= 1.0) {
    throw DomainError("singular exponent p must be < 1 for integrability at 0");
  }
  if (spec.tail.kind == TailKind::power && spec.frequency == 0.0 && spec.tail.rate <= 1.0) {
    throw DomainError("power tail exponent q must exceed 1");
  }
  if (spec.tail.kind == TailKind::gaussian && spec.tail.rate <= 0.0) {
    throw DomainError("gaussian tail rate must be positive");
  }
}

double gaussian_cutoff(double rate, double tol) {
  const double x = std::log(10.0 / std::min(tol, 1e-3)) / rate;
  return std::max(1.0, std::sqrt(x) + 1.0);
}

namespace {

int panels_for(double length, double frequency) {
  return 1 + static_cast<int>(std::ceil(length * std::abs(frequency) / (2.0 * std::numbers::pi)));
}

// Real and imaginary parts of amplitude(u) e^{i w u} integrated separately.
ComplexResult integrate_complex(const ComplexFn& amp, double w, double a, double b,
                                double p, double tol, int max_panels) {
  const int panels = panels_for(b - a, w);
  auto re = [&](double u) { return (amp(u) * std::polar(1.0, w * u)).real(); };
  auto im = [&](double u) { return (amp(u) * std::polar(1.0, w * u)).imag(); };
  const Result r = integrate_singular_left(re, a, b, p, tol / 2, max_panels, panels);
  const Result i = integrate_singular_left(im, a, b, p, tol / 2, max_panels, panels);
  return {{r.value, i.value}, r.error + i.error};
}

}  // namespace

ComplexResult integrate_line(const IntegrandSpec& spec, double tol, int max_panels) {
  validate(spec);
  const double p = spec.singular_at_zero ? spec.singular_exponent : 0.0;
  const double w = spec.frequency;
  const double piece_tol = tol / 8.0;

  // Mirror (-inf, 0] onto [0, inf): u -> -u.
  const ComplexFn right = spec.amplitude;
  const ComplexFn left = [&](double u) { return spec.amplitude(-u); };

  ComplexResult total{{0.0, 0.0}, 0.0};
  auto accumulate = [&](const ComplexResult& r) {
    total.value += r.value;
    total.error += r.error;
  };

  accumulate(integrate_complex(right, w, 0.0, 1.0, p, piece_tol, max_panels));
  accumulate(integrate_complex(left, -w, 0.0, 1.0, p, piece_tol, max_panels));

  for (int side = 0; side < 2; ++side) {
    const ComplexFn& amp = side == 0 ? right : left;
    const double freq = side == 0 ? w : -w;
    switch (spec.tail.kind) {
      case TailKind::gaussian:
      case TailKind::compact: {
        const double cut = spec.tail.kind == TailKind::compact
                               ? spec.tail.rate
                               : gaussian_cutoff(spec.tail.rate, piece_tol);
        if (cut > 1.0) accumulate(integrate_complex(amp, freq, 1.0, cut, 0.0, piece_tol, max_panels));
        break;
      }
      case TailKind::power: {
        if (freq == 0.0) {
          auto re = [&](double u) { return amp(u).real(); };
          auto im = [&](double u) { return amp(u).imag(); };
          const Result r = integrate_power_tail(re, 1.0, spec.tail.rate, piece_tol / 2, max_panels);
          const Result i = integrate_power_tail(im, 1.0, spec.tail.rate, piece_tol / 2, max_panels);
          accumulate({{r.value, i.value}, r.error + i.error});
        } else {
          // Re(a e^{iwu}) = Re a cos - Im a sin, Im(...) = Re a sin + Im a cos.
          auto are = [&](double u) { return amp(u).real(); };
          auto aim = [&](double u) { return amp(u).imag(); };
          const double t4 = piece_tol / 4;
          const Result rc = integrate_oscillatory_tail(are, 1.0, freq, Trig::cos, t4, max_panels);
          const Result is = integrate_oscillatory_tail(aim, 1.0, freq, Trig::sin, t4, max_panels);
          const Result rs = integrate_oscillatory_tail(are, 1.0, freq, Trig::sin, t4, max_panels);
          const Result ic = integrate_oscillatory_tail(aim, 1.0, freq, Trig::cos, t4, max_panels);
          accumulate({{rc.value - is.value, rs.value + ic.value},
                      rc.error + is.error + rs.error + ic.error});
        }
        break;
      }
    }
  }
  if (total.error > tol) throw NumericError("integrate_line exceeded tolerance", total.error);
  return total;
}

Result integrate_half_line(const HalfLineIntegrand& g, double tol, int max_panels) {
  const double piece_tol = tol / 4.0;
  Result total{0.0, 0.0};
  auto add = [&](const Result& r, double coeff = 1.0) {
    total.value += coeff * r.value;
    total.error += std::abs(coeff) * r.error;
  };

  add(integrate_singular_left(g.full, 0.0, 1.0, g.singular_exponent, piece_tol, max_panels,
                              panels_for(1.0, g.max_frequency)));

  switch (g.tail.kind) {
    case TailKind::gaussian:
    case TailKind::compact: {
      const double cut = g.tail.kind == TailKind::compact ? g.tail.rate
                                                          : gaussian_cutoff(g.tail.rate, piece_tol);
      if (cut > 1.0) {
        add(integrate_interval(g.full, 1.0, cut, piece_tol, max_panels,
                               panels_for(cut - 1.0, g.max_frequency)));
      }
      break;
    }
    case TailKind::power: {
      if (!g.amplitude) throw DomainError("power tail split needs an amplitude");
      const std::size_t n_parts = g.terms.size() + (g.base_coeff != 0.0 ? 1 : 0);
      const double part_tol = piece_tol / static_cast<double>(std::max<std::size_t>(1, n_parts));
      double base = g.base_coeff;
      for (const auto& term : g.terms) {
        if (term.omega == 0.0) {
          if (term.trig == Trig::cos) base += term.coeff;
          continue;
        }
        add(integrate_oscillatory_tail(g.amplitude, 1.0, term.omega, term.trig,
                                       part_tol / std::max(1.0, std::abs(term.coeff)), max_panels),
            term.coeff);
      }
      if (base != 0.0) {
        add(integrate_power_tail(g.amplitude, 1.0, g.amplitude_decay,
                                 part_tol / std::max(1.0, std::abs(base)), max_panels),
            base);
      }
      break;
    }
  }
  return total;
}

NodeSet gauss_legendre(int order) {
  NodeSet rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  for (int i = 0; i < (order + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute derivative at the converged root.
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= order; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = order * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[order - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[order - 1 - i] = w;
  }
  return rule;
}

NodeSet composite_rule(double a, double b, double max_panel, int order,
                       double singular_exponent) {
  NodeSet out;
  if (b <= a) return out;
  const NodeSet gl = gauss_legendre(order);

  auto emit_uniform = [&](double lo, double hi) {
    const int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) / max_panel)));
    const double h = (hi - lo) / panels;
    for (int p = 0; p < panels; ++p) {
      const double c = lo + (p + 0.5) * h;
      for (int i = 0; i < order; ++i) {
        out.nodes.push_back(c + 0.5 * h * gl.nodes[i]);
        out.weights.push_back(0.5 * h * gl.weights[i]);
      }
    }
  };

  double start = a;
  if (singular_exponent != 0.0) {
    if (singular_exponent >= 1.0) throw DomainError("singular exponent must be < 1");
    const double len = std::min(1.0, b - a);
    const double beta = 1.0 / (1.0 - singular_exponent);
    // Geometric panels in v, u = a + len v^beta.
    constexpr int kLevels = 60;
    for (int level = kLevels - 1; level >= 0; --level) {
      const double v_lo = std::ldexp(1.0, -level - 1);
      const double v_hi = std::ldexp(1.0, -level);
      const double u_width = len * (std::pow(v_hi, beta) - std::pow(v_lo, beta));
      const int sub = std::max(1, static_cast<int>(std::ceil(u_width / max_panel)));
      const double h = (v_hi - v_lo) / sub;
      for (int p = 0; p < sub; ++p) {
        const double c = v_lo + (p + 0.5) * h;
        for (int i = 0; i < order; ++i) {
          const double v = c + 0.5 * h * gl.nodes[i];
          const double vb1 = std::pow(v, beta - 1.0);
          out.nodes.push_back(a + len * vb1 * v);
          out.weights.push_back(0.5 * h * gl.weights[i] * len * beta * vb1);
        }
      }
    }
    start = a + len;
  }
  if (b > start) emit_uniform(start, b);
  return out;
}

namespace {

double sqrt_decay_exponent(const SpectralDensity& m) {
  // sqrt(m) ~ u^{e/2}; as an amplitude it decays like u^{-q} with q = -e/2.
  return -0.5 * m.tail().parameter;
}

}  // namespace

std::complex<double> oscillatory_transform(const SpectralDensity& m, Weight weight,
                                           double freq, double tol, double t, double s) {
  switch (weight) {
    case Weight::m_over_u2_one_minus_cos:
      return structure_function_r(m, freq, tol).value;
    case Weight::chi_product:
      if (t == 0.0 || s == 0.0) return 0.0;
      {
        HalfLineIntegrand g;
        g.full = [&](double u) {
          const double st = std::sin(t * u);
          const double ss = std::sin(s * u);
          const double ht = std::sin(0.5 * t * u);
          const double hs = std::sin(0.5 * s * u);
          return (st * ss + 4.0 * ht * ht * hs * hs) / (u * u) * m(u);
        };
        g.singular_exponent = m.singularity_exponent() > 0.0 ? m.singularity_exponent() : 0.0;
        g.max_frequency = std::max({std::abs(t), std::abs(s), std::abs(t - s)});
        const auto& tail = m.tail();
        if (tail.kind == TailKind::power) {
          g.tail = {TailKind::power, 2.0 - tail.parameter};
          g.amplitude = [&](double u) { return m(u) / (u * u); };
          g.amplitude_decay = 2.0 - tail.parameter;
          g.base_coeff = 1.0;
          g.terms = {{-1.0, std::abs(t), Trig::cos},
                     {-1.0, std::abs(s), Trig::cos},
                     {1.0, std::abs(t - s), Trig::cos}};
        } else {
          g.tail = {tail.kind, tail.parameter};
        }
        const Result r = integrate_half_line(g, tol / 2.0);
        if (r.error > tol) throw NumericError("kernel quadrature exceeded tolerance", r.error);
        return 2.0 * r.value;
      }
    case Weight::sqrt_m: {
      HalfLineIntegrand g;
      g.full = [&](double u) { return std::cos(freq * u) * std::sqrt(m(u)); };
      g.singular_exponent = 0.5 * std::max(0.0, m.singularity_exponent());
      g.max_frequency = freq;
      const auto& tail = m.tail();
      if (tail.kind == TailKind::power) {
        if (sqrt_decay_exponent(m) <= 0.0 || freq == 0.0) {
          throw DomainError("sqrt(m) is not integrable against e^{iwu} for this density");
        }
        g.tail = {TailKind::power, sqrt_decay_exponent(m)};
        g.amplitude = [&](double u) { return std::sqrt(m(u)); };
        g.amplitude_decay = sqrt_decay_exponent(m);
        g.terms = {{1.0, freq, Trig::cos}};
      } else if (tail.kind == TailKind::gaussian) {
        g.tail = {TailKind::gaussian, 0.5 * tail.parameter};
      } else {
        g.tail = {TailKind::compact, tail.parameter};
      }
      const Result r = integrate_half_line(g, tol / 2.0);
      if (r.error > tol) throw NumericError("sqrt_m transform exceeded tolerance", r.error);
      return 2.0 * r.value;
    }
  }
  return 0.0;
}

double finite_integral(const SampledFunction& f, double a, double b) {
  const Grid& g = f.grid;
  if (g.count == 0) throw DomainError("finite_integral on an empty grid");
  double sign = 1.0;
  if (b < a) {
    std::swap(a, b);
    sign = -1.0;
  }
  const double lo = g.at(0);
  const double hi = g.back();
  const double slack = 1e-9 * g.step;
  if (a < lo - slack || b > hi + slack) {
    throw DomainError("finite_integral interval lies outside the sample grid");
  }
  a = std::clamp(a, lo, hi);
  b = std::clamp(b, lo, hi);
  if (a == b) return 0.0;

  auto value_at = [&](double x) {
    const double pos = (x - lo) / g.step;
    auto i = static_cast<std::size_t>(std::floor(pos));
    if (i + 1 >= g.count) i = g.count - 2;
    const double frac = pos - static_cast<double>(i);
    return (1.0 - frac) * f.values[i].real() + frac * f.values[i + 1].real();
  };

  double total = 0.0;
  double prev_x = a;
  double prev_f = value_at(a);
  const auto first = static_cast<std::size_t>(std::max(0.0, std::floor((a - lo) / g.step)));
  for (std::size_t i = first; i < g.count; ++i) {
    const double x = g.at(i);
    if (x <= a + slack) continue;
    if (x >= b - slack) break;
    const double fx = f.values[i].real();
    total += 0.5 * (x - prev_x) * (fx + prev_f);
    prev_x = x;
    prev_f = fx;
  }
  total += 0.5 * (b - prev_x) * (prev_f + value_at(b));
  return sign * total;
}

}  // namespace gfbm::quad
