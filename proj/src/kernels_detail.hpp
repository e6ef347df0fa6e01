#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "gfbm/error.hpp"
#include "gfbm/hermite.hpp"
#include "gfbm/kernels.hpp"
#include "gfbm/quadrature.hpp"

namespace gfbm::detail {

inline constexpr std::size_t kNodeChunk = 2048;

/// Quadrature nodes with the symbol folded into the weights.
struct WeightedNodes {
  std::vector<double> u;
  std::vector<double> w;
};

inline void check_projection_input(const ProjectionInput& in) {
  if (!in.symbol) throw DomainError("projection needs an operator symbol");
  if (in.n_modes < 1) throw DomainError("projection needs n_modes >= 1");
  if (!(in.cutoff > 0.0)) throw DomainError("projection cutoff must be positive");
}

/// Panel width resolving both the Hermite oscillation and trig(tu).
inline double projection_panel_width(const ProjectionInput& in) {
  double t_max = 0.0;
  for (double t : in.times) t_max = std::max(t_max, std::abs(t));
  const double wavenumber = std::sqrt(2.0 * in.n_modes + 1.0) + t_max;
  return std::min(0.25, std::numbers::pi / wavenumber);
}

inline WeightedNodes weighted_nodes(const ProjectionInput& in, double panel_width) {
  const quad::NodeSet rule =
      quad::composite_rule(0.0, in.cutoff, panel_width, 16, in.singular_exponent);
  WeightedNodes out;
  out.u = rule.nodes;
  out.w.resize(rule.nodes.size());
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    out.w[q] = rule.weights[q] * in.symbol(rule.nodes[q]);
  }
  return out;
}

/// (2/sqrt(2pi)) (-1)^{floor((k-1)/2)}
inline double projection_prefactor(int k) {
  const double base = 2.0 / std::sqrt(2.0 * std::numbers::pi);
  return ((k - 1) / 2) % 2 == 0 ? base : -base;
}

/// Adds the contribution of nodes [begin, end) at time t to the per-mode
/// accumulators. `hermite` holds h~_1..h~_N for each node, node-major.
inline void accumulate_time(const WeightedNodes& nodes, std::size_t begin, std::size_t end,
                            const double* hermite, int n_modes, double t, double* acc_tm,
                            double* acc_b) {
  for (std::size_t q = begin; q < end; ++q) {
    const double u = nodes.u[q];
    const double w = nodes.w[q];
    const double tu = t * u;
    const double c = std::cos(tu);
    const double s = std::sin(tu);
    const double h = std::sin(0.5 * tu);
    const double odd_tm = w * c;
    const double odd_b = w * s / u;
    const double even_tm = w * s;
    const double even_b = w * 2.0 * h * h / u;
    const double* row = hermite + (q - begin) * static_cast<std::size_t>(n_modes);
    for (int k = 0; k < n_modes; k += 2) {
      acc_tm[k] += odd_tm * row[k];
      acc_b[k] += odd_b * row[k];
    }
    for (int k = 1; k < n_modes; k += 2) {
      acc_tm[k] += even_tm * row[k];
      acc_b[k] += even_b * row[k];
    }
  }
}

/// Scales raw sums into the table and folds |fine - coarse| into the error.
inline void finish_projection(const std::vector<double>& coarse_tm, const std::vector<double>& coarse_b,
                              ProjectionTable& table) {
  const std::size_t n_times = table.times.size();
  double err = 0.0;
  for (int k = 1; k <= table.n_modes; ++k) {
    const double pre = projection_prefactor(k);
    for (std::size_t j = 0; j < n_times; ++j) {
      const std::size_t idx = (k - 1) * n_times + j;
      table.tm[idx] *= pre;
      table.b[idx] *= pre;
      err = std::max(err, std::abs(table.tm[idx] - pre * coarse_tm[idx]));
      err = std::max(err, std::abs(table.b[idx] - pre * coarse_b[idx]));
    }
  }
  table.error_estimate = err;
}

}  // namespace gfbm::detail
