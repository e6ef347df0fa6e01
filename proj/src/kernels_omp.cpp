#include <omp.h>

#include <cmath>
#include <exception>

#include "gfbm/rng.hpp"
#include "kernels_detail.hpp"

namespace gfbm::omp {

namespace {

// Same arithmetic order as the serial pass; the time loop is split across
// threads, each with private accumulators.
void projection_pass(const ProjectionInput& in, const detail::WeightedNodes& nodes,
                     std::vector<double>& tm, std::vector<double>& b) {
  const int n = in.n_modes;
  const std::size_t n_times = in.times.size();
  tm.assign(static_cast<std::size_t>(n) * n_times, 0.0);
  b.assign(tm.size(), 0.0);
  std::vector<double> hermite(detail::kNodeChunk * n);
  for (std::size_t begin = 0; begin < nodes.u.size(); begin += detail::kNodeChunk) {
    const std::size_t end = std::min(nodes.u.size(), begin + detail::kNodeChunk);
    const auto chunk = static_cast<std::ptrdiff_t>(end - begin);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < chunk; ++i) {
      const std::size_t q = begin + static_cast<std::size_t>(i);
      hermite_functions(n, nodes.u[q], {hermite.data() + (q - begin) * n, static_cast<std::size_t>(n)});
    }
#pragma omp parallel
    {
      std::vector<double> acc_tm(n);
      std::vector<double> acc_b(n);
#pragma omp for schedule(dynamic, 1)
      for (std::ptrdiff_t jj = 0; jj < static_cast<std::ptrdiff_t>(n_times); ++jj) {
        const auto j = static_cast<std::size_t>(jj);
        std::fill(acc_tm.begin(), acc_tm.end(), 0.0);
        std::fill(acc_b.begin(), acc_b.end(), 0.0);
        detail::accumulate_time(nodes, begin, end, hermite.data(), n, in.times[j], acc_tm.data(),
                                acc_b.data());
        for (int k = 0; k < n; ++k) {
          tm[k * n_times + j] += acc_tm[k];
          b[k * n_times + j] += acc_b[k];
        }
      }
    }
  }
}

}  // namespace

int max_threads() { return omp_get_max_threads(); }

ProjectionTable hermite_projection(const ProjectionInput& in) {
  detail::check_projection_input(in);
  const double width = detail::projection_panel_width(in);
  ProjectionTable table;
  table.n_modes = in.n_modes;
  table.times = in.times;
  std::vector<double> coarse_tm;
  std::vector<double> coarse_b;
  projection_pass(in, detail::weighted_nodes(in, 2.0 * width), coarse_tm, coarse_b);
  projection_pass(in, detail::weighted_nodes(in, width), table.tm, table.b);
  detail::finish_projection(coarse_tm, coarse_b, table);
  return table;
}

std::vector<double> synthesize_paths(const SynthesisInput& in) {
  if (in.coefficients == nullptr ||
      in.coefficients->size() != static_cast<std::size_t>(in.n_modes) * in.n_times) {
    throw DomainError("synthesis coefficient table has the wrong shape");
  }
  const auto& coeff = *in.coefficients;
  std::vector<double> out(in.n_paths * in.n_times, 0.0);
#pragma omp parallel
  {
    std::vector<double> xi(in.n_modes);
#pragma omp for schedule(static)
    for (std::ptrdiff_t pp = 0; pp < static_cast<std::ptrdiff_t>(in.n_paths); ++pp) {
      const auto p = static_cast<std::size_t>(pp);
      for (int k = 0; k < in.n_modes; ++k) xi[k] = keyed_normal(in.seed, p, static_cast<std::uint32_t>(k + 1));
      double* row = out.data() + p * in.n_times;
      for (int k = 0; k < in.n_modes; ++k) {
        const double* c = coeff.data() + static_cast<std::size_t>(k) * in.n_times;
        for (std::size_t j = 0; j < in.n_times; ++j) row[j] += c[j] * xi[k];
      }
    }
  }
  return out;
}

std::vector<double> kernel_table(const PairFunction& k, const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<double> out(n * n);
  // Flattened upper triangle so work is balanced; exceptions are rethrown
  // after the parallel region.
  const auto pairs = static_cast<std::ptrdiff_t>(n * (n + 1) / 2);
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t idx = 0; idx < pairs; ++idx) {
    std::size_t i = 0;
    std::size_t rem = static_cast<std::size_t>(idx);
    while (rem >= n - i) {
      rem -= n - i;
      ++i;
    }
    const std::size_t j = i + rem;
    try {
      const double v = k(x[i], x[j]);
      out[i * n + j] = v;
      out[j * n + i] = v;
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace gfbm::omp
