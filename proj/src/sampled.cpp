#include "gfbm/sampled.hpp"

#include <cmath>
#include <numbers>

#include "gfbm/error.hpp"

namespace gfbm {

std::string to_string(Convention c) {
  return c == Convention::paper_literal ? "paper_literal" : "covariance_consistent";
}

Convention convention_from_string(const std::string& text) {
  if (text == "paper_literal") return Convention::paper_literal;
  if (text == "covariance_consistent") return Convention::covariance_consistent;
  throw DomainError("unknown convention '" + text + "'");
}

double multiplier_scale(Convention c) {
  return c == Convention::paper_literal ? 1.0 : std::sqrt(2.0 * std::numbers::pi);
}

std::vector<double> Grid::points() const {
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = at(i);
  return out;
}

Grid Grid::anchored(double lo, double hi, double step) {
  if (!(step > 0.0)) throw DomainError("grid step must be positive");
  const double j0 = std::ceil(lo / step - 1e-9);
  const double j1 = std::floor(hi / step + 1e-9);
  if (j1 < j0) return {0.0, step, 0};
  return {j0 * step, step, static_cast<std::size_t>(j1 - j0) + 1};
}

SampledFunction::SampledFunction(Grid g, std::vector<std::complex<double>> v, Convention c)
    : grid(g), values(std::move(v)), convention(c) {
  if (!(grid.step > 0.0)) throw DomainError("sampled function grid step must be positive");
  if (values.size() != grid.count) throw DomainError("sample count does not match grid");
  for (const auto& x : values) {
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) {
      throw DomainError("sampled function has non-finite values");
    }
  }
}

SampledFunction SampledFunction::combine(std::complex<double> a, const SampledFunction& other,
                                         std::complex<double> b) const {
  if (convention != other.convention) throw DomainError("mixing operator conventions");
  if (!(grid == other.grid)) throw DomainError("combining functions on different grids");
  SampledFunction out = *this;
  for (std::size_t i = 0; i < values.size(); ++i) {
    out.values[i] = a * values[i] + b * other.values[i];
  }
  return out;
}

std::complex<double> SampledFunction::inner(const SampledFunction& other) const {
  if (convention != other.convention) throw DomainError("mixing operator conventions");
  if (!(grid == other.grid)) throw DomainError("inner product on different grids");
  std::complex<double> total = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double w = (i == 0 || i + 1 == values.size()) ? 0.5 : 1.0;
    total += w * values[i] * std::conj(other.values[i]);
  }
  return total * grid.step;
}

double SampledFunction::norm() const { return std::sqrt(inner(*this).real()); }

}  // namespace gfbm
