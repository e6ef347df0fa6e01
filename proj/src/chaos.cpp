#include "gfbm/chaos.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "gfbm/error.hpp"
#include "gfbm/hermite.hpp"

namespace gfbm {

namespace {

using u128 = unsigned __int128;

u128 checked_mul(u128 a, u128 b, const char* what) {
  u128 out = 0;
  if (__builtin_mul_overflow(a, b, &out)) throw std::overflow_error(what);
  return out;
}

}  // namespace

MultiIndex::MultiIndex(std::vector<Entry> entries) {
  std::sort(entries.begin(), entries.end());
  for (const auto& [pos, exp] : entries) {
    if (exp == 0) continue;
    if (pos == 0) throw DomainError("multi-index positions start at 1");
    if (!entries_.empty() && entries_.back().first == pos) {
      entries_.back().second += exp;
    } else {
      entries_.emplace_back(pos, exp);
    }
  }
}

MultiIndex MultiIndex::unit(std::uint32_t position, std::uint32_t exponent) {
  return MultiIndex({{position, exponent}});
}

std::uint32_t MultiIndex::exponent(std::uint32_t position) const {
  const auto it = std::lower_bound(entries_.begin(), entries_.end(), Entry{position, 0});
  return it != entries_.end() && it->first == position ? it->second : 0;
}

std::uint32_t MultiIndex::max_position() const {
  return entries_.empty() ? 0 : entries_.back().first;
}

std::uint64_t MultiIndex::order() const {
  std::uint64_t sum = 0;
  for (const auto& e : entries_) sum += e.second;
  return sum;
}

u128 MultiIndex::factorial() const {
  u128 out = 1;
  for (const auto& [pos, exp] : entries_) {
    for (std::uint32_t i = 2; i <= exp; ++i) out = checked_mul(out, i, "alpha! overflows 128 bits");
  }
  return out;
}

u128 MultiIndex::weight() const {
  u128 out = 1;
  for (const auto& [pos, exp] : entries_) {
    for (std::uint32_t i = 0; i < exp; ++i) {
      out = checked_mul(out, 2 * static_cast<u128>(pos), "(2N)^alpha overflows 128 bits");
    }
  }
  return out;
}

MultiIndex MultiIndex::operator+(const MultiIndex& other) const {
  std::vector<Entry> merged = entries_;
  merged.insert(merged.end(), other.entries_.begin(), other.entries_.end());
  return MultiIndex(std::move(merged));
}

std::string MultiIndex::to_string() const {
  if (entries_.empty()) return "0";
  std::string out;
  for (const auto& [pos, exp] : entries_) {
    if (!out.empty()) out += ',';
    out += std::to_string(pos) + ':' + std::to_string(exp);
  }
  return out;
}

MultiIndex MultiIndex::parse(const std::string& text) {
  if (text == "0") return {};
  std::vector<Entry> entries;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw DomainError("bad multi-index entry '" + item + "'");
    try {
      std::size_t used = 0;
      const unsigned long pos = std::stoul(item.substr(0, colon), &used);
      if (used != colon) throw std::invalid_argument("position");
      const std::string exp_text = item.substr(colon + 1);
      const unsigned long exp = std::stoul(exp_text, &used);
      if (used != exp_text.size()) throw std::invalid_argument("exponent");
      if (pos == 0 || exp == 0) throw std::invalid_argument("zero");
      entries.emplace_back(static_cast<std::uint32_t>(pos), static_cast<std::uint32_t>(exp));
    } catch (const std::logic_error&) {
      throw DomainError("bad multi-index entry '" + item + "'");
    }
  }
  if (entries.empty()) throw DomainError("empty multi-index text");
  return MultiIndex(std::move(entries));
}

bool GradedLex::operator()(const MultiIndex& a, const MultiIndex& b) const {
  const auto oa = a.order();
  const auto ob = b.order();
  if (oa != ob) return oa < ob;
  return a.entries() < b.entries();
}

double to_double(u128 value) { return static_cast<double>(value); }

ChaosSeries ChaosSeries::unit() { return constant(1.0); }

ChaosSeries ChaosSeries::constant(Complex value) { return monomial(MultiIndex{}, value); }

ChaosSeries ChaosSeries::monomial(const MultiIndex& alpha, Complex coeff) {
  ChaosSeries out;
  out.add(alpha, coeff);
  return out;
}

ChaosSeries ChaosSeries::first_order(std::span<const double> c) {
  ChaosSeries out;
  for (std::size_t k = 0; k < c.size(); ++k) {
    out.add(MultiIndex::unit(static_cast<std::uint32_t>(k + 1)), c[k]);
  }
  return out;
}

Complex ChaosSeries::coefficient(const MultiIndex& alpha) const {
  const auto it = terms_.find(alpha);
  return it == terms_.end() ? Complex{0.0, 0.0} : it->second;
}

void ChaosSeries::add(const MultiIndex& alpha, Complex coeff) {
  if (coeff == Complex{0.0, 0.0}) return;
  auto [it, inserted] = terms_.try_emplace(alpha, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == Complex{0.0, 0.0}) terms_.erase(it);
  }
}

std::uint64_t ChaosSeries::max_order() const {
  return terms_.empty() ? 0 : terms_.rbegin()->first.order();
}

std::uint32_t ChaosSeries::max_position() const {
  std::uint32_t out = 0;
  for (const auto& [alpha, c] : terms_) out = std::max(out, alpha.max_position());
  return out;
}

ChaosSeries ChaosSeries::operator+(const ChaosSeries& other) const {
  ChaosSeries out = *this;
  for (const auto& [alpha, c] : other.terms_) out.add(alpha, c);
  return out;
}

ChaosSeries ChaosSeries::operator*(Complex scalar) const {
  ChaosSeries out;
  for (const auto& [alpha, c] : terms_) out.add(alpha, c * scalar);
  return out;
}

double ChaosSeries::norm_squared() const {
  double sum = 0.0;
  for (const auto& [alpha, c] : terms_) sum += to_double(alpha.factorial()) * std::norm(c);
  return sum;
}

ChaosSeries wick_product(const ChaosSeries& f, const ChaosSeries& g) {
  ChaosSeries out;
  for (const auto& [alpha, a] : f.terms()) {
    for (const auto& [beta, b] : g.terms()) out.add(alpha + beta, a * b);
  }
  return out;
}

Complex hermite_transform(const ChaosSeries& f, std::span<const Complex> z) {
  if (f.max_position() > z.size()) {
    throw DomainError("z has " + std::to_string(z.size()) + " entries but the series uses position " +
                      std::to_string(f.max_position()));
  }
  Complex sum = 0.0;
  for (const auto& [alpha, c] : f.terms()) {
    Complex term = c;
    for (const auto& [pos, exp] : alpha.entries()) term *= std::pow(z[pos - 1], static_cast<int>(exp));
    sum += term;
  }
  return sum;
}

double kondratiev_norm(const ChaosSeries& f, KondratievSpace space) {
  if (space.parameter < 0) throw DomainError("Kondratiev parameter must be >= 0");
  double sum = 0.0;
  for (const auto& [alpha, c] : f.terms()) {
    const double weight = std::pow(to_double(alpha.weight()), space.parameter);
    if (space.kind == KondratievSpace::Kind::s1) {
      const double fact = to_double(alpha.factorial());
      sum += std::norm(c) * fact * fact * weight;
    } else {
      sum += std::norm(c) / weight;
    }
  }
  return sum;
}

Complex dual_pairing(const ChaosSeries& f, const ChaosSeries& g) {
  Complex sum = 0.0;
  for (const auto& [alpha, a] : f.terms()) {
    const Complex b = g.coefficient(alpha);
    if (b != Complex{0.0, 0.0}) sum += to_double(alpha.factorial()) * a * b;
  }
  return sum;
}

Complex evaluate_realization(const ChaosSeries& f, std::span<const double> xi) {
  if (f.max_position() > xi.size()) {
    throw DomainError("Gaussian sample has " + std::to_string(xi.size()) +
                      " entries but the series uses position " + std::to_string(f.max_position()));
  }
  Complex sum = 0.0;
  for (const auto& [alpha, c] : f.terms()) {
    double h = 1.0;
    for (const auto& [pos, exp] : alpha.entries()) h *= hermite_poly(static_cast<int>(exp), xi[pos - 1]);
    sum += c * h;
  }
  return sum;
}

std::vector<double> wick_power_gaussian_closed(double sigma2, int n) {
  if (n < 0) throw DomainError("Wick power must be >= 0");
  std::vector<double> coeffs(static_cast<std::size_t>(n) + 1, 0.0);
  const double n_fact = std::tgamma(n + 1.0);
  for (int k = (n + 1) / 2; k <= n; ++k) {
    const int power = 2 * k - n;
    const int rest = n - k;
    coeffs[power] += n_fact * std::pow(-0.5, rest) * std::pow(sigma2, rest) /
                     (std::tgamma(power + 1.0) * std::tgamma(rest + 1.0));
  }
  return coeffs;
}

ChaosSeries wick_power_gaussian_algebraic(std::span<const double> c, int n) {
  if (n < 0) throw DomainError("Wick power must be >= 0");
  const ChaosSeries q = ChaosSeries::first_order(c);
  ChaosSeries out = ChaosSeries::unit();
  for (int i = 0; i < n; ++i) out = wick_product(out, q);
  return out;
}

ChaosSeries wick_power_multinomial(std::span<const double> c, int n) {
  if (n < 0) throw DomainError("Wick power must be >= 0");
  ChaosSeries out;
  const double n_fact = std::tgamma(n + 1.0);
  std::vector<MultiIndex::Entry> entries;
  // Distribute the remaining order over positions pos..d.
  auto recurse = [&](auto&& self, std::size_t pos, int remaining, double coeff) -> void {
    if (remaining == 0) {
      out.add(MultiIndex(entries), n_fact * coeff);
      return;
    }
    if (pos >= c.size()) return;
    for (int a = remaining; a >= 0; --a) {
      if (a > 0) entries.emplace_back(static_cast<std::uint32_t>(pos + 1), a);
      self(self, pos + 1, remaining - a, coeff * std::pow(c[pos], a) / std::tgamma(a + 1.0));
      if (a > 0) entries.pop_back();
    }
  };
  recurse(recurse, 0, n, 1.0);
  return out;
}

double polynomial_value(std::span<const double> coeffs, double x) {
  double sum = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) sum = sum * x + *it;
  return sum;
}

double kq_sum(std::span<const Complex> z, int q) {
  double product = 1.0;
  for (std::size_t k = 0; k < z.size(); ++k) {
    const double ratio = std::norm(z[k]) * std::pow(2.0 * static_cast<double>(k + 1), q);
    if (ratio >= 1.0) return std::numeric_limits<double>::infinity();
    product /= 1.0 - ratio;
  }
  return product;
}

bool kq_delta_membership(std::span<const Complex> z, int q, double delta) {
  return kq_sum(z, q) < delta * delta;
}

void write_chaos(std::ostream& out, const ChaosSeries& f) {
  char buf[80];
  for (const auto& [alpha, c] : f.terms()) {
    std::snprintf(buf, sizeof buf, " %.17g %.17g\n", c.real(), c.imag());
    out << alpha.to_string() << buf;
  }
}

ChaosSeries read_chaos(std::istream& in) {
  ChaosSeries out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string index;
    double re = 0.0;
    double im = 0.0;
    if (!(fields >> index >> re >> im)) {
      throw DomainError("chaos line " + std::to_string(line_no) + " is not 'index re im'");
    }
    out.add(MultiIndex::parse(index), {re, im});
  }
  return out;
}

}  // namespace gfbm
