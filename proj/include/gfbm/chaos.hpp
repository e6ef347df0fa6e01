#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace gfbm {

/// Finitely supported multi-index alpha = (alpha_1, alpha_2, ...), stored as
/// sorted (position, exponent) pairs with position >= 1, exponent >= 1.
class MultiIndex {
 public:
  using Entry = std::pair<std::uint32_t, std::uint32_t>;

  MultiIndex() = default;
  /// Entries in any order; zero exponents are dropped, duplicates summed.
  explicit MultiIndex(std::vector<Entry> entries);

  /// epsilon^(k): 1 at position k.
  static MultiIndex unit(std::uint32_t position, std::uint32_t exponent = 1);

  const std::vector<Entry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::uint32_t exponent(std::uint32_t position) const;
  std::uint32_t max_position() const;

  /// |alpha| = sum alpha_k.
  std::uint64_t order() const;
  /// alpha! = prod alpha_k!  (exact; throws std::overflow_error)
  unsigned __int128 factorial() const;
  /// (2N)^alpha = prod (2k)^{alpha_k}  (exact; throws std::overflow_error)
  unsigned __int128 weight() const;

  MultiIndex operator+(const MultiIndex& other) const;
  bool operator==(const MultiIndex&) const = default;

  /// "k1:a1,k2:a2"; the zero index is written as "0".
  std::string to_string() const;
  static MultiIndex parse(const std::string& text);

 private:
  std::vector<Entry> entries_;
};

/// Graded lexicographic order: total order first, then entries.
struct GradedLex {
  bool operator()(const MultiIndex& a, const MultiIndex& b) const;
};

double to_double(unsigned __int128 value);

using Complex = std::complex<double>;

/// F = sum_alpha c_alpha H_alpha with finite support and no stored zeros.
class ChaosSeries {
 public:
  using Map = std::map<MultiIndex, Complex, GradedLex>;

  ChaosSeries() = default;

  static ChaosSeries unit();                       ///< H_0
  static ChaosSeries constant(Complex value);
  static ChaosSeries monomial(const MultiIndex& alpha, Complex coeff = 1.0);
  /// sum_k c_k H_{epsilon^(k)}, positions 1..c.size().
  static ChaosSeries first_order(std::span<const double> c);

  const Map& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  Complex coefficient(const MultiIndex& alpha) const;

  /// Adds coeff to the coefficient of alpha (dropping it if it becomes 0).
  void add(const MultiIndex& alpha, Complex coeff);

  std::uint64_t max_order() const;
  std::uint32_t max_position() const;

  ChaosSeries operator+(const ChaosSeries& other) const;
  ChaosSeries operator*(Complex scalar) const;
  bool operator==(const ChaosSeries&) const = default;

  /// W-norm squared: sum alpha! |c_alpha|^2.
  double norm_squared() const;

 private:
  Map terms_;
};

/// c_gamma = sum_{alpha + beta = gamma} a_alpha b_beta.
ChaosSeries wick_product(const ChaosSeries& f, const ChaosSeries& g);

/// I(F)(z) = sum c_alpha z^alpha, z[k-1] holding z_k.
Complex hermite_transform(const ChaosSeries& f, std::span<const Complex> z);

struct KondratievSpace {
  enum class Kind { s1, s_minus_1 } kind;
  int parameter;  ///< k for S1, q for S_{-1}

  static KondratievSpace s1(int k) { return {Kind::s1, k}; }
  static KondratievSpace s_minus_1(int q) { return {Kind::s_minus_1, q}; }
};

/// S1(k):       sum |a|^2 (alpha!)^2 (2N)^{k alpha}
/// S_{-1}(q):   sum |b|^2 (2N)^{-q alpha}
double kondratiev_norm(const ChaosSeries& f, KondratievSpace space);

/// <F, f> = sum alpha! a_alpha b_alpha (bilinear).
Complex dual_pairing(const ChaosSeries& f, const ChaosSeries& g);

/// sum c_alpha prod_k h_{alpha_k}(xi_k), xi[k-1] holding xi_k.
Complex evaluate_realization(const ChaosSeries& f, std::span<const double> xi);

/// Coefficients (index = power of Q) of Q^{<>n} for a centred Gaussian Q
/// with variance sigma2:
///   n! sum_{k=ceil(n/2)}^{n} (-1/2)^{n-k} Q^{2k-n}/(2k-n)! sigma2^{n-k}/(n-k)!
std::vector<double> wick_power_gaussian_closed(double sigma2, int n);

/// n-fold Wick power of sum_k c_k H_{epsilon^(k)}.
ChaosSeries wick_power_gaussian_algebraic(std::span<const double> c, int n);

/// sum_{|alpha| = n} n!/alpha! c^alpha H_alpha (multinomial form).
ChaosSeries wick_power_multinomial(std::span<const double> c, int n);

/// Evaluates a polynomial with coefficients by ascending power.
double polynomial_value(std::span<const double> coeffs, double x);

/// sum_alpha |z^alpha|^2 (2N)^{q alpha} = prod_k 1/(1 - |z_k|^2 (2k)^q),
/// +infinity if some factor has |z_k|^2 (2k)^q >= 1.
double kq_sum(std::span<const Complex> z, int q);

/// z in K_q(delta) iff kq_sum(z, q) < delta^2.
bool kq_delta_membership(std::span<const Complex> z, int q, double delta);

/// One term per line: "k1:a1,k2:a2 re im" (the zero index is "0").
void write_chaos(std::ostream& out, const ChaosSeries& f);
ChaosSeries read_chaos(std::istream& in);

}  // namespace gfbm
