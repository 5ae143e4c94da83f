#pragma once

// Integer polynomials, Waring decompositions, and the potential
//   Phi_N(x) = x_0^k + sum_{a,b} M^b (sum_{g <= G(a)} x_{a,b,g}^a - sum_{g > G(a)} x_{a,b,g}^a)
// together with a solver for directions y with Phi_N(x + y h) = Phi_N(x) + h^k.

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <json.hpp>

namespace ffgeom::poly {

using BigInt = boost::multiprecision::cpp_int;

/// Dense polynomial over Z, low degree first, no trailing zeros.
class IntPoly {
 public:
  IntPoly() = default;
  explicit IntPoly(std::vector<BigInt> coeffs);
  IntPoly(std::initializer_list<std::int64_t> coeffs);
  static IntPoly constant(BigInt c);
  static IntPoly monomial(BigInt c, int degree);

  int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
  bool is_zero() const { return c_.empty(); }
  const std::vector<BigInt>& coeffs() const { return c_; }
  BigInt coeff(int i) const;
  BigInt eval(const BigInt& x) const;

  IntPoly& operator+=(const IntPoly& o);
  IntPoly& operator-=(const IntPoly& o);
  friend IntPoly operator+(IntPoly a, const IntPoly& b) { return a += b; }
  friend IntPoly operator-(IntPoly a, const IntPoly& b) { return a -= b; }
  friend IntPoly operator-(const IntPoly& a);
  friend IntPoly operator*(const IntPoly& a, const IntPoly& b);
  friend IntPoly operator*(const BigInt& s, const IntPoly& a);
  friend bool operator==(const IntPoly&, const IntPoly&) = default;

 private:
  void trim();
  std::vector<BigInt> c_;
};

IntPoly pow(const IntPoly& p, unsigned e);
/// p(q(T)).
IntPoly compose(const IntPoly& p, const IntPoly& q);
BigInt binomial(unsigned n, unsigned k);
BigInt factorial(unsigned n);

nlohmann::json to_json(const IntPoly& p);
IntPoly poly_from_json(const nlohmann::json& j);

/// deg f < s and every |coefficient| <= M.
bool coeff_box_member(const IntPoly& f, int s, const BigInt& M);

/// sum_i (-1)^i C(k-1,i) (f-i)^k == k! f - k!(k-1)/2, and the centred form
/// sum_i (-1)^i C(k-1,i) (2f+k-1-2i)^k == k! 2^k f, both as exact polynomials.
bool boole_sum_check(int k, const IntPoly& f);
/// sum_j (-1)^{n-j} C(n,j) p(a + j b) == lead(p) b^n n! with n = deg p.
bool finite_difference_check(const IntPoly& p, const BigInt& a, const BigInt& b);

/// Minimum-term k-th power representations of every n in [0, range].
class WaringTable {
 public:
  WaringTable() = default;
  WaringTable(int k, std::int64_t range);

  int k() const { return k_; }
  std::int64_t range() const { return static_cast<std::int64_t>(terms_.size()) - 1; }
  /// Minimum number of positive k-th powers summing to n.
  int min_terms(std::int64_t n) const { return terms_.at(n); }
  /// A minimum representation, largest part first.
  std::vector<std::int64_t> parts(std::int64_t n) const;

  void save(const std::filesystem::path& path) const;
  static WaringTable load(const std::filesystem::path& path);

 private:
  int k_ = 0;
  std::vector<std::uint8_t> terms_;
  std::vector<std::uint32_t> largest_;
};

inline constexpr std::int64_t kWaringRange = 1 << 16;

/// Process-wide table for k covering at least [0, range].
const WaringTable& waring_table(int k, std::int64_t range = kWaringRange);

/// Non-negative x_i (largest first) with sum x_i^k == n using at most budget terms.
/// Throws BudgetInfeasible.
std::vector<std::int64_t> waring_decompose(std::int64_t n, int k, int budget);

struct WaringParams {
  int k = 1;
  int G = 1;
  std::int64_t T = 0;
  std::int64_t range = 0;  // representability certified on [T, range]
};

/// G = largest minimum-term count over [0, range], T = 0.
WaringParams waring_params(int k, std::int64_t range = kWaringRange);

struct WaringIndex {
  int alpha = 0;  // 0 marks the distinguished index
  int beta = 0;
  int gamma = 0;
  friend bool operator==(const WaringIndex&, const WaringIndex&) = default;
};

/// The index set {0} u {(a, b, g) : a in [k-1], b in [0, k^2 (k-a)], g in [2 G(a)]}, ordered
/// with 0 first and then lexicographically.
class IndexSet {
 public:
  explicit IndexSet(int k);

  int k() const { return k_; }
  int ell() const { return k_ * k_; }
  int G(int alpha) const { return params_.at(alpha).G; }
  std::int64_t T(int alpha) const { return params_.at(alpha).T; }
  int beta_max(int alpha) const { return ell() * (k_ - alpha); }
  std::size_t size() const { return entries_.size(); }
  const std::vector<WaringIndex>& entries() const { return entries_; }
  std::size_t index_of(int alpha, int beta, int gamma) const;

 private:
  int k_;
  std::vector<WaringParams> params_;  // indexed by alpha, entry 0 unused
  std::vector<WaringIndex> entries_;
  std::vector<std::size_t> alpha_start_;
};

/// floor(N^{1/k^2}).
std::int64_t phi_modulus(std::int64_t N, int k);
/// Integer m >= 0 with m^e <= n < (m+1)^e.
std::int64_t floor_root(std::int64_t n, int e);

BigInt phi_eval(const IndexSet& I, std::span<const std::int64_t> x, std::int64_t M);
BigInt phi_eval(std::span<const std::int64_t> x, std::int64_t N, int k);
/// Phi(x + y h) as a polynomial in h.
IntPoly phi_along(const IndexSet& I, std::span<const std::int64_t> x,
                  std::span<const std::int64_t> y, std::int64_t M);

struct NiceLine {
  std::vector<std::int64_t> y;
  std::int64_t max_abs = 0;
  double constant = 0;  // max_abs / M
};

/// Requires x in [N]^I. The result is checked symbolically before return; SolveFailed otherwise.
NiceLine nice_line_solve(const IndexSet& I, std::span<const std::int64_t> x, std::int64_t N);

}  // namespace ffgeom::poly
