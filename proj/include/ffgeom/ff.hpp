#pragma once

// Exact arithmetic in F_p and F_{p^t}.
//
// An element of F_q (q = p^t) is stored as the integer  c_0 + c_1 p + ... + c_{t-1} p^{t-1}
// where c_0 + c_1 X + ... + c_{t-1} X^{t-1} is its representative modulo the field's
// irreducible modulus. This encoding is canonical, so element equality and ordering are plain
// integer comparisons. Element order throughout the library means this integer order.
//
// Fields up to kTableOrder elements carry exp/log tables (and an addition table when small);
// larger fields fall back to schoolbook polynomial arithmetic on decoded coefficients.

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace ffgeom::ff {

struct Elem {
  std::uint32_t v = 0;
  friend constexpr auto operator<=>(Elem, Elem) = default;
};

inline constexpr std::uint64_t kDefaultMaxOrder = std::uint64_t{1} << 20;
inline constexpr std::uint64_t kHardMaxOrder = std::uint64_t{1} << 32;
inline constexpr std::uint64_t kTableOrder = std::uint64_t{1} << 20;
inline constexpr std::uint64_t kAddTableOrder = 1024;

bool is_prime(std::uint64_t n);

/// Returns k with base^k == n, or nullopt if n is not a power of base.
std::optional<int> exact_log(std::uint64_t n, std::uint64_t base);

namespace detail {

struct FieldData {
  std::uint32_t p = 0;
  int t = 0;
  std::uint32_t q = 0;
  std::vector<std::uint32_t> modulus;  // t+1 coefficients, low degree first, monic
  std::vector<std::uint32_t> pow_p;    // p^0 .. p^t
  std::vector<std::uint32_t> exp;      // 2(q-1) entries when tabled
  std::vector<std::uint32_t> log;      // q entries when tabled (log[0] unused)
  std::vector<std::uint16_t> add;      // q*q entries for tiny fields
  std::vector<std::uint32_t> neg;      // q entries when tabled

  bool tabled() const { return !exp.empty(); }
  std::uint32_t add_slow(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t sub_slow(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t neg_slow(std::uint32_t a) const;
  std::uint32_t mul_slow(std::uint32_t a, std::uint32_t b) const;
};

}  // namespace detail

/// An explicit finite field F_{p^t} with a fixed polynomial basis. Cheap to copy; all copies
/// share one immutable table block.
class Field {
 public:
  Field() = default;

  std::uint32_t p() const { return d_->p; }
  int t() const { return d_->t; }
  std::uint32_t order() const { return d_->q; }
  const std::vector<std::uint32_t>& modulus() const { return d_->modulus; }

  Elem zero() const { return Elem{0}; }
  Elem one() const { return Elem{1}; }
  /// Image of an integer in the prime subfield.
  Elem from_int(std::int64_t n) const;
  /// The class of X in F_p[X]/(modulus).
  Elem generator() const;
  Elem from_coeffs(std::span<const std::int64_t> coeffs) const;
  std::vector<std::uint32_t> coeffs(Elem a) const;
  bool contains(Elem a) const { return a.v < d_->q; }

  Elem add(Elem a, Elem b) const {
    if (d_->t == 1) {
      std::uint32_t s = a.v + b.v;
      return Elem{s >= d_->p ? s - d_->p : s};
    }
    if (!d_->add.empty()) return Elem{d_->add[std::size_t{a.v} * d_->q + b.v]};
    return Elem{d_->add_slow(a.v, b.v)};
  }
  Elem neg(Elem a) const {
    if (d_->t == 1) return Elem{a.v == 0 ? 0 : d_->p - a.v};
    if (!d_->neg.empty()) return Elem{d_->neg[a.v]};
    return Elem{d_->neg_slow(a.v)};
  }
  Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }
  Elem mul(Elem a, Elem b) const {
    if (a.v == 0 || b.v == 0) return Elem{0};
    if (d_->t == 1) {
      return Elem{static_cast<std::uint32_t>(std::uint64_t{a.v} * b.v % d_->p)};
    }
    if (d_->tabled()) return Elem{d_->exp[d_->log[a.v] + d_->log[b.v]]};
    return Elem{d_->mul_slow(a.v, b.v)};
  }
  /// Throws DivisionByZero on a == 0.
  Elem inv(Elem a) const;
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
  Elem pow(Elem a, std::uint64_t e) const;
  Elem pow(Elem a, std::int64_t e) const;

  bool is_subfield_order(std::uint64_t q0) const;
  /// x -> x^{q0}. Throws NotSubfieldOrder unless F_{q0} is a subfield.
  Elem frobenius(Elem x, std::uint64_t base_order) const;
  /// Product of the Galois conjugates of x over F_{q0}.
  Elem rel_norm(Elem x, std::uint64_t base_order) const;
  bool in_subfield(Elem x, std::uint64_t base_order) const;

  std::string to_string(Elem a) const;

  friend bool operator==(const Field& a, const Field& b);

 private:
  friend Field make_field(std::uint64_t, int, std::uint64_t);
  friend Field make_field_with_modulus(std::uint64_t, std::vector<std::uint32_t>, std::uint64_t);
  explicit Field(std::shared_ptr<const detail::FieldData> d) : d_(std::move(d)) {}

  std::shared_ptr<const detail::FieldData> d_;
};

/// F_{p^t} with the lexicographically smallest monic irreducible modulus of degree t
/// (coefficients compared c_0 first). For t = 1 the modulus is X.
Field make_field(std::uint64_t p, int t, std::uint64_t max_order = kDefaultMaxOrder);
/// As make_field but with a caller-chosen modulus, checked for monicity and irreducibility.
Field make_field_with_modulus(std::uint64_t p, std::vector<std::uint32_t> modulus,
                              std::uint64_t max_order = kDefaultMaxOrder);

bool is_irreducible(std::uint32_t p, std::span<const std::uint32_t> poly);

/// Field element bound to its field; mixing fields throws FieldMismatch.
class FieldElem {
 public:
  FieldElem(Field f, Elem e);
  const Field& field() const { return f_; }
  Elem value() const { return e_; }

  friend FieldElem operator+(const FieldElem& a, const FieldElem& b);
  friend FieldElem operator-(const FieldElem& a, const FieldElem& b);
  friend FieldElem operator*(const FieldElem& a, const FieldElem& b);
  friend FieldElem operator/(const FieldElem& a, const FieldElem& b);
  FieldElem inv() const { return FieldElem(f_, f_.inv(e_)); }
  FieldElem pow(std::int64_t e) const { return FieldElem(f_, f_.pow(e_, e)); }
  friend bool operator==(const FieldElem& a, const FieldElem& b);

 private:
  Field f_;
  Elem e_;
};

/// D_d^x: the distinct nonzero d-th powers, sorted.
std::vector<Elem> power_residues(const Field& f, int d);
bool is_power_residue(const Field& f, Elem y, int d);
/// Smallest v (element order) with v^d == y, if any.
std::optional<Elem> dth_root(const Field& f, Elem y, int d);

nlohmann::json field_to_json(const Field& f);
Field field_from_json(const nlohmann::json& j, std::uint64_t max_order = kHardMaxOrder - 1);
nlohmann::json elem_to_json(const Field& f, Elem a);
Elem elem_from_json(const Field& f, const nlohmann::json& j);

}  // namespace ffgeom::ff
