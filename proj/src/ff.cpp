#include "ffgeom/ff.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "ffgeom/error.hpp"

namespace ffgeom::ff {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

std::optional<int> exact_log(std::uint64_t n, std::uint64_t base) {
  if (base < 2 || n == 0) return std::nullopt;
  int k = 0;
  while (n % base == 0) {
    n /= base;
    ++k;
  }
  if (n != 1) return std::nullopt;
  return k;
}

namespace {

using Poly = std::vector<std::uint32_t>;

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p) {
  std::int64_t t = 0, nt = 1, r = p, nr = a;
  while (nr != 0) {
    std::int64_t qt = r / nr;
    t = std::exchange(nt, t - qt * nt);
    r = std::exchange(nr, r - qt * nr);
  }
  if (t < 0) t += p;
  return static_cast<std::uint32_t>(t);
}

// Remainder of a modulo b over F_p; b nonzero.
Poly poly_rem(Poly a, const Poly& b, std::uint32_t p) {
  trim(a);
  const std::size_t db = b.size() - 1;
  const std::uint32_t lead_inv = inv_mod(b.back(), p);
  while (a.size() >= b.size()) {
    const std::uint64_t c = std::uint64_t{a.back()} * lead_inv % p;
    const std::size_t shift = a.size() - 1 - db;
    for (std::size_t i = 0; i <= db; ++i) {
      const std::uint64_t sub = c * b[i] % p;
      a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + p - sub) % p);
    }
    trim(a);
  }
  return a;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

std::uint32_t encode(const detail::FieldData& d, const Poly& c) {
  std::uint32_t v = 0;
  for (std::size_t i = c.size(); i-- > 0;) v = v * d.p + c[i];
  return v;
}

Poly decode(const detail::FieldData& d, std::uint32_t v) {
  Poly c(d.t);
  for (int i = 0; i < d.t; ++i) {
    c[i] = v % d.p;
    v /= d.p;
  }
  return c;
}

std::uint64_t checked_order(std::uint64_t p, int t, std::uint64_t max_order) {
  if (!is_prime(p)) throw Error(Errc::NotPrime, std::to_string(p) + " is not prime");
  if (t < 1) throw Error(Errc::InvalidDegree, "extension degree must be >= 1");
  const std::uint64_t cap = std::min(max_order, kHardMaxOrder - 1);
  std::uint64_t q = 1;
  for (int i = 0; i < t; ++i) {
    q *= p;
    if (q > cap) {
      throw Error(Errc::OrderOverflow,
                  std::to_string(p) + "^" + std::to_string(t) + " exceeds " + std::to_string(cap));
    }
  }
  return q;
}

std::shared_ptr<detail::FieldData> build(std::uint32_t p, int t, std::uint32_t q, Poly modulus) {
  auto d = std::make_shared<detail::FieldData>();
  d->p = p;
  d->t = t;
  d->q = q;
  d->modulus = std::move(modulus);
  d->pow_p.resize(t + 1);
  d->pow_p[0] = 1;
  for (int i = 1; i <= t; ++i) d->pow_p[i] = d->pow_p[i - 1] * p;
  if (t == 1 || q > kTableOrder) return d;

  // Primitive element by order test, then exp/log tables.
  const std::uint64_t group = q - 1;
  const auto factors = prime_factors(group);
  auto slow_pow = [&](std::uint32_t a, std::uint64_t e) {
    std::uint32_t r = 1;
    while (e > 0) {
      if (e & 1) r = d->mul_slow(r, a);
      a = d->mul_slow(a, a);
      e >>= 1;
    }
    return r;
  };
  std::uint32_t g = 2;
  for (;; ++g) {
    bool primitive = true;
    for (auto r : factors) {
      if (slow_pow(g, group / r) == 1) {
        primitive = false;
        break;
      }
    }
    if (primitive) break;
  }
  d->exp.resize(2 * group);
  d->log.assign(q, 0);
  std::uint32_t x = 1;
  for (std::uint64_t i = 0; i < group; ++i) {
    d->exp[i] = x;
    d->exp[i + group] = x;
    d->log[x] = static_cast<std::uint32_t>(i);
    x = d->mul_slow(x, g);
  }
  d->neg.resize(q);
  for (std::uint32_t a = 0; a < q; ++a) d->neg[a] = d->neg_slow(a);
  if (q <= kAddTableOrder) {
    d->add.resize(std::size_t{q} * q);
    for (std::uint32_t a = 0; a < q; ++a) {
      for (std::uint32_t b = 0; b < q; ++b) {
        d->add[std::size_t{a} * q + b] = static_cast<std::uint16_t>(d->add_slow(a, b));
      }
    }
  }
  return d;
}

}  // namespace

namespace detail {

std::uint32_t FieldData::add_slow(std::uint32_t a, std::uint32_t b) const {
  std::uint32_t r = 0;
  for (int i = 0; i < t; ++i) {
    const std::uint32_t s = (a % p + b % p) % p;
    r += s * pow_p[i];
    a /= p;
    b /= p;
  }
  return r;
}

std::uint32_t FieldData::neg_slow(std::uint32_t a) const {
  std::uint32_t r = 0;
  for (int i = 0; i < t; ++i) {
    const std::uint32_t c = a % p;
    r += (c == 0 ? 0 : p - c) * pow_p[i];
    a /= p;
  }
  return r;
}

std::uint32_t FieldData::sub_slow(std::uint32_t a, std::uint32_t b) const {
  return add_slow(a, neg_slow(b));
}

std::uint32_t FieldData::mul_slow(std::uint32_t a, std::uint32_t b) const {
  const Poly x = decode(*this, a);
  const Poly y = decode(*this, b);
  Poly prod(2 * t - 1, 0);
  for (int i = 0; i < t; ++i) {
    if (x[i] == 0) continue;
    for (int j = 0; j < t; ++j) {
      prod[i + j] = static_cast<std::uint32_t>((prod[i + j] + std::uint64_t{x[i]} * y[j]) % p);
    }
  }
  // Reduce with the monic modulus from the top down.
  for (int deg = 2 * t - 2; deg >= t; --deg) {
    const std::uint64_t c = prod[deg];
    if (c == 0) continue;
    prod[deg] = 0;
    for (int i = 0; i < t; ++i) {
      const std::uint64_t sub = c * modulus[i] % p;
      prod[deg - t + i] = static_cast<std::uint32_t>((prod[deg - t + i] + p - sub) % p);
    }
  }
  prod.resize(t);
  return encode(*this, prod);
}

}  // namespace detail

bool is_irreducible(std::uint32_t p, std::span<const std::uint32_t> poly_in) {
  Poly poly(poly_in.begin(), poly_in.end());
  trim(poly);
  if (poly.size() < 2) return false;
  const int t = static_cast<int>(poly.size()) - 1;
  if (t == 1) return true;
  // Trial division by every monic polynomial of degree 1..t/2.
  for (int e = 1; 2 * e <= t; ++e) {
    std::uint64_t count = 1;
    for (int i = 0; i < e; ++i) count *= p;
    Poly div(e + 1, 0);
    div[e] = 1;
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      std::uint64_t r = idx;
      for (int i = 0; i < e; ++i) {
        div[i] = static_cast<std::uint32_t>(r % p);
        r /= p;
      }
      if (poly_rem(poly, div, p).empty()) return false;
    }
  }
  return true;
}

Field make_field(std::uint64_t p, int t, std::uint64_t max_order) {
  const std::uint64_t q = checked_order(p, t, max_order);
  const auto p32 = static_cast<std::uint32_t>(p);
  Poly modulus(t + 1, 0);
  modulus[t] = 1;
  if (t > 1) {
    // Lex order with c_0 as the most significant key: c_0 varies slowest.
    std::uint64_t count = q;
    bool found = false;
    for (std::uint64_t idx = 0; idx < count && !found; ++idx) {
      std::uint64_t r = idx;
      for (int i = t - 1; i >= 0; --i) {
        modulus[i] = static_cast<std::uint32_t>(r % p);
        r /= p;
      }
      found = modulus[0] != 0 && is_irreducible(p32, modulus);
    }
  }
  return Field(build(p32, t, static_cast<std::uint32_t>(q), std::move(modulus)));
}

Field make_field_with_modulus(std::uint64_t p, std::vector<std::uint32_t> modulus,
                              std::uint64_t max_order) {
  const int t = static_cast<int>(modulus.size()) - 1;
  const std::uint64_t q = checked_order(p, t, max_order);
  for (auto c : modulus) {
    if (c >= p) throw Error(Errc::ParseError, "modulus coefficient not reduced mod p");
  }
  if (modulus.back() != 1) throw Error(Errc::ParseError, "modulus is not monic");
  if (!is_irreducible(static_cast<std::uint32_t>(p), modulus)) {
    throw Error(Errc::ParseError, "modulus is reducible");
  }
  return Field(build(static_cast<std::uint32_t>(p), t, static_cast<std::uint32_t>(q),
                     std::move(modulus)));
}

bool operator==(const Field& a, const Field& b) {
  if (a.d_ == b.d_) return true;
  if (!a.d_ || !b.d_) return false;
  return a.d_->p == b.d_->p && a.d_->t == b.d_->t && a.d_->modulus == b.d_->modulus;
}

Elem Field::from_int(std::int64_t n) const {
  std::int64_t r = n % static_cast<std::int64_t>(d_->p);
  if (r < 0) r += d_->p;
  return Elem{static_cast<std::uint32_t>(r)};
}

Elem Field::generator() const {
  if (d_->t == 1) return Elem{0};  // X mod X
  return Elem{d_->p};
}

Elem Field::from_coeffs(std::span<const std::int64_t> coeffs) const {
  // Reduce an arbitrary-degree integer polynomial modulo (p, modulus).
  Poly c(coeffs.size());
  const auto p = static_cast<std::int64_t>(d_->p);
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    std::int64_t r = coeffs[i] % p;
    c[i] = static_cast<std::uint32_t>(r < 0 ? r + p : r);
  }
  if (c.size() > static_cast<std::size_t>(d_->t)) c = poly_rem(c, d_->modulus, d_->p);
  c.resize(d_->t, 0);
  return Elem{encode(*d_, c)};
}

std::vector<std::uint32_t> Field::coeffs(Elem a) const { return decode(*d_, a.v); }

Elem Field::inv(Elem a) const {
  if (a.v == 0) throw Error(Errc::DivisionByZero, "inverse of zero");
  if (d_->t == 1) return Elem{inv_mod(a.v, d_->p)};
  if (d_->tabled()) return Elem{d_->exp[(d_->q - 1 - d_->log[a.v]) % (d_->q - 1)]};
  return pow(a, std::uint64_t{d_->q} - 2);
}

Elem Field::pow(Elem a, std::uint64_t e) const {
  Elem r = one();
  while (e > 0) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

Elem Field::pow(Elem a, std::int64_t e) const {
  if (e >= 0) return pow(a, static_cast<std::uint64_t>(e));
  return pow(inv(a), static_cast<std::uint64_t>(-e));
}

bool Field::is_subfield_order(std::uint64_t q0) const {
  const auto j = exact_log(q0, d_->p);
  return j && *j >= 1 && d_->t % *j == 0;
}

Elem Field::frobenius(Elem x, std::uint64_t base_order) const {
  if (!is_subfield_order(base_order)) {
    throw Error(Errc::NotSubfieldOrder,
                std::to_string(base_order) + " is not a subfield order of F_" +
                    std::to_string(d_->q));
  }
  return pow(x, base_order);
}

Elem Field::rel_norm(Elem x, std::uint64_t base_order) const {
  if (!is_subfield_order(base_order)) {
    throw Error(Errc::NotSubfieldOrder,
                std::to_string(base_order) + " is not a subfield order of F_" +
                    std::to_string(d_->q));
  }
  const int k = d_->t / *exact_log(base_order, d_->p);
  Elem prod = one();
  Elem conj = x;
  for (int j = 0; j < k; ++j) {
    prod = mul(prod, conj);
    conj = pow(conj, base_order);
  }
  return prod;
}

bool Field::in_subfield(Elem x, std::uint64_t base_order) const {
  return frobenius(x, base_order) == x;
}

std::string Field::to_string(Elem a) const {
  if (d_->t == 1) return std::to_string(a.v);
  std::ostringstream os;
  os << '[';
  const auto c = coeffs(a);
  for (std::size_t i = 0; i < c.size(); ++i) os << (i ? "," : "") << c[i];
  os << ']';
  return os.str();
}

FieldElem::FieldElem(Field f, Elem e) : f_(std::move(f)), e_(e) {
  if (!f_.contains(e_)) throw Error(Errc::FieldMismatch, "element out of range for field");
}

namespace {
void same_field(const FieldElem& a, const FieldElem& b) {
  if (!(a.field() == b.field())) throw Error(Errc::FieldMismatch, "operands from different fields");
}
}  // namespace

FieldElem operator+(const FieldElem& a, const FieldElem& b) {
  same_field(a, b);
  return FieldElem(a.f_, a.f_.add(a.e_, b.e_));
}
FieldElem operator-(const FieldElem& a, const FieldElem& b) {
  same_field(a, b);
  return FieldElem(a.f_, a.f_.sub(a.e_, b.e_));
}
FieldElem operator*(const FieldElem& a, const FieldElem& b) {
  same_field(a, b);
  return FieldElem(a.f_, a.f_.mul(a.e_, b.e_));
}
FieldElem operator/(const FieldElem& a, const FieldElem& b) {
  same_field(a, b);
  return FieldElem(a.f_, a.f_.div(a.e_, b.e_));
}
bool operator==(const FieldElem& a, const FieldElem& b) {
  return a.f_ == b.f_ && a.e_ == b.e_;
}

std::vector<Elem> power_residues(const Field& f, int d) {
  std::vector<char> hit(f.order(), 0);
  for (std::uint32_t x = 1; x < f.order(); ++x) {
    hit[f.pow(Elem{x}, static_cast<std::uint64_t>(d)).v] = 1;
  }
  std::vector<Elem> out;
  for (std::uint32_t y = 1; y < f.order(); ++y) {
    if (hit[y]) out.push_back(Elem{y});
  }
  return out;
}

bool is_power_residue(const Field& f, Elem y, int d) {
  if (y.v == 0) return false;
  const std::uint64_t g = std::gcd(static_cast<std::uint64_t>(d), std::uint64_t{f.order()} - 1);
  return f.pow(y, (std::uint64_t{f.order()} - 1) / g) == f.one();
}

std::optional<Elem> dth_root(const Field& f, Elem y, int d) {
  for (std::uint32_t x = 0; x < f.order(); ++x) {
    if (f.pow(Elem{x}, static_cast<std::uint64_t>(d)) == y) return Elem{x};
  }
  return std::nullopt;
}

nlohmann::json field_to_json(const Field& f) {
  return {{"p", f.p()}, {"t", f.t()}, {"modulus", f.modulus()}};
}

Field field_from_json(const nlohmann::json& j, std::uint64_t max_order) {
  try {
    const auto p = j.at("p").get<std::uint64_t>();
    const auto t = j.at("t").get<int>();
    auto modulus = j.at("modulus").get<std::vector<std::uint32_t>>();
    if (static_cast<int>(modulus.size()) != t + 1) {
      throw Error(Errc::ParseError, "modulus length does not match degree");
    }
    if (t == 1) return make_field(p, 1, max_order);
    return make_field_with_modulus(p, std::move(modulus), max_order);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ParseError, e.what());
  }
}

nlohmann::json elem_to_json(const Field& f, Elem a) { return f.coeffs(a); }

Elem elem_from_json(const Field& f, const nlohmann::json& j) {
  try {
    const auto c = j.get<std::vector<std::int64_t>>();
    if (static_cast<int>(c.size()) != f.t()) {
      throw Error(Errc::ParseError, "element has wrong number of coefficients");
    }
    for (auto x : c) {
      if (x < 0 || x >= f.p()) throw Error(Errc::ParseError, "coefficient not reduced mod p");
    }
    return f.from_coeffs(c);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ParseError, e.what());
  }
}

}  // namespace ffgeom::ff
