#include "ffgeom/polyring.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <memory>
#include <mutex>

#include "ffgeom/error.hpp"

namespace ffgeom::poly {

IntPoly::IntPoly(std::vector<BigInt> coeffs) : c_(std::move(coeffs)) { trim(); }

IntPoly::IntPoly(std::initializer_list<std::int64_t> coeffs) {
  for (auto c : coeffs) c_.emplace_back(c);
  trim();
}

IntPoly IntPoly::constant(BigInt c) { return IntPoly(std::vector<BigInt>{std::move(c)}); }

IntPoly IntPoly::monomial(BigInt c, int degree) {
  std::vector<BigInt> v(degree + 1);
  v[degree] = std::move(c);
  return IntPoly(std::move(v));
}

void IntPoly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

BigInt IntPoly::coeff(int i) const {
  if (i < 0 || i > degree()) return 0;
  return c_[i];
}

BigInt IntPoly::eval(const BigInt& x) const {
  BigInt acc = 0;
  for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
  return acc;
}

IntPoly& IntPoly::operator+=(const IntPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
  trim();
  return *this;
}

IntPoly& IntPoly::operator-=(const IntPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
  trim();
  return *this;
}

IntPoly operator-(const IntPoly& a) {
  IntPoly r = a;
  for (auto& c : r.c_) c = -c;
  return r;
}

IntPoly operator*(const IntPoly& a, const IntPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<BigInt> r(a.c_.size() + b.c_.size() - 1);
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i] == 0) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
  }
  return IntPoly(std::move(r));
}

IntPoly operator*(const BigInt& s, const IntPoly& a) {
  std::vector<BigInt> r = a.c_;
  for (auto& c : r) c *= s;
  return IntPoly(std::move(r));
}

IntPoly pow(const IntPoly& p, unsigned e) {
  IntPoly r = IntPoly::constant(1);
  IntPoly b = p;
  while (e > 0) {
    if (e & 1) r = r * b;
    e >>= 1;
    if (e > 0) b = b * b;
  }
  return r;
}

IntPoly compose(const IntPoly& p, const IntPoly& q) {
  IntPoly acc;
  for (int i = p.degree(); i >= 0; --i) acc = acc * q + IntPoly::constant(p.coeff(i));
  return acc;
}

BigInt binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  BigInt r = 1;
  for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

BigInt factorial(unsigned n) {
  BigInt r = 1;
  for (unsigned i = 2; i <= n; ++i) r *= i;
  return r;
}

nlohmann::json to_json(const IntPoly& p) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& c : p.coeffs()) {
    if (c >= std::numeric_limits<std::int64_t>::min() && c <= std::numeric_limits<std::int64_t>::max()) {
      j.push_back(c.convert_to<std::int64_t>());
    } else {
      j.push_back(c.str());
    }
  }
  return j;
}

IntPoly poly_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw Error(Errc::ParseError, "polynomial must be an array");
  std::vector<BigInt> c;
  try {
    for (const auto& e : j) {
      if (e.is_number_integer()) {
        c.emplace_back(e.get<std::int64_t>());
      } else if (e.is_string()) {
        c.emplace_back(e.get<std::string>());
      } else {
        throw Error(Errc::ParseError, "polynomial coefficient must be an integer");
      }
    }
  } catch (const std::runtime_error& e) {
    throw Error(Errc::ParseError, e.what());
  }
  return IntPoly(std::move(c));
}

bool coeff_box_member(const IntPoly& f, int s, const BigInt& M) {
  if (f.degree() >= s) return false;
  for (const auto& c : f.coeffs()) {
    if (abs(c) > M) return false;
  }
  return true;
}

bool boole_sum_check(int k, const IntPoly& f) {
  if (k < 1) throw Error(Errc::ParameterViolation, "k must be positive");
  const unsigned uk = static_cast<unsigned>(k);
  const BigInt kf = factorial(uk);
  IntPoly lhs, centred;
  for (unsigned i = 0; i < uk; ++i) {
    BigInt c = binomial(uk - 1, i);
    if (i % 2 == 1) c = -c;
    lhs += c * pow(f - IntPoly::constant(i), uk);
    IntPoly g = BigInt(2) * f + IntPoly::constant(BigInt(k - 1) - 2 * BigInt(i));
    centred += c * pow(g, uk);
  }
  const IntPoly rhs = kf * f - IntPoly::constant(kf * (k - 1) / 2);
  const IntPoly centred_rhs = (kf << k) * f;
  return lhs == rhs && centred == centred_rhs;
}

bool finite_difference_check(const IntPoly& p, const BigInt& a, const BigInt& b) {
  const int n = p.degree();
  if (n < 0) return true;
  BigInt sum = 0;
  for (int j = 0; j <= n; ++j) {
    BigInt term = binomial(n, j) * p.eval(a + j * b);
    sum += (n - j) % 2 == 0 ? term : BigInt(-term);
  }
  BigInt bn = 1;
  for (int i = 0; i < n; ++i) bn *= b;
  return sum == p.coeff(n) * bn * factorial(n);
}

std::int64_t floor_root(std::int64_t n, int e) {
  if (n < 0 || e < 1) throw Error(Errc::ParameterViolation, "floor_root needs n >= 0, e >= 1");
  if (e == 1 || n < 2) return n;
  auto fits = [&](std::int64_t m) {
    __int128 y = 1;
    for (int i = 0; i < e; ++i) {
      y *= m;
      if (y > n) return false;
    }
    return true;
  };
  auto m = static_cast<std::int64_t>(std::pow(static_cast<double>(n), 1.0 / e));
  while (m > 0 && !fits(m)) --m;
  while (fits(m + 1)) ++m;
  return m;
}

namespace {

std::int64_t ipow(std::int64_t x, int k) {
  std::int64_t y = 1;
  for (int i = 0; i < k; ++i) y *= x;
  return y;
}

constexpr std::uint32_t kTableMagic = 0x57524e47;  // "WRNG"

}  // namespace

WaringTable::WaringTable(int k, std::int64_t range) : k_(k) {
  if (k < 1 || range < 0) throw Error(Errc::ParameterViolation, "bad Waring table parameters");
  terms_.assign(range + 1, 0xff);
  largest_.assign(range + 1, 0);
  terms_[0] = 0;
  if (k == 1) {
    for (std::int64_t n = 1; n <= range; ++n) {
      terms_[n] = 1;
      largest_[n] = static_cast<std::uint32_t>(n);
    }
    return;
  }
  std::vector<std::int64_t> powers;
  for (std::int64_t x = 1; ipow(x, k) <= range; ++x) powers.push_back(ipow(x, k));
  for (std::int64_t n = 1; n <= range; ++n) {
    int best = 0xff;
    std::uint32_t arg = 0;
    for (std::size_t i = 0; i < powers.size() && powers[i] <= n; ++i) {
      const int c = terms_[n - powers[i]] + 1;
      if (c <= best) {
        best = c;
        arg = static_cast<std::uint32_t>(i + 1);
      }
    }
    terms_[n] = static_cast<std::uint8_t>(std::min(best, 0xff));
    largest_[n] = arg;
  }
}

std::vector<std::int64_t> WaringTable::parts(std::int64_t n) const {
  std::vector<std::int64_t> out;
  while (n > 0) {
    const std::int64_t x = largest_.at(n);
    out.push_back(x);
    n -= ipow(x, k_);
  }
  std::sort(out.rbegin(), out.rend());
  return out;
}

void WaringTable::save(const std::filesystem::path& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(Errc::ParseError, "cannot write " + path.string());
  const std::uint32_t header[2] = {kTableMagic, static_cast<std::uint32_t>(k_)};
  const std::int64_t range = this->range();
  os.write(reinterpret_cast<const char*>(header), sizeof header);
  os.write(reinterpret_cast<const char*>(&range), sizeof range);
  os.write(reinterpret_cast<const char*>(terms_.data()), static_cast<std::streamsize>(terms_.size()));
  os.write(reinterpret_cast<const char*>(largest_.data()),
           static_cast<std::streamsize>(largest_.size() * sizeof(std::uint32_t)));
}

WaringTable WaringTable::load(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(Errc::ParseError, "cannot read " + path.string());
  std::uint32_t header[2];
  std::int64_t range = -1;
  is.read(reinterpret_cast<char*>(header), sizeof header);
  is.read(reinterpret_cast<char*>(&range), sizeof range);
  if (!is || header[0] != kTableMagic || range < 0 || header[1] < 1) {
    throw Error(Errc::ParseError, "not a Waring table: " + path.string());
  }
  WaringTable t;
  t.k_ = static_cast<int>(header[1]);
  t.terms_.resize(range + 1);
  t.largest_.resize(range + 1);
  is.read(reinterpret_cast<char*>(t.terms_.data()), static_cast<std::streamsize>(t.terms_.size()));
  is.read(reinterpret_cast<char*>(t.largest_.data()),
          static_cast<std::streamsize>(t.largest_.size() * sizeof(std::uint32_t)));
  if (!is) throw Error(Errc::ParseError, "truncated Waring table: " + path.string());
  return t;
}

const WaringTable& waring_table(int k, std::int64_t range) {
  static std::mutex mu;
  static std::map<int, std::vector<std::unique_ptr<WaringTable>>> cache;
  std::lock_guard lock(mu);
  auto& tables = cache[k];
  if (tables.empty() || tables.back()->range() < range) {
    tables.push_back(std::make_unique<WaringTable>(k, range));
  }
  return *tables.back();
}

namespace {

bool search(std::int64_t n, int k, int budget, std::int64_t max_part, const WaringTable& t,
            std::vector<std::int64_t>& out) {
  if (n == 0) return true;
  if (budget == 0) return false;
  if (n <= t.range()) {
    if (t.min_terms(n) > budget) return false;
    const auto p = t.parts(n);
    out.insert(out.end(), p.begin(), p.end());
    return true;
  }
  for (std::int64_t x = std::min(floor_root(n, k), max_part); x >= 1; --x) {
    const std::int64_t xk = ipow(x, k);
    const std::int64_t rest = n - xk;
    if (rest > static_cast<std::int64_t>(budget - 1) * xk) break;
    out.push_back(x);
    if (search(rest, k, budget - 1, x, t, out)) return true;
    out.pop_back();
  }
  return false;
}

}  // namespace

std::vector<std::int64_t> waring_decompose(std::int64_t n, int k, int budget) {
  if (k < 1 || budget < 1) throw Error(Errc::ParameterViolation, "k and budget must be positive");
  auto fail = [&] {
    return Error(Errc::BudgetInfeasible, std::to_string(n) + " is not a sum of " +
                                             std::to_string(budget) + " " + std::to_string(k) +
                                             "-th powers");
  };
  if (n < 0) throw fail();
  if (n == 0) return {};
  if (k == 1) return {n};
  std::vector<std::int64_t> out;
  if (!search(n, k, budget, std::numeric_limits<std::int64_t>::max(), waring_table(k), out)) {
    throw fail();
  }
  std::sort(out.rbegin(), out.rend());
  return out;
}

WaringParams waring_params(int k, std::int64_t range) {
  if (k == 1) return {1, 1, 0, range};
  const WaringTable& t = waring_table(k, range);
  int g = 0;
  for (std::int64_t n = 0; n <= range; ++n) g = std::max(g, t.min_terms(n));
  return {k, g, 0, range};
}

IndexSet::IndexSet(int k) : k_(k) {
  if (k < 1) throw Error(Errc::ParameterViolation, "k must be positive");
  params_.resize(k);
  alpha_start_.assign(k, 0);
  entries_.push_back({0, 0, 0});
  for (int a = 1; a < k; ++a) {
    params_[a] = waring_params(a);
    alpha_start_[a] = entries_.size();
    for (int b = 0; b <= beta_max(a); ++b) {
      for (int g = 1; g <= 2 * params_[a].G; ++g) entries_.push_back({a, b, g});
    }
  }
}

std::size_t IndexSet::index_of(int alpha, int beta, int gamma) const {
  if (alpha == 0) return 0;
  if (alpha < 1 || alpha >= k_ || beta < 0 || beta > beta_max(alpha) || gamma < 1 ||
      gamma > 2 * G(alpha)) {
    throw Error(Errc::IndexMismatch, "index outside the index set");
  }
  return alpha_start_[alpha] + static_cast<std::size_t>(beta) * 2 * G(alpha) + (gamma - 1);
}

std::int64_t phi_modulus(std::int64_t N, int k) { return floor_root(N, k * k); }

namespace {

void check_size(const IndexSet& I, std::size_t n) {
  if (n != I.size()) {
    throw Error(Errc::IndexMismatch, "vector of length " + std::to_string(n) +
                                         " does not match index set of size " +
                                         std::to_string(I.size()));
  }
}

BigInt term_weight(const IndexSet& I, const WaringIndex& e, const std::vector<BigInt>& mpow) {
  const BigInt& w = mpow[e.beta];
  return e.gamma <= I.G(e.alpha) ? w : BigInt(-w);
}

std::vector<BigInt> m_powers(const IndexSet& I, std::int64_t M) {
  std::vector<BigInt> mp(I.ell() * I.k() + 1);
  mp[0] = 1;
  for (std::size_t i = 1; i < mp.size(); ++i) mp[i] = mp[i - 1] * M;
  return mp;
}

}  // namespace

BigInt phi_eval(const IndexSet& I, std::span<const std::int64_t> x, std::int64_t M) {
  check_size(I, x.size());
  const auto mp = m_powers(I, M);
  BigInt acc = boost::multiprecision::pow(BigInt(x[0]), I.k());
  for (std::size_t i = 1; i < x.size(); ++i) {
    const auto& e = I.entries()[i];
    acc += term_weight(I, e, mp) * boost::multiprecision::pow(BigInt(x[i]), e.alpha);
  }
  return acc;
}

BigInt phi_eval(std::span<const std::int64_t> x, std::int64_t N, int k) {
  const IndexSet I(k);
  return phi_eval(I, x, phi_modulus(N, k));
}

IntPoly phi_along(const IndexSet& I, std::span<const std::int64_t> x,
                  std::span<const std::int64_t> y, std::int64_t M) {
  check_size(I, x.size());
  check_size(I, y.size());
  const auto mp = m_powers(I, M);
  IntPoly acc = pow(IntPoly{x[0], y[0]}, I.k());
  for (std::size_t i = 1; i < x.size(); ++i) {
    const auto& e = I.entries()[i];
    acc += term_weight(I, e, mp) * pow(IntPoly{x[i], y[i]}, e.alpha);
  }
  return acc;
}

NiceLine nice_line_solve(const IndexSet& I, std::span<const std::int64_t> x, std::int64_t N) {
  check_size(I, x.size());
  for (auto v : x) {
    if (v < 1 || v > N) throw Error(Errc::RangeViolation, "x must lie in [N]^I");
  }
  const int k = I.k();
  const std::int64_t M = phi_modulus(N, k);
  const auto mp = m_powers(I, M);
  std::vector<std::int64_t> y(I.size(), 0);
  y[0] = 1;

  for (int a = k - 1; a >= 1; --a) {
    // Coefficient of h^a contributed by everything except the block a itself.
    BigInt R = -binomial(k, a) * boost::multiprecision::pow(BigInt(x[0]), k - a);
    for (std::size_t i = 1; i < I.size(); ++i) {
      const auto& e = I.entries()[i];
      if (e.alpha <= a) continue;
      R -= term_weight(I, e, mp) * binomial(e.alpha, a) *
           boost::multiprecision::pow(BigInt(x[i]), e.alpha - a) *
           boost::multiprecision::pow(BigInt(y[i]), a);
    }
    const int top = I.beta_max(a);
    std::vector<BigInt> digits(top + 1, 0);
    if (M <= 1) {
      digits[0] = R;
    } else {
      BigInt r = R;
      for (int b = 0; b < top; ++b) {
        digits[b] = r % M;
        r = (r - digits[b]) / M;
      }
      digits[top] = r;
    }
    const int G = I.G(a);
    const std::int64_t T = I.T(a);
    for (int b = 0; b <= top; ++b) {
      if (abs(digits[b]) > BigInt(std::numeric_limits<std::int64_t>::max() / 4)) {
        throw Error(Errc::SolveFailed, "residue too large for the Waring step");
      }
      const auto rb = digits[b].convert_to<std::int64_t>();
      std::vector<std::int64_t> pos, neg;
      try {
        pos = waring_decompose(std::max<std::int64_t>(rb, 0) + T, a, G);
        neg = waring_decompose(std::max<std::int64_t>(-rb, 0) + T, a, G);
      } catch (const Error& e) {
        throw Error(Errc::SolveFailed, e.what());
      }
      for (std::size_t g = 0; g < pos.size(); ++g) y[I.index_of(a, b, static_cast<int>(g) + 1)] = pos[g];
      for (std::size_t g = 0; g < neg.size(); ++g) {
        y[I.index_of(a, b, G + static_cast<int>(g) + 1)] = neg[g];
      }
    }
  }

  const IntPoly lhs = phi_along(I, x, y, M);
  const IntPoly rhs = IntPoly::constant(phi_eval(I, x, M)) + IntPoly::monomial(1, k);
  if (!(lhs == rhs)) throw Error(Errc::SolveFailed, "direction failed the symbolic identity check");

  NiceLine out;
  out.y = std::move(y);
  for (auto v : out.y) out.max_abs = std::max<std::int64_t>(out.max_abs, std::llabs(v));
  out.constant = static_cast<double>(out.max_abs) / static_cast<double>(std::max<std::int64_t>(M, 1));
  return out;
}

}  // namespace ffgeom::poly
