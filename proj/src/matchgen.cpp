#include "ffgeom/matchgen.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "ffgeom/error.hpp"
#include "ffgeom/polyring.hpp"

namespace ffgeom::matchgen {

namespace {

using diffsets::PowerFreeSet;

constexpr std::uint64_t kMaxPairs = std::uint64_t{1} << 24;

BigRational rat(std::uint64_t n) { return BigRational(boost::multiprecision::cpp_int(n)); }

BigRational rat_pow(std::uint64_t base, std::uint64_t e) {
  boost::multiprecision::cpp_int r = 1;
  for (std::uint64_t i = 0; i < e; ++i) r *= base;
  return BigRational(r);
}

void sort_pairs(Matching& m) {
  std::vector<std::size_t> order(m.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return m.points[a] < m.points[b]; });
  Matching out{m.field, m.d, {}, {}};
  out.points.reserve(m.size());
  out.lines.reserve(m.size());
  for (auto i : order) out.add(std::move(m.points[i]), std::move(m.lines[i]));
  m = std::move(out);
}

void require_verified(const Matching& m, const std::string& what) {
  if (auto v = geom::verify_induced_matching(m)) {
    throw Error(Errc::VerificationFailed, what + ": pair (" + std::to_string(v->i) + ", " +
                                              std::to_string(v->j) + ") violates inducedness");
  }
}

ConstructionReport finish(std::string method, std::string tag, Matching m) {
  sort_pairs(m);
  require_verified(m, method);
  ConstructionReport r;
  r.method = std::move(method);
  r.tag = std::move(tag);
  r.size = m.size();
  r.matching = std::move(m);
  r.verified = true;
  return r;
}

std::uint32_t checked_prime(std::uint64_t p) {
  if (!ff::is_prime(p) || p > 0xffffffffu) {
    throw Error(Errc::NotPrime, std::to_string(p) + " is not a prime");
  }
  return static_cast<std::uint32_t>(p);
}

// Evenly spaced sample of at most n indices out of total.
std::vector<std::size_t> sample_indices(std::size_t total, std::size_t n) {
  std::vector<std::size_t> out;
  if (total == 0) return out;
  const std::size_t step = std::max<std::size_t>(1, total / std::min(total, n));
  for (std::size_t i = 0; i < total && out.size() < n; i += step) out.push_back(i);
  return out;
}

void check_power_free(const PowerFreeSet& A, int k) {
  if (A.k != k) throw Error(Errc::ParameterViolation, "set must avoid " + std::to_string(k) + "-th power differences");
  if (auto v = diffsets::verify_power_free(A)) {
    throw Error(Errc::NotIndependent, std::to_string(v->b) + " - " + std::to_string(v->a) + " = " +
                                          std::to_string(v->m) + "^" + std::to_string(k));
  }
}

}  // namespace

// ---------------------------------------------------------------------------------------------
// Unital

ConstructionReport hermitian_unital(std::uint32_t p) {
  checked_prime(p);
  const Field f = ff::make_field(p, 2);
  const std::uint32_t q = f.order();
  std::vector<Elem> norm(q), frob(q);
  for (std::uint32_t x = 0; x < q; ++x) {
    frob[x] = f.pow(Elem{x}, std::uint64_t{p});
    norm[x] = f.mul(frob[x], Elem{x});
  }
  Matching m{f, 2, {}, {}};
  for (std::uint32_t a = 0; a < q; ++a) {
    for (std::uint32_t b = 0; b < q; ++b) {
      if (f.add(norm[a], norm[b]) != f.one()) continue;
      // Tangent a^p x + b^p y = 1 runs along (b^p, -a^p).
      m.add({Elem{a}, Elem{b}}, geom::make_line(f, {Elem{a}, Elem{b}}, {frob[b], f.neg(frob[a])}));
    }
  }
  auto r = finish("unital", "hermitian unital tangents", std::move(m));
  r.floor_formula = "p^3-p";
  r.floor = rat(std::uint64_t{p} * p * p - p);
  r.details = {{"p", p}, {"q", q}};
  return r;
}

// ---------------------------------------------------------------------------------------------
// Paley

namespace {

void require_paley_field(const Field& f) {
  if (f.p() % 4 != 1) {
    throw Error(Errc::BadCongruence, "characteristic " + std::to_string(f.p()) + " is not 1 mod 4");
  }
}

std::vector<char> square_table(const Field& f) {
  std::vector<char> sq(f.order(), 0);
  for (std::uint32_t x = 1; x < f.order(); ++x) sq[f.mul(Elem{x}, Elem{x}).v] = 1;
  return sq;
}

}  // namespace

std::vector<Elem> paley_independent_set(const Field& f) {
  require_paley_field(f);
  const auto sq = square_table(f);
  const std::uint32_t q = f.order();
  std::vector<Elem> out;
  if (q <= 64) {
    std::vector<std::uint64_t> adj(q, 0);
    for (std::uint32_t a = 0; a < q; ++a)
      for (std::uint32_t b = 0; b < q; ++b)
        if (a != b && sq[f.sub(Elem{a}, Elem{b}).v]) adj[a] |= std::uint64_t{1} << b;
    for (int v : diffsets::max_independent_set(adj)) out.push_back(Elem{static_cast<std::uint32_t>(v)});
    return out;
  }
  for (std::uint32_t x = 0; x < q; ++x) {
    const bool ok = std::none_of(out.begin(), out.end(), [&](Elem y) { return sq[f.sub(Elem{x}, y).v]; });
    if (ok) out.push_back(Elem{x});
  }
  return out;
}

ConstructionReport paley_lift(const Field& f, const std::vector<Elem>& I) {
  require_paley_field(f);
  const auto sq = square_table(f);
  std::set<Elem> seen;
  for (Elem a : I) {
    if (!f.contains(a)) throw Error(Errc::FieldMismatch, "element outside the field");
    if (!seen.insert(a).second) throw Error(Errc::NotIndependent, "repeated element " + f.to_string(a));
    for (Elem b : I) {
      if (a != b && sq[f.sub(a, b).v]) {
        throw Error(Errc::NotIndependent, f.to_string(a) + " - " + f.to_string(b) + " is a square");
      }
    }
  }
  Matching m{f, 2, {}, {}};
  const Elem two = f.from_int(2);
  for (Elem i : I) {
    for (std::uint32_t y = 0; y < f.order(); ++y) {
      const Elem ye{y};
      const Point pt{f.sub(i, f.mul(ye, ye)), ye};
      m.add(pt, geom::make_line(f, pt, {f.neg(f.mul(two, ye)), f.one()}));
    }
  }
  auto r = finish("paley", "paley graph lift", std::move(m));
  r.floor_formula = "q|I|";
  r.floor = rat(std::uint64_t{f.order()} * I.size());
  r.details = {{"q", f.order()}, {"I", I.size()}};
  return r;
}

// ---------------------------------------------------------------------------------------------
// Ruzsa lift in the prime plane

ConstructionReport ruzsa_lift_2d(std::uint32_t q, const PowerFreeSet& A) {
  checked_prime(q);
  if (q == 2) throw Error(Errc::ParameterViolation, "q must be odd");
  check_power_free(A, 2);
  const std::int64_t limit = q / 10;
  for (auto a : A.elements) {
    if (a < 1 || a > limit) {
      throw Error(Errc::RangeViolation, "element " + std::to_string(a) + " outside [1, " + std::to_string(limit) + "]");
    }
  }
  // x ranges over [N] and y over [M]; the opposite reading breaks (N-1) + (M-1)^2 < q.
  const std::int64_t N = q / 3;
  const std::int64_t M = poly::floor_root(q, 2) / 2;
  const Field f = ff::make_field(q, 1);
  Matching m{f, 2, {}, {}};
  for (std::int64_t y = 1; y <= M; ++y) {
    for (auto a : A.elements) {
      const std::int64_t twice = a + y * y;
      if (twice % 2 != 0) continue;
      const std::int64_t x = twice / 2;
      if (x < 1 || x > N) continue;
      const Point pt{f.from_int(x), f.from_int(y)};
      m.add(pt, geom::make_line(f, pt, {f.from_int(y), f.one()}));
    }
  }
  auto r = finish("ruzsa2d", "square-difference-free lift over a prime", std::move(m));
  r.floor_formula = "floor(M/2)|A|";
  r.floor = rat(static_cast<std::uint64_t>(M / 2) * A.elements.size());
  r.details = {{"q", q}, {"N", N}, {"M", M}, {"A", A.elements.size()}};
  return r;
}

// ---------------------------------------------------------------------------------------------
// d-th power lift

Elem phi_power(const Field& f, const Point& x) {
  Elem acc = f.zero();
  for (std::size_t i = 0; i < x.size(); ++i) acc = f.add(acc, f.pow(x[i], std::uint64_t{i + 1}));
  return acc;
}

bool power_identity_holds(const Field& f, const Point& p, const Point& v) {
  const Elem base = phi_power(f, p);
  const auto d = static_cast<std::uint64_t>(p.size());
  for (std::uint32_t l = 0; l < f.order(); ++l) {
    Point moved(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) moved[i] = f.add(p[i], f.mul(Elem{l}, v[i]));
    if (phi_power(f, moved) != f.add(base, f.pow(Elem{l}, d))) return false;
  }
  return true;
}

std::vector<PowerTuple> admissible_tuples(const Field& f, int d) {
  if (d < 1) throw Error(Errc::InvalidDegree, "dimension must be positive");
  if (f.p() <= static_cast<std::uint32_t>(d)) {
    throw Error(Errc::CharTooSmall, "characteristic must exceed d = " + std::to_string(d));
  }
  const std::uint32_t q = f.order();
  double total = 1;
  for (int i = 1; i < d; ++i) total *= q - 1;
  if (total > static_cast<double>(kMaxPairs)) {
    throw Error(Errc::BudgetExceeded, "too many tuples to enumerate");
  }
  // Smallest r-th root of each element, or q when none.
  std::vector<std::vector<std::uint32_t>> root(d, std::vector<std::uint32_t>());
  for (int r = 2; r < d; ++r) {
    root[r].assign(q, q);
    for (std::uint32_t x = q; x-- > 1;) root[r][f.pow(Elem{x}, std::uint64_t(r)).v] = x;
  }
  std::vector<PowerTuple> out;
  Point x(d + 1), v(d + 1);  // 1-based
  v[d] = f.one();
  auto rhs = [&](int r) {
    Elem acc = f.zero();
    for (int i = r + 1; i <= d; ++i) {
      const Elem c = f.from_int(static_cast<std::int64_t>(poly::binomial(i, r)));
      acc = f.add(acc, f.mul(c, f.mul(f.pow(x[i], std::uint64_t(i - r)), f.pow(v[i], std::uint64_t(r)))));
    }
    return f.neg(acc);
  };
  // Choose x_r, then solve for v_{r-1}.
  std::function<void(int)> rec = [&](int r) {
    if (r == 1) {
      PowerTuple t;
      t.x.assign(x.begin() + 2, x.end());
      t.v.assign(v.begin() + 1, v.end());
      out.push_back(std::move(t));
      return;
    }
    for (std::uint32_t xr = 1; xr < q; ++xr) {
      x[r] = Elem{xr};
      const Elem c = rhs(r - 1);
      if (r - 1 == 1) {
        v[1] = c;
      } else {
        if (c.v == 0 || root[r - 1][c.v] == q) continue;
        v[r - 1] = Elem{root[r - 1][c.v]};
      }
      rec(r - 1);
    }
  };
  if (d == 1) {
    out.push_back(PowerTuple{{}, {f.one()}});
    return out;
  }
  rec(d);
  std::sort(out.begin(), out.end(), [](const PowerTuple& a, const PowerTuple& b) { return a.x < b.x; });
  return out;
}

ConstructionReport dth_power_lift(const Field& f, int d, const std::vector<Elem>& I) {
  const auto tuples = admissible_tuples(f, d);
  std::set<Elem> seen;
  for (Elem a : I) {
    if (!seen.insert(a).second) throw Error(Errc::NotIndependent, "repeated element " + f.to_string(a));
    for (Elem b : I) {
      if (a != b && ff::is_power_residue(f, f.sub(a, b), d)) {
        throw Error(Errc::NotIndependent, f.to_string(a) + " - " + f.to_string(b) + " is a d-th power");
      }
    }
  }
  Matching m{f, d, {}, {}};
  std::vector<const Point*> raw;
  for (Elem i : I) {
    for (const auto& t : tuples) {
      raw.push_back(&t.v);
      Point pt(d);
      Elem rest = f.zero();
      for (int j = 2; j <= d; ++j) {
        pt[j - 1] = t.x[j - 2];
        rest = f.add(rest, f.pow(t.x[j - 2], std::uint64_t(j)));
      }
      pt[0] = f.sub(i, rest);
      m.add(pt, geom::make_line(f, pt, t.v));
    }
  }
  for (auto idx : sample_indices(m.size(), 100)) {
    if (!power_identity_holds(f, m.points[idx], *raw[idx])) {
      throw Error(Errc::InvariantViolation, "power identity fails on pair " + std::to_string(idx));
    }
  }
  auto r = finish("dpow", "d-th power potential lift", std::move(m));
  r.floor_formula = "|I|(q-1)^{d-1}/(d-1)!";
  r.floor = BigRational(rat(I.size()) * rat_pow(f.order() - 1, d - 1) /
                        BigRational(poly::factorial(d - 1)));
  r.details = {{"q", f.order()}, {"d", d}, {"I", I.size()}, {"S", tuples.size()}};
  return r;
}

// ---------------------------------------------------------------------------------------------
// Waring lift

std::uint64_t SubBox::volume() const {
  std::uint64_t v = 1;
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (hi[i] < lo[i]) return 0;
    const auto w = static_cast<std::uint64_t>(hi[i] - lo[i] + 1);
    if (v > kMaxPairs * 64 / w) return kMaxPairs * 64;
    v *= w;
  }
  return v;
}

SubBox default_subbox(std::size_t dim, std::int64_t N, std::uint64_t max_volume) {
  SubBox b{std::vector<std::int64_t>(dim, 1), std::vector<std::int64_t>(dim, 1)};
  if (dim == 0) return b;
  b.hi[0] = std::max<std::int64_t>(N, 1);
  std::uint64_t vol = static_cast<std::uint64_t>(b.hi[0]);
  for (std::size_t i = 1; i < dim && N >= 2 && vol * 2 <= max_volume; ++i) {
    b.hi[i] = 2;
    vol *= 2;
  }
  return b;
}

ShiftChoice best_shift(const std::vector<std::int64_t>& values, const std::vector<std::int64_t>& A) {
  std::map<std::int64_t, std::uint64_t> hist;
  for (auto v : values)
    for (auto a : A) ++hist[v - a];
  ShiftChoice best;
  for (const auto& [s, c] : hist) {
    if (c > best.count) best = {s, c};
  }
  return best;
}

ConstructionReport waring_lift(std::uint32_t q, int k, std::optional<SubBox> box) {
  checked_prime(q);
  if (k != 2 && k != 3) throw Error(Errc::ParameterViolation, "k must be 2 or 3");
  const std::int64_t N = q / 4;
  if (N < 4) throw Error(Errc::ParameterViolation, "q too small: need floor(q/4) >= 4");
  const poly::IndexSet I(k);
  const std::int64_t M = poly::phi_modulus(N, k);
  const std::size_t dim = I.size();
  SubBox b = box ? *box : default_subbox(dim, N);
  if (b.lo.size() != dim || b.hi.size() != dim) {
    throw Error(Errc::DimensionMismatch, "sub-box needs " + std::to_string(dim) + " coordinates");
  }
  for (std::size_t i = 0; i < dim; ++i) {
    if (b.lo[i] > b.hi[i]) throw Error(Errc::SubBoxEmpty, "empty coordinate range");
    if (b.lo[i] < 1 || b.hi[i] > N) throw Error(Errc::RangeViolation, "sub-box leaves [N]^I");
  }
  if (b.volume() > kMaxPairs) throw Error(Errc::BudgetExceeded, "sub-box too large to enumerate");

  std::vector<std::vector<std::int64_t>> xs;
  std::vector<std::int64_t> values;
  std::vector<std::int64_t> x = b.lo;
  while (true) {
    const auto v = poly::phi_eval(I, x, M);
    values.push_back(v.convert_to<std::int64_t>());
    xs.push_back(x);
    std::size_t i = dim;
    while (i > 0 && x[i - 1] == b.hi[i - 1]) {
      x[i - 1] = b.lo[i - 1];
      --i;
    }
    if (i == 0) break;
    ++x[i - 1];
  }

  std::int64_t qk = 1;
  for (int i = 0; i < k; ++i) qk *= q;
  const auto A = diffsets::digit_construction(std::min<std::int64_t>(qk, std::int64_t{1} << 22), k);
  if (diffsets::verify_power_free(A)) throw Error(Errc::InvariantViolation, "digit set not power-free");
  const auto shift = best_shift(values, A.elements);
  if (shift.count == 0) throw Error(Errc::SubBoxEmpty, "no potential value lands in a shift of A");
  const std::set<std::int64_t> Aset(A.elements.begin(), A.elements.end());

  std::vector<std::size_t> gamma;
  std::vector<poly::NiceLine> dirs;
  std::int64_t ymax = 1;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!Aset.count(values[i] - shift.shift)) continue;
    gamma.push_back(i);
    dirs.push_back(poly::nice_line_solve(I, xs[i], N));
    ymax = std::max(ymax, dirs.back().max_abs);
  }
  // |y h| < N for |h| < Z keeps the lifted integer line inside a window narrower than q.
  const std::int64_t Z = std::max<std::int64_t>(1, N / ymax);
  if (static_cast<std::uint64_t>(Z) * gamma.size() > kMaxPairs) {
    throw Error(Errc::BudgetExceeded, "matching too large");
  }

  const Field f = ff::make_field(q, 1);
  Matching m{f, static_cast<int>(dim) + 1, {}, {}};
  for (std::int64_t z = 1; z <= Z; ++z) {
    for (std::size_t g = 0; g < gamma.size(); ++g) {
      const auto& xv = xs[gamma[g]];
      Point pt{f.from_int(z)}, dir{f.one()};
      for (std::size_t i = 0; i < dim; ++i) {
        pt.push_back(f.from_int(xv[i]));
        dir.push_back(f.from_int(dirs[g].y[i]));
      }
      m.add(pt, geom::make_line(f, pt, dir));
    }
  }
  auto r = finish("waring", "waring potential lift", std::move(m));
  r.floor_formula = "q^{d-k(1-c_k)-1/k^2}";
  r.details = {{"q", q},          {"k", k},           {"N", N},
               {"M", M},          {"dim", dim + 1},   {"A", A.elements.size()},
               {"shift", shift.shift}, {"gamma", gamma.size()}, {"Z", Z},
               {"max_direction", ymax}, {"box_volume", b.volume()}};
  return r;
}

// ---------------------------------------------------------------------------------------------
// Prime-power plane

ConstructionReport prime_power_2d(std::uint32_t p, int t, const PowerFreeSet& A) {
  checked_prime(p);
  if (t < 1 || t % 2 == 0) throw Error(Errc::ParameterViolation, "t must be odd and positive");
  if (p <= 100u * static_cast<std::uint32_t>(t)) {
    throw Error(Errc::ParameterViolation, "need p > 100t");
  }
  if (A.k != 2) throw Error(Errc::ParameterViolation, "A must avoid square differences");
  const std::int64_t limit = p / (20 * t);
  for (auto a : A.elements) {
    if (a < 1 || a > limit) {
      throw Error(Errc::ParameterViolation, "element " + std::to_string(a) + " outside [1, " + std::to_string(limit) + "]");
    }
  }
  check_power_free(A, 2);
  const int s = (t + 1) / 2;
  const std::int64_t M = poly::floor_root(p / (64 * s), 2);
  const Field f = ff::make_field(p, t, ff::kHardMaxOrder - 1);

  // Coefficient vectors are taken as polynomials in the generator, whose degree t exceeds both
  // deg f < s and deg g < t, so each value is a plain encoding.
  std::vector<Elem> fvals;
  {
    std::vector<std::int64_t> c(s, -M);
    while (true) {
      fvals.push_back(f.from_coeffs(c));
      int i = s;
      while (i > 0 && c[i - 1] == M) c[--i] = -M;
      if (i == 0) break;
      ++c[i - 1];
    }
  }
  std::vector<Elem> gvals;
  {
    // Positions 0..t-1; even positions from A, odd positions from [0, p).
    const int len = 2 * s - 1;
    std::vector<std::size_t> digit(len, 0);
    auto radix = [&](int pos) { return pos % 2 == 0 ? A.elements.size() : std::size_t{p}; };
    if (!A.elements.empty()) {
      while (true) {
        std::vector<std::int64_t> c(len);
        for (int i = 0; i < len; ++i) c[i] = i % 2 == 0 ? A.elements[digit[i]] : static_cast<std::int64_t>(digit[i]);
        gvals.push_back(f.from_coeffs(c));
        int i = len;
        while (i > 0 && digit[i - 1] + 1 == radix(i - 1)) digit[--i] = 0;
        if (i == 0) break;
        ++digit[i - 1];
      }
    }
  }
  if (static_cast<double>(fvals.size()) * static_cast<double>(gvals.size()) > static_cast<double>(kMaxPairs)) {
    throw Error(Errc::BudgetExceeded, "matching too large");
  }
  const Elem half = f.inv(f.from_int(2));
  Matching m{f, 2, {}, {}};
  for (Elem fv : fvals) {
    const Elem sq = f.mul(fv, fv);
    for (Elem gv : gvals) {
      const Point pt{f.mul(f.add(gv, sq), half), fv};
      m.add(pt, geom::make_line(f, pt, {fv, f.one()}));
    }
  }
  auto r = finish("pp2d", "prime-power planar lift", std::move(m));
  r.floor_formula = "(2M+1)^s p^{s-1} |A|^s";
  r.floor = rat_pow(2 * M + 1, s) * rat_pow(p, s - 1) * rat_pow(A.elements.size(), s);
  r.details = {{"p", p}, {"t", t}, {"s", s}, {"M", M}, {"A", A.elements.size()}};
  return r;
}

// ---------------------------------------------------------------------------------------------
// Field product

ConstructionReport field_product_lift(const Matching& base, int s) {
  const Field& fp = base.field;
  if (fp.t() != 1) throw Error(Errc::ParameterViolation, "base must live over a prime field");
  if (s < 1) throw Error(Errc::InvalidDegree, "s must be positive");
  require_verified(base, "base matching");
  const int d0 = base.d;
  const std::uint32_t p = fp.p();
  const Field f = ff::make_field(p, s, ff::kHardMaxOrder - 1);

  // Per block: every (base pair, free coefficients) choice as d0 encoded coordinates.
  const std::uint64_t free_count = static_cast<std::uint64_t>(std::pow(double(p), double(d0 * (s - 1))) + 0.5);
  const double total = std::pow(double(base.size()) * double(free_count), s);
  if (total > static_cast<double>(kMaxPairs)) throw Error(Errc::OrderOverflow, "lifted matching too large");
  std::vector<std::uint32_t> pw(s, 1);
  for (int i = 1; i < s; ++i) pw[i] = pw[i - 1] * p;

  struct Option {
    std::vector<Elem> coords;
    std::size_t pair;
  };
  std::vector<std::vector<Option>> blocks(s);
  for (int i = 0; i < s; ++i) {
    for (std::size_t j = 0; j < base.size(); ++j) {
      for (std::uint64_t free = 0; free < free_count; ++free) {
        std::uint64_t rest = free;
        Option o{std::vector<Elem>(d0), j};
        for (int c = 0; c < d0; ++c) {
          std::uint32_t v = 0;
          for (int m = 0; m < s; ++m) {
            std::uint32_t digit;
            if (m == i) {
              digit = base.points[j][c].v;
            } else {
              digit = static_cast<std::uint32_t>(rest % p);
              rest /= p;
            }
            v += digit * pw[m];
          }
          o.coords[c] = Elem{v};
        }
        blocks[i].push_back(std::move(o));
      }
    }
  }
  Matching m{f, d0 * s, {}, {}};
  std::vector<std::size_t> pick(s, 0);
  if (base.size() > 0) {
    while (true) {
      Point pt, dir;
      for (int i = 0; i < s; ++i) {
        const auto& o = blocks[i][pick[i]];
        pt.insert(pt.end(), o.coords.begin(), o.coords.end());
        const auto& bd = base.lines[o.pair].dir;
        dir.insert(dir.end(), bd.begin(), bd.end());
      }
      m.add(pt, geom::make_line(f, pt, dir));
      int i = s;
      while (i > 0 && pick[i - 1] + 1 == blocks[i - 1].size()) pick[--i] = 0;
      if (i == 0) break;
      ++pick[i - 1];
    }
  }
  auto r = finish("fieldprod", "field product lift", std::move(m));
  r.floor_formula = "|P|^s q^{d0(s-1)}";
  r.floor = rat_pow(base.size(), s) * rat_pow(f.order(), std::uint64_t(d0) * (s - 1));
  r.details = {{"p", p}, {"s", s}, {"d0", d0}, {"base", base.size()}, {"q", f.order()}};
  return r;
}

// ---------------------------------------------------------------------------------------------
// Norm hypersurface

std::vector<Elem> norm_weights(const Field& f, const std::vector<Elem>& t) {
  std::vector<Elem> nodes = t;
  nodes.push_back(f.one());
  std::vector<Elem> A(nodes.size(), f.one());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      if (j == i) continue;
      A[i] = f.mul(A[i], f.div(nodes[j], f.sub(nodes[j], nodes[i])));
    }
  }
  return A;
}

std::vector<std::vector<Elem>> norm_tuples(std::uint32_t q0, int k) {
  std::vector<std::vector<Elem>> out;
  std::vector<Elem> cur;
  std::function<void()> rec = [&]() {
    if (static_cast<int>(cur.size()) == k - 1) {
      out.push_back(cur);
      return;
    }
    for (std::uint32_t v = 2; v < q0; ++v) {
      if (std::find(cur.begin(), cur.end(), Elem{v}) != cur.end()) continue;
      cur.push_back(Elem{v});
      rec();
      cur.pop_back();
    }
  };
  rec();
  return out;
}

ConstructionReport norm_hypersurface(std::uint32_t q0, int k, int d) {
  checked_prime(q0);
  if (k < 1) throw Error(Errc::InvalidDegree, "k must be positive");
  if (q0 <= static_cast<std::uint32_t>(k)) {
    throw Error(Errc::FieldTooSmall, "need q0 > k");
  }
  if (d < k) throw Error(Errc::ParameterViolation, "need d >= k");
  const Field f = ff::make_field(q0, k);
  const std::uint32_t q = f.order();
  const std::uint64_t e = (q - 1) / (q0 - 1);
  std::vector<std::vector<Elem>> fiber(q0);
  for (std::uint32_t x = 1; x < q; ++x) fiber[f.pow(Elem{x}, e).v].push_back(Elem{x});

  const auto S = norm_tuples(q0, k);
  std::map<std::vector<Elem>, std::vector<Elem>> image;  // weights -> first tuple
  for (const auto& t : S) image.try_emplace(norm_weights(f, t), t);

  Matching m{f, k, {}, {}};
  for (const auto& [A, t] : image) {
    std::vector<Elem> nodes = t;
    nodes.push_back(f.one());
    std::vector<std::size_t> pick(k, 0);
    while (true) {
      Point pt(k), dir(k);
      for (int i = 0; i < k; ++i) {
        pt[i] = fiber[A[i].v][pick[i]];
        dir[i] = f.mul(pt[i], nodes[i]);
      }
      m.add(pt, geom::make_line(f, pt, dir));
      int i = k;
      while (i > 0 && pick[i - 1] + 1 == fiber[A[i - 1].v].size()) pick[--i] = 0;
      if (i == 0) break;
      ++pick[i - 1];
    }
  }
  // Sum N(a_i (1 + mu t_i)) == 1 + c N(mu) on a sample, every mu.
  for (auto idx : sample_indices(m.size(), 50)) {
    const auto& a = m.points[idx];
    const auto& dir = m.lines[idx].dir;
    // Recover t_i = dir_i / a_i up to the canonical scaling of dir.
    const Elem scale = f.div(dir[k - 1], a[k - 1]);
    Elem c = (k % 2 == 1) ? f.one() : f.neg(f.one());
    std::vector<Elem> tt(k);
    for (int i = 0; i < k; ++i) {
      tt[i] = f.div(f.div(dir[i], a[i]), scale);
      c = f.mul(c, tt[i]);
    }
    for (std::uint32_t mu = 0; mu < q; ++mu) {
      Elem lhs = f.zero();
      for (int i = 0; i < k; ++i) {
        const Elem pt = f.mul(a[i], f.add(f.one(), f.mul(Elem{mu}, tt[i])));
        lhs = f.add(lhs, f.rel_norm(pt, q0));
      }
      if (lhs != f.add(f.one(), f.mul(c, f.rel_norm(Elem{mu}, q0)))) {
        throw Error(Errc::InvariantViolation, "norm identity fails on pair " + std::to_string(idx));
      }
    }
  }
  Matching lifted = cartesian_lift(m, d - k, false);
  auto r = finish("normhyp", "norm hypersurface tangents", std::move(lifted));
  BigRational kf = BigRational(poly::factorial(k - 1));
  r.floor_formula = "|S|/(k-1)! ((q-1)/(q0-1))^k q^{d-k}";
  r.floor = rat(S.size()) / kf * rat_pow(e, k) * rat_pow(q, d - k);
  r.details = {{"q0", q0}, {"k", k}, {"d", d}, {"q", q}, {"S", S.size()}, {"phiS", image.size()}, {"fiber", e}};
  return r;
}

// ---------------------------------------------------------------------------------------------
// Cartesian lift

Matching cartesian_lift(const Matching& base, int extra, bool verify) {
  if (extra < 0) throw Error(Errc::ParameterViolation, "extra must be non-negative");
  const Field& f = base.field;
  const std::uint64_t layers = geom::space_size(f, extra);
  if (static_cast<double>(layers) * static_cast<double>(base.size()) > static_cast<double>(kMaxPairs)) {
    throw Error(Errc::OrderOverflow, "lifted matching too large");
  }
  Matching m{f, base.d + extra, {}, {}};
  for (std::size_t i = 0; i < base.size(); ++i) {
    for (std::uint64_t u = 0; u < layers; ++u) {
      const Point tail = geom::index_point(f, extra, u);
      Point pt = base.points[i];
      pt.insert(pt.end(), tail.begin(), tail.end());
      geom::AffineLine l = base.lines[i];
      l.base.insert(l.base.end(), tail.begin(), tail.end());
      l.dir.resize(l.dir.size() + extra, f.zero());
      m.add(std::move(pt), geom::canonical(f, l));
    }
  }
  if (verify) require_verified(m, "cartesian lift");
  return m;
}

// ---------------------------------------------------------------------------------------------
// Paraboloid

ConstructionReport paraboloid_matching(const Field& f) {
  if (f.p() == 2) throw Error(Errc::EvenCharacteristic, "paraboloid needs odd characteristic");
  const auto sq = square_table(f);
  Elem a{1};
  while (sq[f.neg(a).v]) ++a.v;
  const Elem two = f.from_int(2);
  ConstructionReport r;
  r.matching = Matching{f, 3, {}, {}};
  for (std::uint32_t y = 0; y < f.order(); ++y) {
    for (std::uint32_t z = 0; z < f.order(); ++z) {
      const Elem ye{y}, ze{z};
      const Elem ay = f.mul(ye, ye), az = f.mul(a, f.mul(ze, ze));
      r.matching.points.push_back({f.add(ay, az), ye, ze});
      r.hyperplanes.push_back(geom::make_hyperplane(
          f, {f.one(), f.neg(f.mul(two, ye)), f.neg(f.mul(two, f.mul(a, ze)))}, f.neg(f.add(ay, az))));
    }
  }
  if (auto v = geom::verify_point_hyperplane_matching(f, r.matching.points, r.hyperplanes)) {
    throw Error(Errc::VerificationFailed, "paraboloid pair (" + std::to_string(v->i) + ", " + std::to_string(v->j) + ")");
  }
  r.method = "paraboloid";
  r.tag = "paraboloid tangent planes";
  r.size = r.matching.points.size();
  r.verified = true;
  r.floor_formula = "q^2";
  r.floor = rat(std::uint64_t{f.order()} * f.order());
  r.details = {{"q", f.order()}, {"a", a.v}};
  return r;
}

// ---------------------------------------------------------------------------------------------
// Registry

const std::vector<MethodInfo>& methods() {
  static const std::vector<MethodInfo> list = {
      {"unital", "hermitian unital tangents", "--p"},
      {"paley", "paley graph lift", "--q"},
      {"ruzsa2d", "square-difference-free lift over a prime", "--q"},
      {"dpow", "d-th power potential lift", "--q --d"},
      {"waring", "waring potential lift", "--q --k"},
      {"pp2d", "prime-power planar lift", "--p --t"},
      {"fieldprod", "field product lift", "--p --s"},
      {"normhyp", "norm hypersurface tangents", "--p (q0) --k --d"},
      {"paraboloid", "paraboloid tangent planes", "--q"},
  };
  return list;
}

const MethodInfo& method_info(const std::string& id) {
  for (const auto& m : methods())
    if (m.id == id) return m;
  throw Error(Errc::ParameterViolation, "unknown method '" + id + "'");
}

namespace {

std::uint64_t need(const std::optional<std::uint64_t>& v, const char* name) {
  if (!v) throw Error(Errc::ParameterViolation, std::string("missing parameter --") + name);
  return *v;
}

Field field_of_order(std::uint64_t q) {
  for (std::uint64_t p = 2; p <= q; ++p) {
    if (q % p != 0) continue;
    if (!ff::is_prime(p)) break;
    auto t = ff::exact_log(q, p);
    if (!t) break;
    return ff::make_field(p, *t);
  }
  throw Error(Errc::NotPrime, std::to_string(q) + " is not a prime power");
}

diffsets::PowerFreeSet default_square_free(std::int64_t n) {
  if (n <= diffsets::kExactThreshold) return diffsets::max_power_free_exact(n, 2);
  return diffsets::digit_construction(n, 2);
}

}  // namespace

ConstructionReport construct(const std::string& id, const MethodParams& prm) {
  method_info(id);
  if (id == "unital") {
    std::uint64_t p = prm.p ? *prm.p : 0;
    if (!prm.p && prm.q) {
      const auto r = poly::floor_root(static_cast<std::int64_t>(*prm.q), 2);
      if (static_cast<std::uint64_t>(r * r) != *prm.q) throw Error(Errc::ParameterViolation, "q must be a square");
      p = static_cast<std::uint64_t>(r);
    }
    return hermitian_unital(checked_prime(need(p ? std::optional<std::uint64_t>(p) : std::nullopt, "p")));
  }
  if (id == "paley") {
    const Field f = field_of_order(need(prm.q, "q"));
    return paley_lift(f, paley_independent_set(f));
  }
  if (id == "ruzsa2d") {
    const auto q = checked_prime(need(prm.q, "q"));
    return ruzsa_lift_2d(q, default_square_free(q / 10));
  }
  if (id == "dpow") {
    const Field f = field_of_order(need(prm.q, "q"));
    return dth_power_lift(f, static_cast<int>(prm.d.value_or(3)), {f.zero()});
  }
  if (id == "waring") {
    return waring_lift(checked_prime(need(prm.q, "q")), static_cast<int>(prm.k.value_or(2)));
  }
  if (id == "pp2d") {
    const auto p = checked_prime(need(prm.p, "p"));
    const int t = static_cast<int>(prm.t.value_or(1));
    return prime_power_2d(p, t, default_square_free(p / (20 * std::max(t, 1))));
  }
  if (id == "fieldprod") {
    const auto p = checked_prime(need(prm.p, "p"));
    const Field fp = ff::make_field(p, 1);
    const Matching base = p % 4 == 1 ? paley_lift(fp, {fp.zero()}).matching
                                     : dth_power_lift(fp, 2, {fp.zero()}).matching;
    return field_product_lift(base, static_cast<int>(prm.s.value_or(2)));
  }
  if (id == "normhyp") {
    const auto q0 = checked_prime(prm.p ? *prm.p : need(prm.q, "p"));
    const int k = static_cast<int>(prm.k.value_or(2));
    return norm_hypersurface(q0, k, static_cast<int>(prm.d.value_or(k)));
  }
  return paraboloid_matching(field_of_order(need(prm.q, "q")));
}

std::string rational_string(const BigRational& r) {
  const auto n = boost::multiprecision::numerator(r);
  const auto d = boost::multiprecision::denominator(r);
  return d == 1 ? n.str() : n.str() + "/" + d.str();
}

nlohmann::json report_to_json(const ConstructionReport& r) {
  nlohmann::json j = {
      {"method", r.method},
      {"tag", r.tag},
      {"size", r.size},
      {"field", ff::field_to_json(r.matching.field)},
      {"d", r.matching.d},
      {"kind", r.is_hyperplane() ? "point-hyperplane" : "point-line"},
      {"floor_formula", r.floor_formula},
      {"floor", r.floor ? nlohmann::json(rational_string(*r.floor)) : nlohmann::json(nullptr)},
      {"verified", r.verified},
      {"details", r.details},
  };
  return j;
}

}  // namespace ffgeom::matchgen
