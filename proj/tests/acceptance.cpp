// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <limits>
#include <random>
#include <set>
#include <sstream>

#include "ffgeom/blocking.hpp"
#include "ffgeom/diffsets.hpp"
#include "ffgeom/error.hpp"
#include "ffgeom/euclid.hpp"
#include "ffgeom/geom.hpp"
#include "ffgeom/matchgen.hpp"
#include "ffgeom/nikodym.hpp"
#include "ffgeom/polyring.hpp"

using namespace ffgeom;
using ff::Elem;
using ff::Field;
using ff::make_field;
using geom::Matching;
using geom::Point;
using matchgen::ConstructionReport;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool ok = true;
  std::ostringstream note;
  void require(bool cond, const std::string& what) {
    if (!cond) {
      if (ok) note << "failed: ";
      else note << "; ";
      note << what;
      ok = false;
    }
  }
};

// Independent induced-matching oracle: walks every point of every line.
std::optional<geom::Violation> naive_violation(const Matching& m) {
  std::optional<geom::Violation> best;
  for (std::size_t j = 0; j < m.size(); ++j) {
    const auto pts = geom::line_points(m.field, m.lines[j]);
    const std::set<Point> on(pts.begin(), pts.end());
    for (std::size_t i = 0; i < m.size(); ++i) {
      const bool hit = on.count(m.points[i]) > 0;
      if (hit != (i == j)) {
        const geom::Violation v{i, j};
        if (!best || v < *best) best = v;
      }
    }
  }
  return best;
}

bool induced(const Matching& m) { return !geom::verify_induced_matching(m) && !naive_violation(m); }

// Exhaustive independence number of the Paley graph.
std::size_t paley_alpha(const Field& f) {
  const std::uint32_t q = f.order();
  std::vector<char> square(q, 0);
  for (std::uint32_t x = 1; x < q; ++x) square[f.mul(Elem{x}, Elem{x}).v] = 1;
  std::size_t best = 0;
  std::vector<std::uint32_t> chosen;
  std::function<void(std::uint32_t)> grow = [&](std::uint32_t from) {
    best = std::max(best, chosen.size());
    if (chosen.size() + (q - from) <= best) return;
    for (std::uint32_t v = from; v < q; ++v) {
      bool free = true;
      for (auto u : chosen) free = free && !square[f.sub(Elem{v}, Elem{u}).v];
      if (!free) continue;
      chosen.push_back(v);
      grow(v + 1);
      chosen.pop_back();
    }
  };
  chosen.push_back(0);  // vertex transitive: some maximum set contains 0
  grow(1);
  return best;
}

nikodym::LatticeConfig hand_config() {
  nikodym::LatticeConfig c;
  c.d = 1;
  c.N = 4;
  c.M = 2;
  c.L = 2;
  c.extent = {4};
  c.slope_table = {{-2, 1}, {2, 1}};
  c.ambient_slope.assign(8, 0);
  for (std::int64_t n = 1; n <= 4; ++n) {
    for (std::int64_t m = 1; m <= 2; ++m) {
      const std::uint32_t id = (m == 1) == (n <= 2) ? 0 : 1;
      c.points.push_back({n, m});
      c.point_slopes.push_back(c.slope_table[id]);
      c.ambient_slope[c.ambient_index({n, m})] = id;
    }
  }
  return c;
}

// ---------------------------------------------------------------------------------------------

void c1(Outcome& o) {
  for (std::uint32_t p : {3u, 5u, 7u}) {
    const auto t0 = Clock::now();
    const auto r = matchgen::hermitian_unital(p);
    const bool ok = induced(r.matching);
    const double dt = seconds_since(t0);
    o.require(r.size == std::uint64_t{p} * p * p - p, "size at p=" + std::to_string(p));
    o.require(ok, "verifier at p=" + std::to_string(p));
    o.require(dt < 5, "time at p=" + std::to_string(p));
    o.note << "p=" << p << ":" << r.size << " ";
  }
}

void c2(Outcome& o) {
  std::vector<ConstructionReport> planar;
  for (std::uint32_t p : {3u, 5u, 7u}) planar.push_back(matchgen::hermitian_unital(p));
  for (std::uint64_t q : {5u, 13u, 17u, 25u}) planar.push_back(matchgen::construct("paley", {.q = q}));
  for (std::uint64_t q : {101u, 211u}) planar.push_back(matchgen::construct("ruzsa2d", {.q = q}));
  for (std::uint64_t q : {7u, 11u, 31u}) planar.push_back(matchgen::construct("dpow", {.q = q, .d = 2}));
  planar.push_back(matchgen::construct("pp2d", {.p = 401, .t = 3}));
  planar.push_back(matchgen::construct("pp2d", {.p = 401, .t = 1}));
  for (std::uint64_t q0 : {5u, 7u}) planar.push_back(matchgen::construct("normhyp", {.p = q0, .k = 2}));
  for (const auto& r : planar) {
    const auto b = geom::vinh_bound_check(r.matching);
    o.require(b.within, r.method + " exceeds q^{3/2}+q");
  }
  std::size_t planes = 0;
  for (std::uint64_t q : {3u, 5u, 7u, 9u, 11u, 13u}) {
    const auto r = matchgen::construct("paraboloid", {.q = q});
    o.require(geom::hyperplane_bound_check(r.size, q, 3).within, "paraboloid exceeds q^2+q");
    ++planes;
  }
  o.note << planar.size() << " planar and " << planes << " hyperplane matchings";
}

void c3(Outcome& o) {
  const auto t0 = Clock::now();
  for (std::uint32_t q : {13u, 17u}) {
    const Field f = make_field(q, 1);
    const auto r = matchgen::construct("paley", {.q = q});
    const auto alpha = paley_alpha(f);
    o.require(r.size == q * alpha, "size q*alpha at q=" + std::to_string(q));
    o.require(induced(r.matching), "verifier at q=" + std::to_string(q));
    o.note << "q=" << q << " alpha=" << alpha << " size=" << r.size << " ";
  }
  o.require(seconds_since(t0) < 10, "time");
}

void c4(Outcome& o) {
  for (std::uint32_t q : {101u, 211u}) {
    const auto A = diffsets::max_power_free_exact(q / 10, 2);
    o.require(!diffsets::verify_power_free(A), "A not square-difference-free");
    const auto r = matchgen::ruzsa_lift_2d(q, A);
    o.require(induced(r.matching), "verifier at q=" + std::to_string(q));
    o.note << "q=" << q << " |A|=" << A.elements.size() << " size=" << r.size << " (q^{1/2}|A|="
           << std::sqrt(static_cast<double>(q)) * A.elements.size() << ") ";
  }
}

void c5(Outcome& o) {
  const Field f = make_field(31, 1);
  const auto tuples = matchgen::admissible_tuples(f, 3);
  const auto r = matchgen::dth_power_lift(f, 3, {f.zero()});
  o.require(!tuples.empty(), "S empty");
  o.require(induced(r.matching), "verifier");
  std::mt19937 rng(5);
  std::uniform_int_distribution<std::size_t> pick(0, r.size - 1);
  for (int s = 0; s < 100; ++s) {
    const auto i = pick(rng);
    const Point& p = r.matching.points[i];
    Point v = r.matching.lines[i].dir;
    const Elem scale = f.inv(v[2]);
    for (auto& e : v) e = f.mul(e, scale);
    const Elem base = matchgen::phi_power(f, p);
    for (std::uint32_t l = 0; l < 31; ++l) {
      Point x(3);
      for (int c = 0; c < 3; ++c) x[c] = f.add(p[c], f.mul(Elem{l}, v[c]));
      const Elem want = f.add(base, f.pow(Elem{l}, std::uint64_t{3}));
      if (matchgen::phi_power(f, x) != want) {
        o.require(false, "identity at pair " + std::to_string(i));
        break;
      }
    }
  }
  o.note << "|S|=" << tuples.size() << " size=" << r.size << " 100 pairs x 31 values";
}

void c6(Outcome& o) {
  std::mt19937_64 rng(6);
  int failures = 0;
  for (int k : {2, 3}) {
    const poly::IndexSet I(k);
    const std::int64_t N = 100, M = poly::phi_modulus(N, k);
    std::uniform_int_distribution<std::int64_t> coord(1, N);
    for (int s = 0; s < 50; ++s) {
      std::vector<std::int64_t> x(I.size());
      for (auto& c : x) c = coord(rng);
      const auto line = poly::nice_line_solve(I, x, N);
      const auto along = poly::phi_along(I, x, line.y, M);
      const auto want = poly::IntPoly::constant(poly::phi_eval(I, x, M)) + poly::IntPoly::monomial(1, k);
      if (!(along == want)) ++failures;
    }
  }
  o.require(failures == 0, std::to_string(failures) + " identities failed");
  o.note << "100 solved directions, " << failures << " failures";
}

void c7(Outcome& o) {
  const std::uint32_t q0 = 5;
  const int k = 2;
  const Field f0 = make_field(q0, 1);
  const auto tuples = matchgen::norm_tuples(q0, k);
  for (const auto& tt : tuples) {
    const auto A = matchgen::norm_weights(f0, tt);
    std::vector<Elem> t = tt;
    t.push_back(f0.one());
    Elem s0 = f0.zero(), prod = f0.one();
    std::vector<Elem> sr(k + 1, f0.zero());
    for (std::size_t i = 0; i < A.size(); ++i) {
      s0 = f0.add(s0, A[i]);
      prod = f0.mul(prod, t[i]);
      for (int r = 1; r <= k; ++r) sr[r] = f0.add(sr[r], f0.mul(A[i], f0.pow(t[i], std::uint64_t(r))));
    }
    o.require(s0 == f0.one(), "sum A_i != 1");
    for (int r = 1; r < k; ++r) o.require(sr[r] == f0.zero(), "sum A_i t_i^r != 0");
    const Elem top = k % 2 == 1 ? prod : f0.neg(prod);
    o.require(sr[k] == top, "sum A_i t_i^k");
  }
  const auto r = matchgen::norm_hypersurface(q0, k, k);
  o.require(induced(r.matching), "verifier");
  const Field f = r.matching.field;
  std::vector<std::uint32_t> fiber(q0, 0);
  for (std::uint32_t x = 1; x < f.order(); ++x) ++fiber[f.rel_norm(Elem{x}, q0).v];
  for (std::uint32_t c = 1; c < q0; ++c) o.require(fiber[c] == 6, "fiber size");
  o.require(r.details.at("fiber").get<std::uint64_t>() == 6, "reported fiber");
  o.note << tuples.size() << " tuples, size " << r.size << " in F_25^2, fibers of 6";
}

void c8(Outcome& o) {
  const auto r = matchgen::construct("pp2d", {.p = 401, .t = 3});
  const auto M = r.details.at("M").get<std::uint64_t>();
  const auto A = r.details.at("A").get<std::uint64_t>();
  const std::uint64_t s = 2, want = (2 * M + 1) * (2 * M + 1) * 401 * A * A;
  o.require(r.verified && !geom::verify_induced_matching(r.matching), "verifier");
  o.require(r.size == want, "size formula");
  o.note << "s=" << s << " M=" << M << " |A|=" << A << " size=" << r.size;
}

void c9(Outcome& o) {
  const Field f5 = make_field(5, 1);
  const auto base = matchgen::paley_lift(f5, {f5.zero()});
  const auto r = matchgen::field_product_lift(base.matching, 2);
  o.require(r.size == base.size * base.size * 625, "size |P|^2 25^2");
  o.require(!geom::verify_induced_matching(r.matching), "verifier");
  o.note << "|P|=" << base.size << " lifted " << r.size;
}

void c10(Outcome& o) {
  std::vector<Matching> ms;
  for (std::uint32_t p : {3u, 5u, 7u}) ms.push_back(matchgen::hermitian_unital(p).matching);
  for (std::uint64_t q : {5u, 13u, 17u, 25u}) ms.push_back(matchgen::construct("paley", {.q = q}).matching);
  for (std::uint64_t q : {101u, 211u}) ms.push_back(matchgen::construct("ruzsa2d", {.q = q}).matching);
  ms.push_back(matchgen::construct("dpow", {.q = 31, .d = 3}).matching);
  ms.push_back(matchgen::construct("dpow", {.q = 11, .d = 2}).matching);
  ms.push_back(matchgen::construct("normhyp", {.p = 5, .k = 2}).matching);
  ms.push_back(matchgen::construct("fieldprod", {.p = 5, .s = 2}).matching);
  std::size_t lifted = 0;
  for (const auto& m : ms) {
    const double vol = std::pow(static_cast<double>(m.field.order()), m.d);
    if (vol > 1e6) continue;
    const auto n = nikodym::matching_complement(m);
    o.require(nikodym::is_weak_nikodym(n).ok, "weak check");
    const auto l = nikodym::product_lift(n);
    const double cost = std::numeric_limits<double>::max();
    o.require(l.count() == m.field.order() * n.count(), "lift size");
    o.require(nikodym::is_nikodym(l, cost).ok, "strong check on lift");
    ++lifted;
  }
  for (std::uint32_t q : {5u, 7u}) {
    const Field f = make_field(q, 1);
    auto n = nikodym::PointSet::empty(f, 2);
    for (std::uint32_t a = 1; a < q; ++a)
      for (std::uint32_t b = 1; b < q; ++b) n.insert(std::uint64_t{a} * q + b);
    o.require(nikodym::is_weak_nikodym(n).ok, "units weak");
    o.require(!nikodym::is_nikodym(n).ok, "units strong");
  }
  o.note << lifted << " matchings lifted; units squared weak-only at q=5,7";
}

void c11(Outcome& o) {
  const auto c = hand_config();
  const auto n = nikodym::project_to_plane(c, 13);
  o.require(n.count() == 169 - c.points.size(), "size q^2-|P|");
  o.require(nikodym::is_nikodym(n, nikodym::kDefaultBudget, false).ok, "exhaustive Nikodym check");
  o.require(nikodym::phi_injective_on_box(c, 13), "injectivity on B");
  o.note << "|P|=" << c.points.size() << " size=" << n.count();
}

void c12(Outcome& o) {
  const auto n = nikodym::project_to_plane(hand_config(), 13);
  const auto cover = blocking::minimalize_cover(blocking::nikodym_to_cover(n));
  o.require(blocking::verify_minimal_cover(cover).ok, "minimal cover");
  o.require(cover.lines.size() >= 169 - n.count(), "size bound");
  o.note << "|L|=" << cover.lines.size() << " >= " << 169 - n.count();
}

void c13(Outcome& o) {
  const auto cfg = nikodym::ruzsa_lattice_config(101);
  const auto e = euclid::lattice_to_euclid(cfg);
  const euclid::Rational floor(1, 2 * cfg.N);
  const auto sep = euclid::certify_separation(e, floor);
  o.require(sep.ok, "certificate");
  auto bad = e;
  for (std::size_t c = 0; c < bad.points[1].size(); ++c) bad.points[1][c] = bad.points[0][c] + bad.dirs[0][c];
  o.require(!euclid::certify_separation(bad, floor).ok, "fault injection not caught");
  auto broken = cfg;
  std::size_t i = 0;
  while (broken.points[i][1] >= broken.M) ++i;
  const nikodym::LatticePoint extra{broken.points[i][0] + broken.point_slopes[i][0], broken.points[i][1] + 1};
  std::vector<std::pair<nikodym::LatticePoint, nikodym::LatticePoint>> rows;
  for (std::size_t r = 0; r < broken.points.size(); ++r) rows.emplace_back(broken.points[r], broken.point_slopes[r]);
  rows.emplace_back(extra, nikodym::LatticePoint{extra[1], 1});
  std::sort(rows.begin(), rows.end());
  broken.points.clear();
  broken.point_slopes.clear();
  for (auto& [pt, sl] : rows) broken.points.push_back(pt), broken.point_slopes.push_back(sl);
  o.require(!nikodym::check_lattice_invariants(broken), "fault config malformed");
  bool rejected = false;
  try {
    euclid::lattice_to_euclid(broken);
  } catch (const Error&) {
    rejected = true;
  }
  o.require(rejected, "escape-violating lattice accepted");
  o.note << "|P|=" << e.points.size() << " min d=" << euclid::to_string(sep.value) << " floor="
         << euclid::to_string(floor);
}

void c14(Outcome& o) {
  std::mt19937_64 rng(14);
  std::uniform_int_distribution<std::int64_t> coef(-50, 50);
  std::uniform_int_distribution<int> deg(0, 5);
  int runs = 0;
  for (int k = 1; k <= 8; ++k) {
    for (int s = 0; s < 20; ++s) {
      std::vector<poly::BigInt> c(deg(rng) + 1);
      for (auto& x : c) x = coef(rng);
      if (!poly::boole_sum_check(k, poly::IntPoly(c))) o.require(false, "k=" + std::to_string(k));
      ++runs;
    }
  }
  o.note << runs << " polynomial identities";
}

void c15(Outcome& o) {
  std::mt19937 rng(15);
  int agree = 0, induced_count = 0;
  for (int s = 0; s < 100; ++s) {
    const std::uint32_t q = std::array<std::uint32_t, 4>{3, 4, 5, 7}[s % 4];
    const Field f = q == 4 ? make_field(2, 2) : make_field(q, 1);
    const int d = s % 3 == 0 ? 3 : 2;
    std::uniform_int_distribution<std::uint32_t> e(0, q - 1);
    Matching m{f, d, {}, {}};
    const int want = 2 + s % 6;
    std::set<Point> used;
    while (static_cast<int>(m.size()) < want) {
      Point p(d), v(d);
      for (int i = 0; i < d; ++i) p[i] = Elem{e(rng)}, v[i] = Elem{e(rng)};
      if (std::all_of(v.begin(), v.end(), [](Elem x) { return x.v == 0; }) || used.count(p)) continue;
      used.insert(p);
      m.add(p, geom::make_line(f, p, v));
    }
    const auto fast = geom::verify_induced_matching(m);
    const auto slow = naive_violation(m);
    agree += fast == slow;
    induced_count += !slow;
  }
  o.require(agree == 100, std::to_string(100 - agree) + " verifier disagreements");

  std::uniform_int_distribution<int> num(-20, 20), den(1, 6), dim(1, 6);
  int same = 0;
  for (int s = 0; s < 500; ++s) {
    const int D = dim(rng);
    euclid::RVec p(D), b(D), v(D);
    for (int i = 0; i < D; ++i) {
      p[i] = euclid::Rational(num(rng), den(rng));
      b[i] = euclid::Rational(num(rng), den(rng));
      v[i] = euclid::Rational(num(rng), den(rng));
    }
    if (std::all_of(v.begin(), v.end(), [](const euclid::Rational& x) { return x == 0; })) v[0] = 1;
    same += euclid::dinf_point_line(p, b, v) == euclid::dinf_point_line_sorted(p, b, v);
  }
  o.require(same == 500, std::to_string(500 - same) + " distance disagreements");
  o.note << agree << "/100 verifier agreements (" << induced_count << " induced), " << same << "/500 distances";
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, void (*)(Outcome&)>> criteria = {
      {"hermitian unital sizes", c1},
      {"incidence upper bounds", c2},
      {"paley lift size", c3},
      {"square-difference-free lift", c4},
      {"cubic potential identity", c5},
      {"nice line solver", c6},
      {"norm hypersurface identities", c7},
      {"prime-power planar lift", c8},
      {"field product lift", c9},
      {"nikodym dictionary", c10},
      {"projection pipeline", c11},
      {"minimal cover", c12},
      {"euclidean separation", c13},
      {"boole sum identity", c14},
      {"oracle cross-checks", c15},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto t0 = Clock::now();
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    failed += !o.ok;
    std::cout << (o.ok ? "PASS" : "FAIL") << " criterion " << i + 1 << " (" << criteria[i].first << ", "
              << static_cast<int>(seconds_since(t0) * 1000) << " ms): " << o.note.str() << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
