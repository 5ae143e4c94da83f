#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "ffgeom/blocking.hpp"
#include "ffgeom/error.hpp"
#include "ffgeom/nikodym.hpp"

using namespace ffgeom;
using namespace ffgeom::blocking;
using ff::make_field;

namespace {

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::ParseError;
}

LineCover pencil(const Field& f, const ProjPoint& p) {
  LineCover c{f, {}};
  for (const auto& l : geom::pg2_lines(f))
    if (geom::proj_incident(f, p, l)) c.lines.push_back(l);
  return c;
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

}  // namespace

TEST_CASE("completion of affine lines") {
  const Field f = make_field(7, 1);
  const geom::Point x{Elem{2}, Elem{5}}, v{Elem{3}, Elem{1}};
  const auto l = completion(f, x, v);
  const auto pts = points_on(f, l);
  CHECK(pts.size() == 8);
  for (std::uint32_t t = 0; t < 7; ++t) {
    const ProjPoint p{f.add(x[0], f.mul(Elem{t}, v[0])), f.add(x[1], f.mul(Elem{t}, v[1])), f.one()};
    CHECK(std::find(pts.begin(), pts.end(), p) != pts.end());
  }
  CHECK(std::find(pts.begin(), pts.end(), geom::proj_canonical(f, {v[0], v[1], f.zero()})) != pts.end());
  for (const auto& p : pts) CHECK(geom::proj_incident(f, p, l));
  CHECK(code_of([&] { completion(f, x, {f.zero(), f.zero()}); }) == Errc::ZeroDirection);

  for (const auto& line : geom::pg2_lines(make_field(2, 2))) {
    const auto on = points_on(make_field(2, 2), line);
    CHECK(on.size() == 5);
    CHECK(std::set<ProjPoint>(on.begin(), on.end()).size() == 5);
  }
}

TEST_CASE("cover from the full plane") {
  const Field f = make_field(5, 1);
  const auto full = nikodym::PointSet::full(f, 2);
  const auto check = nikodym::is_nikodym(full);
  REQUIRE(check.ok);
  const auto c = nikodym_to_cover(check.witnesses);
  CHECK_FALSE(uncovered_point(c));
  const auto m = minimalize_cover(c);
  CHECK(verify_minimal_cover(m).ok);
  CHECK(code_of([&] { nikodym_to_cover(full); }) == Errc::MissingWitness);
}

TEST_CASE("cover from the projected lattice set at q = 13") {
  const auto n = nikodym::project_to_plane(hand_config(), 13);
  REQUIRE(n.count() == 161);
  const auto c = nikodym_to_cover(n);
  CHECK(c.lines.size() <= 13 * 13 + 1);
  CHECK_FALSE(uncovered_point(c));
  const auto m = minimalize_cover(c);
  CHECK(verify_minimal_cover(m).ok);
  CHECK(m.lines.size() <= c.lines.size());
  CHECK(m.lines.size() >= 169 - 161);
  MESSAGE("cover " << c.lines.size() << " -> minimal " << m.lines.size());

  const auto b = dualize(m);
  CHECK(b.size() == m.lines.size());
  CHECK(is_minimal_blocking_set(m.field, b));

  // Each removed point lies only on its own line.
  const auto hits = coverage(c);
  for (std::uint64_t idx = 0; idx < n.volume(); ++idx) {
    if (n.contains(idx)) continue;
    const auto x = geom::index_point(n.field(), 2, idx);
    CHECK(hits[geom::proj_index(n.field(), {x[0], x[1], n.field().one()})] == 1);
  }
}

TEST_CASE("verify minimal cover") {
  const Field f = make_field(3, 1);
  LineCover all{f, geom::pg2_lines(f)};
  CHECK(all.lines.size() == 13);
  const auto r = verify_minimal_cover(all);
  CHECK_FALSE(r.ok);
  CHECK_FALSE(r.uncovered);
  CHECK(r.redundant);

  LineCover one{f, {line_at_infinity(f)}};
  const auto s = verify_minimal_cover(one);
  CHECK_FALSE(s.ok);
  CHECK(s.uncovered);
  CHECK(code_of([&] { minimalize_cover(one); }) == Errc::NotACover);

  const auto m = minimalize_cover(all);
  CHECK(verify_minimal_cover(m).ok);
  CHECK(m.lines.size() < 13);
}

TEST_CASE("minimalize on minimal and duplicated covers") {
  const Field f = make_field(5, 1);
  auto p = pencil(f, {f.zero(), f.zero(), f.one()});
  CHECK(p.lines.size() == 6);
  CHECK(verify_minimal_cover(p).ok);
  CHECK(minimalize_cover(p).lines == p.lines);

  auto dup = p;
  dup.lines.push_back(p.lines[2]);
  CHECK_FALSE(verify_minimal_cover(dup).ok);
  const auto m = minimalize_cover(dup);
  CHECK(m.lines.size() == 6);
  CHECK(verify_minimal_cover(m).ok);
}

TEST_CASE("pruning keeps a cover at every step") {
  std::mt19937 rng(7);
  for (std::uint32_t q : {2u, 3u, 4u, 5u}) {
    const Field f = q == 4 ? make_field(2, 2) : make_field(q, 1);
    auto lines = geom::pg2_lines(f);
    for (int trial = 0; trial < 5; ++trial) {
      std::shuffle(lines.begin(), lines.end(), rng);
      LineCover c{f, lines};
      // Drop lines one by one from the end while the remainder still covers.
      while (c.lines.size() > 1) {
        LineCover smaller{f, {c.lines.begin(), c.lines.end() - 1}};
        if (uncovered_point(smaller)) break;
        c = smaller;
      }
      const auto m = minimalize_cover(c);
      CHECK(m.lines.size() <= c.lines.size());
      CHECK_FALSE(uncovered_point(m));
      CHECK(verify_minimal_cover(m).ok);
    }
  }
}

TEST_CASE("duality with blocking sets for q <= 5") {
  for (std::uint32_t q : {2u, 3u, 4u, 5u}) {
    const Field f = q == 4 ? make_field(2, 2) : make_field(q, 1);
    std::vector<LineCover> covers{pencil(f, {f.one(), f.zero(), f.zero()}), minimalize_cover({f, geom::pg2_lines(f)})};
    for (const auto& c : covers) {
      const auto b = dualize(c);
      CHECK(b.size() == c.lines.size());
      CHECK_FALSE(unblocked_line(f, b));
      CHECK(is_minimal_blocking_set(f, b) == verify_minimal_cover(c).ok);
    }
    LineCover all{f, geom::pg2_lines(f)};
    CHECK_FALSE(is_minimal_blocking_set(f, dualize(all)));
    CHECK(unblocked_line(f, {}));
  }
}

TEST_CASE("json round trip") {
  const Field f = make_field(3, 2);
  const auto c = minimalize_cover({f, geom::pg2_lines(f)});
  const auto back = cover_from_json(cover_to_json(c));
  CHECK(back.lines == c.lines);
  CHECK(back.field == f);
  CHECK(blocking_set_to_json(f, dualize(c)).at("points").size() == c.lines.size());
  CHECK(code_of([&] { cover_from_json(nlohmann::json::parse(R"({"lines": 3})")); }) == Errc::ParseError);
}
