#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "ffgeom/error.hpp"
#include "ffgeom/euclid.hpp"

using namespace ffgeom;
using namespace ffgeom::euclid;
using nikodym::LatticeConfig;

namespace {

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::ParseError;
}

Rational envelope_at(const RVec& p, const RVec& b, const RVec& v, const Rational& t) {
  Rational m = 0;
  for (std::size_t i = 0; i < p.size(); ++i) m = std::max(m, Rational(abs(p[i] - b[i] - t * v[i])));
  return m;
}

// N = 8, M = L = 2: (1,1) with slope (2,1), (4,2) and (8,1) with slope (0,1).
LatticeConfig three_points() {
  LatticeConfig c;
  c.d = 1;
  c.N = 8;
  c.M = 2;
  c.L = 2;
  c.extent = {8};
  c.points = {{1, 1}, {4, 2}, {8, 1}};
  c.point_slopes = {{2, 1}, {0, 1}, {0, 1}};
  return c;
}

}  // namespace

TEST_CASE("distance from a point to a line") {
  CHECK(dinf_point_line({1, 2}, {0, 0}, {1, 2}) == 0);
  CHECK(dinf_point_line({Rational(1, 3), 1}, {0, 0}, {1, 3}) == 0);
  const RVec p{0, 0}, b{1, 0}, v{0, 1};
  CHECK(dinf_point_line(p, b, v) == 1);
  CHECK(envelope_at(p, b, v, 0) == 1);
  CHECK(dinf_point_line_sorted(p, b, v) == 1);
  CHECK(code_of([] { dinf_point_line({0, 0}, {1, 1}, {0, 0}); }) == Errc::ZeroDirection);
  CHECK(code_of([] { dinf_point_line({0, 0}, {1, 1, 1}, {0, 1}); }) == Errc::DimensionMismatch);
  const auto at = dinf_point_line_at({0, 2}, {0, 0}, {1, 1});
  CHECK(at.value == 1);
  CHECK(at.t == 1);
}

TEST_CASE("random instances against the sorted search and a grid scan") {
  std::mt19937 rng(1016);
  std::uniform_int_distribution<int> num(-12, 12), den(1, 4), dim(1, 5);
  auto rnd = [&] { return Rational(num(rng), den(rng)); };
  for (int trial = 0; trial < 40; ++trial) {
    const int D = dim(rng);
    RVec p(D), b(D), v(D);
    for (int i = 0; i < D; ++i) p[i] = rnd(), b[i] = rnd(), v[i] = rnd();
    v[trial % D] = Rational(1 + trial % 3, 4);  // keep one slope at least 1/4
    const Rational exact = dinf_point_line(p, b, v);
    CHECK(dinf_point_line_sorted(p, b, v) == exact);
    CHECK(envelope_at(p, b, v, dinf_point_line_at(p, b, v).t) == exact);

    Rational slope = 0, grid_min = envelope_at(p, b, v, -40);
    for (const auto& x : v) slope = std::max(slope, Rational(abs(x)));
    for (int k = -40 * 32; k <= 40 * 32; ++k) grid_min = std::min(grid_min, envelope_at(p, b, v, Rational(k, 32)));
    CHECK(grid_min >= exact);
    CHECK(grid_min - exact <= slope / 64);
  }
}

TEST_CASE("translation and scaling") {
  std::mt19937 rng(99);
  std::uniform_int_distribution<int> num(-9, 9), den(1, 5);
  auto rnd = [&] { return Rational(num(rng), den(rng)); };
  for (int trial = 0; trial < 30; ++trial) {
    RVec p(3), b(3), v(3), c(3);
    for (int i = 0; i < 3; ++i) p[i] = rnd(), b[i] = rnd(), v[i] = rnd(), c[i] = rnd();
    v[0] = 1;
    const Rational base = dinf_point_line(p, b, v);
    RVec p2 = p, b2 = b, ps = p, bs = b, vs = v;
    const Rational lambda(1 + trial % 4, 3);
    for (int i = 0; i < 3; ++i) {
      p2[i] += c[i], b2[i] += c[i];
      ps[i] *= lambda, bs[i] *= lambda, vs[i] *= -lambda;
    }
    CHECK(dinf_point_line(p2, b2, v) == base);
    CHECK(dinf_point_line(ps, bs, v) == lambda * base);
    CHECK(dinf_point_line(ps, bs, vs) == lambda * base);
  }
}

TEST_CASE("single lattice point") {
  LatticeConfig c;
  c.d = 1;
  c.N = 2;
  c.M = 1;
  c.L = 1;
  c.extent = {2};
  c.points = {{2, 1}};
  c.point_slopes = {{1, 1}};
  const auto e = lattice_to_euclid(c);
  REQUIRE(e.points.size() == 1);
  CHECK(e.points[0] == RVec{1, Rational(1, 2)});
  CHECK(certify_separation(e, 1).ok);
}

TEST_CASE("hand configuration with three points") {
  const auto c = three_points();
  CHECK(c.L * c.M <= c.N);
  const auto e = lattice_to_euclid(c);
  for (const auto& p : e.points)
    for (const auto& x : p) CHECK((x >= 0 && x <= 1));
  const auto sep = certify_separation(e, Rational(1, 16));
  CHECK(sep.ok);
  CHECK(sep.value >= Rational(1, 16));
  MESSAGE("minimum separation " << to_string(sep.value));

  auto bad = e;
  bad.points[2] = {bad.points[0][0] + bad.dirs[0][0], bad.points[0][1] + bad.dirs[0][1]};
  const auto f = certify_separation(bad, Rational(1, 16));
  CHECK_FALSE(f.ok);
  CHECK(f.value == 0);
  CHECK(f.i == 2);
  CHECK(f.j == 0);

  auto hit = c;
  hit.points[1] = {3, 2};
  CHECK(code_of([&] { lattice_to_euclid(hit); }) == Errc::InvariantViolation);
}

TEST_CASE("both cases of the separation argument occur") {
  const auto c = three_points();
  const auto e = lattice_to_euclid(c);
  int far_in_last = 0, near_in_last = 0;
  for (std::size_t i = 0; i < e.points.size(); ++i) {
    for (std::size_t j = 0; j < e.points.size(); ++j) {
      if (i == j) continue;
      const auto at = dinf_point_line_at(e.points[i], e.points[j], e.dirs[j]);
      const Rational drift = abs(Rational(c.points[i][1] - c.points[j][1]) - at.t);
      if (drift > Rational(1, 2 * c.L)) {
        ++far_in_last;
        CHECK(Rational(c.L, c.N) * drift > Rational(1, 2 * c.N));
      } else {
        ++near_in_last;
        const Rational gap = abs(Rational(c.points[i][0] - c.points[j][0]) - at.t * c.point_slopes[j][0]) / c.N;
        CHECK(gap >= Rational(1, 2 * c.N));
      }
    }
  }
  CHECK(far_in_last > 0);
  CHECK(near_in_last > 0);
}

TEST_CASE("ruzsa pipeline at q = 101") {
  const auto c = nikodym::ruzsa_lattice_config(101);
  const auto e = lattice_to_euclid(c);
  CHECK(e.points.size() == c.points.size());
  CHECK(certify_separation(e, Rational(1, 2 * c.N)).ok);
}

TEST_CASE("serialization") {
  const auto e = lattice_to_euclid(three_points());
  const auto j = to_json(e);
  CHECK(j.at("pairs").at(0).at("point").at(0) == "1/8");
  const auto back = euclid_from_json(j);
  CHECK(back.points == e.points);
  CHECK(back.dirs == e.dirs);
  CHECK(back.N == 8);

  std::ostringstream os;
  write_distances_csv(os, e);
  const std::string csv = os.str();
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);
  CHECK(csv.rfind("i,j,distance\n", 0) == 0);

  CHECK(rational_from_string("6/4") == Rational(3, 2));
  CHECK(rational_from_string("-5") == -5);
  CHECK(to_string(Rational(2)) == "2/1");
  CHECK(code_of([] { rational_from_string("1/0"); }) == Errc::ParseError);
  CHECK(code_of([] { rational_from_string("x/2"); }) == Errc::ParseError);
}
