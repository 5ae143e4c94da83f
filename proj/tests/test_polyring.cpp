#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <random>

#include "ffgeom/error.hpp"
#include "ffgeom/polyring.hpp"

using namespace ffgeom;
using namespace ffgeom::poly;

namespace {

IntPoly random_poly(std::mt19937_64& rng, int max_deg, int bound) {
  std::vector<BigInt> c(1 + rng() % (max_deg + 1));
  for (auto& x : c) x = static_cast<std::int64_t>(rng() % (2 * bound + 1)) - bound;
  return IntPoly(std::move(c));
}

std::int64_t power(std::int64_t x, int k) {
  std::int64_t y = 1;
  for (int i = 0; i < k; ++i) y *= x;
  return y;
}

// Brute-force minimum number of positive k-th powers summing to n.
int brute_min_terms(std::int64_t n, int k, int depth = 0) {
  if (n == 0) return 0;
  if (depth > 12) return 99;
  int best = 99;
  for (std::int64_t x = 1; power(x, k) <= n; ++x) best = std::min(best, 1 + brute_min_terms(n - power(x, k), k, depth + 1));
  return best;
}

std::vector<std::int64_t> random_x(const IndexSet& I, std::int64_t N, std::mt19937_64& rng) {
  std::vector<std::int64_t> x(I.size());
  for (auto& v : x) v = 1 + static_cast<std::int64_t>(rng() % N);
  return x;
}

}  // namespace

TEST_CASE("integer polynomial arithmetic") {
  IntPoly f{1, 2, 3};
  IntPoly g{0, 1};
  CHECK((f * g) == IntPoly{0, 1, 2, 3});
  CHECK((f - f).is_zero());
  CHECK((f - f).degree() == -1);
  CHECK(IntPoly{1, 0, 0} == IntPoly{1});
  CHECK(pow(IntPoly{1, 1}, 3) == IntPoly{1, 3, 3, 1});
  CHECK(f.eval(2) == 17);
  CHECK(compose(f, IntPoly{1, 1}) == IntPoly{6, 8, 3});
  CHECK(binomial(5, 2) == 10);
  CHECK(factorial(6) == 720);
  IntPoly big = IntPoly::monomial(BigInt("123456789012345678901234567890"), 2);
  CHECK(poly_from_json(to_json(big)) == big);
  CHECK(poly_from_json(to_json(f)) == f);
  CHECK(to_json(f) == nlohmann::json::array({1, 2, 3}));
  CHECK_THROWS_AS(poly_from_json(nlohmann::json::array({1.5})), Error);
}

TEST_CASE("waring decompositions") {
  CHECK(waring_decompose(0, 2, 4).empty());
  auto seven = waring_decompose(7, 2, 4);
  CHECK(seven == std::vector<std::int64_t>{2, 1, 1, 1});
  auto r23 = waring_decompose(23, 3, 9);
  std::int64_t s = 0;
  for (auto x : r23) s += power(x, 3);
  CHECK(s == 23);
  CHECK(r23.size() == 9);
  CHECK_THROWS_AS(waring_decompose(23, 3, 8), Error);
  CHECK_THROWS_AS(waring_decompose(7, 2, 3), Error);

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 1000; ++trial) {
    const int k = 1 + trial % 4;
    const std::int64_t n = static_cast<std::int64_t>(rng() % (trial % 10 == 0 ? 5000000 : 100000));
    const int budget = k == 1 ? 1 : k == 2 ? 4 : k == 3 ? 9 : 19;
    auto parts = waring_decompose(n, k, budget);
    std::int64_t sum = 0;
    for (auto x : parts) {
      CHECK(x >= 0);
      sum += power(x, k);
    }
    CHECK(sum == n);
    CHECK(parts.size() <= static_cast<std::size_t>(budget));
  }
}

TEST_CASE("waring table agrees with brute force") {
  const WaringTable& t2 = waring_table(2);
  const WaringTable& t3 = waring_table(3);
  for (std::int64_t n = 0; n <= 60; ++n) {
    CHECK(t2.min_terms(n) == brute_min_terms(n, 2));
    CHECK(t3.min_terms(n) == brute_min_terms(n, 3));
  }
  CHECK(waring_params(1).G == 1);
  CHECK(waring_params(2).G == 4);
  CHECK(waring_params(3).G == 9);
  CHECK(waring_params(2).T == 0);
}

TEST_CASE("waring table binary cache round trip") {
  WaringTable t(3, 5000);
  const auto path = std::filesystem::temp_directory_path() / "ffgeom_waring_test.bin";
  t.save(path);
  WaringTable u = WaringTable::load(path);
  CHECK(u.k() == 3);
  CHECK(u.range() == 5000);
  for (std::int64_t n = 0; n <= 5000; n += 37) {
    CHECK(u.min_terms(n) == t.min_terms(n));
    CHECK(u.parts(n) == t.parts(n));
  }
  std::filesystem::remove(path);
  CHECK_THROWS_AS(WaringTable::load(path), Error);
}

TEST_CASE("index sets") {
  IndexSet i1(1);
  CHECK(i1.size() == 1);
  IndexSet i2(2);
  CHECK(i2.size() == 11);
  CHECK(i2.index_of(1, 0, 1) == 1);
  CHECK(i2.index_of(1, 4, 2) == 10);
  IndexSet i3(3);
  CHECK(i3.size() == 119);
  CHECK(i3.G(2) == 4);
  CHECK(i3.beta_max(1) == 18);
  CHECK(i3.beta_max(2) == 9);
  for (std::size_t i = 0; i < i3.size(); ++i) {
    const auto& e = i3.entries()[i];
    CHECK(i3.index_of(e.alpha, e.beta, e.gamma) == i);
  }
  CHECK_THROWS_AS(i2.index_of(1, 5, 1), Error);
}

TEST_CASE("potential evaluation") {
  IndexSet I(2);
  std::vector<std::int64_t> zero(I.size(), 0);
  CHECK(phi_eval(I, zero, 3) == 0);
  std::vector<std::int64_t> x(I.size(), 0);
  x[0] = 2;
  CHECK(phi_eval(x, 50, 2) == 4);
  CHECK(phi_modulus(100, 2) == 3);
  CHECK(phi_modulus(100, 3) == 1);
  CHECK(phi_modulus(81, 2) == 3);
  CHECK(phi_modulus(80, 2) == 2);
  CHECK(floor_root(1000000, 3) == 100);
  CHECK(floor_root(999999, 3) == 99);
  // x_{1,b,1} - x_{1,b,2} weighted by M^b.
  x[I.index_of(1, 2, 1)] = 5;
  x[I.index_of(1, 1, 2)] = 7;
  CHECK(phi_eval(I, x, 3) == 4 + 9 * 5 - 3 * 7);
  std::vector<std::int64_t> wrong(3, 0);
  CHECK_THROWS_AS(phi_eval(I, wrong, 3), Error);

  std::mt19937_64 rng(3);
  const std::int64_t N = 50;
  BigInt worst = 0;
  for (int trial = 0; trial < 200; ++trial) {
    auto v = random_x(I, N, rng);
    BigInt val = abs(phi_eval(I, v, phi_modulus(N, 2)));
    if (val > worst) worst = val;
  }
  // x_0^2 + (M^0 + ... + M^4) N: (1 + 2 + 4 + 8 + 16) * 50 + 2500 for M = 2.
  CHECK(worst <= BigInt(2500 + 31 * 50));
  MESSAGE("measured |Phi|/N^2 constant: " << static_cast<double>(worst) / (N * N));
}

TEST_CASE("nice line solver") {
  std::mt19937_64 rng(17);
  for (int k : {2, 3}) {
    IndexSet I(k);
    const std::int64_t N = 100;
    const std::int64_t M = phi_modulus(N, k);
    double worst = 0;
    for (int trial = 0; trial < 50; ++trial) {
      auto x = random_x(I, N, rng);
      NiceLine nl = nice_line_solve(I, x, N);
      CHECK(nl.y[0] == 1);
      // Independent check: a degree-k polynomial vanishing at k+1 points is zero.
      const BigInt base = phi_eval(I, x, M);
      for (std::int64_t h = -2; h <= k; ++h) {
        std::vector<std::int64_t> moved(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) moved[i] = x[i] + nl.y[i] * h;
        BigInt hk = 1;
        for (int i = 0; i < k; ++i) hk *= h;
        CHECK(phi_eval(I, moved, M) == base + hk);
      }
      worst = std::max(worst, nl.constant);
    }
    MESSAGE("k = " << k << " measured direction constant " << worst);
  }
  IndexSet I2(2);
  std::vector<std::int64_t> bad(I2.size(), 0);
  CHECK_THROWS_AS(nice_line_solve(I2, bad, 100), Error);
  std::vector<std::int64_t> ones(I2.size(), 1);
  auto nl = nice_line_solve(I2, ones, 1);
  CHECK(nl.y[0] == 1);
}

TEST_CASE("alternating power sums") {
  CHECK(boole_sum_check(1, IntPoly{0, 1}));
  CHECK(boole_sum_check(2, IntPoly{3, -1, 2}));
  CHECK(boole_sum_check(5, IntPoly{}));
  std::mt19937_64 rng(99);
  for (int k = 1; k <= 8; ++k) {
    for (int trial = 0; trial < 20; ++trial) CHECK(boole_sum_check(k, random_poly(rng, 4, 9)));
  }
  CHECK_THROWS_AS(boole_sum_check(0, IntPoly{1}), Error);
}

TEST_CASE("finite differences") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    IntPoly p = random_poly(rng, 6, 20);
    const BigInt a = static_cast<std::int64_t>(rng() % 21) - 10;
    BigInt b = static_cast<std::int64_t>(rng() % 7) - 3;
    if (b == 0) b = 2;
    CHECK(finite_difference_check(p, a, b));
  }
}

TEST_CASE("coefficient boxes") {
  CHECK(coeff_box_member(IntPoly{}, 0, 0));
  CHECK(coeff_box_member(IntPoly{0, 0, 3}, 3, 3));
  CHECK_FALSE(coeff_box_member(IntPoly{0, 0, 3}, 2, 3));
  CHECK_FALSE(coeff_box_member(IntPoly{0, -4}, 3, 3));
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const int s1 = 1 + rng() % 5, s2 = 1 + rng() % 5;
    const int m1 = 1 + rng() % 9, m2 = 1 + rng() % 9;
    IntPoly f = random_poly(rng, s1 - 1, m1);
    IntPoly g = random_poly(rng, s2 - 1, m2);
    REQUIRE(coeff_box_member(f, s1, m1));
    REQUIRE(coeff_box_member(g, s2, m2));
    CHECK(coeff_box_member(f * g, s1 + s2, BigInt((s1 + s2) * m1 * m2)));
  }
}
