#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "ffgeom/diffsets.hpp"
#include "ffgeom/error.hpp"

using namespace ffgeom;
using namespace ffgeom::diffsets;

namespace {

bool oracle_power_free(const std::vector<std::int64_t>& s, int k) {
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j)
      if (exact_root(std::llabs(s[j] - s[i]), k)) return false;
  return true;
}

// Exhaustive maximum, lex-least among maxima.
std::vector<std::int64_t> brute_max(int N, int k) {
  std::vector<std::int64_t> best;
  for (std::uint32_t mask = 0; mask < (1u << N); ++mask) {
    std::vector<std::int64_t> s;
    for (int i = 0; i < N; ++i)
      if (mask >> i & 1) s.push_back(i + 1);
    if (s.size() < best.size() || !oracle_power_free(s, k)) continue;
    if (s.size() > best.size() || s < best) best = s;
  }
  return best;
}

}  // namespace

TEST_CASE("greedy seed") {
  CHECK(greedy_residue_seed(5, 2) == std::vector<std::uint32_t>{0, 2});
  auto a13 = greedy_residue_seed(13, 3);
  CHECK(a13.size() >= 3);
  CHECK_THROWS_AS(greedy_residue_seed(7, 2), Error);
  CHECK_THROWS_AS(greedy_residue_seed(9, 2), Error);
  for (auto [p, k] : std::vector<std::pair<int, int>>{{5, 2}, {13, 2}, {7, 3}, {13, 3}, {17, 4}, {11, 5}}) {
    auto seed = greedy_residue_seed(p, k);
    CHECK(seed.size() >= static_cast<std::size_t>(k));
    for (auto a : seed)
      for (auto b : seed) {
        if (a == b) continue;
        const std::uint32_t diff = (a + p - b) % p;
        for (std::uint64_t x = 1; x < static_cast<std::uint64_t>(p); ++x) {
          std::uint64_t y = 1;
          for (int i = 0; i < k; ++i) y = y * x % p;
          CHECK(y != diff);
        }
      }
  }
  CHECK(smallest_prime_1_mod(4) == 5);
  CHECK(smallest_prime_1_mod(6) == 7);
  CHECK(smallest_prime_1_mod(8) == 17);
}

TEST_CASE("digit construction") {
  auto s = digit_construction(25, 2, 5);
  CHECK(s.elements.size() == 10);
  CHECK(oracle_power_free(s.elements, 2));
  auto small = digit_construction(3, 2, 5);
  CHECK(small.elements == std::vector<std::int64_t>{1, 3});
  CHECK(digit_construction(2, 2, 5).elements == std::vector<std::int64_t>{1});
  auto big = digit_construction(625, 2, 5);
  CHECK(big.elements.size() == 100);
  CHECK(digit_exponent(2, 5) == doctest::Approx(0.7153).epsilon(1e-4));
  CHECK(static_cast<double>(big.elements.size()) >= std::pow(625.0, digit_exponent(2, 5)) - 1e-9);
  CHECK_THROWS_AS(digit_construction(100, 2, 7), Error);
}

TEST_CASE("digit construction is power-free across ranges") {
  for (int k : {2, 3}) {
    for (std::int64_t N : {1, 5, 7, 10, 49, 100, 343, 1000, 2401, 5000, 10000}) {
      auto s = digit_construction(N, k);
      CHECK_FALSE(verify_power_free(s).has_value());
      if (N <= 2401) CHECK(oracle_power_free(s.elements, k));
      for (auto x : s.elements) {
        CHECK(x >= 1);
        CHECK(x <= N);
      }
    }
  }
}

TEST_CASE("verify power free") {
  CHECK_FALSE(verify_power_free({2, 10, {1, 3, 6, 8}}).has_value());
  CHECK(verify_power_free({2, 10, {1, 2}}) == PowerViolation{1, 2, 1});
  CHECK_FALSE(verify_power_free({2, 10, {5}}).has_value());
  CHECK(verify_power_free({3, 30, {1, 3, 9, 28}}) == PowerViolation{1, 9, 2});
  CHECK_THROWS_AS(verify_power_free({2, 10, {3, 1}}), Error);

  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const int k = 2 + trial % 3;
    const std::int64_t N = 10 + rng() % 200;
    std::vector<std::int64_t> s;
    for (std::int64_t x = 1; x <= N; ++x)
      if (rng() % 6 == 0) s.push_back(x);
    CHECK(verify_power_free({k, N, s}).has_value() == !oracle_power_free(s, k));
  }
}

TEST_CASE("exact maximum matches exhaustive search") {
  for (int k : {2, 3}) {
    for (int N = 1; N <= 16; ++N) {
      CAPTURE(N);
      auto s = max_power_free_exact(N, k);
      CHECK(s.elements == brute_max(N, k));
    }
  }
  CHECK(max_power_free_exact(1, 2).elements == std::vector<std::int64_t>{1});
  CHECK(max_power_free_exact(2, 2).elements.size() == 1);
  auto ten = max_power_free_exact(10, 2);
  CHECK(ten.elements.size() >= 4);
  CHECK_THROWS_AS(max_power_free_exact(65, 2), Error);
}

TEST_CASE("exact maximum dominates the digit construction") {
  for (int k : {2, 3}) {
    for (int N = 1; N <= 64; N += 7) {
      auto exact = max_power_free_exact(N, k);
      CHECK_FALSE(verify_power_free(exact).has_value());
      CHECK(exact.elements.size() >= digit_construction(N, k).elements.size());
    }
  }
}

TEST_CASE("independent set search on small graphs") {
  // 5-cycle: alpha = 2, lex-least {0, 2}.
  std::vector<std::uint64_t> c5(5, 0);
  for (int i = 0; i < 5; ++i) {
    c5[i] |= 1ull << ((i + 1) % 5);
    c5[(i + 1) % 5] |= 1ull << i;
  }
  CHECK(independence_number(c5) == 2);
  CHECK(max_independent_set(c5) == std::vector<int>{0, 2});
  std::vector<std::uint64_t> empty(64, 0);
  CHECK(independence_number(empty) == 64);
  std::vector<std::uint64_t> too_big(65, 0);
  CHECK_THROWS_AS(independence_number(too_big), Error);
}

TEST_CASE("serialization") {
  PowerFreeSet s{2, 10, {1, 3, 6, 8}};
  auto j = to_json(s);
  auto back = from_json(j);
  CHECK(back.elements == s.elements);
  CHECK(back.N == 10);
  std::ostringstream os;
  write_csv(os, {size_row(25, 2), size_row(100, 2)});
  const std::string csv = os.str();
  CHECK(csv.rfind("N,k,constructed,exact,floor\n", 0) == 0);
  CHECK(csv.find("25,2,10,") != std::string::npos);
  CHECK(csv.find("100,2,") != std::string::npos);
  std::ostringstream empty;
  write_csv(empty, {});
  CHECK(empty.str() == "N,k,constructed,exact,floor\n");
}
