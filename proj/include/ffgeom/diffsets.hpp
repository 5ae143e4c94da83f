#pragma once

// Subsets of [N] = {1, ..., N} whose pairwise differences avoid nonzero k-th powers.

#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include <json.hpp>

namespace ffgeom::diffsets {

struct PowerFreeSet {
  int k = 2;
  std::int64_t N = 0;
  std::vector<std::int64_t> elements;  // strictly increasing, in [1, N]
};

/// a < b and b - a == m^k.
struct PowerViolation {
  std::int64_t a = 0;
  std::int64_t b = 0;
  std::int64_t m = 0;
  friend bool operator==(const PowerViolation&, const PowerViolation&) = default;
};

inline constexpr std::int64_t kExactThreshold = 64;

/// Smallest prime congruent to 1 modulo m.
std::uint32_t smallest_prime_1_mod(std::uint32_t m);

/// Greedy scan of residues 0..p-1 keeping those whose differences with all kept residues avoid
/// the nonzero k-th powers mod p. Requires p = 1 (mod 2k).
std::vector<std::uint32_t> greedy_residue_seed(std::uint32_t p, int k);

/// Base-p digit set: 1 + sum c_i p^i over i < L, with c_i in the greedy seed when k | i and
/// free otherwise, intersected with [N]. L = max(1, floor(log_p N)).
PowerFreeSet digit_construction(std::int64_t N, int k, std::uint32_t p);
PowerFreeSet digit_construction(std::int64_t N, int k);

/// The exponent 1 - 1/k + log k / (k log p).
double digit_exponent(int k, std::uint32_t p);

/// Lex-least violating pair, or nullopt.
std::optional<PowerViolation> verify_power_free(const PowerFreeSet& s);

/// Maximum power-free subset of [N], lex-least among maxima.
PowerFreeSet max_power_free_exact(std::int64_t N, int k, std::int64_t threshold = kExactThreshold);

/// Integer m >= 0 with m^k == n, if any.
std::optional<std::int64_t> exact_root(std::int64_t n, int k);

/// Graph on n <= 64 vertices as adjacency bitmasks. Returns the lex-least maximum independent
/// set (sorted), found by branch and bound with a colouring bound.
std::vector<int> max_independent_set(const std::vector<std::uint64_t>& adj);
std::size_t independence_number(const std::vector<std::uint64_t>& adj);

nlohmann::json to_json(const PowerFreeSet& s);
PowerFreeSet from_json(const nlohmann::json& j);

struct SizeRow {
  std::int64_t N;
  int k;
  std::size_t constructed;
  std::optional<std::size_t> exact;
  double floor;  // N^{c_k}
};
SizeRow size_row(std::int64_t N, int k);
void write_csv(std::ostream& os, const std::vector<SizeRow>& rows);

}  // namespace ffgeom::diffsets
