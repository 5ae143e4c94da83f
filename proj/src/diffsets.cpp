#include "ffgeom/diffsets.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <iomanip>
#include <limits>

#include "ffgeom/error.hpp"
#include "ffgeom/ff.hpp"

namespace ffgeom::diffsets {

std::uint32_t smallest_prime_1_mod(std::uint32_t m) {
  for (std::uint32_t p = m + 1;; p += m) {
    if (ff::is_prime(p)) return p;
  }
}

std::vector<std::uint32_t> greedy_residue_seed(std::uint32_t p, int k) {
  if (k < 1 || !ff::is_prime(p) || (p - 1) % (2 * static_cast<std::uint32_t>(k)) != 0) {
    throw Error(Errc::BadCongruence,
                "p = " + std::to_string(p) + " is not a prime congruent to 1 mod " +
                    std::to_string(2 * k));
  }
  std::vector<char> power(p, 0);
  for (std::uint64_t x = 1; x < p; ++x) {
    std::uint64_t y = 1;
    for (int i = 0; i < k; ++i) y = y * x % p;
    power[y] = 1;
  }
  std::vector<std::uint32_t> kept;
  for (std::uint32_t r = 0; r < p; ++r) {
    bool ok = true;
    for (auto s : kept) {
      if (power[(r + p - s) % p] || power[(s + p - r) % p]) {
        ok = false;
        break;
      }
    }
    if (ok) kept.push_back(r);
  }
  if (kept.size() < static_cast<std::size_t>(k)) {
    throw Error(Errc::InvariantViolation, "greedy seed smaller than k");
  }
  return kept;
}

double digit_exponent(int k, std::uint32_t p) {
  return 1.0 - 1.0 / k + std::log(static_cast<double>(k)) / (k * std::log(static_cast<double>(p)));
}

PowerFreeSet digit_construction(std::int64_t N, int k, std::uint32_t p) {
  const auto seed = greedy_residue_seed(p, k);
  PowerFreeSet out{k, N, {}};
  if (N < 1) return out;
  int L = 0;
  for (std::int64_t pw = p; pw <= N; pw *= p) ++L;
  L = std::max(L, 1);

  std::vector<std::int64_t> values{1};
  std::int64_t place = 1;
  for (int i = 0; i < L; ++i, place *= p) {
    std::vector<std::int64_t> next;
    if (i % k == 0) {
      for (auto v : values)
        for (auto c : seed) next.push_back(v + c * place);
    } else {
      for (auto v : values)
        for (std::int64_t c = 0; c < p; ++c) next.push_back(v + c * place);
    }
    values.swap(next);
  }
  std::sort(values.begin(), values.end());
  for (auto v : values) {
    if (v <= N) out.elements.push_back(v);
  }
  if (verify_power_free(out)) {
    throw Error(Errc::InvariantViolation, "digit construction produced a power difference");
  }
  return out;
}

PowerFreeSet digit_construction(std::int64_t N, int k) {
  return digit_construction(N, k, smallest_prime_1_mod(2 * static_cast<std::uint32_t>(k)));
}

std::optional<std::int64_t> exact_root(std::int64_t n, int k) {
  if (n < 0 || k < 1) return std::nullopt;
  if (n < 2 || k == 1) return n;
  auto r = static_cast<std::int64_t>(std::llround(std::pow(static_cast<double>(n), 1.0 / k)));
  for (std::int64_t m = std::max<std::int64_t>(0, r - 2); m <= r + 2; ++m) {
    __int128 y = 1;
    for (int i = 0; i < k && y <= n; ++i) y *= m;
    if (y == n) return m;
  }
  return std::nullopt;
}

namespace {

std::vector<std::int64_t> powers_upto(std::int64_t N, int k) {
  std::vector<std::int64_t> out;
  for (std::int64_t m = 1;; ++m) {
    __int128 y = 1;
    for (int i = 0; i < k && y <= N; ++i) y *= m;
    if (y > N) break;
    out.push_back(static_cast<std::int64_t>(y));
  }
  return out;
}

}  // namespace

std::optional<PowerViolation> verify_power_free(const PowerFreeSet& s) {
  const auto& e = s.elements;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] < 1 || e[i] > s.N || (i > 0 && e[i] <= e[i - 1])) {
      throw Error(Errc::InvariantViolation, "set is not strictly increasing inside [1, N]");
    }
  }
  if (e.size() < 2) return std::nullopt;
  const std::int64_t span = e.back() - e.front();
  std::vector<char> member(span + 1, 0);
  for (auto x : e) member[x - e.front()] = 1;
  const auto pw = powers_upto(span, s.k);
  for (auto a : e) {
    for (std::size_t m = 0; m < pw.size(); ++m) {
      const std::int64_t b = a + pw[m];
      if (b > e.back()) break;
      if (member[b - e.front()]) return PowerViolation{a, b, static_cast<std::int64_t>(m + 1)};
    }
  }
  return std::nullopt;
}

namespace {

class CliqueSearch {
 public:
  explicit CliqueSearch(const std::vector<std::uint64_t>& adj) : adj_(adj) {}

  // Size of a maximum clique inside cand, stopping early once target is reached.
  std::size_t run(std::uint64_t cand, std::size_t target) {
    best_ = 0;
    target_ = target;
    expand(cand, 0);
    return best_;
  }

 private:
  void expand(std::uint64_t cand, std::size_t depth) {
    if (cand == 0) {
      best_ = std::max(best_, depth);
      return;
    }
    int order[64];
    int colour[64];
    int n = 0;
    std::uint64_t uncoloured = cand;
    for (int c = 1; uncoloured != 0; ++c) {
      std::uint64_t avail = uncoloured;
      while (avail != 0) {
        const int v = std::countr_zero(avail);
        const std::uint64_t bit = std::uint64_t{1} << v;
        avail &= ~bit & ~adj_[v];
        uncoloured &= ~bit;
        order[n] = v;
        colour[n] = c;
        ++n;
      }
    }
    std::uint64_t rest = cand;
    for (int i = n - 1; i >= 0; --i) {
      if (depth + colour[i] <= best_) return;
      const int v = order[i];
      expand(rest & adj_[v], depth + 1);
      if (best_ >= target_) return;
      rest &= ~(std::uint64_t{1} << v);
    }
  }

  const std::vector<std::uint64_t>& adj_;
  std::size_t best_ = 0;
  std::size_t target_ = 0;
};

std::vector<std::uint64_t> complement(const std::vector<std::uint64_t>& adj) {
  const std::size_t n = adj.size();
  if (n > 64) throw Error(Errc::TooLargeForExact, "exact search supports at most 64 vertices");
  const std::uint64_t all = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  std::vector<std::uint64_t> c(n);
  for (std::size_t v = 0; v < n; ++v) c[v] = ~adj[v] & all & ~(std::uint64_t{1} << v);
  return c;
}

std::uint64_t full_mask(std::size_t n) {
  return n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
}

}  // namespace

std::size_t independence_number(const std::vector<std::uint64_t>& adj) {
  const auto c = complement(adj);
  CliqueSearch s(c);
  return s.run(full_mask(adj.size()), std::numeric_limits<std::size_t>::max());
}

std::vector<int> max_independent_set(const std::vector<std::uint64_t>& adj) {
  const auto c = complement(adj);
  const std::size_t n = adj.size();
  CliqueSearch s(c);
  const std::size_t alpha = s.run(full_mask(n), std::numeric_limits<std::size_t>::max());
  std::vector<int> chosen;
  std::uint64_t allowed = full_mask(n);
  for (std::size_t v = 0; v < n && chosen.size() < alpha; ++v) {
    const std::uint64_t bit = std::uint64_t{1} << v;
    if (!(allowed & bit)) continue;
    const std::uint64_t above = v == 63 ? 0 : ~((bit << 1) - 1);
    const std::uint64_t cand = allowed & c[v] & above;
    const std::size_t need = alpha - chosen.size() - 1;
    if (need == 0 || s.run(cand, need) >= need) {
      chosen.push_back(static_cast<int>(v));
      allowed = cand;
    } else {
      allowed &= ~bit;
    }
  }
  return chosen;
}

PowerFreeSet max_power_free_exact(std::int64_t N, int k, std::int64_t threshold) {
  if (N > threshold || N > 64) {
    throw Error(Errc::TooLargeForExact,
                "N = " + std::to_string(N) + " exceeds exact threshold " + std::to_string(threshold));
  }
  PowerFreeSet out{k, N, {}};
  if (N < 1) return out;
  std::vector<std::uint64_t> adj(N, 0);
  for (auto d : powers_upto(N - 1, k)) {
    for (std::int64_t a = 0; a + d < N; ++a) {
      adj[a] |= std::uint64_t{1} << (a + d);
      adj[a + d] |= std::uint64_t{1} << a;
    }
  }
  for (int v : max_independent_set(adj)) out.elements.push_back(v + 1);
  return out;
}

nlohmann::json to_json(const PowerFreeSet& s) {
  return {{"k", s.k}, {"N", s.N}, {"elements", s.elements}};
}

PowerFreeSet from_json(const nlohmann::json& j) {
  try {
    return PowerFreeSet{j.at("k").get<int>(), j.at("N").get<std::int64_t>(),
                        j.at("elements").get<std::vector<std::int64_t>>()};
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ParseError, e.what());
  }
}

SizeRow size_row(std::int64_t N, int k) {
  const std::uint32_t p = smallest_prime_1_mod(2 * static_cast<std::uint32_t>(k));
  SizeRow r{N, k, digit_construction(N, k, p).elements.size(), std::nullopt,
            std::pow(static_cast<double>(N), digit_exponent(k, p))};
  if (N <= kExactThreshold) r.exact = max_power_free_exact(N, k).elements.size();
  return r;
}

void write_csv(std::ostream& os, const std::vector<SizeRow>& rows) {
  os << "N,k,constructed,exact,floor\n";
  for (const auto& r : rows) {
    os << r.N << ',' << r.k << ',' << r.constructed << ',';
    if (r.exact) os << *r.exact;
    os << ',' << std::fixed << std::setprecision(4) << r.floor << std::defaultfloat << '\n';
  }
}

}  // namespace ffgeom::diffsets
