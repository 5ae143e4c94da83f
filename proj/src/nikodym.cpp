#include "ffgeom/nikodym.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <thread>
#include <unordered_set>

#include "ffgeom/error.hpp"
#include "ffgeom/matchgen.hpp"
#include "ffgeom/polyring.hpp"

namespace ffgeom::nikodym {

namespace {

constexpr std::uint32_t kMagic = 0x534e4646;  // "FFNS"
constexpr std::uint64_t kMaxAmbient = std::uint64_t{1} << 26;

std::uint64_t index_of(const Field& f, const Point& p) {
  std::uint64_t idx = 0;
  for (Elem e : p) idx = idx * f.order() + e.v;
  return idx;
}

}  // namespace

// ---------------------------------------------------------------------------------------------
// PointSet

PointSet PointSet::empty(const Field& f, int d) {
  if (d < 1) throw Error(Errc::DimensionMismatch, "dimension must be positive");
  PointSet s;
  s.field_ = f;
  s.d_ = d;
  s.volume_ = geom::space_size(f, d);
  if (s.volume_ > kMaxVolume) throw Error(Errc::OrderOverflow, "space too large for a bitset");
  s.bits_.assign((s.volume_ + 63) / 64, 0);
  return s;
}

PointSet PointSet::full(const Field& f, int d) {
  PointSet s = empty(f, d);
  for (std::uint64_t i = 0; i < s.volume_; ++i) s.insert(i);
  return s;
}

std::uint64_t PointSet::count() const {
  std::uint64_t c = 0;
  for (auto w : bits_) c += static_cast<std::uint64_t>(std::popcount(w));
  return c;
}

std::optional<Point> PointSet::witness(std::uint64_t idx) const {
  if (witness_.empty() || witness_[idx] == 0) return std::nullopt;
  return geom::index_point(field_, d_, witness_[idx]);
}

void PointSet::set_witness(std::uint64_t idx, const Point& dir) {
  if (witness_.empty()) witness_.assign(volume_, 0);
  witness_[idx] = index_of(field_, geom::canonical_dir(field_, dir));
}

bool punctured_line_inside(const PointSet& n, const Point& x, const Point& v) {
  const Field& f = n.field();
  const std::uint64_t q = f.order();
  thread_local Point y;
  y = x;
  for (std::uint32_t l = 1; l < q; ++l) {
    std::uint64_t idx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      y[i] = f.t() == 1 ? f.add(y[i], v[i]) : f.add(x[i], f.mul(Elem{l}, v[i]));
      idx = idx * q + y[i].v;
    }
    if (!n.contains(idx)) return false;
  }
  return true;
}

namespace {

NikodymCheck run_check(const PointSet& n, bool members_too, bool use_hints) {
  const Field& f = n.field();
  const std::uint64_t vol = n.volume();
  const std::vector<Point> dirs = geom::all_directions(f, n.d());
  std::vector<std::uint64_t> found(vol, 0);
  std::atomic<std::uint64_t> first_failure{vol};

  auto work = [&](std::uint64_t lo, std::uint64_t hi) {
    for (std::uint64_t idx = lo; idx < hi && idx < first_failure.load(); ++idx) {
      if (!members_too && n.contains(idx)) continue;
      const Point x = geom::index_point(f, n.d(), idx);
      if (const auto code = use_hints ? n.witness_code(idx) : 0; code != 0) {
        if (punctured_line_inside(n, x, geom::index_point(f, n.d(), code))) {
          found[idx] = code;
          continue;
        }
      }
      for (const auto& v : dirs) {
        if (punctured_line_inside(n, x, v)) {
          found[idx] = index_of(f, v);
          break;
        }
      }
      if (found[idx] == 0) {
        std::uint64_t cur = first_failure.load();
        while (idx < cur && !first_failure.compare_exchange_weak(cur, idx)) {
        }
        return;
      }
    }
  };

  const std::uint64_t workers =
      std::clamp<std::uint64_t>(std::thread::hardware_concurrency(), 1, std::max<std::uint64_t>(1, vol / 4096));
  if (workers == 1) {
    work(0, vol);
  } else {
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (vol + workers - 1) / workers;
    for (std::uint64_t w = 0; w < workers; ++w) pool.emplace_back(work, w * chunk, std::min(vol, (w + 1) * chunk));
    for (auto& t : pool) t.join();
  }

  NikodymCheck out;
  out.witnesses = PointSet::empty(f, n.d());
  if (first_failure.load() < vol) {
    out.failure = geom::index_point(f, n.d(), first_failure.load());
    return out;
  }
  for (std::uint64_t idx = 0; idx < vol; ++idx)
    if (found[idx] != 0) out.witnesses.set_witness_code(idx, found[idx]);
  out.ok = true;
  return out;
}

}  // namespace

NikodymCheck is_weak_nikodym(const PointSet& n, bool use_hints) { return run_check(n, false, use_hints); }

NikodymCheck is_nikodym(const PointSet& n, double budget, bool use_hints) {
  const double q = n.field().order();
  const double dirs = (static_cast<double>(n.volume()) - 1) / (q - 1);
  const double cost = static_cast<double>(n.volume()) * q * dirs;
  if (cost > budget) {
    throw Error(Errc::BudgetExceeded, "Nikodym check needs ~" + std::to_string(cost) + " operations");
  }
  return run_check(n, true, use_hints);
}

PointSet matching_complement(const Matching& m) {
  PointSet s = PointSet::full(m.field, m.d);
  for (std::size_t i = 0; i < m.size(); ++i) {
    const auto idx = index_of(m.field, m.points[i]);
    s.erase(idx);
    s.set_witness(idx, m.lines[i].dir);
  }
  return s;
}

Matching extract_matching(const PointSet& n, const NikodymCheck& weak) {
  if (!weak.ok) throw Error(Errc::NotWeakNikodym, "check did not succeed");
  Matching m{n.field(), n.d(), {}, {}};
  for (std::uint64_t idx = 0; idx < n.volume(); ++idx) {
    if (n.contains(idx)) continue;
    const auto dir = weak.witnesses.witness(idx);
    if (!dir) throw Error(Errc::MissingWitness, "no witness for point " + std::to_string(idx));
    const Point x = geom::index_point(n.field(), n.d(), idx);
    m.add(x, geom::make_line(n.field(), x, *dir));
  }
  return m;
}

PointSet product_lift(const PointSet& n) {
  const auto weak = is_weak_nikodym(n);
  if (!weak.ok) throw Error(Errc::NotWeakNikodym, "input has a point without an escaping line");
  const Field& f = n.field();
  const std::uint32_t q = f.order();
  PointSet out = PointSet::empty(f, n.d() + 1);
  for (std::uint64_t x = 0; x < n.volume(); ++x) {
    const bool member = n.contains(x);
    const std::uint64_t code = member ? 1 : weak.witnesses.witness_code(x) * q;
    for (std::uint32_t a = 0; a < q; ++a) {
      const std::uint64_t idx = x * q + a;
      if (member) out.insert(idx);
      out.set_witness_code(idx, code);
    }
  }
  return out;
}

void save_binary(const PointSet& n, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(Errc::ParseError, "cannot write " + path.string());
  const std::uint32_t header[4] = {kMagic, n.field().p(), static_cast<std::uint32_t>(n.field().t()),
                                   static_cast<std::uint32_t>(n.d())};
  os.write(reinterpret_cast<const char*>(header), sizeof header);
  os.write(reinterpret_cast<const char*>(n.raw_bits().data()),
           static_cast<std::streamsize>(n.raw_bits().size() * sizeof(std::uint64_t)));
}

PointSet load_binary(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(Errc::ParseError, "cannot read " + path.string());
  std::uint32_t header[4];
  if (!is.read(reinterpret_cast<char*>(header), sizeof header) || header[0] != kMagic) {
    throw Error(Errc::ParseError, "not a point-set file");
  }
  PointSet n = PointSet::empty(ff::make_field(header[1], static_cast<int>(header[2]), ff::kHardMaxOrder - 1),
                               static_cast<int>(header[3]));
  std::vector<std::uint64_t> words(n.raw_bits().size());
  if (!is.read(reinterpret_cast<char*>(words.data()), static_cast<std::streamsize>(words.size() * 8))) {
    throw Error(Errc::ParseError, "truncated bitset");
  }
  for (std::uint64_t i = 0; i < n.volume(); ++i)
    if (words[i >> 6] >> (i & 63) & 1) n.insert(i);
  return n;
}

nlohmann::json witnesses_to_json(const PointSet& n) {
  nlohmann::json list = nlohmann::json::array();
  for (std::uint64_t idx = 0; idx < n.volume(); ++idx) {
    if (auto w = n.witness(idx)) {
      list.push_back({geom::point_to_json(n.field(), geom::index_point(n.field(), n.d(), idx)),
                      geom::point_to_json(n.field(), *w)});
    }
  }
  return {{"field", ff::field_to_json(n.field())}, {"d", n.d()}, {"witnesses", list}};
}

void witnesses_from_json(PointSet& n, const nlohmann::json& j) {
  try {
    for (const auto& e : j.at("witnesses")) {
      const Point x = geom::point_from_json(n.field(), e.at(0), n.d());
      n.set_witness(index_of(n.field(), x), geom::point_from_json(n.field(), e.at(1), n.d()));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ParseError, e.what());
  }
}

nlohmann::json pointset_to_json(const PointSet& n) {
  static const char* hex = "0123456789abcdef";
  std::string bits;
  for (auto w : n.raw_bits())
    for (int s = 60; s >= 0; s -= 4) bits.push_back(hex[w >> s & 15]);
  nlohmann::json j = {{"field", ff::field_to_json(n.field())}, {"d", n.d()}, {"count", n.count()}, {"bits", bits}};
  if (n.has_witnesses()) j["witnesses"] = witnesses_to_json(n).at("witnesses");
  return j;
}

PointSet pointset_from_json(const nlohmann::json& j) {
  try {
    PointSet n = PointSet::empty(ff::field_from_json(j.at("field")), j.at("d").get<int>());
    const auto bits = j.at("bits").get<std::string>();
    if (bits.size() != n.raw_bits().size() * 16) throw Error(Errc::ParseError, "bitset has wrong length");
    for (std::size_t w = 0; w < n.raw_bits().size(); ++w) {
      const std::uint64_t word = std::stoull(bits.substr(w * 16, 16), nullptr, 16);
      for (int b = 0; b < 64; ++b) {
        const std::uint64_t idx = w * 64 + b;
        if (word >> b & 1) {
          if (idx >= n.volume()) throw Error(Errc::ParseError, "bit beyond the space");
          n.insert(idx);
        }
      }
    }
    if (j.contains("witnesses")) witnesses_from_json(n, j);
    return n;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ParseError, e.what());
  } catch (const std::invalid_argument&) {
    throw Error(Errc::ParseError, "bitset is not hex");
  }
}

// ---------------------------------------------------------------------------------------------
// Lattice configurations

std::uint64_t LatticeConfig::ambient_volume() const {
  std::uint64_t v = static_cast<std::uint64_t>(std::max<std::int64_t>(M, 0));
  for (auto e : extent) {
    if (e <= 0) return 0;
    if (v > kMaxAmbient * 64 / static_cast<std::uint64_t>(e)) return kMaxAmbient * 64;
    v *= static_cast<std::uint64_t>(e);
  }
  return v;
}

std::uint64_t LatticeConfig::ambient_index(const LatticePoint& v) const {
  std::uint64_t idx = 0;
  for (int i = 0; i < d; ++i) idx = idx * extent[i] + static_cast<std::uint64_t>(v[i] - 1);
  return idx * M + static_cast<std::uint64_t>(v[d] - 1);
}

LatticePoint LatticeConfig::ambient_point(std::uint64_t idx) const {
  LatticePoint v(d + 1);
  v[d] = static_cast<std::int64_t>(idx % M) + 1;
  idx /= M;
  for (int i = d - 1; i >= 0; --i) {
    v[i] = static_cast<std::int64_t>(idx % extent[i]) + 1;
    idx /= extent[i];
  }
  return v;
}

const LatticePoint& LatticeConfig::slope_at(const LatticePoint& v) const {
  if (ambient_slope.empty()) throw Error(Errc::MissingWitness, "configuration has no ambient slopes");
  return slope_table.at(ambient_slope.at(ambient_index(v)));
}

namespace {

bool inside(const LatticeConfig& c, const LatticePoint& v) {
  if (static_cast<int>(v.size()) != c.d + 1) return false;
  for (int i = 0; i < c.d; ++i)
    if (v[i] < 1 || v[i] > c.extent[i]) return false;
  return v[c.d] >= 1 && v[c.d] <= c.M;
}

std::optional<std::string> bad_slope(const LatticeConfig& c, const LatticePoint& s) {
  if (static_cast<int>(s.size()) != c.d + 1) return "slope has wrong length";
  if (s[c.d] != 1) return "slope must end in 1";
  for (int i = 0; i < c.d; ++i)
    if (s[i] < -c.L || s[i] > c.L) return "slope coordinate exceeds L";
  return std::nullopt;
}

}  // namespace

std::optional<std::string> check_lattice_invariants(const LatticeConfig& c) {
  if (c.d < 1 || static_cast<int>(c.extent.size()) != c.d) return "extent must have d entries";
  if (c.N < 1 || c.M < 1 || c.L < 1) return "N, M, L must be positive";
  if (c.N < c.M * c.L) return "need N >= M L";
  for (auto e : c.extent)
    if (e < 1 || e > c.N) return "extent outside [1, N]";
  if (c.point_slopes.size() != c.points.size()) return "one slope per point required";
  if (!std::is_sorted(c.points.begin(), c.points.end())) return "points must be sorted";
  for (std::size_t i = 0; i < c.points.size(); ++i) {
    if (!inside(c, c.points[i])) return "point outside the ambient box";
    if (i > 0 && c.points[i] == c.points[i - 1]) return "repeated point";
    if (auto m = bad_slope(c, c.point_slopes[i])) return m;
  }
  for (const auto& s : c.slope_table)
    if (auto m = bad_slope(c, s)) return m;
  if (!c.ambient_slope.empty()) {
    if (c.ambient_slope.size() != c.ambient_volume()) return "ambient slope map has wrong size";
    for (auto id : c.ambient_slope)
      if (id >= c.slope_table.size()) return "ambient slope id out of range";
  }
  return std::nullopt;
}

namespace {

void require_invariants(const LatticeConfig& c) {
  if (auto m = check_lattice_invariants(c)) throw Error(Errc::InvariantViolation, *m);
}

// Members hit by v + t s for t != 0 with the last coordinate kept inside [1, M].
template <class Member>
std::optional<std::int64_t> hit(const LatticeConfig& c, const LatticePoint& v, const LatticePoint& s,
                                 const Member& member) {
  LatticePoint w(v.size());
  for (std::int64_t t = 1 - v[c.d]; t <= c.M - v[c.d]; ++t) {
    if (t == 0) continue;
    for (std::size_t i = 0; i < v.size(); ++i) w[i] = v[i] + t * s[i];
    if (inside(c, w) && member(w)) return t;
  }
  return std::nullopt;
}

}  // namespace

std::optional<EscapeFailure> verify_member_escape(const LatticeConfig& c) {
  require_invariants(c);
  const std::set<LatticePoint> members(c.points.begin(), c.points.end());
  auto member = [&](const LatticePoint& w) { return members.count(w) > 0; };
  for (std::size_t i = 0; i < c.points.size(); ++i) {
    if (auto t = hit(c, c.points[i], c.point_slopes[i], member)) return EscapeFailure{c.points[i], *t};
  }
  return std::nullopt;
}

std::optional<EscapeFailure> verify_ambient_escape(const LatticeConfig& c) {
  require_invariants(c);
  if (!c.has_ambient_slopes()) throw Error(Errc::MissingWitness, "configuration has no ambient slopes");
  const std::uint64_t vol = c.ambient_volume();
  std::vector<char> member(vol, 0);
  for (const auto& p : c.points) member[c.ambient_index(p)] = 1;
  auto is_member = [&](const LatticePoint& w) { return member[c.ambient_index(w)] != 0; };
  for (std::uint64_t idx = 0; idx < vol; ++idx) {
    const LatticePoint v = c.ambient_point(idx);
    if (auto t = hit(c, v, c.slope_table[c.ambient_slope[idx]], is_member)) return EscapeFailure{v, *t};
  }
  return std::nullopt;
}

LatticeConfig lift_escape_config(const std::vector<LatticePoint>& P0, const std::vector<LatticePoint>& slopes0,
                                 const std::vector<std::int64_t>& extent0, std::int64_t N, std::int64_t M,
                                 std::int64_t L) {
  if (P0.size() != slopes0.size()) throw Error(Errc::DimensionMismatch, "one slope per base point required");
  const int d0 = static_cast<int>(extent0.size());
  LatticeConfig c;
  c.d = d0 + 1;
  c.N = N;
  c.M = M;
  c.L = L;
  c.extent = extent0;
  c.extent.push_back(N);
  if (c.ambient_volume() > kMaxAmbient) throw Error(Errc::BudgetExceeded, "ambient box too large");

  LatticePoint unit(c.d + 1, 0);
  unit[c.d - 1] = 1;
  unit[c.d] = 1;
  c.slope_table.push_back(unit);
  std::map<LatticePoint, std::uint32_t> id;
  for (std::size_t i = 0; i < P0.size(); ++i) {
    if (static_cast<int>(P0[i].size()) != d0 || static_cast<int>(slopes0[i].size()) != d0) {
      throw Error(Errc::DimensionMismatch, "base point or slope has wrong length");
    }
    LatticePoint s = slopes0[i];
    s.push_back(0);
    s.push_back(1);
    id.emplace(P0[i], static_cast<std::uint32_t>(c.slope_table.size()));
    c.slope_table.push_back(std::move(s));
  }
  std::vector<std::pair<LatticePoint, std::uint32_t>> base(id.begin(), id.end());
  for (const auto& [u, sid] : base) {
    for (std::int64_t n = 1; n <= N; ++n) {
      for (std::int64_t m = 1; m <= M; ++m) {
        LatticePoint p = u;
        p.push_back(n);
        p.push_back(m);
        c.points.push_back(std::move(p));
        c.point_slopes.push_back(c.slope_table[sid]);
      }
    }
  }
  const std::uint64_t vol = c.ambient_volume();
  c.ambient_slope.assign(vol, 0);
  if (!id.empty()) {
    for (std::uint64_t idx = 0; idx < vol; idx += static_cast<std::uint64_t>(N * M)) {
      LatticePoint v = c.ambient_point(idx);
      v.resize(d0);
      auto it = id.find(v);
      if (it == id.end()) continue;
      std::fill(c.ambient_slope.begin() + static_cast<std::ptrdiff_t>(idx),
                c.ambient_slope.begin() + static_cast<std::ptrdiff_t>(idx + N * M), it->second);
    }
  }
  require_invariants(c);
  return c;
}

LatticeConfig lattice_escape_set(int k, std::int64_t N, std::uint64_t subbox_volume) {
  if (k != 2 && k != 3) throw Error(Errc::ParameterViolation, "k must be 2 or 3");
  if (N < 2) throw Error(Errc::ParameterViolation, "N must be at least 2");
  const poly::IndexSet I(k);
  const std::int64_t Mphi = poly::phi_modulus(N, k);
  const auto box = matchgen::default_subbox(I.size(), N, subbox_volume);
  if (box.volume() > kMaxAmbient) throw Error(Errc::BudgetExceeded, "sub-box too large");

  std::vector<LatticePoint> xs;
  std::vector<std::int64_t> values;
  LatticePoint x = box.lo;
  while (true) {
    values.push_back(poly::phi_eval(I, x, Mphi).convert_to<std::int64_t>());
    xs.push_back(x);
    std::size_t i = x.size();
    while (i > 0 && x[i - 1] == box.hi[i - 1]) {
      x[i - 1] = box.lo[i - 1];
      --i;
    }
    if (i == 0) break;
    ++x[i - 1];
  }
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const auto A = diffsets::digit_construction(*hi - *lo + 1, k);
  const auto shift = matchgen::best_shift(values, A.elements);
  const std::set<std::int64_t> Aset(A.elements.begin(), A.elements.end());

  std::vector<std::size_t> gamma;
  std::vector<poly::NiceLine> lines;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!Aset.count(values[i] - shift.shift)) continue;
    gamma.push_back(i);
    lines.push_back(poly::nice_line_solve(I, xs[i], N));
  }
  // Slope bound maximizing (#kept directions) * floor(N / L).
  std::int64_t L = 1;
  std::uint64_t best = 0;
  std::set<std::int64_t> cand{1};
  for (const auto& l : lines) cand.insert(std::max<std::int64_t>(1, l.max_abs));
  for (auto c : cand) {
    if (c > N) break;
    std::uint64_t kept = 0;
    for (const auto& l : lines) kept += l.max_abs <= c;
    const std::uint64_t score = kept * static_cast<std::uint64_t>(N / c);
    if (score > best) best = score, L = c;
  }
  const std::int64_t M = N / L;

  std::vector<LatticePoint> P0, S0;
  for (std::int64_t z = 1; z <= N; ++z) {
    for (std::size_t g = 0; g < gamma.size(); ++g) {
      if (lines[g].max_abs > L) continue;
      LatticePoint p{z}, s{1};
      p.insert(p.end(), xs[gamma[g]].begin(), xs[gamma[g]].end());
      s.insert(s.end(), lines[g].y.begin(), lines[g].y.end());
      P0.push_back(std::move(p));
      S0.push_back(std::move(s));
    }
  }
  std::vector<std::int64_t> extent0{N};
  extent0.insert(extent0.end(), box.hi.begin(), box.hi.end());
  LatticeConfig cfg = lift_escape_config(P0, S0, extent0, N, M, L);
  if (auto f = verify_ambient_escape(cfg)) {
    throw Error(Errc::SolveFailed, "escape fails at t = " + std::to_string(f->t));
  }
  return cfg;
}

LatticeConfig ruzsa_lattice_config(std::uint32_t q) {
  const std::int64_t n = q / 10;
  const auto A = n <= diffsets::kExactThreshold ? diffsets::max_power_free_exact(n, 2)
                                                : diffsets::digit_construction(n, 2);
  const auto r = matchgen::ruzsa_lift_2d(q, A);
  LatticeConfig c;
  c.d = 1;
  c.N = q / 3;
  c.M = poly::floor_root(q, 2) / 2;
  c.L = c.M;
  c.extent = {c.N};
  for (const auto& p : r.matching.points) {
    c.points.push_back({static_cast<std::int64_t>(p[0].v), static_cast<std::int64_t>(p[1].v)});
  }
  std::sort(c.points.begin(), c.points.end());
  for (const auto& p : c.points) c.point_slopes.push_back({p[1], 1});
  require_invariants(c);
  return c;
}

// ---------------------------------------------------------------------------------------------
// Projection

std::pair<std::uint64_t, std::uint64_t> lattice_phi(const LatticeConfig& c, const LatticePoint& v,
                                                    std::uint64_t q) {
  const auto Q = static_cast<__int128>(q);
  __int128 acc = 0, base = 1;
  for (int i = 0; i < c.d; ++i) {
    acc = (acc + static_cast<__int128>(v[i]) % Q * base) % Q;
    base = base * (3 * c.N) % Q;
  }
  auto norm = [&](__int128 a) { return static_cast<std::uint64_t>((a % Q + Q) % Q); };
  return {norm(acc), norm(v[c.d])};
}

bool phi_injective_on_box(const LatticeConfig& c, std::uint64_t q) {
  const double size = std::pow(3.0 * c.N, c.d) * 3.0 * c.M;
  if (size > static_cast<double>(kMaxAmbient)) throw Error(Errc::BudgetExceeded, "box too large to enumerate");
  std::unordered_set<std::uint64_t> seen;
  LatticePoint v(c.d + 1);
  for (int i = 0; i < c.d; ++i) v[i] = -(c.N - 1);
  v[c.d] = -(c.M - 1);
  while (true) {
    const auto [a, b] = lattice_phi(c, v, q);
    if (!seen.insert(a * q + b).second) return false;
    int i = c.d;
    for (; i >= 0; --i) {
      const std::int64_t top = i == c.d ? 2 * c.M : 2 * c.N;
      const std::int64_t bottom = i == c.d ? -(c.M - 1) : -(c.N - 1);
      if (v[i] < top) {
        ++v[i];
        break;
      }
      v[i] = bottom;
    }
    if (i < 0) break;
  }
  return true;
}

PointSet project_to_plane(const LatticeConfig& c, std::uint32_t q, double budget) {
  if (!ff::is_prime(q)) throw Error(Errc::NotPrime, std::to_string(q) + " is not a prime");
  require_invariants(c);
  double bound = std::pow(3.0 * c.N, c.d);
  if (!(static_cast<double>(q) > bound)) throw Error(Errc::PrimeTooSmall, "need q > (3N)^d");
  {
    std::uint64_t exact = 1;
    for (int i = 0; i < c.d; ++i) exact *= static_cast<std::uint64_t>(3 * c.N);
    if (q <= exact) throw Error(Errc::PrimeTooSmall, "need q > (3N)^d");
  }
  if (!c.has_ambient_slopes() && !c.points.empty()) {
    throw Error(Errc::MissingWitness, "projection needs a slope for every ambient point");
  }
  const Field f = ff::make_field(q, 1);
  PointSet out = PointSet::full(f, 2);
  for (const auto& p : c.points) {
    const auto [a, b] = lattice_phi(c, p, q);
    out.erase(a * q + b);
  }
  // First coordinates of the box, each with its digit vector.
  std::map<std::uint64_t, LatticePoint> X;
  {
    LatticePoint n(c.d, 1);
    n.push_back(1);
    while (true) {
      X.emplace(lattice_phi(c, n, q).first, n);
      int i = c.d - 1;
      while (i >= 0 && n[i] == c.extent[i]) n[i--] = 1;
      if (i < 0) break;
      ++n[i];
    }
  }
  const Point vertical{f.zero(), f.one()}, horizontal{f.one(), f.zero()};
  for (std::uint32_t w1 = 0; w1 < q; ++w1) {
    auto it = X.find(w1);
    for (std::uint32_t w2 = 0; w2 < q; ++w2) {
      const std::uint64_t idx = std::uint64_t{w1} * q + w2;
      if (it == X.end()) {
        out.set_witness(idx, vertical);
      } else if (w2 < 1 || w2 > static_cast<std::uint64_t>(c.M)) {
        out.set_witness(idx, horizontal);
      } else if (c.points.empty()) {
        out.set_witness(idx, vertical);
      } else {
        LatticePoint v = it->second;
        v[c.d] = w2;
        const auto& s = c.slope_at(v);
        const auto z = lattice_phi(c, s, q);
        out.set_witness(idx, {Elem{static_cast<std::uint32_t>(z.first)}, Elem{static_cast<std::uint32_t>(z.second)}});
      }
    }
  }
  const double cost = static_cast<double>(q) * q * q * (q + 1);
  if (cost <= budget) {
    const auto check = is_nikodym(out, budget);
    if (!check.ok) throw Error(Errc::VerificationFailed, "projected set is not Nikodym");
  }
  return out;
}

nlohmann::json lattice_to_json(const LatticeConfig& c) {
  return {{"d", c.d},
          {"N", c.N},
          {"M", c.M},
          {"L", c.L},
          {"extent", c.extent},
          {"points", c.points},
          {"point_slopes", c.point_slopes},
          {"slope_table", c.slope_table},
          {"ambient_slope", c.ambient_slope}};
}

LatticeConfig lattice_from_json(const nlohmann::json& j) {
  LatticeConfig c;
  try {
    c.d = j.at("d").get<int>();
    c.N = j.at("N").get<std::int64_t>();
    c.M = j.at("M").get<std::int64_t>();
    c.L = j.at("L").get<std::int64_t>();
    c.extent = j.at("extent").get<std::vector<std::int64_t>>();
    c.points = j.at("points").get<std::vector<LatticePoint>>();
    c.point_slopes = j.at("point_slopes").get<std::vector<LatticePoint>>();
    c.slope_table = j.value("slope_table", std::vector<LatticePoint>{});
    c.ambient_slope = j.value("ambient_slope", std::vector<std::uint32_t>{});
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ParseError, e.what());
  }
  require_invariants(c);
  return c;
}

}  // namespace ffgeom::nikodym
