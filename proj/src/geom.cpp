#include "ffgeom/geom.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include <boost/multiprecision/cpp_int.hpp>

#include "ffgeom/error.hpp"

namespace ffgeom::geom {

using boost::multiprecision::cpp_int;

std::size_t PointHash::operator()(const Point& p) const noexcept {
  std::uint64_t h = 1469598103934665603ull;
  for (auto e : p) {
    h ^= e.v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    h *= 1099511628211ull;
  }
  return static_cast<std::size_t>(h);
}

std::uint64_t space_size(const Field& f, int d) {
  unsigned __int128 n = 1;
  for (int i = 0; i < d; ++i) {
    n *= f.order();
    if (n > std::numeric_limits<std::uint64_t>::max()) {
      throw Error(Errc::OrderOverflow, "q^d does not fit in 64 bits");
    }
  }
  return static_cast<std::uint64_t>(n);
}

std::uint64_t point_index(const Field& f, const Point& p) {
  std::uint64_t idx = 0;
  for (auto e : p) idx = idx * f.order() + e.v;
  return idx;
}

Point index_point(const Field& f, int d, std::uint64_t idx) {
  Point p(d);
  for (int i = d; i-- > 0;) {
    p[i] = Elem{static_cast<std::uint32_t>(idx % f.order())};
    idx /= f.order();
  }
  return p;
}

namespace {

int first_nonzero(const Point& v) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i].v != 0) return static_cast<int>(i);
  }
  return -1;
}

void check_dim(const Point& a, const Point& b) {
  if (a.size() != b.size()) throw Error(Errc::DimensionMismatch, "dimension mismatch");
}

// Base of the canonical line through x with canonical direction dir (dir[k] == 1).
Point base_through(const Field& f, const Point& x, const Point& dir, int k) {
  Point b(x.size());
  const Elem s = x[k];
  for (std::size_t i = 0; i < x.size(); ++i) b[i] = f.sub(x[i], f.mul(s, dir[i]));
  return b;
}

}  // namespace

Point canonical_dir(const Field& f, Point v) {
  const int k = first_nonzero(v);
  if (k < 0) throw Error(Errc::ZeroDirection, "zero direction vector");
  if (v[k] != f.one()) {
    const Elem s = f.inv(v[k]);
    for (auto& e : v) e = f.mul(e, s);
  }
  return v;
}

std::vector<Point> all_directions(const Field& f, int d) {
  std::vector<Point> out;
  const std::uint32_t q = f.order();
  for (int k = d - 1; k >= 0; --k) {
    // Directions (0,...,0,1,*,...,*) with the 1 at position k; lex order puts larger k first.
    const int free = d - 1 - k;
    std::uint64_t count = 1;
    for (int i = 0; i < free; ++i) count *= q;
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      Point v(d, Elem{0});
      v[k] = f.one();
      std::uint64_t r = idx;
      for (int i = d - 1; i > k; --i) {
        v[i] = Elem{static_cast<std::uint32_t>(r % q)};
        r /= q;
      }
      out.push_back(std::move(v));
    }
  }
  return out;
}

AffineLine make_line(const Field& f, const Point& x, const Point& v) {
  check_dim(x, v);
  Point dir = canonical_dir(f, v);
  const int k = first_nonzero(dir);
  return AffineLine{base_through(f, x, dir, k), std::move(dir)};
}

AffineLine canonical(const Field& f, const AffineLine& l) { return make_line(f, l.base, l.dir); }

bool on_line(const Field& f, const Point& p, const AffineLine& l) {
  check_dim(p, l.base);
  check_dim(p, l.dir);
  const int k = first_nonzero(l.dir);
  if (k < 0) throw Error(Errc::ZeroDirection, "zero direction vector");
  Elem t = f.sub(p[k], l.base[k]);
  if (l.dir[k] != f.one()) t = f.div(t, l.dir[k]);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (f.add(l.base[i], f.mul(t, l.dir[i])) != p[i]) return false;
  }
  return true;
}

std::vector<Point> line_points(const Field& f, const AffineLine& l) {
  std::vector<Point> out;
  out.reserve(f.order());
  for (std::uint32_t t = 0; t < f.order(); ++t) {
    Point p(l.base.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = f.add(l.base[i], f.mul(Elem{t}, l.dir[i]));
    out.push_back(std::move(p));
  }
  return out;
}

Hyperplane make_hyperplane(const Field& f, Point normal, Elem constant) {
  const int k = first_nonzero(normal);
  if (k < 0) throw Error(Errc::ZeroDirection, "zero hyperplane normal");
  const Elem s = f.inv(normal[k]);
  for (auto& e : normal) e = f.mul(e, s);
  return Hyperplane{std::move(normal), f.mul(constant, s)};
}

bool on_hyperplane(const Field& f, const Point& p, const Hyperplane& h) {
  check_dim(p, h.normal);
  Elem acc = f.zero();
  for (std::size_t i = 0; i < p.size(); ++i) acc = f.add(acc, f.mul(p[i], h.normal[i]));
  return acc == h.constant;
}

namespace {

class Collector {
 public:
  explicit Collector(bool all) : all_(all) {}
  void add(std::size_t i, std::size_t j) {
    const Violation v{i, j};
    if (all_) {
      list_.push_back(v);
    } else if (!best_ || v < *best_) {
      best_ = v;
    }
  }
  std::optional<Violation> best() const {
    if (!all_) return best_;
    if (list_.empty()) return std::nullopt;
    return *std::min_element(list_.begin(), list_.end());
  }
  std::vector<Violation> list() {
    std::sort(list_.begin(), list_.end());
    list_.erase(std::unique(list_.begin(), list_.end()), list_.end());
    return list_;
  }
  // Rows are visited in increasing i; once a row has a violation nothing later can beat it.
  bool done_after_row(std::size_t i) const { return !all_ && best_ && best_->i <= i; }

 private:
  bool all_;
  std::optional<Violation> best_;
  std::vector<Violation> list_;
};

void check_own(const Matching& m, Collector& c) {
  for (std::size_t j = 0; j < m.size(); ++j) {
    if (!on_line(m.field, m.points[j], m.lines[j])) c.add(j, j);
  }
}

void run_pairwise(const Matching& m, Collector& c) {
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) {
      if (on_line(m.field, m.points[i], m.lines[j]) != (i == j)) c.add(i, j);
    }
    if (c.done_after_row(i)) return;
  }
}

void run_line_scan(const Matching& m, Collector& c) {
  std::unordered_map<Point, std::vector<std::size_t>, PointHash> where;
  where.reserve(m.size() * 2);
  for (std::size_t i = 0; i < m.size(); ++i) where[m.points[i]].push_back(i);
  check_own(m, c);
  for (std::size_t j = 0; j < m.size(); ++j) {
    for (const auto& pt : line_points(m.field, m.lines[j])) {
      auto it = where.find(pt);
      if (it == where.end()) continue;
      for (auto i : it->second) {
        if (i != j) c.add(i, j);
      }
    }
  }
}

void run_direction_bucket(const Matching& m, Collector& c) {
  const Field& f = m.field;
  struct Group {
    Point dir;
    int k;
    std::unordered_map<Point, std::vector<std::size_t>, PointHash> by_base;
  };
  std::vector<Group> groups;
  std::map<Point, std::size_t> group_of;
  for (std::size_t j = 0; j < m.size(); ++j) {
    const AffineLine l = canonical(f, m.lines[j]);
    auto [it, fresh] = group_of.try_emplace(l.dir, groups.size());
    if (fresh) groups.push_back(Group{l.dir, first_nonzero(l.dir), {}});
    groups[it->second].by_base[l.base].push_back(j);
  }
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (!on_line(f, m.points[i], m.lines[i])) c.add(i, i);
    for (const auto& g : groups) {
      auto it = g.by_base.find(base_through(f, m.points[i], g.dir, g.k));
      if (it == g.by_base.end()) continue;
      for (auto j : it->second) {
        if (j != i) c.add(i, j);
      }
    }
    if (c.done_after_row(i)) return;
  }
}

void run(const Matching& m, VerifyStrategy s, Collector& c) {
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m.points[i].size() != static_cast<std::size_t>(m.d) ||
        m.lines[i].base.size() != static_cast<std::size_t>(m.d) ||
        m.lines[i].dir.size() != static_cast<std::size_t>(m.d)) {
      throw Error(Errc::DimensionMismatch, "pair " + std::to_string(i) + " has wrong dimension");
    }
  }
  if (m.points.size() != m.lines.size()) {
    throw Error(Errc::DimensionMismatch, "points and lines differ in count");
  }
  if (s == VerifyStrategy::Auto) s = choose_strategy(m);
  switch (s) {
    case VerifyStrategy::Pairwise: run_pairwise(m, c); break;
    case VerifyStrategy::LineScan: run_line_scan(m, c); break;
    default: run_direction_bucket(m, c); break;
  }
}

}  // namespace

VerifyStrategy choose_strategy(const Matching& m) {
  const double n = static_cast<double>(m.size());
  if (n <= 64) return VerifyStrategy::Pairwise;
  std::map<Point, int> dirs;
  for (const auto& l : m.lines) dirs.emplace(canonical_dir(m.field, l.dir), 0);
  const double pairwise = n * n;
  const double scan = n * m.field.order() * 2;
  const double bucket = n * (static_cast<double>(dirs.size()) + 2);
  if (pairwise <= scan && pairwise <= bucket) return VerifyStrategy::Pairwise;
  return scan < bucket ? VerifyStrategy::LineScan : VerifyStrategy::DirectionBucket;
}

std::optional<Violation> verify_induced_matching(const Matching& m, VerifyStrategy s) {
  Collector c(false);
  run(m, s, c);
  return c.best();
}

std::vector<Violation> list_violations(const Matching& m, VerifyStrategy s) {
  Collector c(true);
  run(m, s, c);
  return c.list();
}

std::optional<Violation> verify_point_hyperplane_matching(const Field& f,
                                                          const std::vector<Point>& points,
                                                          const std::vector<Hyperplane>& planes) {
  if (points.size() != planes.size()) {
    throw Error(Errc::DimensionMismatch, "points and hyperplanes differ in count");
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = 0; j < planes.size(); ++j) {
      if (on_hyperplane(f, points[i], planes[j]) != (i == j)) return Violation{i, j};
    }
  }
  return std::nullopt;
}

namespace {

// size <= sqrt(root_pow) + q, exactly.
BoundReport exact_bound(std::uint64_t size, std::uint64_t q, const cpp_int& root_pow,
                        std::string formula) {
  BoundReport r;
  r.size = size;
  r.formula = std::move(formula);
  r.bound = std::sqrt(root_pow.convert_to<double>()) + static_cast<double>(q);
  r.margin = r.bound - static_cast<double>(size);
  if (size <= q) {
    r.within = true;
  } else {
    const cpp_int excess = cpp_int(size - q);
    r.within = excess * excess <= root_pow;
  }
  return r;
}

}  // namespace

BoundReport vinh_bound_check(std::uint64_t size, std::uint64_t q) {
  return exact_bound(size, q, cpp_int(q) * q * q, "q^{3/2}+q");
}

BoundReport vinh_bound_check(const Matching& m) {
  if (m.d != 2) throw Error(Errc::DimensionMismatch, "line bound applies to the plane only");
  return vinh_bound_check(m.size(), m.field.order());
}

BoundReport hyperplane_bound_check(std::uint64_t size, std::uint64_t q, int d) {
  cpp_int pw = 1;
  for (int i = 0; i <= d; ++i) pw *= q;
  return exact_bound(size, q, pw, "q^{(d+1)/2}+q");
}

std::array<Elem, 3> proj_canonical(const Field& f, std::array<Elem, 3> v) {
  int k = -1;
  for (int i = 2; i >= 0; --i) {
    if (v[i].v != 0) {
      k = i;
      break;
    }
  }
  if (k < 0) throw Error(Errc::ZeroDirection, "zero homogeneous triple");
  if (v[k] != f.one()) {
    const Elem s = f.inv(v[k]);
    for (auto& e : v) e = f.mul(e, s);
  }
  return v;
}

std::vector<ProjPoint> pg2_points(const Field& f) {
  const std::uint32_t q = f.order();
  std::vector<ProjPoint> out;
  out.reserve(std::size_t{q} * q + q + 1);
  for (std::uint32_t a = 0; a < q; ++a) {
    for (std::uint32_t b = 0; b < q; ++b) {
      for (std::uint32_t c = 0; c < q; ++c) {
        const ProjPoint p{Elem{a}, Elem{b}, Elem{c}};
        const bool canon = c == 1 || (c == 0 && b == 1) || (c == 0 && b == 0 && a == 1);
        if (canon) out.push_back(p);
      }
    }
  }
  return out;
}

std::vector<ProjLine> pg2_lines(const Field& f) { return pg2_points(f); }

bool proj_incident(const Field& f, const ProjPoint& p, const ProjLine& l) {
  Elem acc = f.mul(p[0], l[0]);
  acc = f.add(acc, f.mul(p[1], l[1]));
  acc = f.add(acc, f.mul(p[2], l[2]));
  return acc.v == 0;
}

std::uint32_t proj_index(const Field& f, const ProjPoint& p) {
  const std::uint32_t q = f.order();
  if (p[2].v != 0) return p[0].v * q + p[1].v;
  if (p[1].v != 0) return q * q + p[0].v;
  return q * q + q;
}

nlohmann::json point_to_json(const Field& f, const Point& p) {
  nlohmann::json j = nlohmann::json::array();
  for (auto e : p) j.push_back(ff::elem_to_json(f, e));
  return j;
}

Point point_from_json(const Field& f, const nlohmann::json& j, int d) {
  if (!j.is_array() || static_cast<int>(j.size()) != d) {
    throw Error(Errc::ParseError, "point has wrong dimension");
  }
  Point p;
  for (const auto& e : j) p.push_back(ff::elem_from_json(f, e));
  return p;
}

nlohmann::json matching_to_json(const Matching& m) {
  nlohmann::json pairs = nlohmann::json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    pairs.push_back({{"point", point_to_json(m.field, m.points[i])},
                     {"base", point_to_json(m.field, m.lines[i].base)},
                     {"dir", point_to_json(m.field, m.lines[i].dir)}});
  }
  return {{"field", ff::field_to_json(m.field)}, {"d", m.d}, {"pairs", std::move(pairs)}};
}

Matching matching_from_json(const nlohmann::json& j) {
  try {
    Matching m;
    m.field = ff::field_from_json(j.at("field"));
    m.d = j.at("d").get<int>();
    if (m.d < 1) throw Error(Errc::ParseError, "dimension must be positive");
    for (const auto& pr : j.at("pairs")) {
      Point p = point_from_json(m.field, pr.at("point"), m.d);
      Point base = point_from_json(m.field, pr.at("base"), m.d);
      Point dir = point_from_json(m.field, pr.at("dir"), m.d);
      m.add(std::move(p), make_line(m.field, base, dir));
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ParseError, e.what());
  }
}

}  // namespace ffgeom::geom
