#include "ffgeom/blocking.hpp"

#include <algorithm>

#include "ffgeom/error.hpp"

namespace ffgeom::blocking {

ProjLine completion(const Field& f, const geom::Point& x, const geom::Point& v) {
  if (x.size() != 2 || v.size() != 2) throw Error(Errc::DimensionMismatch, "planar points only");
  if (v[0].v == 0 && v[1].v == 0) throw Error(Errc::ZeroDirection, "zero direction");
  const Elem c = f.sub(f.mul(x[0], v[1]), f.mul(x[1], v[0]));
  return geom::proj_canonical(f, {f.neg(v[1]), v[0], c});
}

std::vector<ProjPoint> points_on(const Field& f, const ProjLine& l) {
  ProjPoint u, w;
  if (l[2].v != 0) {
    const Elem s = f.neg(f.inv(l[2]));
    u = {f.one(), f.zero(), f.mul(l[0], s)};
    w = {f.zero(), f.one(), f.mul(l[1], s)};
  } else if (l[1].v != 0) {
    u = {f.one(), f.neg(f.div(l[0], l[1])), f.zero()};
    w = {f.zero(), f.zero(), f.one()};
  } else {
    u = {f.zero(), f.one(), f.zero()};
    w = {f.zero(), f.zero(), f.one()};
  }
  std::vector<ProjPoint> out{geom::proj_canonical(f, w)};
  for (std::uint32_t t = 0; t < f.order(); ++t) {
    ProjPoint p;
    for (int i = 0; i < 3; ++i) p[i] = f.add(u[i], f.mul(Elem{t}, w[i]));
    out.push_back(geom::proj_canonical(f, p));
  }
  return out;
}

LineCover nikodym_to_cover(const nikodym::PointSet& n) {
  if (n.d() != 2) throw Error(Errc::DimensionMismatch, "planar sets only");
  const Field& f = n.field();
  LineCover c{f, {line_at_infinity(f)}};
  for (std::uint64_t idx = 0; idx < n.volume(); ++idx) {
    const auto w = n.witness(idx);
    if (!w) throw Error(Errc::MissingWitness, "no witness for point " + std::to_string(idx));
    c.lines.push_back(completion(f, geom::index_point(f, 2, idx), *w));
  }
  std::sort(c.lines.begin(), c.lines.end());
  c.lines.erase(std::unique(c.lines.begin(), c.lines.end()), c.lines.end());
  return c;
}

std::vector<std::uint32_t> coverage(const LineCover& c) {
  const std::uint64_t q = c.field.order();
  std::vector<std::uint32_t> hits(q * q + q + 1, 0);
  for (const auto& l : c.lines)
    for (const auto& p : points_on(c.field, l)) ++hits[geom::proj_index(c.field, p)];
  return hits;
}

std::optional<ProjPoint> uncovered_point(const LineCover& c) {
  const auto hits = coverage(c);
  for (const auto& p : geom::pg2_points(c.field))
    if (hits[geom::proj_index(c.field, p)] == 0) return p;
  return std::nullopt;
}

LineCover minimalize_cover(const LineCover& c) {
  if (uncovered_point(c)) throw Error(Errc::NotACover, "input misses a point");
  LineCover out{c.field, c.lines};
  std::sort(out.lines.begin(), out.lines.end());
  auto hits = coverage(out);
  std::vector<ProjLine> kept;
  for (const auto& l : out.lines) {
    const auto pts = points_on(c.field, l);
    const bool redundant = std::all_of(pts.begin(), pts.end(),
                                       [&](const ProjPoint& p) { return hits[geom::proj_index(c.field, p)] > 1; });
    if (redundant) {
      for (const auto& p : pts) --hits[geom::proj_index(c.field, p)];
    } else {
      kept.push_back(l);
    }
  }
  out.lines = std::move(kept);
  return out;
}

CoverCheck verify_minimal_cover(const LineCover& c) {
  CoverCheck r;
  r.uncovered = uncovered_point(c);
  if (r.uncovered) return r;
  const auto hits = coverage(c);
  for (const auto& l : c.lines) {
    const auto pts = points_on(c.field, l);
    const bool private_point = std::any_of(pts.begin(), pts.end(),
                                           [&](const ProjPoint& p) { return hits[geom::proj_index(c.field, p)] == 1; });
    if (!private_point) {
      r.redundant = l;
      return r;
    }
  }
  r.ok = true;
  return r;
}

std::vector<ProjPoint> dualize(const LineCover& c) { return c.lines; }

std::optional<ProjLine> unblocked_line(const Field& f, const std::vector<ProjPoint>& b) {
  for (const auto& l : geom::pg2_lines(f)) {
    const bool hit = std::any_of(b.begin(), b.end(), [&](const ProjPoint& p) { return geom::proj_incident(f, p, l); });
    if (!hit) return l;
  }
  return std::nullopt;
}

bool is_minimal_blocking_set(const Field& f, const std::vector<ProjPoint>& b) {
  if (unblocked_line(f, b)) return false;
  const auto lines = geom::pg2_lines(f);
  for (std::size_t i = 0; i < b.size(); ++i) {
    bool tangent = false;
    for (const auto& l : lines) {
      if (!geom::proj_incident(f, b[i], l)) continue;
      std::size_t meets = 0;
      for (const auto& p : b) meets += geom::proj_incident(f, p, l);
      if (meets == 1) {
        tangent = true;
        break;
      }
    }
    if (!tangent) return false;
  }
  return true;
}

namespace {

nlohmann::json triples(const Field& f, const std::vector<ProjPoint>& v) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& t : v) j.push_back({ff::elem_to_json(f, t[0]), ff::elem_to_json(f, t[1]), ff::elem_to_json(f, t[2])});
  return j;
}

}  // namespace

nlohmann::json cover_to_json(const LineCover& c) {
  return {{"field", ff::field_to_json(c.field)}, {"lines", triples(c.field, c.lines)}};
}

LineCover cover_from_json(const nlohmann::json& j) {
  try {
    LineCover c{ff::field_from_json(j.at("field")), {}};
    for (const auto& t : j.at("lines")) {
      if (!t.is_array() || t.size() != 3) throw Error(Errc::ParseError, "line must be a triple");
      c.lines.push_back(geom::proj_canonical(
          c.field, {ff::elem_from_json(c.field, t[0]), ff::elem_from_json(c.field, t[1]), ff::elem_from_json(c.field, t[2])}));
    }
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ParseError, e.what());
  }
}

nlohmann::json blocking_set_to_json(const Field& f, const std::vector<ProjPoint>& b) {
  return {{"field", ff::field_to_json(f)}, {"points", triples(f, b)}};
}

}  // namespace ffgeom::blocking
