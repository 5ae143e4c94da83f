#include "ffgeom/euclid.hpp"

#include <algorithm>
#include <ostream>

#include "ffgeom/error.hpp"

namespace ffgeom::euclid {

namespace {

void check_shapes(const RVec& p, const RVec& base, const RVec& dir) {
  if (p.size() != base.size() || p.size() != dir.size()) {
    throw Error(Errc::DimensionMismatch, "point and line dimensions differ");
  }
  if (std::all_of(dir.begin(), dir.end(), [](const Rational& x) { return x == 0; })) {
    throw Error(Errc::ZeroDirection, "line direction is zero");
  }
}

Rational envelope(const RVec& w, const RVec& dir, const Rational& t) {
  Rational best = 0;
  for (std::size_t i = 0; i < w.size(); ++i) best = std::max(best, Rational(abs(w[i] - t * dir[i])));
  return best;
}

// Crossing parameters of the lines s (w_i - t dir_i), s = +-1.
std::vector<Rational> breakpoints(const RVec& w, const RVec& dir) {
  std::vector<std::pair<Rational, Rational>> lines;  // value a - b t
  for (std::size_t i = 0; i < w.size(); ++i) {
    lines.emplace_back(w[i], dir[i]);
    lines.emplace_back(-w[i], -dir[i]);
  }
  std::vector<Rational> ts;
  for (std::size_t a = 0; a < lines.size(); ++a) {
    for (std::size_t b = a + 1; b < lines.size(); ++b) {
      if (lines[a].second == lines[b].second) continue;
      ts.push_back((lines[a].first - lines[b].first) / (lines[a].second - lines[b].second));
    }
  }
  return ts;
}

RVec minus(const RVec& a, const RVec& b) {
  RVec w(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) w[i] = a[i] - b[i];
  return w;
}

}  // namespace

LineDistance dinf_point_line_at(const RVec& p, const RVec& base, const RVec& dir) {
  check_shapes(p, base, dir);
  const RVec w = minus(p, base);
  std::optional<LineDistance> best;
  for (const auto& t : breakpoints(w, dir)) {
    Rational v = envelope(w, dir, t);
    if (!best || v < best->value || (v == best->value && t < best->t)) best = LineDistance{std::move(v), t};
  }
  return *best;
}

Rational dinf_point_line(const RVec& p, const RVec& base, const RVec& dir) {
  return dinf_point_line_at(p, base, dir).value;
}

Rational dinf_point_line_sorted(const RVec& p, const RVec& base, const RVec& dir) {
  check_shapes(p, base, dir);
  const RVec w = minus(p, base);
  auto ts = breakpoints(w, dir);
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  std::size_t lo = 0, hi = ts.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (envelope(w, dir, ts[mid + 1]) < envelope(w, dir, ts[mid])) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  return envelope(w, dir, ts[lo]);
}

EuclidConfig lattice_to_euclid(const nikodym::LatticeConfig& cfg) {
  if (auto m = nikodym::check_lattice_invariants(cfg)) throw Error(Errc::InvariantViolation, *m);
  if (auto f = nikodym::verify_member_escape(cfg)) {
    throw Error(Errc::InvariantViolation, "member escape fails at t = " + std::to_string(f->t));
  }
  EuclidConfig e;
  e.d = cfg.d;
  e.N = cfg.N;
  e.M = cfg.M;
  e.L = cfg.L;
  auto phi = [&](const nikodym::LatticePoint& v) {
    RVec out(v.size());
    for (int i = 0; i < cfg.d; ++i) out[i] = Rational(v[i], cfg.N);
    out[cfg.d] = Rational(cfg.L * v[cfg.d], cfg.N);
    return out;
  };
  for (std::size_t i = 0; i < cfg.points.size(); ++i) {
    e.points.push_back(phi(cfg.points[i]));
    e.dirs.push_back(phi(cfg.point_slopes[i]));
    for (const auto& x : e.points.back()) {
      if (x < 0 || x > 1) throw Error(Errc::InvariantViolation, "image leaves the unit cube");
    }
  }
  const auto sep = certify_separation(e, Rational(1, 2 * cfg.N));
  if (!sep.ok) {
    throw Error(Errc::InvariantViolation, "pair (" + std::to_string(sep.i) + ", " + std::to_string(sep.j) +
                                              ") at distance " + to_string(sep.value));
  }
  return e;
}

Separation certify_separation(const EuclidConfig& cfg, const Rational& floor) {
  Separation s;
  std::optional<Rational> least;
  for (std::size_t i = 0; i < cfg.points.size(); ++i) {
    for (std::size_t j = 0; j < cfg.points.size(); ++j) {
      if (i == j) continue;
      Rational v = dinf_point_line(cfg.points[i], cfg.points[j], cfg.dirs[j]);
      if (v < floor) return Separation{false, i, j, v};
      if (!least || v < *least) least = v;
    }
  }
  if (least) s.value = *least;
  return s;
}

std::string to_string(const Rational& r) {
  return numerator(r).str() + "/" + denominator(r).str();
}

Rational rational_from_string(const std::string& s) {
  try {
    const auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(boost::multiprecision::cpp_int(s));
    const boost::multiprecision::cpp_int num(s.substr(0, slash)), den(s.substr(slash + 1));
    if (den == 0) throw Error(Errc::ParseError, "zero denominator in " + s);
    return Rational(num, den);
  } catch (const std::runtime_error& e) {
    if (dynamic_cast<const Error*>(&e)) throw;
    throw Error(Errc::ParseError, "bad rational '" + s + "'");
  }
}

nlohmann::json to_json(const EuclidConfig& cfg) {
  auto vec = [](const RVec& v) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& x : v) j.push_back(to_string(x));
    return j;
  };
  nlohmann::json pairs = nlohmann::json::array();
  for (std::size_t i = 0; i < cfg.points.size(); ++i) {
    pairs.push_back({{"point", vec(cfg.points[i])}, {"direction", vec(cfg.dirs[i])}});
  }
  return {{"d", cfg.d}, {"source", {{"N", cfg.N}, {"M", cfg.M}, {"L", cfg.L}}}, {"pairs", pairs}};
}

EuclidConfig euclid_from_json(const nlohmann::json& j) {
  try {
    EuclidConfig cfg;
    cfg.d = j.at("d").get<int>();
    cfg.N = j.at("source").at("N").get<std::int64_t>();
    cfg.M = j.at("source").at("M").get<std::int64_t>();
    cfg.L = j.at("source").at("L").get<std::int64_t>();
    auto vec = [&](const nlohmann::json& a) {
      RVec v;
      for (const auto& x : a) v.push_back(rational_from_string(x.get<std::string>()));
      if (static_cast<int>(v.size()) != cfg.d + 1) throw Error(Errc::DimensionMismatch, "vector of wrong length");
      return v;
    };
    for (const auto& p : j.at("pairs")) {
      cfg.points.push_back(vec(p.at("point")));
      cfg.dirs.push_back(vec(p.at("direction")));
    }
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ParseError, e.what());
  }
}

void write_distances_csv(std::ostream& os, const EuclidConfig& cfg) {
  os << "i,j,distance\n";
  for (std::size_t i = 0; i < cfg.points.size(); ++i) {
    for (std::size_t j = 0; j < cfg.points.size(); ++j) {
      if (i == j) continue;
      os << i << ',' << j << ',' << to_string(dinf_point_line(cfg.points[i], cfg.points[j], cfg.dirs[j])) << '\n';
    }
  }
}

}  // namespace ffgeom::euclid
