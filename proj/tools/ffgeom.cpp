// ffgeom: construct, verify and tabulate finite-geometry configurations.
//
// Exit codes: 0 ok, 1 verification failure, 2 parameter error, 3 budget exceeded.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ffgeom/blocking.hpp"
#include "ffgeom/error.hpp"
#include "ffgeom/euclid.hpp"
#include "ffgeom/geom.hpp"
#include "ffgeom/matchgen.hpp"
#include "ffgeom/nikodym.hpp"

using namespace ffgeom;
using ff::Field;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kFailed = 1, kBadParams = 2, kOverBudget = 3 };

struct RunConfig {
  std::string method;
  std::string of;  // source method for complement / lift
  std::string in;
  std::string out;
  std::string kind;
  std::string format = "json";
  std::optional<std::uint64_t> p, q, t, d, k, s, n;
  double budget = nikodym::kDefaultBudget;
  bool timing = false;
};

matchgen::MethodParams method_params(const RunConfig& c) {
  return {c.p, c.q, c.t, c.d, c.k, c.s};
}

json params_json(const RunConfig& c) {
  json j = json::object();
  auto put = [&](const char* name, const std::optional<std::uint64_t>& v) {
    if (v) j[name] = *v;
  };
  put("p", c.p);
  put("q", c.q);
  put("t", c.t);
  put("d", c.d);
  put("k", c.k);
  put("s", c.s);
  put("n", c.n);
  if (!c.of.empty()) j["of"] = c.of;
  if (!c.in.empty()) j["in"] = c.in;
  return j;
}

void write_atomically(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary);
    if (!os) throw Error(Errc::ParseError, "cannot write " + path);
    os << text;
  }
  std::filesystem::rename(tmp, path);
}

json read_json(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(Errc::ParseError, "cannot read " + path);
  try {
    return json::parse(is);
  } catch (const json::exception& e) {
    throw Error(Errc::ParseError, e.what());
  }
}

std::string decimal(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

// ---------------------------------------------------------------------------------------------
// Bounds

struct Bound {
  std::string formula;
  std::string value;  // exact when integral, else six decimals
  double approx = 0;
};

std::string integral_or_decimal(double x) {
  const double r = std::round(x);
  if (std::abs(x - r) < 1e-9 && r < 9e15) return std::to_string(static_cast<std::uint64_t>(r));
  return decimal(x);
}

Bound bound_for(const matchgen::ConstructionReport& r) {
  const auto q = static_cast<std::uint64_t>(r.matching.field.order());
  const int d = r.matching.d;
  if (r.is_hyperplane()) {
    const auto b = geom::hyperplane_bound_check(r.size, q, d);
    return {b.formula, integral_or_decimal(b.bound), b.bound};
  }
  if (r.method == "normhyp") {
    const auto q0 = r.details.at("q0").get<std::uint64_t>();
    const auto k = r.details.at("k").get<std::uint64_t>();
    boost::multiprecision::cpp_int v = boost::multiprecision::pow(boost::multiprecision::cpp_int(q0), static_cast<unsigned>(d * k - 1));
    return {"q^{d-1/k}", v.str(), v.convert_to<double>()};
  }
  if (d == 2) {
    const auto b = geom::vinh_bound_check(r.size, q);
    return {b.formula, integral_or_decimal(b.bound), b.bound};
  }
  const double v = std::pow(static_cast<double>(q), d);
  return {"q^d", integral_or_decimal(v), v};
}

// ---------------------------------------------------------------------------------------------
// Artifacts

json hyperplanes_json(const matchgen::ConstructionReport& r) {
  const Field& f = r.matching.field;
  json pairs = json::array();
  for (std::size_t i = 0; i < r.hyperplanes.size(); ++i) {
    pairs.push_back({{"point", geom::point_to_json(f, r.matching.points[i])},
                     {"normal", geom::point_to_json(f, r.hyperplanes[i].normal)},
                     {"constant", ff::elem_to_json(f, r.hyperplanes[i].constant)}});
  }
  return {{"field", ff::field_to_json(f)}, {"d", r.matching.d}, {"pairs", pairs}};
}

std::string matching_csv(const matchgen::ConstructionReport& r) {
  std::ostringstream os;
  auto vec = [&](const geom::Point& p) {
    std::string s;
    for (std::size_t i = 0; i < p.size(); ++i) s += (i ? " " : "") + std::to_string(p[i].v);
    return s;
  };
  if (r.is_hyperplane()) {
    os << "point,normal,constant\n";
    for (std::size_t i = 0; i < r.hyperplanes.size(); ++i)
      os << vec(r.matching.points[i]) << ',' << vec(r.hyperplanes[i].normal) << ',' << r.hyperplanes[i].constant.v << '\n';
  } else {
    os << "point,base,dir\n";
    for (std::size_t i = 0; i < r.matching.size(); ++i)
      os << vec(r.matching.points[i]) << ',' << vec(r.matching.lines[i].base) << ',' << vec(r.matching.lines[i].dir) << '\n';
  }
  return os.str();
}

struct Artifact {
  json body;          // serialized object with a "kind" field
  std::string csv;    // optional CSV rendering
  json report;
};

nikodym::LatticeConfig hand_lattice() {
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

nikodym::LatticeConfig lattice_input(const RunConfig& c) {
  if (c.in.empty()) return hand_lattice();
  const json j = read_json(c.in);
  return nikodym::lattice_from_json(j.contains("lattice") ? j.at("lattice") : j);
}

std::uint64_t need(const std::optional<std::uint64_t>& v, const char* name) {
  if (!v) throw Error(Errc::ParameterViolation, std::string("missing --") + name);
  return *v;
}

json pointset_report(const std::string& method, const nikodym::PointSet& n, const std::string& checked) {
  return {{"size", n.count()},
          {"field", ff::field_to_json(n.field())},
          {"d", n.d()},
          {"method", method},
          {"verified", checked}};
}

Artifact build(const RunConfig& c) {
  Artifact a;
  const std::string& m = c.method;
  for (const auto& info : matchgen::methods()) {
    if (info.id != m) continue;
    const auto r = matchgen::construct(m, method_params(c));
    const Bound b = bound_for(r);
    a.report = matchgen::report_to_json(r);
    a.report["bound"] = {{"formula", b.formula}, {"value", b.value}};
    if (r.is_hyperplane()) {
      a.body = hyperplanes_json(r);
      a.body["kind"] = "hyperplane-matching";
    } else {
      a.body = geom::matching_to_json(r.matching);
      a.body["kind"] = "matching";
    }
    a.csv = matching_csv(r);
    return a;
  }
  if (m == "units") {
    const Field f = ff::make_field(need(c.q, "q"), 1);
    auto n = nikodym::PointSet::empty(f, 2);
    for (std::uint32_t x = 1; x < f.order(); ++x)
      for (std::uint32_t y = 1; y < f.order(); ++y) n.insert(std::uint64_t{x} * f.order() + y);
    a.body = nikodym::pointset_to_json(n);
    a.report = pointset_report(m, n, "none");
  } else if (m == "complement" || m == "lift") {
    if (c.of.empty()) throw Error(Errc::ParameterViolation, "missing --of <method>");
    const auto r = matchgen::construct(c.of, method_params(c));
    if (r.is_hyperplane()) throw Error(Errc::ParameterViolation, "complements need a point-line matching");
    auto n = nikodym::matching_complement(r.matching);
    const auto weak = nikodym::is_weak_nikodym(n);
    if (!weak.ok) throw Error(Errc::VerificationFailed, "complement is not weak Nikodym");
    std::string checked = "weak-nikodym";
    if (m == "lift") {
      n = nikodym::product_lift(n);
      if (!nikodym::is_nikodym(n, c.budget).ok) throw Error(Errc::VerificationFailed, "lift is not Nikodym");
      checked = "nikodym";
    }
    a.body = nikodym::pointset_to_json(n);
    a.report = pointset_report(m, n, checked);
    a.report["source"] = matchgen::report_to_json(r);
  } else if (m == "lattice") {
    const auto cfg = nikodym::lattice_escape_set(static_cast<int>(c.k.value_or(2)),
                                                 static_cast<std::int64_t>(c.n.value_or(16)));
    a.body = nikodym::lattice_to_json(cfg);
    a.report = {{"method", m}, {"size", cfg.points.size()}, {"d", cfg.d}, {"N", cfg.N}, {"M", cfg.M}, {"L", cfg.L},
                {"verified", "ambient-escape"}};
  } else if (m == "lattice-ruzsa" || m == "lattice-hand") {
    const auto cfg = m == "lattice-hand" ? hand_lattice() : nikodym::ruzsa_lattice_config(
                                                                static_cast<std::uint32_t>(need(c.q, "q")));
    if (auto f = nikodym::verify_member_escape(cfg)) throw Error(Errc::VerificationFailed, "member escape fails");
    a.body = nikodym::lattice_to_json(cfg);
    a.report = {{"method", m}, {"size", cfg.points.size()}, {"d", cfg.d}, {"N", cfg.N}, {"M", cfg.M}, {"L", cfg.L},
                {"verified", "member-escape"}};
  } else if (m == "projection" || m == "cover") {
    const auto cfg = lattice_input(c);
    const auto q = static_cast<std::uint32_t>(c.q.value_or(13));
    const auto n = nikodym::project_to_plane(cfg, q, c.budget);
    const double cost = std::pow(static_cast<double>(q), 4);
    if (cost > c.budget) throw Error(Errc::BudgetExceeded, "projected set cannot be verified within budget");
    if (m == "projection") {
      a.body = nikodym::pointset_to_json(n);
      a.report = pointset_report(m, n, "nikodym");
      a.report["bound"] = {{"formula", "q^2-|P|"}, {"value", std::to_string(std::uint64_t{q} * q - cfg.points.size())}};
    } else {
      const auto cover = blocking::minimalize_cover(blocking::nikodym_to_cover(n));
      if (!blocking::verify_minimal_cover(cover).ok) throw Error(Errc::VerificationFailed, "cover is not minimal");
      a.body = blocking::cover_to_json(cover);
      const std::uint64_t floor = std::uint64_t{q} * q - n.count();
      a.report = {{"method", m}, {"size", cover.lines.size()}, {"field", ff::field_to_json(cover.field)},
                  {"bound", {{"formula", "q^2-|N|"}, {"value", std::to_string(floor)}}},
                  {"verified", "minimal-cover"}};
      if (cover.lines.size() < floor) throw Error(Errc::VerificationFailed, "cover smaller than q^2-|N|");
    }
  } else if (m == "euclid") {
    const auto cfg = c.in.empty() ? nikodym::ruzsa_lattice_config(static_cast<std::uint32_t>(c.q.value_or(101)))
                                  : lattice_input(c);
    const auto e = euclid::lattice_to_euclid(cfg);
    const auto sep = euclid::certify_separation(e, euclid::Rational(1, 2 * cfg.N));
    a.body = euclid::to_json(e);
    std::ostringstream os;
    euclid::write_distances_csv(os, e);
    a.csv = os.str();
    a.report = {{"method", m}, {"size", e.points.size()}, {"d", e.d},
                {"bound", {{"formula", "1/(2N)"}, {"value", euclid::to_string(euclid::Rational(1, 2 * cfg.N))}}},
                {"min_distance", e.points.size() > 1 ? json(euclid::to_string(sep.value)) : json(nullptr)},
                {"verified", "separation"}};
  } else {
    throw Error(Errc::ParameterViolation, "unknown method '" + m + "'");
  }
  a.body["kind"] = m == "cover" ? "cover" : m == "euclid" ? "euclid" : m.rfind("lattice", 0) == 0 ? "lattice" : "pointset";
  return a;
}

int cmd_construct(const RunConfig& c) {
  const auto start = std::chrono::steady_clock::now();
  Artifact a = build(c);
  json report = {{"method", c.method}, {"params", params_json(c)}};
  for (auto& [key, value] : a.report.items())
    if (key != "method") report[key] = value;
  if (c.timing) {
    report["wall_time"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  if (!c.out.empty()) {
    if (c.format == "csv") {
      if (a.csv.empty()) throw Error(Errc::ParameterViolation, "no CSV form for " + c.method);
      write_atomically(c.out, a.csv);
    } else {
      write_atomically(c.out, a.body.dump(1) + "\n");
    }
    report["artifact"] = c.out;
  }
  std::cout << report.dump(2) << "\n";
  return kOk;
}

// ---------------------------------------------------------------------------------------------
// Verification

int cmd_verify(const RunConfig& c) {
  const json j = read_json(c.in);
  const std::string artifact = j.value("kind", "");
  std::string kind = c.kind;
  if (kind.empty()) {
    if (artifact == "matching" || artifact == "hyperplane-matching") kind = "matching";
    else if (artifact == "pointset") kind = "nikodym";
    else if (artifact == "cover") kind = "cover";
    else if (artifact == "euclid") kind = "separation";
    else if (artifact == "lattice") kind = "escape";
    else throw Error(Errc::ParseError, "unknown artifact kind '" + artifact + "'");
  }
  json report = {{"kind", kind}, {"path", c.in}};
  bool ok = false;
  if (kind == "matching" && artifact == "hyperplane-matching") {
    const Field f = ff::field_from_json(j.at("field"));
    const int d = j.at("d").get<int>();
    std::vector<geom::Point> pts;
    std::vector<geom::Hyperplane> planes;
    for (const auto& pr : j.at("pairs")) {
      pts.push_back(geom::point_from_json(f, pr.at("point"), d));
      planes.push_back(geom::make_hyperplane(f, geom::point_from_json(f, pr.at("normal"), d),
                                             ff::elem_from_json(f, pr.at("constant"))));
    }
    const auto v = geom::verify_point_hyperplane_matching(f, pts, planes);
    ok = !v;
    report["size"] = pts.size();
    if (v) report["violation"] = {{"i", v->i}, {"j", v->j}};
  } else if (kind == "matching") {
    const auto m = geom::matching_from_json(j);
    const auto v = geom::verify_induced_matching(m);
    ok = !v;
    report["size"] = m.size();
    if (v) report["violation"] = {{"i", v->i}, {"j", v->j}};
  } else if (kind == "weak-nikodym" || kind == "nikodym") {
    const auto n = nikodym::pointset_from_json(j);
    const auto r = kind == "nikodym" ? nikodym::is_nikodym(n, c.budget) : nikodym::is_weak_nikodym(n);
    ok = r.ok;
    report["size"] = n.count();
    if (r.failure) report["failure"] = geom::point_to_json(n.field(), *r.failure);
  } else if (kind == "cover") {
    const auto cover = blocking::cover_from_json(j);
    const auto r = blocking::verify_minimal_cover(cover);
    ok = r.ok;
    report["size"] = cover.lines.size();
    auto triple = [&](const geom::ProjPoint& p) { return json{p[0].v, p[1].v, p[2].v}; };
    if (r.uncovered) report["uncovered"] = triple(*r.uncovered);
    if (r.redundant) report["redundant"] = triple(*r.redundant);
  } else if (kind == "separation") {
    const auto e = euclid::euclid_from_json(j);
    const euclid::Rational floor(1, 2 * e.N);
    const auto r = euclid::certify_separation(e, floor);
    ok = r.ok;
    report["size"] = e.points.size();
    report["floor"] = euclid::to_string(floor);
    if (!r.ok) report["violation"] = {{"i", r.i}, {"j", r.j}, {"distance", euclid::to_string(r.value)}};
  } else if (kind == "escape") {
    const auto cfg = nikodym::lattice_from_json(j);
    const auto f = cfg.has_ambient_slopes() ? nikodym::verify_ambient_escape(cfg) : nikodym::verify_member_escape(cfg);
    ok = !f;
    report["size"] = cfg.points.size();
    if (f) report["violation"] = {{"point", f->v}, {"t", f->t}};
  } else {
    throw Error(Errc::ParameterViolation, "unknown verification kind '" + kind + "'");
  }
  report["ok"] = ok;
  std::cout << report.dump(2) << "\n";
  return ok ? kOk : kFailed;
}

// ---------------------------------------------------------------------------------------------
// Tables

std::vector<std::optional<std::uint64_t>> parse_range(const std::optional<std::string>& text) {
  if (!text) return {std::nullopt};
  std::vector<std::optional<std::uint64_t>> out;
  std::stringstream ss(*text);
  std::string item;
  try {
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      const auto dots = item.find("..");
      if (dots == std::string::npos) {
        out.emplace_back(std::stoull(item));
      } else {
        const auto lo = std::stoull(item.substr(0, dots)), hi = std::stoull(item.substr(dots + 2));
        for (auto v = lo; v <= hi; ++v) out.emplace_back(v);
      }
    }
  } catch (const std::logic_error&) {
    throw Error(Errc::ParameterViolation, "bad range '" + *text + "'");
  }
  return out;
}

struct TableRanges {
  std::optional<std::string> p, q, t, d, k, s;
};

int cmd_table(const RunConfig& c, const TableRanges& r) {
  matchgen::method_info(c.method);
  std::ostringstream os;
  os << "method,p,q,t,d,k,s,size,floor_formula,floor,bound_formula,bound,ratio,verified\n";
  auto opt = [](const std::optional<std::uint64_t>& v) { return v ? std::to_string(*v) : std::string(); };
  for (const auto& p : parse_range(r.p))
    for (const auto& q : parse_range(r.q))
      for (const auto& t : parse_range(r.t))
        for (const auto& d : parse_range(r.d))
          for (const auto& k : parse_range(r.k))
            for (const auto& s : parse_range(r.s)) {
              const auto rep = matchgen::construct(c.method, {p, q, t, d, k, s});
              const Bound b = bound_for(rep);
              os << c.method << ',' << opt(p) << ',' << opt(q) << ',' << opt(t) << ',' << opt(d) << ',' << opt(k)
                 << ',' << opt(s) << ',' << rep.size << ",\"" << rep.floor_formula << "\","
                 << (rep.floor ? matchgen::rational_string(*rep.floor) : "") << ",\"" << b.formula << "\","
                 << b.value << ',' << decimal(static_cast<double>(rep.size) / b.approx) << ','
                 << (rep.verified ? "true" : "false") << '\n';
            }
  if (c.out.empty()) {
    std::cout << os.str();
  } else {
    write_atomically(c.out, os.str());
  }
  return kOk;
}

// ---------------------------------------------------------------------------------------------

int cmd_export_dual(const RunConfig& c) {
  const auto cover = blocking::cover_from_json(read_json(c.in));
  const auto check = blocking::verify_minimal_cover(cover);
  if (!check.ok) {
    std::cout << json{{"ok", false}, {"reason", check.uncovered ? "not a cover" : "not minimal"}}.dump(2) << "\n";
    return kFailed;
  }
  const auto b = blocking::dualize(cover);
  const double q = cover.field.order();
  const double cost = static_cast<double>(b.size()) * b.size() * (q * q + q + 1);
  if (cost > c.budget) throw Error(Errc::BudgetExceeded, "dual check exceeds budget");
  if (!blocking::is_minimal_blocking_set(cover.field, b)) throw Error(Errc::VerificationFailed, "dual is not minimal");
  json out = blocking::blocking_set_to_json(cover.field, b);
  out["kind"] = "blocking-set";
  if (c.out.empty()) {
    std::cout << out.dump(1) << "\n";
  } else {
    write_atomically(c.out, out.dump(1) + "\n");
    std::cout << json{{"ok", true}, {"size", b.size()}, {"artifact", c.out}}.dump(2) << "\n";
  }
  return kOk;
}

int exit_code(Errc e) {
  switch (e) {
    case Errc::VerificationFailed:
      return kFailed;
    case Errc::BudgetExceeded:
    case Errc::BudgetInfeasible:
      return kOverBudget;
    default:
      return kBadParams;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-field incidence constructions and verifiers"};
  app.require_subcommand(1);
  RunConfig cfg;
  TableRanges ranges;

  auto numeric = [&](CLI::App* sub) {
    sub->add_option("--p", cfg.p, "characteristic or base prime");
    sub->add_option("--q", cfg.q, "field order");
    sub->add_option("--t", cfg.t, "extension degree");
    sub->add_option("--d", cfg.d, "dimension");
    sub->add_option("--k", cfg.k, "power or extension degree");
    sub->add_option("--s", cfg.s, "field product degree");
    sub->add_option("--n", cfg.n, "lattice side N");
  };
  auto common = [&](CLI::App* sub) {
    sub->add_option("--budget", cfg.budget, "verification budget in simple operations");
    sub->add_option("--out", cfg.out, "output path");
    sub->add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  };

  auto* construct = app.add_subcommand("construct", "build and verify a configuration");
  construct->add_option("method", cfg.method, "method id")->required();
  construct->add_option("--of", cfg.of, "source matching for complement and lift");
  construct->add_option("--in", cfg.in, "input lattice configuration");
  construct->add_flag("--timing", cfg.timing, "add wall_time to the report");
  numeric(construct);
  common(construct);

  auto* verify = app.add_subcommand("verify", "run the verifier for an artifact");
  verify->add_option("path", cfg.in, "artifact")->required();
  verify->add_option("--kind", cfg.kind, "matching, weak-nikodym, nikodym, cover, separation, escape");
  common(verify);

  auto* table = app.add_subcommand("table", "CSV of sizes against bounds");
  table->add_option("method", cfg.method, "method id")->required();
  table->add_option("--p", ranges.p, "list such as 3,5,7 or 3..7");
  table->add_option("--q", ranges.q);
  table->add_option("--t", ranges.t);
  table->add_option("--d", ranges.d);
  table->add_option("--k", ranges.k);
  table->add_option("--s", ranges.s);
  common(table);

  auto* dual = app.add_subcommand("export-dual", "blocking set dual to a minimal cover");
  dual->add_option("path", cfg.in, "cover artifact")->required();
  common(dual);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kBadParams;
  }

  try {
    if (*construct) return cmd_construct(cfg);
    if (*verify) return cmd_verify(cfg);
    if (*table) return cmd_table(cfg, ranges);
    return cmd_export_dual(cfg);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kBadParams;
  }
}
