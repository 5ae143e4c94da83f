#pragma once

// Points, lines and hyperplanes over F_q^d, the projective plane PG(2,q), and the induced
// matching verifiers.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ffgeom/ff.hpp"

namespace ffgeom::geom {

using ff::Elem;
using ff::Field;
using Point = std::vector<Elem>;

struct PointHash {
  std::size_t operator()(const Point& p) const noexcept;
};

/// Row-major index of a point of F_q^d (first coordinate most significant), so index order
/// equals lex order. Requires q^d to fit in 64 bits.
std::uint64_t point_index(const Field& f, const Point& p);
Point index_point(const Field& f, int d, std::uint64_t idx);
/// q^d, or throws OrderOverflow when it does not fit in 64 bits.
std::uint64_t space_size(const Field& f, int d);

/// Scales v so that its first nonzero coordinate is 1. Throws ZeroDirection on v == 0.
Point canonical_dir(const Field& f, Point v);
/// All canonical directions of F_q^d in lex order; (q^d - 1)/(q - 1) of them.
std::vector<Point> all_directions(const Field& f, int d);

struct AffineLine {
  Point base;  // lex-least point of the line
  Point dir;   // first nonzero coordinate equals 1
  friend auto operator<=>(const AffineLine&, const AffineLine&) = default;
};

/// The line through x with direction v, in canonical form.
AffineLine make_line(const Field& f, const Point& x, const Point& v);
AffineLine canonical(const Field& f, const AffineLine& l);
bool on_line(const Field& f, const Point& p, const AffineLine& l);
/// The q points of l, ordered by parameter value.
std::vector<Point> line_points(const Field& f, const AffineLine& l);

struct Hyperplane {
  Point normal;  // first nonzero coordinate equals 1
  Elem constant;
  friend auto operator<=>(const Hyperplane&, const Hyperplane&) = default;
};

Hyperplane make_hyperplane(const Field& f, Point normal, Elem constant);
bool on_hyperplane(const Field& f, const Point& p, const Hyperplane& h);

struct Matching {
  Field field;
  int d = 0;
  std::vector<Point> points;
  std::vector<AffineLine> lines;

  std::size_t size() const { return points.size(); }
  void add(Point p, AffineLine l) {
    points.push_back(std::move(p));
    lines.push_back(std::move(l));
  }
};

/// (i, j): p_i lies on l_j with i != j, or p_i misses its own line when i == j.
struct Violation {
  std::size_t i = 0;
  std::size_t j = 0;
  friend auto operator<=>(const Violation&, const Violation&) = default;
};

enum class VerifyStrategy { Auto, Pairwise, LineScan, DirectionBucket };

/// Lex-least violation, or nullopt when the matching is induced.
std::optional<Violation> verify_induced_matching(const Matching& m,
                                                 VerifyStrategy s = VerifyStrategy::Auto);
/// Every violation in lex order.
std::vector<Violation> list_violations(const Matching& m, VerifyStrategy s = VerifyStrategy::Auto);
VerifyStrategy choose_strategy(const Matching& m);

std::optional<Violation> verify_point_hyperplane_matching(const Field& f,
                                                          const std::vector<Point>& points,
                                                          const std::vector<Hyperplane>& planes);

struct BoundReport {
  std::uint64_t size = 0;
  std::string formula;
  double bound = 0;
  double margin = 0;  // bound - size
  bool within = true;
};

/// size <= q^{3/2} + q, decided exactly.
BoundReport vinh_bound_check(const Matching& m);
BoundReport vinh_bound_check(std::uint64_t size, std::uint64_t q);
/// size <= q^{(d+1)/2} + q for point-hyperplane matchings in F_q^d, decided exactly.
BoundReport hyperplane_bound_check(std::uint64_t size, std::uint64_t q, int d);

using ProjPoint = std::array<Elem, 3>;
using ProjLine = std::array<Elem, 3>;

/// Scales so the last nonzero coordinate is 1. Throws ZeroDirection on the zero triple.
std::array<Elem, 3> proj_canonical(const Field& f, std::array<Elem, 3> v);
std::vector<ProjPoint> pg2_points(const Field& f);
/// All q^2+q+1 lines [a:b:c] (a x + b y + c z = 0), in lex order.
std::vector<ProjLine> pg2_lines(const Field& f);
bool proj_incident(const Field& f, const ProjPoint& p, const ProjLine& l);
std::uint32_t proj_index(const Field& f, const ProjPoint& p);

nlohmann::json point_to_json(const Field& f, const Point& p);
Point point_from_json(const Field& f, const nlohmann::json& j, int d);
nlohmann::json matching_to_json(const Matching& m);
Matching matching_from_json(const nlohmann::json& j);

}  // namespace ffgeom::geom
