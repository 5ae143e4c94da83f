#pragma once

// Line covers of PG(2,q) built from planar Nikodym sets, their minimal subfamilies and the dual
// blocking sets.

#include <optional>
#include <vector>

#include <json.hpp>

#include "ffgeom/ff.hpp"
#include "ffgeom/geom.hpp"
#include "ffgeom/nikodym.hpp"

namespace ffgeom::blocking {

using ff::Elem;
using ff::Field;
using geom::ProjLine;
using geom::ProjPoint;

struct LineCover {
  Field field;
  std::vector<ProjLine> lines;  // canonical, repeats allowed
};

/// Completion of the affine line through x with direction v.
ProjLine completion(const Field& f, const geom::Point& x, const geom::Point& v);
inline ProjLine line_at_infinity(const Field& f) { return {f.zero(), f.zero(), f.one()}; }
/// The q + 1 points of a line, canonical.
std::vector<ProjPoint> points_on(const Field& f, const ProjLine& l);

/// {completion of (v, witness(v)) : v in F_q^2} together with the line at infinity, lex order,
/// repeats removed. Throws MissingWitness if some affine point has no witness.
LineCover nikodym_to_cover(const nikodym::PointSet& n);

/// Number of lines through each point, by proj_index.
std::vector<std::uint32_t> coverage(const LineCover& c);
std::optional<ProjPoint> uncovered_point(const LineCover& c);

/// Walks the lines in lex order and drops each one whose points all stay covered. Throws NotACover.
LineCover minimalize_cover(const LineCover& c);

struct CoverCheck {
  bool ok = false;
  std::optional<ProjPoint> uncovered;
  std::optional<ProjLine> redundant;  // first line without a private point
};
CoverCheck verify_minimal_cover(const LineCover& c);

/// Line [a:b:c] becomes point [a:b:c].
std::vector<ProjPoint> dualize(const LineCover& c);
/// First line of PG(2,q) missing the set, if any.
std::optional<ProjLine> unblocked_line(const Field& f, const std::vector<ProjPoint>& b);
/// Blocks every line and every point has a tangent line meeting the set only there.
bool is_minimal_blocking_set(const Field& f, const std::vector<ProjPoint>& b);

nlohmann::json cover_to_json(const LineCover& c);
LineCover cover_from_json(const nlohmann::json& j);
nlohmann::json blocking_set_to_json(const Field& f, const std::vector<ProjPoint>& b);

}  // namespace ffgeom::blocking
