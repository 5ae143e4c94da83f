#pragma once

// Exact point-line configurations in the unit cube from lattice escape configurations, with the
// sup-norm separation certificate.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <json.hpp>

#include "ffgeom/nikodym.hpp"

namespace ffgeom::euclid {

using Rational = boost::multiprecision::cpp_rational;
using RVec = std::vector<Rational>;

struct EuclidConfig {
  int d = 0;  // vectors have d + 1 coordinates
  std::vector<RVec> points;
  std::vector<RVec> dirs;
  std::int64_t N = 0, M = 0, L = 0;
};

struct LineDistance {
  Rational value;
  Rational t;  // a minimizing line parameter
};

/// min_t max_i |p_i - base_i - t dir_i|, evaluated at every crossing of the envelope lines.
/// Throws ZeroDirection.
LineDistance dinf_point_line_at(const RVec& p, const RVec& base, const RVec& dir);
Rational dinf_point_line(const RVec& p, const RVec& base, const RVec& dir);
/// Same quantity by binary search over the sorted breakpoints of the convex envelope.
Rational dinf_point_line_sorted(const RVec& p, const RVec& base, const RVec& dir);

/// phi(n, m) = (n / N, L m / N) applied to points and slopes. Throws InvariantViolation when the
/// config is malformed, member escape fails or the certificate at 1/(2N) does not hold.
EuclidConfig lattice_to_euclid(const nikodym::LatticeConfig& cfg);

struct Separation {
  bool ok = true;
  std::size_t i = 0, j = 0;  // first failing pair (point i, line j)
  Rational value;            // its distance, or the overall minimum when ok
};
Separation certify_separation(const EuclidConfig& cfg, const Rational& floor);

std::string to_string(const Rational& r);  // always "num/den"
Rational rational_from_string(const std::string& s);
nlohmann::json to_json(const EuclidConfig& cfg);
EuclidConfig euclid_from_json(const nlohmann::json& j);
/// Rows i,j,distance over all ordered pairs i != j.
void write_distances_csv(std::ostream& os, const EuclidConfig& cfg);

}  // namespace ffgeom::euclid
