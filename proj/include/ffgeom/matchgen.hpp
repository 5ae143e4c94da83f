#pragma once

// Induced point-line (and point-hyperplane) matching constructions. Every report leaving this
// module has passed the exhaustive verifier in geom.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <json.hpp>

#include "ffgeom/diffsets.hpp"
#include "ffgeom/ff.hpp"
#include "ffgeom/geom.hpp"

namespace ffgeom::matchgen {

using ff::Elem;
using ff::Field;
using geom::Matching;
using geom::Point;
using BigRational = boost::multiprecision::cpp_rational;

struct ConstructionReport {
  std::string method;  // registry id
  std::string tag;     // human-readable construction name
  Matching matching;   // for hyperplane reports only matching.points is populated
  std::vector<geom::Hyperplane> hyperplanes;
  std::uint64_t size = 0;
  std::string floor_formula;
  std::optional<BigRational> floor;  // exact value of floor_formula when it has one
  bool verified = false;
  nlohmann::json details = nlohmann::json::object();

  bool is_hyperplane() const { return !hyperplanes.empty(); }
};

/// Tangent lines of a^{p+1} + b^{p+1} = 1 over F_{p^2}; p^3 - p pairs.
ConstructionReport hermitian_unital(std::uint32_t p);

/// Points x + y^2 in I with directions (-2y, 1). Requires char = 1 (mod 4) and I independent in
/// the Paley graph.
ConstructionReport paley_lift(const Field& f, const std::vector<Elem>& I);
/// Maximum independent set of the Paley graph (exact for q <= 64, greedy beyond), lex-least.
std::vector<Elem> paley_independent_set(const Field& f);

/// Points (x, y) in [N] x [M] with 2x - y^2 in A, N = floor(q/3), M = floor(sqrt(q)/2), with
/// direction (y, 1).
ConstructionReport ruzsa_lift_2d(std::uint32_t q, const diffsets::PowerFreeSet& A);

/// Tuples (x_2, ..., x_d) in (F^x)^{d-1} for which the direction recursion has nonzero r-th
/// power right-hand sides, with the resulting direction (v_1, ..., v_{d-1}, 1).
struct PowerTuple {
  std::vector<Elem> x;  // x_2 .. x_d
  Point v;              // v_1 .. v_d
};
std::vector<PowerTuple> admissible_tuples(const Field& f, int d);
/// Phi(x) = x_1 + x_2^2 + ... + x_d^d.
Elem phi_power(const Field& f, const Point& x);
/// Phi(p + l v) == Phi(p) + l^d for every l in F.
bool power_identity_holds(const Field& f, const Point& p, const Point& v);
ConstructionReport dth_power_lift(const Field& f, int d, const std::vector<Elem>& I);

/// Coordinates 1..size of a box inside [N]^I, inclusive bounds.
struct SubBox {
  std::vector<std::int64_t> lo;
  std::vector<std::int64_t> hi;
  std::uint64_t volume() const;
};
/// Coordinate 0 spans [1, N]; later coordinates widen to [1, 2] in order while the volume stays
/// within max_volume, the rest are pinned to 1.
SubBox default_subbox(std::size_t dim, std::int64_t N, std::uint64_t max_volume = 1 << 14);

struct ShiftChoice {
  std::int64_t shift = 0;
  std::uint64_t count = 0;
};
/// Shift s maximizing #{(v, a) : v - a == s} over values v and a in A; smallest s on ties.
ShiftChoice best_shift(const std::vector<std::int64_t>& values, const std::vector<std::int64_t>& A);

ConstructionReport waring_lift(std::uint32_t q, int k, std::optional<SubBox> box = std::nullopt);

/// Points ((g(a) + f(a)^2)/2, f(a)) over F_{p^t}, a the field generator, f with s = (t+1)/2
/// coefficients in [-M, M], g with even coefficients in A and free odd coefficients.
ConstructionReport prime_power_2d(std::uint32_t p, int t, const diffsets::PowerFreeSet& A);

/// Lifts a matching over F_p^{d0} to F_{p^s}^{d0 s}, coordinate block i reading coefficient i.
ConstructionReport field_product_lift(const Matching& base, int s);

/// (A_1, ..., A_k) with A_i = prod_{j != i} t_j / (t_j - t_i), t_k = 1 appended to t.
std::vector<Elem> norm_weights(const Field& f, const std::vector<Elem>& t);
/// Tuples of k-1 distinct elements of F_{q0} outside {0, 1}, lex order.
std::vector<std::vector<Elem>> norm_tuples(std::uint32_t q0, int k);
ConstructionReport norm_hypersurface(std::uint32_t q0, int k, int d);

/// Each pair (p, l) becomes (p, u), (l x {u}) for all u in F_q^extra. With verify set the
/// result passes the induced verifier or VerificationFailed is thrown.
Matching cartesian_lift(const Matching& base, int extra, bool verify = true);

/// Points (y^2 + a z^2, y, z) with their tangent planes; q^2 pairs in F_q^3.
ConstructionReport paraboloid_matching(const Field& f);

struct MethodParams {
  std::optional<std::uint64_t> p, q, t, d, k, s;
};

struct MethodInfo {
  std::string id;
  std::string tag;
  std::string usage;
};

const std::vector<MethodInfo>& methods();
const MethodInfo& method_info(const std::string& id);
/// Runs a registered construction with default auxiliary choices (independent sets, A, ...).
ConstructionReport construct(const std::string& id, const MethodParams& params);

nlohmann::json report_to_json(const ConstructionReport& r);
std::string rational_string(const BigRational& r);

}  // namespace ffgeom::matchgen
