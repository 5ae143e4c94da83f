#pragma once

// Weak and strong Nikodym sets over F_q^d, the complement dictionary with induced matchings,
// lattice escape configurations and their projection to the plane.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include <json.hpp>

#include "ffgeom/ff.hpp"
#include "ffgeom/geom.hpp"

namespace ffgeom::nikodym {

using ff::Elem;
using ff::Field;
using geom::Matching;
using geom::Point;

inline constexpr std::uint64_t kMaxVolume = std::uint64_t{1} << 28;
inline constexpr double kDefaultBudget = 1e10;

/// Membership bitset over F_q^d (row-major point index) with optional witness directions,
/// stored as the point index of the canonical direction (0 = none).
class PointSet {
 public:
  PointSet() = default;
  static PointSet empty(const Field& f, int d);
  static PointSet full(const Field& f, int d);

  const Field& field() const { return field_; }
  int d() const { return d_; }
  std::uint64_t volume() const { return volume_; }
  std::uint64_t count() const;

  bool contains(std::uint64_t idx) const { return bits_[idx >> 6] >> (idx & 63) & 1; }
  bool contains(const Point& p) const { return contains(geom::point_index(field_, p)); }
  void insert(std::uint64_t idx) { bits_[idx >> 6] |= std::uint64_t{1} << (idx & 63); }
  void erase(std::uint64_t idx) { bits_[idx >> 6] &= ~(std::uint64_t{1} << (idx & 63)); }

  bool has_witnesses() const { return !witness_.empty(); }
  std::optional<Point> witness(std::uint64_t idx) const;
  void set_witness(std::uint64_t idx, const Point& dir);
  /// Point index of an already canonical direction; 0 clears.
  std::uint64_t witness_code(std::uint64_t idx) const { return witness_.empty() ? 0 : witness_[idx]; }
  void set_witness_code(std::uint64_t idx, std::uint64_t code) {
    if (witness_.empty()) witness_.assign(volume_, 0);
    witness_[idx] = code;
  }
  void clear_witnesses() { witness_.clear(); }
  const std::vector<std::uint64_t>& raw_witnesses() const { return witness_; }
  const std::vector<std::uint64_t>& raw_bits() const { return bits_; }

  friend bool operator==(const PointSet& a, const PointSet& b) {
    return a.field_ == b.field_ && a.d_ == b.d_ && a.bits_ == b.bits_;
  }

 private:
  Field field_;
  int d_ = 0;
  std::uint64_t volume_ = 0;
  std::vector<std::uint64_t> bits_;
  std::vector<std::uint64_t> witness_;
};

/// x + l v lies in n for every l != 0.
bool punctured_line_inside(const PointSet& n, const Point& x, const Point& v);

struct NikodymCheck {
  bool ok = false;
  std::optional<Point> failure;  // lex-least point without an escaping line
  PointSet witnesses;            // witness map on the checked points (membership unused)
};

/// Stored witnesses are tried first (and re-checked); otherwise canonical directions are
/// searched in lex order.
NikodymCheck is_weak_nikodym(const PointSet& n, bool use_hints = true);
/// Throws BudgetExceeded when q^d * q * (q^d - 1)/(q - 1) exceeds budget.
NikodymCheck is_nikodym(const PointSet& n, double budget = kDefaultBudget, bool use_hints = true);

/// F_q^d minus the matching's points, each removed point carrying its line direction.
PointSet matching_complement(const Matching& m);
/// The pairs (x, l_x) for x outside n with l_x from the witness map of a successful check.
Matching extract_matching(const PointSet& n, const NikodymCheck& weak);
/// n x F_q with witnesses (v_x, 0) off n and the unit last direction on n. Throws NotWeakNikodym.
PointSet product_lift(const PointSet& n);

/// Writes magic, p, t, d and the raw bitset; witnesses go to an optional JSON sidecar.
void save_binary(const PointSet& n, const std::filesystem::path& path);
PointSet load_binary(const std::filesystem::path& path);
nlohmann::json witnesses_to_json(const PointSet& n);
void witnesses_from_json(PointSet& n, const nlohmann::json& j);
/// Field, d, the bitset as hex words and, when present, the witnesses.
nlohmann::json pointset_to_json(const PointSet& n);
PointSet pointset_from_json(const nlohmann::json& j);

// ---------------------------------------------------------------------------------------------
// Integer lattice configurations.

using LatticePoint = std::vector<std::int64_t>;

/// Points in prod_i [1, extent_i] x [1, M] of Z^{d+1} with slopes (u, 1), |u|_inf <= L. Member
/// slopes are parallel to points; ambient slopes, when present, cover the whole box through a
/// slope table.
struct LatticeConfig {
  int d = 0;
  std::int64_t N = 0, M = 0, L = 0;
  std::vector<std::int64_t> extent;
  std::vector<LatticePoint> points;  // sorted
  std::vector<LatticePoint> point_slopes;
  std::vector<LatticePoint> slope_table;
  std::vector<std::uint32_t> ambient_slope;  // per ambient row-major index, or empty

  std::uint64_t ambient_volume() const;
  std::uint64_t ambient_index(const LatticePoint& v) const;
  LatticePoint ambient_point(std::uint64_t idx) const;
  bool has_ambient_slopes() const { return !ambient_slope.empty(); }
  const LatticePoint& slope_at(const LatticePoint& v) const;
};

struct EscapeFailure {
  LatticePoint v;
  std::int64_t t = 0;  // v + t s_v hits a point; 0 for a structural failure
};

/// Structural invariants: N >= M L, extents in [1, N], points inside the box, slopes (u, 1) with
/// |u| <= L. Returns a message for the first broken one.
std::optional<std::string> check_lattice_invariants(const LatticeConfig& cfg);
/// For distinct members p, p': p' not in p + Z s_p.
std::optional<EscapeFailure> verify_member_escape(const LatticeConfig& cfg);
/// For every ambient v and t != 0: v + t s_v is not a member.
std::optional<EscapeFailure> verify_ambient_escape(const LatticeConfig& cfg);

/// P = P0 x [N] x [M] with slopes (s0_u, 0, 1) above P0 and (0, ..., 0, 1, 1) elsewhere.
LatticeConfig lift_escape_config(const std::vector<LatticePoint>& P0,
                                 const std::vector<LatticePoint>& slopes0,
                                 const std::vector<std::int64_t>& extent0, std::int64_t N,
                                 std::int64_t M, std::int64_t L);
/// P0 = [N] x Gamma_s from the Waring potential on a sub-box of [N]^I, with slopes (1, y) and
/// the slope bound L chosen to maximize |P|. Verified exhaustively before return.
LatticeConfig lattice_escape_set(int k, std::int64_t N, std::uint64_t subbox_volume = 1 << 8);
/// The planar Ruzsa set in [floor(q/3)] x [floor(sqrt(q)/2)] with slopes (y, 1) and L = M.
LatticeConfig ruzsa_lattice_config(std::uint32_t q);

/// (sum n_i (3N)^{i-1} mod q, m mod q).
std::pair<std::uint64_t, std::uint64_t> lattice_phi(const LatticeConfig& cfg, const LatticePoint& v,
                                                    std::uint64_t q);
/// Enumerates [-(N-1), 2N]^d x [-(M-1), 2M] and checks that lattice_phi is injective there.
bool phi_injective_on_box(const LatticeConfig& cfg, std::uint64_t q);
/// F_q^2 minus the image of the points, with a witness for every point. Verified with
/// is_nikodym when that fits in budget. Throws PrimeTooSmall unless q > (3N)^d.
PointSet project_to_plane(const LatticeConfig& cfg, std::uint32_t q, double budget = kDefaultBudget);

nlohmann::json lattice_to_json(const LatticeConfig& cfg);
LatticeConfig lattice_from_json(const nlohmann::json& j);

}  // namespace ffgeom::nikodym
