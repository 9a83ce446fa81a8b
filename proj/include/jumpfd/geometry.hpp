#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "jumpfd/grid.hpp"

namespace jumpfd {

/// Scalar level-set function whose zero set is the interface.
///
/// Omega+ is {phi > 0} and Omega- is {phi < 0}. The gradient is optional; when it is absent,
/// normals are taken from central differences of phi.
struct LevelSet {
  std::function<double(const Point&)> phi;
  std::function<Point(const Point&)> gradient;

  double operator()(const Point& x) const { return phi(x); }
};

enum class Side : std::int8_t { minus = -1, plus = 1 };

inline Side opposite(Side s) { return s == Side::minus ? Side::plus : Side::minus; }

/// Smallest admissible crossing fraction; roots closer than this to a node are snapped.
inline constexpr double kThetaMin = 1e-6;

/// Per-node side labels plus the standard/nonstandard split.
struct PointLabels {
  std::vector<std::int8_t> sign;  // +1 or -1 per node
  std::vector<std::uint8_t> nonstandard;
  std::size_t num_nonstandard = 0;

  Side side(std::size_t node) const { return sign[node] > 0 ? Side::plus : Side::minus; }
};

/// Labels every node by sign(phi + 1e-12 h), so a node with phi == 0 counts as Omega+.
/// A node is nonstandard when one of its grid edges changes sign.
PointLabels classify_points(const Grid& grid, const LevelSet& ls);

/// Interface crossing on the grid edge (lo, lo + e_axis).
struct Crossing {
  std::size_t lo = 0;
  std::size_t hi = 0;
  int axis = 0;
  /// Fraction (x_hi - x_I) / h, clamped to [kThetaMin, 1 - kThetaMin].
  double theta = 0.5;
  /// Root of phi on the edge (not moved by the clamp).
  Point point{};
  Point mid_lo{};  // (x_lo + x_I) / 2
  Point mid_hi{};  // (x_I + x_hi) / 2
  /// Unit normal at `point`, pointing from Omega- into Omega+.
  Point normal{};
  Side lo_side = Side::minus;

  Side hi_side() const { return opposite(lo_side); }
};

/// Locates the interface on the edge between adjacent nodes `a` and `b` by bisection.
///
/// Throws UsageError for non-adjacent nodes or an edge without a sign change, and
/// UnderResolvedError if phi changes sign more than once along the edge.
Crossing find_crossing(const Grid& grid, const LevelSet& ls, std::size_t a, std::size_t b);

/// Unit normal grad(phi)/|grad(phi)|; central differences with step h/2 when no gradient is set.
Point unit_normal(const LevelSet& ls, const Point& x, double h, int dim);

/// Derivative of `g` along the interface in the tangent direction `tau` at the interface point `x`.
/// Only the values of `g` on the interface are used: both sample points are projected back onto it.
double derivative_along_interface(const LevelSet& ls, const std::function<double(const Point&)>& g, const Point& x,
                                  const Point& tau, double h, int dim);

/// Decomposition of a coordinate unit vector in the local interface frame:
/// e_axis = c[0] n + c[1] tau[0] + c[2] tau[1].
///
/// In 2D tau[0] = (-n_y, n_x). In 3D tau[k] is the tangent of the interface's intersection with a
/// coordinate plane through the crossing: tau[0] lies in the plane normal to axis (axis+2)%3 and
/// tau[1] in the plane normal to axis (axis+1)%3.
struct TangentBasis {
  Point normal{};
  int num_tangents = 0;
  std::array<Point, 2> tau{};
  std::array<int, 2> slice_normal{-1, -1};
  std::array<bool, 2> active{false, false};
  std::array<double, 3> c{0.0, 0.0, 0.0};
};

/// Threshold on |e_slice x n| below which a 3D slice curve is treated as degenerate.
inline constexpr double kDegenerateSlice = 1e-8;

TangentBasis tangent_basis(int dim, const Point& normal, int axis);
inline TangentBasis tangent_basis(int dim, const Crossing& crossing) {
  return tangent_basis(dim, crossing.normal, crossing.axis);
}

/// Recomputes c for `basis` using only its active tangents.
void refit_coefficients(TangentBasis& basis, int axis);

/// Interface points used to differentiate along the interface at a center point.
struct TangentStencil {
  std::vector<int> ids;         // crossing ids in chain order, center included
  std::vector<double> s;        // chord-length parameter, center at 0
  std::vector<double> weights;  // d/dtau at the center = sum weights[k] * value(ids[k])
  bool one_sided = false;
  int skipped = 0;  // neighbours passed over for being closer than delta_min
};

/// Lookup from grid edge to crossing id.
class CrossingIndex {
 public:
  CrossingIndex() = default;
  CrossingIndex(const Grid& grid, std::span<const Crossing> crossings);

  /// Crossing on edge (node, node + e_axis), or -1.
  int on_edge(std::size_t node, int axis) const { return ids_[axis][node]; }

 private:
  std::array<std::vector<std::int32_t>, 3> ids_;
};

/// Builds a stencil from chain neighbours listed in walking order away from the center.
///
/// Takes up to two points on each side, skipping any closer than `delta_min` to the
/// previously accepted point, and differentiates the least-squares quadratic through them.
/// A chain end with no neighbour on one side falls back to two points on the other.
std::optional<TangentStencil> select_stencil(int center, std::span<const int> backward, std::span<const int> forward,
                                            std::span<const Crossing> crossings, double delta_min,
                                            const Point& tau);

/// Weights for the slope at s = 0 of the least-squares quadratic through the nodes `s`
/// (at least three distinct values). Exact for quadratics.
std::vector<double> fit_derivative_weights(std::span<const double> s);

struct GeometryDiagnostics {
  std::size_t degenerate_slices = 0;
  std::size_t missing_chains = 0;
  std::size_t skipped_close_points = 0;
  /// Same-sign edges near the interface that dip across it and back; treated as uncrossed.
  std::size_t hidden_crossing_pairs = 0;
};

/// Per-crossing stencils, one per active tangent of its basis.
struct InterfaceChains {
  std::vector<std::array<std::optional<TangentStencil>, 2>> stencils;
  double delta_min = 0.0;
  std::size_t skipped_close_points = 0;
};

/// Orders interface points along each interface curve (2D) or coordinate-plane slice curve (3D) by
/// walking through the grid cells the curve passes, and picks a differentiation stencil for every
/// active tangent. Consecutive stencil points are at least h^2 apart.
///
/// A 2D crossing without a valid stencil throws UnderResolvedError. In 3D the slice is dropped
/// from the basis instead and counted in `missing`.
InterfaceChains build_chains(const Grid& grid, std::span<const Crossing> crossings, const CrossingIndex& index,
                             std::vector<TangentBasis>& bases, std::size_t* missing = nullptr);

/// Everything the discretization needs to know about where the interface sits on the grid.
class InterfaceGeometry {
 public:
  InterfaceGeometry(const Grid& grid, LevelSet ls);

  const Grid& grid() const { return grid_; }
  const LevelSet& level_set() const { return ls_; }
  const PointLabels& labels() const { return labels_; }
  const std::vector<Crossing>& crossings() const { return crossings_; }
  const std::vector<TangentBasis>& bases() const { return bases_; }
  const InterfaceChains& chains() const { return chains_; }
  const CrossingIndex& index() const { return index_; }
  const GeometryDiagnostics& diagnostics() const { return diagnostics_; }

  int crossing_on_edge(std::size_t node, int axis) const { return index_.on_edge(node, axis); }

 private:
  Grid grid_;
  LevelSet ls_;
  PointLabels labels_;
  std::vector<Crossing> crossings_;
  CrossingIndex index_;
  std::vector<TangentBasis> bases_;
  InterfaceChains chains_;
  GeometryDiagnostics diagnostics_;
};

}  // namespace jumpfd
