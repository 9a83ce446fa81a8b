#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <string>
#include <vector>

#include "jumpfd/geometry.hpp"
#include "jumpfd/problem.hpp"
#include "jumpfd/sparse.hpp"

namespace jumpfd {

/// Weighted harmonic-type mean used as the face coefficient of a crossing edge:
///   beta_m- beta_m+ / ((1 - theta) beta_m+ + theta beta_m-)
/// where theta is the fraction of the edge between the interface and the m+ end.
/// Throws std::domain_error for a nonpositive beta or theta outside (0, 1).
double beta_hat(double beta_m_minus, double beta_m_plus, double theta);

/// Problem data sampled once per crossing.
struct CrossingData {
  double a = 0.0;  // [u]
  double b = 0.0;  // [beta u_n]
  double f_minus = 0.0;
  double f_plus = 0.0;
  double beta_minus = 0.0;  // side values at the interface point
  double beta_plus = 0.0;
  double beta_lo = 0.0;  // lo node's branch at mid_lo
  double beta_hi = 0.0;  // hi node's branch at mid_hi
  double beta_hat = 0.0;
  /// [beta u_axis] with the tangential jumps set to zero: b times the normal coefficient.
  double normal_flux_jump = 0.0;
  /// Derivative of a along each tangent of the crossing's basis.
  std::array<double, 2> a_tangential{0.0, 0.0};
};

/// A crossing face of a nonstandard row, seen from node p toward q = p + dir * e_axis.
struct FaceRecord {
  std::int32_t row = 0;
  std::int32_t crossing = 0;
  int axis = 0;
  int dir = 1;
  std::size_t node_p = 0;
  std::size_t node_q = 0;
  double theta = 0.5;  // |x_q - x_I| / h
  double beta_p = 0.0;
  double beta_q = 0.0;
  double beta_hat = 0.0;
  int sigma = 1;  // +1 when p lies in Omega-, -1 otherwise
};

/// Per-row data of a nonstandard row.
struct RowRecord {
  std::int32_t row = 0;
  std::size_t node = 0;
  /// Axis whose second derivative is eliminated through the PDE, f minus the other axes.
  int ref_axis = 0;
  /// 1 - sum of theta/2 over the crossing faces on each axis.
  std::array<double, 3> weight{1.0, 1.0, 1.0};
  std::int32_t first_face = 0;
  std::int32_t num_faces = 0;
};

struct AssemblyDiagnostics {
  std::size_t nonstandard_rows = 0;
  std::size_t crossing_faces = 0;
  /// Rows with a non-reference crossing axis lacking any same-side stencil.
  std::size_t rows_without_stencil = 0;
};

/// Linear system for one problem on one grid.
///
/// Sign convention: `matrix` is the negated difference operator, so it is symmetric positive definite,
/// and every right-hand side below is the negated forcing. Unknowns are the interior nodes in grid order;
/// Dirichlet values are folded into `base_rhs`.
struct DiscreteSystem {
  DiscreteSystem(std::shared_ptr<const InterfaceGeometry> geometry_in, ProblemSpec spec_in)
      : geometry(std::move(geometry_in)), spec(std::move(spec_in)) {}

  std::shared_ptr<const InterfaceGeometry> geometry;
  ProblemSpec spec;

  std::vector<std::int32_t> node_to_unknown;  // -1 on the boundary
  std::vector<std::size_t> unknown_to_node;

  CsrMatrix matrix;
  /// Right-hand side with every solution-dependent correction set to zero.
  std::vector<double> base_rhs;
  /// Sum of the off-diagonal entries removed by Dirichlet elimination, per row.
  std::vector<double> eliminated_coupling;
  /// Dirichlet data on boundary nodes, zero elsewhere.
  std::vector<double> boundary_values;

  std::vector<CrossingData> crossing_data;
  std::vector<RowRecord> rows;
  std::vector<FaceRecord> faces;
  AssemblyDiagnostics diagnostics;

  const Grid& grid() const { return geometry->grid(); }
  std::size_t num_unknowns() const { return unknown_to_node.size(); }

  /// Full-grid vector from interior unknowns, boundary filled with Dirichlet data.
  std::vector<double> expand(std::span<const double> interior) const;
  std::vector<double> restrict_to_interior(std::span<const double> full) const;
};

DiscreteSystem assemble(const ProblemSpec& spec, std::shared_ptr<const InterfaceGeometry> geometry);
DiscreteSystem assemble(const ProblemSpec& spec);

/// Same-side estimate of (beta u_axis)_axis at `node` from full-grid values: the centered flux
/// difference when both neighbours share the node's side, otherwise the centered value at the
/// same-side neighbour. Empty when neither stencil stays on one side.
std::optional<double> flux_second_difference(const DiscreteSystem& system, std::span<const double> u_full,
                                             std::size_t node, int axis);

/// Counts of second-derivative estimates that could not use a same-side stencil.
struct EstimateDiagnostics {
  std::size_t pde_fallbacks = 0;   // taken as f minus the other axes
  std::size_t zero_fallbacks = 0;  // no estimate at all; taken as 0
};

/// flux_second_difference with fallbacks: f minus the other axes' estimates, then 0.
double estimate_flux_second_difference(const DiscreteSystem& system, std::span<const double> u_full,
                                       std::size_t node, int axis, EstimateDiagnostics* diagnostics = nullptr);

struct InterfaceValue {
  double minus = 0.0;
  double plus = 0.0;
};

/// [beta u_axis] at every crossing, from b and the tangential flux jumps [beta u_tau_k].
std::vector<double> axis_flux_jumps(const DiscreteSystem& system, std::span<const std::array<double, 2>> tangential);

/// The axis flux jumps with every tangential jump set to zero.
std::vector<double> normal_only_flux_jumps(const DiscreteSystem& system);

/// Interface values on both sides of one crossing from Cartesian values and the current estimate of
/// [beta u_axis]. plus - minus equals the jump a exactly.
InterfaceValue interface_value(const DiscreteSystem& system, int crossing, std::span<const double> u_full,
                               double axis_flux_jump, EstimateDiagnostics* diagnostics = nullptr);
std::vector<InterfaceValue> interface_values(const DiscreteSystem& system, std::span<const double> u_full,
                                             std::span<const double> axis_flux_jumps,
                                             EstimateDiagnostics* diagnostics = nullptr);

/// beta+ du+/dtau - beta- du-/dtau at the stencil center.
///
/// The one-sided derivatives are the mean of the two stencil derivatives shifted by -+ a_tau / 2, so
/// they differ by exactly the known derivative of the jump.
double tangential_jump(const TangentStencil& stencil, std::span<const InterfaceValue> values, double beta_minus,
                       double beta_plus, double a_tau);
std::vector<std::array<double, 2>> tangential_jumps(const DiscreteSystem& system,
                                                    std::span<const InterfaceValue> values);

/// Full right-hand side: base_rhs plus the terms that depend on the current Cartesian solution
/// (cross-axis second derivatives) and on the axis flux jumps.
std::vector<double> correction_rhs(const DiscreteSystem& system, std::span<const double> u_full,
                                   std::span<const double> axis_flux_jumps,
                                   EstimateDiagnostics* diagnostics = nullptr);

/// Writes the operator in coordinate format.
void dump_matrix(const DiscreteSystem& system, const std::string& path);

}  // namespace jumpfd
