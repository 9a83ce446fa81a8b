#include "jumpfd/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace jumpfd {

double beta_hat(double beta_m_minus, double beta_m_plus, double theta) {
  if (!(beta_m_minus > 0.0) || !(beta_m_plus > 0.0)) {
    throw std::domain_error("beta_hat: beta must be positive");
  }
  if (!(theta > 0.0 && theta < 1.0)) {
    throw std::domain_error("beta_hat: theta must lie in (0, 1)");
  }
  return beta_m_minus * beta_m_plus / ((1.0 - theta) * beta_m_plus + theta * beta_m_minus);
}

namespace {

Point midpoint(const Point& a, const Point& b) {
  return {0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1]), 0.5 * (a[2] + b[2])};
}

Point shifted(const Grid& grid, std::size_t node, int axis, double offset) {
  Point x = grid.coord(node);
  x[axis] += offset * grid.h();
  return x;
}

// Neighbour of `node` along `axis` at step `dir`, or nullopt if it falls off the grid.
std::optional<std::size_t> neighbour(const Grid& grid, const Index3& idx, int axis, int dir) {
  Index3 j = idx;
  j[axis] += dir;
  if (!grid.in_range(j)) return std::nullopt;
  return grid.flat(j);
}

// Centered (beta u_axis)_axis at `node` when both neighbours lie on `side`.
std::optional<double> centered_flux_difference(const DiscreteSystem& system, std::span<const double> u,
                                               std::size_t node, int axis, Side side) {
  const Grid& grid = system.grid();
  const PointLabels& labels = system.geometry->labels();
  const Index3 idx = grid.unflat(node);
  auto back = neighbour(grid, idx, axis, -1);
  auto fwd = neighbour(grid, idx, axis, 1);
  if (!back || !fwd) return std::nullopt;
  if (labels.side(node) != side || labels.side(*back) != side || labels.side(*fwd) != side) return std::nullopt;
  const double h = grid.h();
  const double beta_f = system.spec.beta(side, shifted(grid, node, axis, 0.5));
  const double beta_b = system.spec.beta(side, shifted(grid, node, axis, -0.5));
  return (beta_f * (u[*fwd] - u[node]) - beta_b * (u[node] - u[*back])) / (h * h);
}

bool has_same_side_stencil(const Grid& grid, const PointLabels& labels, std::size_t node, int axis) {
  const Index3 idx = grid.unflat(node);
  const Side side = labels.side(node);
  auto same = [&](int step) {
    auto m = neighbour(grid, idx, axis, step);
    return m && labels.side(*m) == side;
  };
  if (same(-1) && same(1)) return true;
  for (int s : {1, -1}) {
    if (same(s) && same(2 * s)) return true;
  }
  return false;
}

}  // namespace

std::vector<double> DiscreteSystem::expand(std::span<const double> interior) const {
  if (interior.size() != num_unknowns()) throw UsageError("expand: size mismatch");
  std::vector<double> full = boundary_values;
  for (std::size_t k = 0; k < interior.size(); ++k) full[unknown_to_node[k]] = interior[k];
  return full;
}

std::vector<double> DiscreteSystem::restrict_to_interior(std::span<const double> full) const {
  if (full.size() != node_to_unknown.size()) throw UsageError("restrict_to_interior: size mismatch");
  std::vector<double> out(num_unknowns());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = full[unknown_to_node[k]];
  return out;
}

DiscreteSystem assemble(const ProblemSpec& spec) {
  return assemble(spec, std::make_shared<const InterfaceGeometry>(spec.grid, spec.level_set));
}

DiscreteSystem assemble(const ProblemSpec& spec, std::shared_ptr<const InterfaceGeometry> geometry) {
  if (!geometry) throw UsageError("assemble: missing geometry");
  const Grid& grid = geometry->grid();
  if (grid.dim() != spec.grid.dim() || grid.n() != spec.grid.n() || grid.lo() != spec.grid.lo() ||
      grid.hi() != spec.grid.hi()) {
    throw UsageError("assemble: geometry grid does not match the problem grid");
  }

  DiscreteSystem sys(geometry, spec);

  const int dim = grid.dim();
  const double h = grid.h();
  const double inv_h2 = 1.0 / (h * h);
  const PointLabels& labels = geometry->labels();
  const auto& crossings = geometry->crossings();
  const auto& bases = geometry->bases();

  sys.node_to_unknown.assign(grid.num_nodes(), -1);
  sys.boundary_values.assign(grid.num_nodes(), 0.0);
  for (std::size_t node = 0; node < grid.num_nodes(); ++node) {
    if (grid.is_boundary(node)) {
      sys.boundary_values[node] = spec.dirichlet(grid.coord(node));
    } else {
      sys.node_to_unknown[node] = static_cast<std::int32_t>(sys.unknown_to_node.size());
      sys.unknown_to_node.push_back(node);
    }
  }

  sys.crossing_data.resize(crossings.size());
  for (std::size_t c = 0; c < crossings.size(); ++c) {
    const Crossing& x = crossings[c];
    CrossingData& d = sys.crossing_data[c];
    d.a = spec.jumps.a(x.point);
    d.b = spec.jumps.b(x.point);
    d.f_minus = spec.f(Side::minus, x.point);
    d.f_plus = spec.f(Side::plus, x.point);
    d.beta_minus = spec.beta(Side::minus, x.point);
    d.beta_plus = spec.beta(Side::plus, x.point);
    d.beta_lo = spec.beta(x.lo_side, x.mid_lo);
    d.beta_hi = spec.beta(x.hi_side(), x.mid_hi);
    d.beta_hat = beta_hat(d.beta_lo, d.beta_hi, x.theta);
    d.normal_flux_jump = d.b * bases[c].c[0];
    for (int k = 0; k < bases[c].num_tangents; ++k) {
      if (bases[c].active[k])
        d.a_tangential[k] = derivative_along_interface(spec.level_set, spec.jumps.a, x.point, bases[c].tau[k], h, dim);
    }
  }

  const std::size_t n_unknowns = sys.num_unknowns();
  std::vector<std::vector<std::pair<std::int32_t, double>>> entries(n_unknowns);
  sys.base_rhs.assign(n_unknowns, 0.0);
  sys.eliminated_coupling.assign(n_unknowns, 0.0);

  for (std::size_t row = 0; row < n_unknowns; ++row) {
    const std::size_t p = sys.unknown_to_node[row];
    const Index3 idx = grid.unflat(p);
    const Side side = labels.side(p);
    const Point xp = grid.coord(p);

    double forcing = 0.0;  // right-hand side of the difference equation before negation
    double diag = 0.0;
    RowRecord rec;
    rec.row = static_cast<std::int32_t>(row);
    rec.node = p;
    rec.first_face = static_cast<std::int32_t>(sys.faces.size());
    std::array<bool, 3> double_face{false, false, false};
    std::array<bool, 3> crossing_axis{false, false, false};

    entries[row].reserve(2 * dim + 1);
    for (int axis = 0; axis < dim; ++axis) {
      int crossed = 0;
      for (int dir : {-1, 1}) {
        Index3 j = idx;
        j[axis] += dir;
        const std::size_t q = grid.flat(j);
        const std::size_t lo = dir > 0 ? p : q;
        const int c = geometry->crossing_on_edge(lo, axis);
        double coef;
        if (c >= 0) {
          const Crossing& x = crossings[c];
          const CrossingData& cd = sys.crossing_data[c];
          coef = cd.beta_hat;
          FaceRecord face;
          face.row = rec.row;
          face.crossing = c;
          face.axis = axis;
          face.dir = dir;
          face.node_p = p;
          face.node_q = q;
          face.theta = dir > 0 ? x.theta : 1.0 - x.theta;
          face.beta_p = dir > 0 ? cd.beta_lo : cd.beta_hi;
          face.beta_q = dir > 0 ? cd.beta_hi : cd.beta_lo;
          face.beta_hat = cd.beta_hat;
          face.sigma = side == Side::minus ? 1 : -1;
          sys.faces.push_back(face);
          rec.weight[axis] -= 0.5 * face.theta;
          ++crossed;
        } else {
          coef = spec.beta(side, midpoint(xp, grid.coord(q)));
          if (!(coef > 0.0)) throw UsageError("assemble: beta must be positive");
        }
        const double off = -coef * inv_h2;
        diag += coef * inv_h2;
        const std::int32_t col = sys.node_to_unknown[q];
        if (col >= 0) {
          entries[row].emplace_back(col, off);
        } else {
          forcing -= coef * inv_h2 * sys.boundary_values[q];
          sys.eliminated_coupling[row] += off;
        }
      }
      crossing_axis[axis] = crossed > 0;
      double_face[axis] = crossed == 2;
    }
    entries[row].emplace_back(static_cast<std::int32_t>(row), diag);
    rec.num_faces = static_cast<std::int32_t>(sys.faces.size()) - rec.first_face;

    if (rec.num_faces == 0) {
      forcing += spec.f(side, xp);
    } else {
      // Reference axis: a crossing axis whose second derivative has no same-side stencil, if any.
      int ref = -1;
      for (int axis = 0; axis < dim && ref < 0; ++axis) {
        if (crossing_axis[axis] && (double_face[axis] || !has_same_side_stencil(grid, labels, p, axis))) ref = axis;
      }
      for (int axis = 0; axis < dim && ref < 0; ++axis) {
        if (crossing_axis[axis]) ref = axis;
      }
      rec.ref_axis = ref;
      for (int axis = 0; axis < dim; ++axis) {
        if (axis != ref && rec.weight[axis] != rec.weight[ref] &&
            !has_same_side_stencil(grid, labels, p, axis)) {
          ++sys.diagnostics.rows_without_stencil;
          break;
        }
      }
      forcing += rec.weight[ref] * spec.f(side, xp);
      for (std::int32_t k = rec.first_face; k < rec.first_face + rec.num_faces; ++k) {
        const FaceRecord& face = sys.faces[k];
        const CrossingData& cd = sys.crossing_data[face.crossing];
        const double a = face.sigma * cd.a;
        const double jump = face.sigma * face.dir * cd.normal_flux_jump;
        const Side q_side = opposite(side);
        const double f_q = q_side == Side::plus ? cd.f_plus : cd.f_minus;
        const double f_p = side == Side::plus ? cd.f_plus : cd.f_minus;
        const double g = face.theta * f_q + (1.0 - face.theta) * f_p;
        forcing += face.beta_hat * a * inv_h2 + face.beta_hat * face.theta / face.beta_q * (jump / h + 0.5 * g);
      }
      sys.rows.push_back(rec);
      sys.diagnostics.crossing_faces += rec.num_faces;
    }
    sys.base_rhs[row] = -forcing;
  }
  sys.diagnostics.nonstandard_rows = sys.rows.size();
  sys.matrix = CsrMatrix::from_rows(std::move(entries));
  return sys;
}

std::optional<double> flux_second_difference(const DiscreteSystem& system, std::span<const double> u_full,
                                             std::size_t node, int axis) {
  const Grid& grid = system.grid();
  const PointLabels& labels = system.geometry->labels();
  const Side side = labels.side(node);
  if (auto v = centered_flux_difference(system, u_full, node, axis, side)) return v;
  const Index3 idx = grid.unflat(node);
  for (int s : {1, -1}) {
    auto m = neighbour(grid, idx, axis, s);
    if (!m || labels.side(*m) != side) continue;
    if (auto v = centered_flux_difference(system, u_full, *m, axis, side)) return v;
  }
  return std::nullopt;
}

double estimate_flux_second_difference(const DiscreteSystem& system, std::span<const double> u_full,
                                       std::size_t node, int axis, EstimateDiagnostics* diagnostics) {
  if (auto v = flux_second_difference(system, u_full, node, axis)) return *v;
  const Grid& grid = system.grid();
  double rest = 0.0;
  bool ok = true;
  for (int d = 0; d < grid.dim() && ok; ++d) {
    if (d == axis) continue;
    auto v = flux_second_difference(system, u_full, node, d);
    if (v) {
      rest += *v;
    } else {
      ok = false;
    }
  }
  const Side side = system.geometry->labels().side(node);
  if (ok && grid.dim() > 1) {
    if (diagnostics) ++diagnostics->pde_fallbacks;
    return system.spec.f(side, grid.coord(node)) - rest;
  }
  if (diagnostics) ++diagnostics->zero_fallbacks;
  return 0.0;
}

std::vector<double> axis_flux_jumps(const DiscreteSystem& system, std::span<const std::array<double, 2>> tangential) {
  const auto& bases = system.geometry->bases();
  if (tangential.size() != bases.size()) throw UsageError("axis_flux_jumps: size mismatch");
  std::vector<double> out(bases.size());
  for (std::size_t c = 0; c < bases.size(); ++c) {
    const TangentBasis& tb = bases[c];
    double j = system.crossing_data[c].normal_flux_jump;
    for (int k = 0; k < tb.num_tangents; ++k) {
      if (tb.active[k]) j += tb.c[k + 1] * tangential[c][k];
    }
    out[c] = j;
  }
  return out;
}

std::vector<double> normal_only_flux_jumps(const DiscreteSystem& system) {
  std::vector<double> out(system.crossing_data.size());
  for (std::size_t c = 0; c < out.size(); ++c) out[c] = system.crossing_data[c].normal_flux_jump;
  return out;
}

InterfaceValue interface_value(const DiscreteSystem& system, int crossing, std::span<const double> u_full,
                               double axis_flux_jump, EstimateDiagnostics* diagnostics) {
  const Crossing& x = system.geometry->crossings().at(crossing);
  const CrossingData& cd = system.crossing_data[crossing];
  const double h = system.grid().h();
  const double theta = x.theta;
  const double sigma = x.lo_side == Side::minus ? 1.0 : -1.0;
  const double a = sigma * cd.a;
  const double jump = sigma * axis_flux_jump;
  const double g = theta * estimate_flux_second_difference(system, u_full, x.hi, x.axis, diagnostics) +
                   (1.0 - theta) * estimate_flux_second_difference(system, u_full, x.lo, x.axis, diagnostics);
  const double bp = cd.beta_lo;
  const double bq = cd.beta_hi;
  const double bh = cd.beta_hat;
  const double v = bh * (1.0 - theta) / bp * (u_full[x.hi] - a) + bh * theta / bq * u_full[x.lo] -
                   bh * theta * (1.0 - theta) * h / (bp * bq) * (jump + 0.5 * g * h);
  // v is the lo side's value; the hi side differs by the oriented jump.
  if (x.lo_side == Side::minus) return {v, v + a};
  return {v + a, v};
}

std::vector<InterfaceValue> interface_values(const DiscreteSystem& system, std::span<const double> u_full,
                                             std::span<const double> axis_flux_jumps,
                                             EstimateDiagnostics* diagnostics) {
  const std::size_t count = system.crossing_data.size();
  if (axis_flux_jumps.size() != count) throw UsageError("interface_values: size mismatch");
  std::vector<InterfaceValue> out(count);
  for (std::size_t c = 0; c < count; ++c) {
    out[c] = interface_value(system, static_cast<int>(c), u_full, axis_flux_jumps[c], diagnostics);
  }
  return out;
}

double tangential_jump(const TangentStencil& stencil, std::span<const InterfaceValue> values, double beta_minus,
                       double beta_plus, double a_tau) {
  double du_mean = 0.0;
  for (std::size_t k = 0; k < stencil.ids.size(); ++k) {
    const InterfaceValue& v = values[stencil.ids[k]];
    du_mean += stencil.weights[k] * 0.5 * (v.minus + v.plus);
  }
  return beta_plus * (du_mean + 0.5 * a_tau) - beta_minus * (du_mean - 0.5 * a_tau);
}

std::vector<std::array<double, 2>> tangential_jumps(const DiscreteSystem& system,
                                                    std::span<const InterfaceValue> values) {
  const auto& bases = system.geometry->bases();
  const auto& stencils = system.geometry->chains().stencils;
  if (values.size() != bases.size()) throw UsageError("tangential_jumps: size mismatch");
  std::vector<std::array<double, 2>> out(bases.size(), {0.0, 0.0});
  for (std::size_t c = 0; c < bases.size(); ++c) {
    const CrossingData& cd = system.crossing_data[c];
    for (int k = 0; k < bases[c].num_tangents; ++k) {
      if (bases[c].active[k] && stencils[c][k]) {
        out[c][k] = tangential_jump(*stencils[c][k], values, cd.beta_minus, cd.beta_plus, cd.a_tangential[k]);
      }
    }
  }
  return out;
}

std::vector<double> correction_rhs(const DiscreteSystem& system, std::span<const double> u_full,
                                   std::span<const double> axis_flux_jumps, EstimateDiagnostics* diagnostics) {
  if (u_full.size() != system.node_to_unknown.size()) throw UsageError("correction_rhs: u must be a full-grid vector");
  if (axis_flux_jumps.size() != system.crossing_data.size()) throw UsageError("correction_rhs: size mismatch");
  const int dim = system.grid().dim();
  const double h = system.grid().h();
  std::vector<double> rhs = system.base_rhs;
  if (dim == 1) {
    // No cross-axis terms and the axis flux jump is b itself.
    for (const RowRecord& rec : system.rows) {
      double delta = 0.0;
      for (std::int32_t k = rec.first_face; k < rec.first_face + rec.num_faces; ++k) {
        const FaceRecord& f = system.faces[k];
        const double dj = axis_flux_jumps[f.crossing] - system.crossing_data[f.crossing].normal_flux_jump;
        delta += f.beta_hat * f.theta / f.beta_q * (f.sigma * f.dir * dj / h);
      }
      rhs[rec.row] -= delta;
    }
    return rhs;
  }

  auto g_at = [&](std::size_t node, int axis) {
    return estimate_flux_second_difference(system, u_full, node, axis, diagnostics);
  };
  for (const RowRecord& rec : system.rows) {
    const int r = rec.ref_axis;
    std::array<double, 3> g_p{0.0, 0.0, 0.0};
    std::array<bool, 3> have{false, false, false};
    auto g_p_at = [&](int axis) {
      if (!have[axis]) {
        g_p[axis] = g_at(rec.node, axis);
        have[axis] = true;
      }
      return g_p[axis];
    };
    double delta = 0.0;
    for (int d = 0; d < dim; ++d) {
      if (d != r && rec.weight[d] != rec.weight[r]) delta += (rec.weight[d] - rec.weight[r]) * g_p_at(d);
    }
    for (std::int32_t k = rec.first_face; k < rec.first_face + rec.num_faces; ++k) {
      const FaceRecord& f = system.faces[k];
      const double dj = axis_flux_jumps[f.crossing] - system.crossing_data[f.crossing].normal_flux_jump;
      double cross_p = 0.0;
      double cross_q = 0.0;
      for (int d = 0; d < dim; ++d) {
        if (d == f.axis) continue;
        cross_p += g_p_at(d);
        cross_q += g_at(f.node_q, d);
      }
      const double g = f.theta * cross_q + (1.0 - f.theta) * cross_p;
      delta += f.beta_hat * f.theta / f.beta_q * (f.sigma * f.dir * dj / h - 0.5 * g);
    }
    rhs[rec.row] -= delta;
  }
  return rhs;
}

void dump_matrix(const DiscreteSystem& system, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot open matrix dump file: " + path);
  system.matrix.write_coordinate(out);
}

}  // namespace jumpfd
