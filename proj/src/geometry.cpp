#include "jumpfd/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace jumpfd {

namespace {

double shifted_phi(const LevelSet& ls, const Point& x, double h) { return ls.phi(x) + 1e-12 * h; }

int sign_of(double v) { return v > 0.0 ? 1 : -1; }

std::string describe(const Point& x, int dim) {
  std::ostringstream os;
  os << "(";
  for (int a = 0; a < dim; ++a) os << (a ? ", " : "") << x[a];
  os << ")";
  return os.str();
}

Point edge_point(const Point& lo, int axis, double offset) {
  Point x = lo;
  x[axis] += offset;
  return x;
}

}  // namespace

PointLabels classify_points(const Grid& grid, const LevelSet& ls) {
  PointLabels labels;
  const std::size_t count = grid.num_nodes();
  labels.sign.resize(count);
  labels.nonstandard.assign(count, 0);
  for (std::size_t node = 0; node < count; ++node)
    labels.sign[node] = static_cast<std::int8_t>(sign_of(shifted_phi(ls, grid.coord(node), grid.h())));

  for (std::size_t node = 0; node < count; ++node) {
    const Index3 idx = grid.unflat(node);
    for (int axis = 0; axis < grid.dim(); ++axis) {
      if (idx[axis] + 1 >= grid.n()) continue;
      const std::size_t nb = node + grid.stride(axis);
      if (labels.sign[node] != labels.sign[nb]) {
        labels.nonstandard[node] = 1;
        labels.nonstandard[nb] = 1;
      }
    }
  }
  labels.num_nonstandard =
      static_cast<std::size_t>(std::count(labels.nonstandard.begin(), labels.nonstandard.end(), std::uint8_t{1}));
  return labels;
}

Point unit_normal(const LevelSet& ls, const Point& x, double h, int dim) {
  Point g{0.0, 0.0, 0.0};
  if (ls.gradient) {
    g = ls.gradient(x);
  } else {
    const double step = 0.5 * h;
    for (int a = 0; a < dim; ++a) {
      Point xp = x, xm = x;
      xp[a] += step;
      xm[a] -= step;
      g[a] = (ls.phi(xp) - ls.phi(xm)) / (2.0 * step);
    }
  }
  for (int a = dim; a < 3; ++a) g[a] = 0.0;
  const double len = norm(g);
  if (!(len > 0.0)) throw UnderResolvedError("level-set gradient vanishes on the interface at " + describe(x, dim));
  return {g[0] / len, g[1] / len, g[2] / len};
}

double derivative_along_interface(const LevelSet& ls, const std::function<double(const Point&)>& g, const Point& x,
                                  const Point& tau, double h, int dim) {
  const double eps = 1e-3 * h;
  auto project = [&](Point y) {
    for (int it = 0; it < 2; ++it) {
      const Point n = unit_normal(ls, y, h, dim);
      Point yp = y, ym = y;
      for (int a = 0; a < 3; ++a) {
        yp[a] += eps * n[a];
        ym[a] -= eps * n[a];
      }
      const double slope = (ls.phi(yp) - ls.phi(ym)) / (2.0 * eps);
      const double step = ls.phi(y) / slope;
      for (int a = 0; a < 3; ++a) y[a] -= step * n[a];
    }
    return y;
  };
  const Point fwd = project({x[0] + eps * tau[0], x[1] + eps * tau[1], x[2] + eps * tau[2]});
  const Point bwd = project({x[0] - eps * tau[0], x[1] - eps * tau[1], x[2] - eps * tau[2]});
  return (g(fwd) - g(bwd)) / distance(fwd, bwd);
}

Crossing find_crossing(const Grid& grid, const LevelSet& ls, std::size_t a, std::size_t b) {
  const Index3 ia = grid.unflat(a);
  const Index3 ib = grid.unflat(b);
  int axis = -1;
  int differing = 0;
  for (int d = 0; d < grid.dim(); ++d) {
    if (ia[d] != ib[d]) {
      ++differing;
      if (std::abs(ia[d] - ib[d]) == 1) axis = d;
    }
  }
  if (differing != 1 || axis < 0) throw UsageError("find_crossing: nodes are not adjacent");

  const double h = grid.h();
  Crossing c;
  c.axis = axis;
  c.lo = std::min(a, b);
  c.hi = std::max(a, b);
  const Point x_lo = grid.coord(c.lo);
  const Point x_hi = grid.coord(c.hi);
  const int s_lo = sign_of(shifted_phi(ls, x_lo, h));
  const int s_hi = sign_of(shifted_phi(ls, x_hi, h));
  if (s_lo == s_hi) throw UsageError("not a crossing edge");

  int changes = 0;
  int prev = s_lo;
  for (int k = 1; k <= 8; ++k) {
    const int s = k < 8 ? sign_of(shifted_phi(ls, edge_point(x_lo, axis, h * k / 8.0), h)) : s_hi;
    if (s != prev) ++changes;
    prev = s;
  }
  if (changes > 1)
    throw UnderResolvedError("interface under-resolved: several sign changes on the edge at " +
                             describe(x_lo, grid.dim()));

  double s_a = 0.0;
  double s_b = 1.0;
  while (s_b - s_a > 1e-12) {
    const double mid = 0.5 * (s_a + s_b);
    if (sign_of(shifted_phi(ls, edge_point(x_lo, axis, mid * h), h)) == s_lo)
      s_a = mid;
    else
      s_b = mid;
  }
  const double s_root = 0.5 * (s_a + s_b);

  c.point = edge_point(x_lo, axis, s_root * h);
  c.theta = std::clamp(1.0 - s_root, kThetaMin, 1.0 - kThetaMin);
  for (int d = 0; d < 3; ++d) {
    c.mid_lo[d] = 0.5 * (x_lo[d] + c.point[d]);
    c.mid_hi[d] = 0.5 * (c.point[d] + x_hi[d]);
  }
  c.normal = unit_normal(ls, c.point, h, grid.dim());
  c.lo_side = s_lo > 0 ? Side::plus : Side::minus;
  return c;
}

void refit_coefficients(TangentBasis& basis, int axis) {
  const Point e = unit_vector(axis);
  const Point& n = basis.normal;
  basis.c = {dot(n, e), 0.0, 0.0};
  if (basis.num_tangents == 1) {
    if (basis.active[0]) basis.c[1] = dot(basis.tau[0], e);
    return;
  }
  if (basis.num_tangents < 2) return;
  if (basis.active[0] && basis.active[1]) {
    const Point& t1 = basis.tau[0];
    const Point& t2 = basis.tau[1];
    const double det = dot(n, cross(t1, t2));
    if (std::abs(det) < 1e-12) throw UnderResolvedError("degenerate tangent basis");
    basis.c[0] = dot(e, cross(t1, t2)) / det;
    basis.c[1] = dot(n, cross(e, t2)) / det;
    basis.c[2] = dot(n, cross(t1, e)) / det;
    return;
  }
  // A single tangent is orthogonal to n, so projection gives the coefficients.
  for (int k = 0; k < 2; ++k)
    if (basis.active[k]) basis.c[k + 1] = dot(basis.tau[k], e);
}

TangentBasis tangent_basis(int dim, const Point& normal, int axis) {
  TangentBasis basis;
  basis.normal = normal;
  basis.num_tangents = dim - 1;
  if (dim == 2) {
    basis.tau[0] = {-normal[1], normal[0], 0.0};
    basis.active[0] = true;
  } else if (dim == 3) {
    basis.slice_normal = {(axis + 2) % 3, (axis + 1) % 3};
    for (int k = 0; k < 2; ++k) {
      const Point t = cross(unit_vector(basis.slice_normal[k]), normal);
      const double len = norm(t);
      if (len >= kDegenerateSlice) {
        basis.tau[k] = {t[0] / len, t[1] / len, t[2] / len};
        basis.active[k] = true;
      }
    }
  }
  refit_coefficients(basis, axis);
  return basis;
}

CrossingIndex::CrossingIndex(const Grid& grid, std::span<const Crossing> crossings) {
  for (int axis = 0; axis < grid.dim(); ++axis) ids_[axis].assign(grid.num_nodes(), -1);
  for (std::size_t id = 0; id < crossings.size(); ++id)
    ids_[crossings[id].axis][crossings[id].lo] = static_cast<std::int32_t>(id);
}

std::vector<double> fit_derivative_weights(std::span<const double> s) {
  double len = 0.0;
  for (double v : s) len = std::max(len, std::abs(v));
  // Normal equations of the scaled basis 1, t, t^2 with t = s / len.
  std::array<std::array<double, 3>, 3> m{};
  for (double v : s) {
    const double t = v / len;
    const std::array<double, 3> row{1.0, t, t * t};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m[i][j] += row[i] * row[j];
  }
  // Middle row of the inverse via cofactors (m is symmetric).
  const double c10 = -(m[0][1] * m[2][2] - m[0][2] * m[2][1]);
  const double c11 = m[0][0] * m[2][2] - m[0][2] * m[2][0];
  const double c12 = -(m[0][0] * m[2][1] - m[0][1] * m[2][0]);
  const double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) + m[0][1] * c10 +
                     m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  std::vector<double> w(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double t = s[k] / len;
    w[k] = (c10 + c11 * t + c12 * t * t) / (det * len);
  }
  return w;
}

constexpr int kReach = 2;  // chain points used on each side of the center

std::optional<TangentStencil> select_stencil(int center, std::span<const int> backward, std::span<const int> forward,
                                            std::span<const Crossing> crossings, double delta_min,
                                            const Point& tau) {
  const Point& xc = crossings[center].point;
  int skipped = 0;
  // Up to `want` points from `list`, each at least delta_min beyond the previous one.
  auto gather = [&](std::span<const int> list, int want, std::span<const int> taken) {
    std::vector<int> out;
    const Point* ref = &xc;
    for (int id : list) {
      if (static_cast<int>(out.size()) == want) break;
      if (id == center || std::find(taken.begin(), taken.end(), id) != taken.end()) continue;
      const Point& x = crossings[id].point;
      if (distance(x, *ref) < delta_min || distance(x, xc) < delta_min) {
        ++skipped;
        continue;
      }
      out.push_back(id);
      ref = &x;
    }
    return out;
  };

  std::vector<int> back = gather(backward, kReach, {});
  std::vector<int> fwd = gather(forward, kReach, back);
  TangentStencil t;
  if (back.empty() || fwd.empty()) {
    back = gather(backward, 2, {});
    fwd = gather(forward, 2, {});
    if (fwd.size() == 2)
      back.clear();
    else if (back.size() == 2)
      fwd.clear();
    else
      return std::nullopt;
    t.one_sided = true;
  }
  for (auto it = back.rbegin(); it != back.rend(); ++it) t.ids.push_back(*it);
  t.ids.push_back(center);
  t.ids.insert(t.ids.end(), fwd.begin(), fwd.end());
  // Chord length accumulated outward from the center.
  const std::size_t c = back.size();
  t.s.assign(t.ids.size(), 0.0);
  for (std::size_t k = c; k-- > 0;)
    t.s[k] = t.s[k + 1] - distance(crossings[t.ids[k]].point, crossings[t.ids[k + 1]].point);
  for (std::size_t k = c + 1; k < t.ids.size(); ++k)
    t.s[k] = t.s[k - 1] + distance(crossings[t.ids[k]].point, crossings[t.ids[k - 1]].point);

  t.weights = fit_derivative_weights(t.s);
  const Point& first = crossings[t.ids.front()].point;
  const Point& last = crossings[t.ids.back()].point;
  const Point chord{last[0] - first[0], last[1] - first[1], last[2] - first[2]};
  if (dot(chord, tau) < 0.0)
    for (double& w : t.weights) w = -w;
  t.skipped = skipped;
  return t;
}

namespace {

/// Walks an interface curve through the cells of one coordinate plane.
class PlaneWalker {
 public:
  PlaneWalker(const Grid& grid, std::span<const Crossing> crossings, const CrossingIndex& index, int axis_p,
              int axis_q)
      : grid_(grid), crossings_(crossings), index_(index), p_(axis_p), q_(axis_q) {}

  /// Cells adjacent to a crossing's edge within the plane: corners lo and lo - e_other.
  std::array<std::optional<Index3>, 2> cells_of(int id) const {
    const Crossing& c = crossings_[id];
    const int other = c.axis == p_ ? q_ : p_;
    Index3 corner = grid_.unflat(c.lo);
    std::array<std::optional<Index3>, 2> cells;
    if (corner[other] <= grid_.n() - 2) cells[0] = corner;
    corner[other] -= 1;
    if (corner[other] >= 0) cells[1] = corner;
    return cells;
  }

  std::vector<int> walk(int start, const std::optional<Index3>& first_cell, int max_steps) const {
    std::vector<int> out;
    if (!first_cell) return out;
    int cur = start;
    Index3 cell = *first_cell;
    for (int step = 0; step < max_steps; ++step) {
      const int next = next_in_cell(cell, cur);
      if (next < 0 || next == start) break;
      if (std::find(out.begin(), out.end(), next) != out.end()) break;
      out.push_back(next);
      const auto cells = cells_of(next);
      std::optional<Index3> other;
      for (const auto& candidate : cells)
        if (candidate && *candidate != cell) other = candidate;
      if (!other) break;
      cell = *other;
      cur = next;
    }
    return out;
  }

 private:
  int next_in_cell(const Index3& corner, int from) const {
    const std::size_t c = grid_.flat(corner);
    const std::array<int, 4> ids{index_.on_edge(c, p_), index_.on_edge(c + grid_.stride(q_), p_),
                                 index_.on_edge(c, q_), index_.on_edge(c + grid_.stride(p_), q_)};
    int best = -1;
    double best_dist = 0.0;
    for (const int id : ids) {
      if (id < 0 || id == from) continue;
      const double d = distance(crossings_[id].point, crossings_[from].point);
      if (best < 0 || d < best_dist) {
        best = id;
        best_dist = d;
      }
    }
    return best;
  }

  const Grid& grid_;
  std::span<const Crossing> crossings_;
  const CrossingIndex& index_;
  int p_;
  int q_;
};

constexpr int kWalkSteps = 6;

}  // namespace

InterfaceChains build_chains(const Grid& grid, std::span<const Crossing> crossings, const CrossingIndex& index,
                             std::vector<TangentBasis>& bases, std::size_t* missing) {
  InterfaceChains chains;
  chains.delta_min = grid.h() * grid.h();
  chains.stencils.resize(crossings.size());
  if (grid.dim() < 2) return chains;

  for (std::size_t id = 0; id < crossings.size(); ++id) {
    TangentBasis& basis = bases[id];
    const int d = crossings[id].axis;
    bool refit = false;
    for (int k = 0; k < basis.num_tangents; ++k) {
      if (!basis.active[k]) continue;
      int other = 1 - d;
      if (grid.dim() == 3) other = 3 - d - basis.slice_normal[k];
      const PlaneWalker walker(grid, crossings, index, std::min(d, other), std::max(d, other));
      const auto cells = walker.cells_of(static_cast<int>(id));
      const std::vector<int> forward = walker.walk(static_cast<int>(id), cells[0], kWalkSteps);
      const std::vector<int> backward = walker.walk(static_cast<int>(id), cells[1], kWalkSteps);
      auto stencil = select_stencil(static_cast<int>(id), backward, forward, crossings, chains.delta_min, basis.tau[k]);
      if (!stencil) {
        if (grid.dim() == 2)
          throw UnderResolvedError("interface under-resolved: fewer than three usable interface points near " +
                                   describe(crossings[id].point, grid.dim()));
        basis.active[k] = false;
        refit = true;
        if (missing) ++*missing;
        continue;
      }
      chains.skipped_close_points += static_cast<std::size_t>(stencil->skipped);
      chains.stencils[id][k] = *stencil;
    }
    if (refit) refit_coefficients(basis, d);
  }
  return chains;
}

InterfaceGeometry::InterfaceGeometry(const Grid& grid, LevelSet ls) : grid_(grid), ls_(std::move(ls)) {
  labels_ = classify_points(grid_, ls_);
  const double h = grid_.h();
  for (std::size_t node = 0; node < grid_.num_nodes(); ++node) {
    const Index3 idx = grid_.unflat(node);
    for (int axis = 0; axis < grid_.dim(); ++axis) {
      if (idx[axis] + 1 >= grid_.n()) continue;
      const std::size_t nb = node + grid_.stride(axis);
      if (labels_.sign[node] != labels_.sign[nb]) {
        crossings_.push_back(find_crossing(grid_, ls_, node, nb));
      } else if (labels_.nonstandard[node] || labels_.nonstandard[nb]) {
        // Same sign at both ends: a hidden pair of crossings is invisible to the node labels.
        const Point x = grid_.coord(node);
        for (int k = 1; k < 4; ++k) {
          if (sign_of(shifted_phi(ls_, edge_point(x, axis, h * k / 4.0), h)) != labels_.sign[node]) {
            ++diagnostics_.hidden_crossing_pairs;
            break;
          }
        }
      }
    }
  }
  index_ = CrossingIndex(grid_, crossings_);
  bases_.reserve(crossings_.size());
  for (const Crossing& c : crossings_) {
    bases_.push_back(tangent_basis(grid_.dim(), c));
    for (int k = 0; k < bases_.back().num_tangents; ++k)
      if (!bases_.back().active[k]) ++diagnostics_.degenerate_slices;
  }
  chains_ = build_chains(grid_, crossings_, index_, bases_, &diagnostics_.missing_chains);
  diagnostics_.skipped_close_points = chains_.skipped_close_points;
}

}  // namespace jumpfd
