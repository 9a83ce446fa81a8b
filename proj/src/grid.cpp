#include "jumpfd/grid.hpp"

#include <cmath>

namespace jumpfd {

Grid::Grid(int dim, int n, const Point& lo, const Point& hi)
    : dim_(dim), n_(n), lo_(lo), hi_(hi), h_(0.0), num_nodes_(1), strides_{1, 1, 1} {
  if (dim < 1 || dim > 3) throw UsageError("grid dimension must be 1, 2 or 3");
  if (n < kMinPoints) throw UsageError("grid needs at least 5 points per axis");
  h_ = (hi[0] - lo[0]) / (n - 1);
  if (!(h_ > 0.0)) throw UsageError("grid extent must be positive");
  for (int a = 1; a < dim; ++a) {
    const double ha = (hi[a] - lo[a]) / (n - 1);
    if (std::abs(ha - h_) > 1e-12 * h_) throw UsageError("grid spacing must be identical on every axis");
  }
  for (int a = dim; a < 3; ++a) {
    lo_[a] = 0.0;
    hi_[a] = 0.0;
  }
  for (int a = 0; a < dim; ++a) {
    strides_[a] = num_nodes_;
    num_nodes_ *= static_cast<std::size_t>(n);
  }
  for (int a = dim; a < 3; ++a) strides_[a] = num_nodes_;
}

Grid Grid::cube(int dim, int n, double lo, double hi) {
  return Grid(dim, n, Point{lo, lo, lo}, Point{hi, hi, hi});
}

Index3 Grid::unflat(std::size_t node) const {
  Index3 idx{0, 0, 0};
  const auto n = static_cast<std::size_t>(n_);
  for (int a = 0; a < dim_; ++a) {
    idx[a] = static_cast<int>(node % n);
    node /= n;
  }
  return idx;
}

Point Grid::coord(const Index3& idx) const {
  Point x{0.0, 0.0, 0.0};
  for (int a = 0; a < dim_; ++a) x[a] = lo_[a] + idx[a] * h_;
  return x;
}

bool Grid::in_range(const Index3& idx) const {
  for (int a = 0; a < dim_; ++a)
    if (idx[a] < 0 || idx[a] >= n_) return false;
  for (int a = dim_; a < 3; ++a)
    if (idx[a] != 0) return false;
  return true;
}

bool Grid::is_boundary(const Index3& idx) const {
  for (int a = 0; a < dim_; ++a)
    if (idx[a] == 0 || idx[a] == n_ - 1) return true;
  return false;
}

double norm(const Point& a) { return std::sqrt(dot(a, a)); }

double distance(const Point& a, const Point& b) {
  const Point d{a[0] - b[0], a[1] - b[1], a[2] - b[2]};
  return norm(d);
}

Point cross(const Point& a, const Point& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

}  // namespace jumpfd
