#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace jumpfd {

/// Position in up to three dimensions. Unused trailing components are zero.
using Point = std::array<double, 3>;

/// Integer node coordinates. Unused trailing components are zero.
using Index3 = std::array<int, 3>;

/// Caller violated a documented precondition (bad arguments, bad input data).
class UsageError : public std::invalid_argument {
 public:
  explicit UsageError(const std::string& what) : std::invalid_argument(what) {}
};

/// The interface is too poorly resolved by the grid for the discretization.
class UnderResolvedError : public std::runtime_error {
 public:
  explicit UnderResolvedError(const std::string& what) : std::runtime_error(what) {}
};

/// Uniform Cartesian node grid with N points per axis and identical spacing on every axis.
///
/// Nodes are numbered lexicographically with the x index running fastest.
class Grid {
 public:
  static constexpr int kMinPoints = 5;

  Grid(int dim, int n, const Point& lo, const Point& hi);

  /// Cube [lo, hi]^dim.
  static Grid cube(int dim, int n, double lo, double hi);

  int dim() const { return dim_; }
  int n() const { return n_; }
  double h() const { return h_; }
  const Point& lo() const { return lo_; }
  const Point& hi() const { return hi_; }

  std::size_t num_nodes() const { return num_nodes_; }
  std::size_t stride(int axis) const { return strides_[axis]; }

  std::size_t flat(const Index3& idx) const {
    return static_cast<std::size_t>(idx[0]) + strides_[1] * idx[1] + strides_[2] * idx[2];
  }
  Index3 unflat(std::size_t node) const;

  Point coord(const Index3& idx) const;
  Point coord(std::size_t node) const { return coord(unflat(node)); }

  bool in_range(const Index3& idx) const;
  bool is_boundary(const Index3& idx) const;
  bool is_boundary(std::size_t node) const { return is_boundary(unflat(node)); }

 private:
  int dim_;
  int n_;
  Point lo_;
  Point hi_;
  double h_;
  std::size_t num_nodes_;
  std::array<std::size_t, 3> strides_;
};

inline double dot(const Point& a, const Point& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
double norm(const Point& a);
double distance(const Point& a, const Point& b);
Point cross(const Point& a, const Point& b);

inline Point unit_vector(int axis) {
  Point e{0.0, 0.0, 0.0};
  e[axis] = 1.0;
  return e;
}

}  // namespace jumpfd
