#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "jumpfd/geometry.hpp"
#include "jumpfd/grid.hpp"

namespace jumpfd {

using ScalarFunction = std::function<double(const Point&)>;
using VectorFunction = std::function<Point(const Point&)>;

/// A field with one smooth branch per side of the interface. Both branches must be evaluable
/// everywhere in the domain: the scheme samples them slightly across the interface.
struct PiecewiseField {
  ScalarFunction minus;
  ScalarFunction plus;

  double operator()(Side side, const Point& x) const { return side == Side::plus ? plus(x) : minus(x); }
};

struct PiecewiseGradient {
  VectorFunction minus;
  VectorFunction plus;

  Point operator()(Side side, const Point& x) const { return side == Side::plus ? plus(x) : minus(x); }
};

struct ExactSolution {
  PiecewiseField value;
  PiecewiseGradient gradient;
};

/// Jump data on the interface: a = [u] = u+ - u-, b = [beta du/dn] with n pointing into Omega+.
struct JumpData {
  ScalarFunction a;
  ScalarFunction b;
};

/// One instance of  div(beta grad u) = f  on Omega \ Gamma with jump conditions on Gamma and
/// Dirichlet data on the box boundary.
struct ProblemSpec {
  std::string name;
  Grid grid;
  LevelSet level_set;
  PiecewiseField beta;
  PiecewiseField f;
  JumpData jumps;
  ScalarFunction dirichlet;
  std::optional<ExactSolution> exact;

  /// Side of a point by the sign of phi (phi == 0 counts as Omega+).
  Side side_of(const Point& x) const;
};

enum class ExampleId { OneD1, TwoD1, TwoD2, TwoD3, TwoD4a, TwoD4b, ThreeD1, ThreeD2 };

const std::vector<ExampleId>& all_examples();
std::string_view example_name(ExampleId id);
std::string_view example_description(ExampleId id);
/// Parses a catalog name such as "2d-4a"; throws UsageError for unknown names.
ExampleId parse_example(std::string_view name);
int example_dim(ExampleId id);

ProblemSpec make_example(ExampleId id, int n);

/// Jump data derived from an exact solution: a = u+ - u-, b = (beta+ grad u+ - beta- grad u-) . n.
JumpData jumps_from_exact(const ExactSolution& exact, const PiecewiseField& beta, const LevelSet& ls, int dim,
                          double h);

/// Checked evaluation of the jump data; throws UsageError if `x` is not on the interface.
double eval_jump_a(const ProblemSpec& spec, const Point& x);
double eval_jump_b(const ProblemSpec& spec, const Point& x);

}  // namespace jumpfd
