#include "jumpfd/problem.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace jumpfd {

namespace {

struct CatalogEntry {
  ExampleId id;
  std::string_view name;
  std::string_view description;
  int dim;
};

constexpr std::array<CatalogEntry, 8> kCatalog{{
    {ExampleId::OneD1, "1d-1", "1D, beta 100/200, interface at 2 - sqrt(2)", 1},
    {ExampleId::TwoD1, "2d-1", "2D circle, constant beta 2/1", 2},
    {ExampleId::TwoD2, "2d-2", "2D circle, variable beta- = 1 + r^2", 2},
    {ExampleId::TwoD3, "2d-3", "2D five-petal star, variable beta on both sides", 2},
    {ExampleId::TwoD4a, "2d-4a", "2D circle, high contrast beta+/beta- = 0.02/1", 2},
    {ExampleId::TwoD4b, "2d-4b", "2D circle, high contrast beta+/beta- = 20/1", 2},
    {ExampleId::ThreeD1, "3d-1", "3D sphere, variable beta", 3},
    {ExampleId::ThreeD2, "3d-2", "3D torus, variable beta", 3},
}};

const CatalogEntry& entry(ExampleId id) {
  for (const auto& e : kCatalog)
    if (e.id == id) return e;
  throw UsageError("unknown example id");
}

double r2(const Point& x) { return x[0] * x[0] + x[1] * x[1] + x[2] * x[2]; }

ScalarFunction constant(double v) {
  return [v](const Point&) { return v; };
}

VectorFunction zero_vector() {
  return [](const Point&) { return Point{0.0, 0.0, 0.0}; };
}

LevelSet sphere(const Point& c, double radius) {
  LevelSet ls;
  ls.phi = [c, radius](const Point& x) {
    const double dx = x[0] - c[0], dy = x[1] - c[1], dz = x[2] - c[2];
    return dx * dx + dy * dy + dz * dz - radius * radius;
  };
  ls.gradient = [c](const Point& x) { return Point{2.0 * (x[0] - c[0]), 2.0 * (x[1] - c[1]), 2.0 * (x[2] - c[2])}; };
  return ls;
}

// Polar star r = 0.5 + 0.2 sin(5t) about (0.02 sqrt 5, 0.02 sqrt 5); phi = r - R(t).
LevelSet star() {
  const double c = 0.02 * std::sqrt(5.0);
  LevelSet ls;
  ls.phi = [c](const Point& x) {
    const double dx = x[0] - c, dy = x[1] - c;
    const double t = std::atan2(dy, dx);
    return std::hypot(dx, dy) - (0.5 + 0.2 * std::sin(5.0 * t));
  };
  ls.gradient = [c](const Point& x) {
    const double dx = x[0] - c, dy = x[1] - c;
    const double r = std::hypot(dx, dy);
    const double t = std::atan2(dy, dx);
    const double dR = std::cos(5.0 * t);  // dR/dt
    const double ct = std::cos(t), st = std::sin(t);
    return Point{ct + dR * st / r, st - dR * ct / r, 0.0};
  };
  return ls;
}

LevelSet torus(double big_r, double small_r) {
  LevelSet ls;
  const double k = big_r * big_r - small_r * small_r;
  const double four_r2 = 4.0 * big_r * big_r;
  ls.phi = [k, four_r2](const Point& x) {
    const double s = r2(x) + k;
    return s * s - four_r2 * (x[0] * x[0] + x[1] * x[1]);
  };
  ls.gradient = [k, four_r2](const Point& x) {
    const double s = r2(x) + k;
    return Point{4.0 * s * x[0] - 2.0 * four_r2 * x[0], 4.0 * s * x[1] - 2.0 * four_r2 * x[1], 4.0 * s * x[2]};
  };
  return ls;
}

// u = exp(+r^2) and u = exp(-r^2) with their gradients, shared by several examples.
ScalarFunction exp_pos() {
  return [](const Point& x) { return std::exp(r2(x)); };
}
ScalarFunction exp_neg() {
  return [](const Point& x) { return std::exp(-r2(x)); };
}
VectorFunction grad_exp_pos() {
  return [](const Point& x) {
    const double e = 2.0 * std::exp(r2(x));
    return Point{e * x[0], e * x[1], e * x[2]};
  };
}
VectorFunction grad_exp_neg() {
  return [](const Point& x) {
    const double e = -2.0 * std::exp(-r2(x));
    return Point{e * x[0], e * x[1], e * x[2]};
  };
}

struct Parts {
  Grid grid;
  LevelSet ls;
  PiecewiseField beta;
  PiecewiseField f;
  ExactSolution exact;
};

Parts one_d_1(int n) {
  Parts p{Grid::cube(1, n, 0.0, 1.0), {}, {}, {}, {}};
  const double x_i = 2.0 - std::numbers::sqrt2;
  p.ls.phi = [x_i](const Point& x) { return x[0] - x_i; };
  p.ls.gradient = [](const Point&) { return Point{1.0, 0.0, 0.0}; };
  p.beta = {constant(100.0), constant(200.0)};
  p.f = {[](const Point& x) { return 100.0 * std::exp(-x[0]); },
         [](const Point& x) { return 100.0 * std::exp(-x[0]) + 200.0; }};
  p.exact.value = {[](const Point& x) { return std::exp(-x[0]) - 0.3646 * x[0] + 0.4; },
                   [](const Point& x) { return std::exp(-x[0]) / 2.0 + x[0] * x[0] / 2.0 + 0.5005 * x[0]; }};
  p.exact.gradient = {[](const Point& x) { return Point{-std::exp(-x[0]) - 0.3646, 0.0, 0.0}; },
                      [](const Point& x) { return Point{-std::exp(-x[0]) / 2.0 + x[0] + 0.5005, 0.0, 0.0}; }};
  return p;
}

Parts two_d_1(int n) {
  Parts p{Grid::cube(2, n, 0.0, 1.0), sphere({0.5, 0.5, 0.0}, 0.25), {}, {}, {}};
  p.beta = {constant(2.0), constant(1.0)};
  p.f = {[](const Point& x) { return 8.0 * (r2(x) - 1.0) * std::exp(-r2(x)); }, constant(0.0)};
  p.exact.value = {exp_neg(), constant(0.0)};
  p.exact.gradient = {grad_exp_neg(), zero_vector()};
  return p;
}

// u- = exp(r^2) with beta- = 1 + r^2, shared by 2d-2 and 2d-3.
ScalarFunction f_minus_variable() {
  return [](const Point& x) {
    const double s = r2(x);
    return 4.0 * ((s + 1.0) * (s + 1.0) + s) * std::exp(s);
  };
}

Parts two_d_2(int n) {
  Parts p{Grid::cube(2, n, 0.0, 1.0), sphere({0.5, 0.5, 0.0}, 0.25), {}, {}, {}};
  p.beta = {[](const Point& x) { return r2(x) + 1.0; }, constant(1.0)};
  p.f = {f_minus_variable(), [](const Point& x) { return 4.0 * (r2(x) - 1.0) * std::exp(-r2(x)); }};
  p.exact.value = {exp_pos(), exp_neg()};
  p.exact.gradient = {grad_exp_pos(), grad_exp_neg()};
  return p;
}

Parts two_d_3(int n) {
  Parts p{Grid::cube(2, n, -1.0, 1.0), star(), {}, {}, {}};
  p.beta = {[](const Point& x) { return r2(x) + 1.0; }, [](const Point& x) { return std::sqrt(r2(x) + 2.0); }};
  p.f = {f_minus_variable(), [](const Point& x) {
           const double s = r2(x);
           const double b = std::sqrt(s + 2.0);
           return (4.0 * b * (s - 1.0) - 2.0 * s / b) * std::exp(-s);
         }};
  p.exact.value = {exp_pos(), exp_neg()};
  p.exact.gradient = {grad_exp_pos(), grad_exp_neg()};
  return p;
}

Parts two_d_4(int n, double beta_plus) {
  Parts p{Grid::cube(2, n, 0.0, 1.0), sphere({0.5, 0.5, 0.0}, 0.25), {}, {}, {}};
  const double beta_minus = 1.0;
  p.beta = {constant(beta_minus), constant(beta_plus)};
  p.f = {[beta_minus](const Point& x) { return 4.0 * beta_minus * (r2(x) + 1.0) * std::exp(r2(x)); },
         [beta_plus](const Point& x) { return 4.0 * beta_plus * (r2(x) - 1.0) * std::exp(-r2(x)); }};
  p.exact.value = {exp_pos(), exp_neg()};
  p.exact.gradient = {grad_exp_pos(), grad_exp_neg()};
  return p;
}

Parts three_d(int n, bool use_torus) {
  Parts p{use_torus ? Grid::cube(3, n, -1.0, 1.0) : Grid::cube(3, n, 0.0, 1.0),
          use_torus ? torus(0.501 + std::numbers::sqrt2 / 10.0, 0.251) : sphere({0.5, 0.5, 0.5}, 0.25),
          {},
          {},
          {}};
  p.beta = {[](const Point& x) { return 10.0 + std::sin(x[0] * x[1] + x[2]); },
            [](const Point& x) { return 10.0 + std::cos(x[0] + x[1] * x[2]); }};
  p.f = {[](const Point& x) {
           const double s = r2(x);
           const double arg = x[0] * x[1] + x[2];
           const double b = 10.0 + std::sin(arg);
           return (4.0 * b * (s + 1.5) + (4.0 * x[0] * x[1] + 2.0 * x[2]) * std::cos(arg)) * std::exp(s);
         },
         constant(0.0)};
  p.exact.value = {exp_pos(), constant(0.0)};
  p.exact.gradient = {grad_exp_pos(), zero_vector()};
  return p;
}

}  // namespace

Side ProblemSpec::side_of(const Point& x) const { return level_set.phi(x) >= 0.0 ? Side::plus : Side::minus; }

const std::vector<ExampleId>& all_examples() {
  static const std::vector<ExampleId> ids = [] {
    std::vector<ExampleId> v;
    for (const auto& e : kCatalog) v.push_back(e.id);
    return v;
  }();
  return ids;
}

std::string_view example_name(ExampleId id) { return entry(id).name; }
std::string_view example_description(ExampleId id) { return entry(id).description; }
int example_dim(ExampleId id) { return entry(id).dim; }

ExampleId parse_example(std::string_view name) {
  for (const auto& e : kCatalog)
    if (e.name == name) return e.id;
  throw UsageError("unknown example '" + std::string(name) + "'");
}

JumpData jumps_from_exact(const ExactSolution& exact, const PiecewiseField& beta, const LevelSet& ls, int dim,
                          double h) {
  JumpData j;
  j.a = [value = exact.value](const Point& x) { return value.plus(x) - value.minus(x); };
  j.b = [gradient = exact.gradient, beta, ls, dim, h](const Point& x) {
    const Point n = unit_normal(ls, x, h, dim);
    return beta.plus(x) * dot(gradient.plus(x), n) - beta.minus(x) * dot(gradient.minus(x), n);
  };
  return j;
}

ProblemSpec make_example(ExampleId id, int n) {
  if (n < Grid::kMinPoints) throw UsageError("resolution must be at least 5");
  Parts parts = [&] {
    switch (id) {
      case ExampleId::OneD1: return one_d_1(n);
      case ExampleId::TwoD1: return two_d_1(n);
      case ExampleId::TwoD2: return two_d_2(n);
      case ExampleId::TwoD3: return two_d_3(n);
      case ExampleId::TwoD4a: return two_d_4(n, 0.02);
      case ExampleId::TwoD4b: return two_d_4(n, 20.0);
      case ExampleId::ThreeD1: return three_d(n, false);
      case ExampleId::ThreeD2: return three_d(n, true);
    }
    throw UsageError("unknown example id");
  }();

  ProblemSpec spec{std::string(example_name(id)), parts.grid, parts.ls, parts.beta, parts.f, {}, {}, parts.exact};
  spec.jumps = jumps_from_exact(parts.exact, parts.beta, parts.ls, parts.grid.dim(), parts.grid.h());
  spec.dirichlet = [value = parts.exact.value, ls = parts.ls](const Point& x) {
    return ls.phi(x) > 0.0 ? value.plus(x) : value.minus(x);
  };
  return spec;
}

namespace {

void require_on_interface(const ProblemSpec& spec, const Point& x) {
  const double phi = spec.level_set.phi(x);
  const Point n_unnormalized = [&] {
    if (spec.level_set.gradient) return spec.level_set.gradient(x);
    return Point{1.0, 0.0, 0.0};
  }();
  const double scale = 1.0 + norm(n_unnormalized);
  if (std::abs(phi) > 1e-8 * scale) throw UsageError("jump data requested at a point off the interface");
}

}  // namespace

double eval_jump_a(const ProblemSpec& spec, const Point& x) {
  require_on_interface(spec, x);
  return spec.jumps.a(x);
}

double eval_jump_b(const ProblemSpec& spec, const Point& x) {
  require_on_interface(spec, x);
  return spec.jumps.b(x);
}

}  // namespace jumpfd
