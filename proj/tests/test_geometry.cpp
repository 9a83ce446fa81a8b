#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "jumpfd/geometry.hpp"
#include "jumpfd/problem.hpp"

using namespace jumpfd;

namespace {

LevelSet circle(double cx, double cy, double r) {
  LevelSet ls;
  ls.phi = [=](const Point& x) { return (x[0] - cx) * (x[0] - cx) + (x[1] - cy) * (x[1] - cy) - r * r; };
  return ls;
}

LevelSet line_1d(double root) {
  LevelSet ls;
  ls.phi = [=](const Point& x) { return x[0] - root; };
  return ls;
}

void check_reconstruction(const TangentBasis& b, int axis) {
  const Point e = unit_vector(axis);
  for (int a = 0; a < 3; ++a) {
    double v = b.c[0] * b.normal[a];
    for (int k = 0; k < b.num_tangents; ++k) v += b.c[k + 1] * b.tau[k][a];
    CHECK(std::abs(v - e[a]) < 1e-10);
  }
}

}  // namespace

TEST_CASE("classify_points on the circle") {
  const Grid g = Grid::cube(2, 81, 0.0, 1.0);
  const PointLabels labels = classify_points(g, circle(0.5, 0.5, 0.25));
  CHECK(labels.sign[g.flat({40, 40, 0})] == -1);
  CHECK(labels.sign[g.flat({0, 0, 0})] == 1);
  const PointLabels again = classify_points(g, circle(0.5, 0.5, 0.25));
  CHECK(again.sign == labels.sign);
  CHECK(again.nonstandard == labels.nonstandard);
}

TEST_CASE("classify_points without an interface") {
  const Grid g = Grid::cube(2, 21, 0.0, 1.0);
  LevelSet ls;
  ls.phi = [](const Point&) { return 1.0; };
  const PointLabels labels = classify_points(g, ls);
  CHECK(labels.num_nonstandard == 0);
  for (auto s : labels.sign) CHECK(s == 1);
}

TEST_CASE("classify_points in 1D brackets the interface") {
  const Grid g = Grid::cube(1, 61, 0.0, 1.0);
  const double x_i = 2.0 - std::numbers::sqrt2;
  const PointLabels labels = classify_points(g, line_1d(x_i));
  for (std::size_t k = 0; k < g.num_nodes(); ++k) CHECK(labels.sign[k] == (g.coord(k)[0] < x_i ? -1 : 1));
  CHECK(labels.num_nonstandard == 2);
  CHECK(labels.nonstandard[35] == 1);
  CHECK(labels.nonstandard[36] == 1);
}

TEST_CASE("a node on the interface counts as plus") {
  const Grid g = Grid::cube(1, 11, 0.0, 1.0);
  const PointLabels labels = classify_points(g, line_1d(0.5));
  CHECK(labels.sign[5] == 1);
  CHECK(labels.sign[4] == -1);
}

TEST_CASE("find_crossing examples") {
  SUBCASE("midpoint root") {
    const Grid g = Grid::cube(1, 6, 0.0, 1.0);
    const Crossing c = find_crossing(g, line_1d(0.5), 2, 3);
    CHECK(c.point[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(c.theta == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(c.mid_lo[0] == doctest::Approx(0.45));
    CHECK(c.mid_hi[0] == doctest::Approx(0.55));
    CHECK(c.lo_side == Side::minus);
    CHECK(c.normal[0] == doctest::Approx(1.0));
  }
  SUBCASE("1D-1 edge") {
    const Grid g = Grid::cube(1, 61, 0.0, 1.0);
    const double x_i = 2.0 - std::numbers::sqrt2;
    const Crossing c = find_crossing(g, line_1d(x_i), 35, 36);
    CHECK(std::abs(c.point[0] - x_i) < 1e-13);
    CHECK(c.theta == doctest::Approx((0.6 - x_i) * 60.0).epsilon(1e-10));
  }
  SUBCASE("nonlinear root") {
    const Grid g = Grid(1, 5, Point{0, 0, 0}, Point{4, 0, 0});
    LevelSet ls;
    ls.phi = [](const Point& x) { return x[0] * x[0] - 2.0; };
    const Crossing c = find_crossing(g, ls, 1, 2);
    CHECK(std::abs(c.point[0] - std::numbers::sqrt2) < 1e-12);
  }
  SUBCASE("errors") {
    const Grid g = Grid::cube(1, 6, 0.0, 1.0);
    CHECK_THROWS_AS(find_crossing(g, line_1d(0.5), 0, 1), UsageError);
    CHECK_THROWS_AS(find_crossing(g, line_1d(0.5), 1, 3), UsageError);
    LevelSet wiggle;
    wiggle.phi = [](const Point& x) { return (x[0] - 0.41) * (x[0] - 0.45) * (x[0] - 0.55); };
    CHECK_THROWS_AS(find_crossing(g, wiggle, 2, 3), UnderResolvedError);
  }
}

TEST_CASE("crossings lie on the interface with unit normals") {
  const auto spec = make_example(ExampleId::TwoD3, 81);
  const InterfaceGeometry geo(spec.grid, spec.level_set);
  REQUIRE(!geo.crossings().empty());
  for (const Crossing& c : geo.crossings()) {
    const Point n = unit_normal(spec.level_set, c.point, spec.grid.h(), 2);
    CHECK(std::abs(spec.level_set(c.point)) <= 1e-10 * norm(spec.level_set.gradient(c.point)));
    CHECK(std::abs(norm(c.normal) - 1.0) < 1e-12);
    CHECK(dot(n, c.normal) > 0.999);
    CHECK(c.theta >= kThetaMin);
    CHECK(c.theta <= 1.0 - kThetaMin);
    CHECK(geo.labels().sign[c.lo] != geo.labels().sign[c.hi]);
  }
}

TEST_CASE("tangent basis examples") {
  SUBCASE("normal along x in 2D") {
    const TangentBasis b = tangent_basis(2, Point{1, 0, 0}, 0);
    CHECK(b.c[0] == doctest::Approx(1.0));
    CHECK(std::abs(b.c[1]) < 1e-15);
  }
  SUBCASE("normal along x in 3D") {
    const TangentBasis b = tangent_basis(3, Point{1, 0, 0}, 0);
    CHECK(b.c[0] == doctest::Approx(1.0));
    CHECK(std::abs(b.c[1]) < 1e-15);
    CHECK(std::abs(b.c[2]) < 1e-15);
  }
  SUBCASE("45 degrees in 2D") {
    const double s = std::sqrt(0.5);
    const TangentBasis b = tangent_basis(2, Point{s, s, 0}, 0);
    CHECK(b.c[0] == doctest::Approx(s));
    CHECK(std::abs(b.c[1]) == doctest::Approx(s));
    check_reconstruction(b, 0);
  }
  SUBCASE("3D tangents lie in coordinate planes") {
    const Point n{0.48, 0.6, 0.64};
    for (int axis = 0; axis < 3; ++axis) {
      const TangentBasis b = tangent_basis(3, n, axis);
      REQUIRE(b.num_tangents == 2);
      CHECK(std::abs(b.tau[0][(axis + 2) % 3]) < 1e-14);
      CHECK(std::abs(b.tau[1][(axis + 1) % 3]) < 1e-14);
      check_reconstruction(b, axis);
    }
  }
}

TEST_CASE("tangent basis reconstruction on catalog interfaces") {
  std::mt19937 rng(7);
  for (ExampleId id : {ExampleId::TwoD1, ExampleId::TwoD3, ExampleId::ThreeD1, ExampleId::ThreeD2}) {
    const auto spec = make_example(id, 41);
    const InterfaceGeometry geo(spec.grid, spec.level_set);
    const auto& xs = geo.crossings();
    std::uniform_int_distribution<std::size_t> pick(0, xs.size() - 1);
    for (int t = 0; t < 250; ++t) {
      const std::size_t c = pick(rng);
      check_reconstruction(geo.bases()[c], xs[c].axis);
    }
  }
}

TEST_CASE("derivative fit weights") {
  SUBCASE("three points reproduce the Lagrange formula") {
    const std::vector<double> s{-1.0, 0.0, 2.0};
    const auto w = fit_derivative_weights(s);
    CHECK(w[0] == doctest::Approx(-2.0 / 3.0));
    CHECK(w[1] == doctest::Approx(0.5));
    CHECK(w[2] == doctest::Approx(1.0 / 6.0));
  }
  SUBCASE("exact for quadratics") {
    const std::vector<double> s{-0.031, -0.012, 0.0, 0.009, 0.027};
    const auto w = fit_derivative_weights(s);
    double d = 0.0;
    for (std::size_t k = 0; k < s.size(); ++k) d += w[k] * (2.0 + 3.0 * s[k] - 7.0 * s[k] * s[k]);
    CHECK(d == doctest::Approx(3.0).epsilon(1e-10));
  }
}

namespace {

std::vector<Crossing> points_on_x_axis(const std::vector<double>& xs) {
  std::vector<Crossing> out(xs.size());
  for (std::size_t k = 0; k < xs.size(); ++k) out[k].point = {xs[k], 0.0, 0.0};
  return out;
}

double apply(const TangentStencil& t, const std::vector<Crossing>& pts, double (*f)(double)) {
  double d = 0.0;
  for (std::size_t k = 0; k < t.ids.size(); ++k) d += t.weights[k] * f(pts[t.ids[k]].point[0]);
  return d;
}

double quad(double s) { return 1.0 + 3.0 * s + 5.0 * s * s; }

}  // namespace

TEST_CASE("stencil selection") {
  const double h = 0.05;
  const double dmin = h * h;
  const Point tau{1, 0, 0};
  SUBCASE("three points use the full set") {
    const auto pts = points_on_x_axis({0.0, -0.04, 0.05});
    const std::vector<int> back{1}, fwd{2};
    const auto t = select_stencil(0, back, fwd, pts, dmin, tau);
    REQUIRE(t);
    CHECK(t->ids == std::vector<int>{1, 0, 2});
    CHECK(apply(*t, pts, quad) == doctest::Approx(3.0));
  }
  SUBCASE("a point closer than the minimum gap is skipped") {
    const auto pts = points_on_x_axis({0.0, -dmin / 2.0, -0.05, -0.1, 0.04, 0.09});
    const std::vector<int> back{1, 2, 3}, fwd{4, 5};
    const auto t = select_stencil(0, back, fwd, pts, dmin, tau);
    REQUIRE(t);
    CHECK(t->skipped == 1);
    CHECK(std::find(t->ids.begin(), t->ids.end(), 1) == t->ids.end());
    CHECK(apply(*t, pts, quad) == doctest::Approx(3.0));
    for (std::size_t k = 1; k < t->s.size(); ++k) CHECK(t->s[k] - t->s[k - 1] >= dmin);
  }
  SUBCASE("chain end falls back to one side") {
    const auto pts = points_on_x_axis({0.0, 0.04, 0.09});
    const std::vector<int> back{}, fwd{1, 2};
    const auto t = select_stencil(0, back, fwd, pts, dmin, tau);
    REQUIRE(t);
    CHECK(t->one_sided);
    CHECK(apply(*t, pts, quad) == doctest::Approx(3.0));
  }
  SUBCASE("orientation follows the tangent") {
    const auto pts = points_on_x_axis({0.0, -0.04, 0.05});
    const std::vector<int> back{1}, fwd{2};
    const auto t = select_stencil(0, back, fwd, pts, dmin, Point{-1, 0, 0});
    REQUIRE(t);
    CHECK(apply(*t, pts, quad) == doctest::Approx(-3.0));
  }
  SUBCASE("too few points") {
    const auto pts = points_on_x_axis({0.0, 0.04});
    const std::vector<int> back{}, fwd{1};
    CHECK_FALSE(select_stencil(0, back, fwd, pts, dmin, tau));
  }
}

TEST_CASE("chains on a circle") {
  const Grid g = Grid::cube(2, 81, 0.0, 1.0);
  LevelSet ls = circle(0.5, 0.5, 0.25);
  const InterfaceGeometry geo(g, ls);
  const auto& xs = geo.crossings();
  const double dmin = g.h() * g.h();
  CHECK(geo.chains().delta_min == doctest::Approx(dmin));
  for (std::size_t c = 0; c < xs.size(); ++c) {
    const auto& t = geo.chains().stencils[c][0];
    REQUIRE(t.has_value());
    CHECK(t->ids.size() >= 3);
    for (std::size_t k = 1; k < t->ids.size(); ++k)
      CHECK(distance(xs[t->ids[k]].point, xs[t->ids[k - 1]].point) >= dmin);
    for (int id : t->ids) CHECK(std::abs(ls(xs[id].point)) < 1e-12);
  }
}

TEST_CASE("tangential derivative along a circle is second order") {
  // u = x y restricted to the circle; du/dtau = grad u . tau.
  auto max_error = [](int n) {
    const Grid g = Grid::cube(2, n, 0.0, 1.0);
    const InterfaceGeometry geo(g, circle(0.5, 0.5, 0.25));
    const auto& xs = geo.crossings();
    double worst = 0.0;
    for (std::size_t c = 0; c < xs.size(); ++c) {
      const auto& t = *geo.chains().stencils[c][0];
      double d = 0.0;
      for (std::size_t k = 0; k < t.ids.size(); ++k) {
        const Point& p = xs[t.ids[k]].point;
        d += t.weights[k] * std::sin(3.0 * p[0]) * p[1];
      }
      const Point& x = xs[c].point;
      const Point grad{3.0 * std::cos(3.0 * x[0]) * x[1], std::sin(3.0 * x[0]), 0.0};
      worst = std::max(worst, std::abs(d - dot(grad, geo.bases()[c].tau[0])));
    }
    return worst;
  };
  const double e1 = max_error(41), e2 = max_error(81), e3 = max_error(161);
  CHECK(e1 / e2 > 3.0);
  CHECK(e2 / e3 > 3.0);
}

TEST_CASE("derivative along the interface ignores values off the interface") {
  const Grid g = Grid::cube(2, 41, 0.0, 1.0);
  LevelSet ls = circle(0.5, 0.5, 0.25);
  const Point x{0.5 + 0.25 * std::cos(0.7), 0.5 + 0.25 * std::sin(0.7), 0.0};
  const Point tau{-std::sin(0.7), std::cos(0.7), 0.0};
  // g = angle plus a term that vanishes on the circle; d/ds of the angle is 1 / radius.
  auto gfun = [&](const Point& p) { return std::atan2(p[1] - 0.5, p[0] - 0.5) + 50.0 * ls(p); };
  CHECK(derivative_along_interface(ls, gfun, x, tau, g.h(), 2) == doctest::Approx(4.0).epsilon(1e-6));
}

TEST_CASE("nonstandard count grows like N in 2D") {
  std::vector<double> counts;
  for (int n : {21, 41, 81, 161}) {
    counts.push_back(static_cast<double>(classify_points(Grid::cube(2, n, 0.0, 1.0), circle(0.5, 0.5, 0.25)).num_nonstandard));
  }
  for (std::size_t k = 1; k < counts.size(); ++k) {
    const double ratio = counts[k] / counts[k - 1];
    CHECK(ratio >= 1.7);
    CHECK(ratio <= 2.3);
  }
}
