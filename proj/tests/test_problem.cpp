#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "jumpfd/problem.hpp"
#include "oracles.hpp"

using namespace jumpfd;

TEST_CASE("catalog names") {
  CHECK(all_examples().size() == 8);
  for (ExampleId id : all_examples()) CHECK(parse_example(example_name(id)) == id);
  CHECK(parse_example("2d-4b") == ExampleId::TwoD4b);
  CHECK_THROWS_AS(parse_example("nope"), UsageError);
  CHECK_THROWS_AS(make_example(ExampleId::TwoD1, 4), UsageError);
}

TEST_CASE("1d-1 data") {
  const auto spec = make_example(ExampleId::OneD1, 61);
  const Point x_i{2.0 - std::numbers::sqrt2, 0.0, 0.0};
  CHECK(spec.grid.dim() == 1);
  CHECK(spec.grid.h() == doctest::Approx(1.0 / 60.0));
  CHECK(spec.beta(Side::minus, x_i) == 100.0);
  CHECK(spec.beta(Side::plus, x_i) == 200.0);
  // The printed coefficients are rounded, so [u] is only close to zero.
  CHECK(std::abs(eval_jump_a(spec, x_i)) < 1e-5);
  CHECK(std::abs(eval_jump_b(spec, x_i) - 253.72) <= 0.005);
}

TEST_CASE("2d-1 data") {
  const auto spec = make_example(ExampleId::TwoD1, 81);
  const Point p{0.75, 0.5, 0.0};
  CHECK(spec.beta(Side::minus, p) == 2.0);
  CHECK(spec.beta(Side::plus, p) == 1.0);
  CHECK(spec.side_of(Point{0.5, 0.5, 0.0}) == Side::minus);
  CHECK(eval_jump_a(spec, p) == doctest::Approx(-std::exp(-0.8125)));
  CHECK_THROWS_AS(eval_jump_a(spec, Point{0.5, 0.5, 0.0}), UsageError);
  CHECK_THROWS_AS(eval_jump_b(spec, Point{0.9, 0.9, 0.0}), UsageError);
}

TEST_CASE("3d-1 coefficients") {
  const auto spec = make_example(ExampleId::ThreeD1, 41);
  const Point x{0.3, 0.4, 0.2};
  CHECK(spec.beta(Side::minus, x) == doctest::Approx(10.0 + std::sin(0.12 + 0.2)));
  CHECK(spec.beta(Side::plus, x) == doctest::Approx(10.0 + std::cos(0.3 + 0.08)));
  CHECK(spec.side_of(Point{0.5, 0.5, 0.5}) == Side::minus);
}

TEST_CASE("catalog sources satisfy the PDE") {
  std::mt19937 rng(11);
  for (ExampleId id : all_examples()) {
    const auto spec = make_example(id, 21);
    const int dim = spec.grid.dim();
    std::uniform_real_distribution<double> coord(spec.grid.lo()[0], spec.grid.hi()[0]);
    int checked = 0;
    while (checked < 500) {
      Point x{0.0, 0.0, 0.0};
      for (int a = 0; a < dim; ++a) x[a] = coord(rng);
      if (std::abs(spec.level_set(x)) < 1e-2) continue;
      const Side s = spec.side_of(x);
      const auto beta = [&](const Point& y) { return spec.beta(s, y); };
      const auto u = [&](const Point& y) { return spec.exact->value(s, y); };
      const double f = spec.f(s, x);
      CHECK(std::abs(oracle::divergence(beta, u, x, dim) - f) <= 1e-6 * (1.0 + std::abs(f)));
      ++checked;
    }
  }
}

TEST_CASE("jump data matches one-sided differences of the exact solution") {
  for (ExampleId id : {ExampleId::TwoD2, ExampleId::TwoD3, ExampleId::ThreeD2}) {
    const auto spec = make_example(id, 41);
    const InterfaceGeometry geo(spec.grid, spec.level_set);
    const double eps = 1e-6;
    for (std::size_t c = 0; c < geo.crossings().size(); c += 7) {
      const Crossing& x = geo.crossings()[c];
      const Point& p = x.point;
      const Point& n = x.normal;
      const Point out{p[0] + eps * n[0], p[1] + eps * n[1], p[2] + eps * n[2]};
      const Point in{p[0] - eps * n[0], p[1] - eps * n[1], p[2] - eps * n[2]};
      const double du_plus = (spec.exact->value.plus(out) - spec.exact->value.plus(p)) / eps;
      const double du_minus = (spec.exact->value.minus(p) - spec.exact->value.minus(in)) / eps;
      const double b_fd = spec.beta.plus(p) * du_plus - spec.beta.minus(p) * du_minus;
      const double a_fd = spec.exact->value.plus(p) - spec.exact->value.minus(p);
      CHECK(eval_jump_a(spec, p) == doctest::Approx(a_fd).epsilon(1e-12));
      CHECK(std::abs(eval_jump_b(spec, p) - b_fd) < 1e-3 * (1.0 + std::abs(b_fd)));
    }
  }
}

TEST_CASE("no jump without a discontinuity") {
  ExactSolution ex;
  ex.value = {[](const Point& x) { return std::sin(x[0]) * x[1]; }, [](const Point& x) { return std::sin(x[0]) * x[1]; }};
  ex.gradient = {[](const Point& x) { return Point{std::cos(x[0]) * x[1], std::sin(x[0]), 0.0}; },
                 [](const Point& x) { return Point{std::cos(x[0]) * x[1], std::sin(x[0]), 0.0}; }};
  PiecewiseField beta{[](const Point&) { return 3.0; }, [](const Point&) { return 3.0; }};
  LevelSet ls;
  ls.phi = [](const Point& x) { return x[0] * x[0] + x[1] * x[1] - 0.25; };
  const JumpData j = jumps_from_exact(ex, beta, ls, 2, 0.01);
  const Point p{0.3, 0.4, 0.0};
  CHECK(j.a(p) == 0.0);
  CHECK(std::abs(j.b(p)) < 1e-14);
}

TEST_CASE("boundary data agrees with the exact solution") {
  for (ExampleId id : all_examples()) {
    const auto spec = make_example(id, 11);
    for (std::size_t k = 0; k < spec.grid.num_nodes(); ++k) {
      if (!spec.grid.is_boundary(k)) continue;
      const Point x = spec.grid.coord(k);
      CHECK(std::abs(spec.dirichlet(x) - spec.exact->value(spec.side_of(x), x)) <= 1e-12);
    }
  }
}
