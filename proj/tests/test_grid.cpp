#include "doctest.h"
#include "jumpfd/grid.hpp"

using namespace jumpfd;

TEST_CASE("grid spacing and node numbering") {
  const Grid g = Grid::cube(2, 11, 0.0, 1.0);
  CHECK(g.h() == doctest::Approx(0.1));
  CHECK(g.num_nodes() == 121);
  CHECK(g.stride(1) == 11);
  for (std::size_t k = 0; k < g.num_nodes(); ++k) CHECK(g.flat(g.unflat(k)) == k);
  const Point x = g.coord(Index3{3, 7, 0});
  CHECK(x[0] == doctest::Approx(0.3));
  CHECK(x[1] == doctest::Approx(0.7));
  CHECK(x[2] == 0.0);
}

TEST_CASE("boundary nodes") {
  const Grid g = Grid::cube(3, 5, -1.0, 1.0);
  CHECK(g.is_boundary(Index3{0, 2, 2}));
  CHECK(g.is_boundary(Index3{2, 2, 4}));
  CHECK_FALSE(g.is_boundary(Index3{1, 2, 3}));
  CHECK(g.in_range(Index3{4, 4, 4}));
  CHECK_FALSE(g.in_range(Index3{5, 0, 0}));
}

TEST_CASE("grid preconditions") {
  CHECK_THROWS_AS(Grid::cube(2, 4, 0.0, 1.0), UsageError);
  CHECK_THROWS_AS(Grid::cube(4, 11, 0.0, 1.0), UsageError);
  CHECK_THROWS_AS(Grid(2, 11, Point{0, 0, 0}, Point{1, 2, 0}), UsageError);
  CHECK_THROWS_AS(Grid::cube(1, 11, 1.0, 1.0), UsageError);
}

TEST_CASE("vector helpers") {
  CHECK(norm(Point{3, 4, 0}) == doctest::Approx(5.0));
  CHECK(distance(Point{1, 1, 1}, Point{1, 1, 3}) == doctest::Approx(2.0));
  const Point c = cross(unit_vector(0), unit_vector(1));
  CHECK(c[2] == doctest::Approx(1.0));
}
