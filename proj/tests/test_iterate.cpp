#include <cmath>

#include "doctest.h"
#include "jumpfd/iterate.hpp"

using namespace jumpfd;

TEST_CASE("relax_step") {
  const std::vector<double> u_km1{0.0, 0.0};
  const std::vector<double> u_k{1.0, 0.0};
  const std::vector<double> F_prev{10.0, 10.0};
  const std::vector<double> F_trial{20.0, 0.0};

  SUBCASE("contracting step is taken whole") {
    const std::vector<double> u_t{1.5, 0.0};
    const auto r = relax_step(u_k, u_km1, F_prev, F_trial, u_t, 0.95);
    CHECK(r.ratio == doctest::Approx(0.5));
    CHECK(r.alpha == 1.0);
    CHECK(r.u == u_t);
    CHECK(r.F == F_trial);
  }
  SUBCASE("expanding step is damped to rho") {
    const std::vector<double> u_t{3.0, 0.0};
    const auto r = relax_step(u_k, u_km1, F_prev, F_trial, u_t, 0.9);
    CHECK(r.ratio == doctest::Approx(2.0));
    CHECK(r.alpha == doctest::Approx(0.45));
    CHECK(max_abs_diff(r.u, u_k) == doctest::Approx(0.9));
    CHECK(r.F[0] == doctest::Approx(0.45 * 20.0 + 0.55 * 10.0));
    CHECK(r.F[1] == doctest::Approx(0.55 * 10.0));
  }
  SUBCASE("fixed point") {
    const auto r = relax_step(u_k, u_km1, F_prev, F_prev, u_k, 0.9);
    CHECK(r.alpha == 1.0);
    CHECK(r.u == u_k);
  }
}

TEST_CASE("check_stop") {
  const double h = 0.1;
  CHECK(check_stop(Stopping::standard(), 3, 0.009, 0.09, h));
  CHECK_FALSE(check_stop(Stopping::standard(), 3, 0.011, 0.09, h));
  CHECK_FALSE(check_stop(Stopping::standard(), 3, 0.009, 0.11, h));
  CHECK(check_stop(Stopping::u_only(), 3, 0.009, 5.0, h));
  CHECK_FALSE(check_stop(Stopping::fixed(5), 4, 0.0, 0.0, h));
  CHECK(check_stop(Stopping::fixed(5), 5, 1.0, 1.0, h));
}

TEST_CASE("parse_stopping") {
  CHECK(parse_stopping("standard").kind == Stopping::Kind::standard);
  CHECK(parse_stopping("u-only").kind == Stopping::Kind::u_only);
  const Stopping s = parse_stopping("fixed:7");
  CHECK(s.kind == Stopping::Kind::fixed);
  CHECK(s.count == 7);
  CHECK(to_string(s) == "fixed:7");
  for (const char* bad : {"fixed:", "fixed:0", "fixed:2x", "loose", ""}) CHECK_THROWS_AS(parse_stopping(bad), UsageError);
  IterationConfig c;
  c.rho = 1.0;
  CHECK_THROWS_AS(c.validate(), UsageError);
}

TEST_CASE("1D stops after the second solve") {
  const DiscreteSystem sys = assemble(make_example(ExampleId::OneD1, 81));
  const IterationState s = run(sys, IterationConfig{});
  CHECK(s.converged);
  CHECK(s.k == 2);
  CHECK(s.u_d == 0.0);
  CHECK(s.F_d == 0.0);
}

TEST_CASE("first solve uses the base forcing") {
  const DiscreteSystem sys = assemble(make_example(ExampleId::TwoD1, 41));
  OuterIteration it(sys, IterationConfig{});
  CHECK_THROWS_AS(it.advance(), UsageError);
  it.initialize();
  CHECK(it.state().k == 1);
  CHECK(it.state().F == sys.base_rhs);
  CHECK_FALSE(it.finished());
  it.advance();
  CHECK(it.state().k == 2);
  CHECK(it.state().trace.size() == 1);
  CHECK(it.state().alpha_history[0] == 1.0);
}

TEST_CASE("single-solve iterate does not depend on the mode") {
  const DiscreteSystem sys = assemble(make_example(ExampleId::TwoD2, 41));
  IterationConfig picard;
  picard.mode = IterationMode::picard;
  picard.stopping = Stopping::fixed(1);
  IterationConfig relaxed = picard;
  relaxed.mode = IterationMode::relaxed;
  const auto a = run(sys, picard);
  const auto b = run(sys, relaxed);
  CHECK(a.k == 1);
  CHECK(a.converged);
  CHECK(a.u == b.u);
}

TEST_CASE("runs are deterministic") {
  const DiscreteSystem sys = assemble(make_example(ExampleId::TwoD3, 41));
  const auto a = run(sys, IterationConfig{});
  const auto b = run(sys, IterationConfig{});
  CHECK(a.k == b.k);
  CHECK(a.u == b.u);
}

TEST_CASE("max_outer cap") {
  const DiscreteSystem sys = assemble(make_example(ExampleId::TwoD4a, 41));
  IterationConfig c;
  c.max_outer = 2;
  const auto s = run(sys, c);
  CHECK(s.k == 2);
  CHECK_FALSE(s.converged);
  CHECK(s.reason == "max_outer reached");
}
