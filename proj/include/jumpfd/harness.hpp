#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "jumpfd/assembly.hpp"
#include "jumpfd/iterate.hpp"
#include "jumpfd/problem.hpp"

namespace jumpfd {

struct ErrorReport {
  int n = 0;
  double h = 0.0;
  double err_l2 = 0.0;  // sqrt(h^d sum e^2) over interior nodes
  double err_linf = 0.0;
  int outer_iters = 0;
  double wall_time = 0.0;
  bool converged = true;
};

/// Error of a full-grid solution against the exact solution, evaluated on each node's own side.
/// Throws UsageError if the problem has no exact solution.
ErrorReport measure_error(const DiscreteSystem& system, std::span<const double> u_full);

/// Assembly, outer iteration and error measurement for one problem.
struct SolveOutcome {
  DiscreteSystem system;
  IterationState state;
  ErrorReport error;
};

SolveOutcome solve_problem(const ProblemSpec& spec, const IterationConfig& config, const SolverConfig& solver = {});

struct ConvergenceReport {
  std::string example;
  std::vector<int> resolutions;
  std::vector<ErrorReport> runs;
  double slope_l2 = 0.0;
  double slope_linf = 0.0;
  /// Some run did not converge; slopes use the converged runs only.
  bool degraded = false;
};

/// Negated least-squares slope of log(err) against log(n), so second order reads as 2.
/// Needs at least two points with positive errors.
double fit_slope(std::span<const double> n, std::span<const double> err);

/// Runs the example at every resolution (ascending, at least three) and fits the slopes.
ConvergenceReport run_convergence(ExampleId example, std::span<const int> resolutions, const IterationConfig& config,
                                  const SolverConfig& solver = {});

/// Fills the slopes and the degraded flag from `report.runs`.
void fit_report(ConvergenceReport& report);

void write_csv(std::ostream& os, const ConvergenceReport& report);
void write_json(std::ostream& os, const ConvergenceReport& report);
/// One JSON object per outer step: k, u_d, F_d, alpha, inner_iters.
void write_trace(std::ostream& os, const IterationState& state);
/// Per-node CSV: coordinates, side, computed value, exact value (empty when unknown).
void write_solution(std::ostream& os, const DiscreteSystem& system, std::span<const double> u_full);

}  // namespace jumpfd
