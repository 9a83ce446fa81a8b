#include "jumpfd/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "json.hpp"

namespace jumpfd {

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

ErrorReport measure_error(const DiscreteSystem& system, std::span<const double> u_full) {
  const ProblemSpec& spec = system.spec;
  if (!spec.exact) throw UsageError("measure_error: problem has no exact solution");
  const Grid& grid = system.grid();
  if (u_full.size() != grid.num_nodes()) throw UsageError("measure_error: u must be a full-grid vector");
  const PointLabels& labels = system.geometry->labels();
  ErrorReport rep;
  rep.n = grid.n();
  rep.h = grid.h();
  double sum = 0.0;
  for (std::size_t node : system.unknown_to_node) {
    const double e = u_full[node] - spec.exact->value(labels.side(node), grid.coord(node));
    sum += e * e;
    rep.err_linf = std::max(rep.err_linf, std::abs(e));
  }
  rep.err_l2 = std::sqrt(std::pow(grid.h(), grid.dim()) * sum);
  return rep;
}

SolveOutcome solve_problem(const ProblemSpec& spec, const IterationConfig& config, const SolverConfig& solver) {
  const auto start = std::chrono::steady_clock::now();
  SolveOutcome out{assemble(spec), {}, {}};
  out.state = run(out.system, config, solver);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (spec.exact) {
    out.error = measure_error(out.system, out.system.expand(out.state.u));
  } else {
    out.error.n = spec.grid.n();
    out.error.h = spec.grid.h();
  }
  out.error.outer_iters = out.state.k;
  out.error.wall_time = seconds;
  out.error.converged = out.state.converged;
  return out;
}

double fit_slope(std::span<const double> n, std::span<const double> err) {
  if (n.size() != err.size()) throw UsageError("fit_slope: size mismatch");
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (n[i] > 0.0 && err[i] > 0.0) {
      xs.push_back(std::log(n[i]));
      ys.push_back(std::log(err[i]));
    }
  }
  if (xs.size() < 2) throw UsageError("fit_slope: need at least two positive points");
  const double m = static_cast<double>(xs.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / m;
  const double my = sy / m;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0.0) throw UsageError("fit_slope: resolutions must differ");
  return -sxy / sxx;
}

void fit_report(ConvergenceReport& report) {
  std::vector<double> ns, l2, linf;
  report.degraded = false;
  for (const ErrorReport& r : report.runs) {
    if (!r.converged) {
      report.degraded = true;
      continue;
    }
    ns.push_back(r.n);
    l2.push_back(r.err_l2);
    linf.push_back(r.err_linf);
  }
  const bool enough = ns.size() >= 2;
  report.slope_l2 = enough ? fit_slope(ns, l2) : std::nan("");
  report.slope_linf = enough ? fit_slope(ns, linf) : std::nan("");
}

ConvergenceReport run_convergence(ExampleId example, std::span<const int> resolutions, const IterationConfig& config,
                                  const SolverConfig& solver) {
  if (resolutions.size() < 3) throw UsageError("run_convergence: at least three resolutions are required");
  for (std::size_t i = 1; i < resolutions.size(); ++i) {
    if (resolutions[i] <= resolutions[i - 1]) throw UsageError("run_convergence: resolutions must be ascending");
  }
  ConvergenceReport report;
  report.example = std::string(example_name(example));
  report.resolutions.assign(resolutions.begin(), resolutions.end());
  for (int n : resolutions) {
    report.runs.push_back(solve_problem(make_example(example, n), config, solver).error);
  }
  fit_report(report);
  return report;
}

void write_csv(std::ostream& os, const ConvergenceReport& report) {
  os << "n,h,err_l2,err_linf,iters,seconds\n";
  for (const ErrorReport& r : report.runs) {
    os << r.n << ',' << format_double(r.h) << ',' << format_double(r.err_l2) << ',' << format_double(r.err_linf)
       << ',' << r.outer_iters << ',' << format_double(r.wall_time) << '\n';
  }
  os << "# slope_l2=" << format_double(report.slope_l2) << ", slope_linf=" << format_double(report.slope_linf);
  if (report.degraded) os << ", degraded";
  os << '\n';
}

void write_json(std::ostream& os, const ConvergenceReport& report) {
  nlohmann::json runs = nlohmann::json::array();
  for (const ErrorReport& r : report.runs) {
    runs.push_back({{"n", r.n},
                    {"h", r.h},
                    {"err_l2", r.err_l2},
                    {"err_linf", r.err_linf},
                    {"iters", r.outer_iters},
                    {"seconds", r.wall_time},
                    {"converged", r.converged}});
  }
  nlohmann::json j{{"example", report.example}, {"runs", runs}, {"degraded", report.degraded}};
  j["slope_l2"] = std::isfinite(report.slope_l2) ? nlohmann::json(report.slope_l2) : nlohmann::json(nullptr);
  j["slope_linf"] = std::isfinite(report.slope_linf) ? nlohmann::json(report.slope_linf) : nlohmann::json(nullptr);
  os << j.dump(2) << '\n';
}

void write_trace(std::ostream& os, const IterationState& state) {
  for (const StepRecord& r : state.trace) {
    nlohmann::json j{{"k", r.k}, {"u_d", r.u_d}, {"F_d", r.F_d}, {"alpha", r.alpha}, {"inner_iters", r.inner_iters}};
    os << j.dump() << '\n';
  }
}

void write_solution(std::ostream& os, const DiscreteSystem& system, std::span<const double> u_full) {
  const Grid& grid = system.grid();
  const PointLabels& labels = system.geometry->labels();
  static const char* axes[] = {"x", "y", "z"};
  for (int d = 0; d < grid.dim(); ++d) os << axes[d] << ',';
  os << "side,u,exact\n";
  for (std::size_t node = 0; node < grid.num_nodes(); ++node) {
    const Point x = grid.coord(node);
    for (int d = 0; d < grid.dim(); ++d) os << format_double(x[d]) << ',';
    const Side side = labels.side(node);
    os << (side == Side::plus ? '+' : '-') << ',' << format_double(u_full[node]) << ',';
    if (system.spec.exact) os << format_double(system.spec.exact->value(side, x));
    os << '\n';
  }
}

}  // namespace jumpfd
