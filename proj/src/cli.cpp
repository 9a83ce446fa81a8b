#include "jumpfd/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "jumpfd/harness.hpp"

namespace jumpfd {

namespace {

struct RunOptions {
  std::string example;
  std::string stopping = "standard";
  std::string mode = "relaxed";
  double rho = 0.95;
  int max_outer = 500;
};

void add_run_options(CLI::App* cmd, RunOptions& o) {
  cmd->add_option("--example", o.example, "Catalog example (see list-examples)")->required();
  cmd->add_option("--stopping", o.stopping, "standard | u-only | fixed:<K>");
  cmd->add_option("--mode", o.mode, "picard | relaxed")->check(CLI::IsMember({"picard", "relaxed"}));
  cmd->add_option("--rho", o.rho, "Relaxation factor in (0, 1)");
  cmd->add_option("--max-outer", o.max_outer, "Cap on outer iterations");
}

IterationConfig make_config(const RunOptions& o) {
  IterationConfig c;
  c.mode = o.mode == "picard" ? IterationMode::picard : IterationMode::relaxed;
  c.rho = o.rho;
  c.stopping = parse_stopping(o.stopping);
  c.max_outer = o.max_outer;
  c.validate();
  return c;
}

std::vector<int> parse_resolutions(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    int n = 0;
    try {
      n = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (item.empty() || used != item.size()) throw UsageError("bad resolution list: " + text);
    out.push_back(n);
  }
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw UsageError("cannot open output file: " + path);
  return f;
}

int do_solve(const RunOptions& o, int n, const std::string& trace, const std::string& dump, const std::string& out_path,
             std::ostream& out) {
  const ExampleId id = parse_example(o.example);
  const IterationConfig config = make_config(o);
  SolveOutcome res = solve_problem(make_example(id, n), config);
  if (!dump.empty()) dump_matrix(res.system, dump);
  if (!trace.empty()) {
    auto f = open_output(trace);
    write_trace(f, res.state);
  }
  if (!out_path.empty()) {
    auto f = open_output(out_path);
    write_solution(f, res.system, res.system.expand(res.state.u));
  }
  const ErrorReport& e = res.error;
  out << "example=" << example_name(id) << " n=" << n << " h=" << fmt(e.h) << " err_l2=" << fmt(e.err_l2)
      << " err_linf=" << fmt(e.err_linf) << " iters=" << e.outer_iters
      << " converged=" << (e.converged ? "true" : "false") << " seconds=" << fmt(e.wall_time) << '\n';
  return e.converged ? kExitOk : kExitNotConverged;
}

int do_converge(const RunOptions& o, const std::string& list, const std::string& format, const std::string& out_path,
                std::ostream& out) {
  const ExampleId id = parse_example(o.example);
  const IterationConfig config = make_config(o);
  const std::vector<int> ns = parse_resolutions(list);
  ConvergenceReport report = run_convergence(id, ns, config);
  std::ofstream file;
  if (!out_path.empty()) file = open_output(out_path);
  std::ostream& sink = out_path.empty() ? out : file;
  if (format == "json") {
    write_json(sink, report);
  } else {
    write_csv(sink, report);
  }
  return report.degraded ? kExitNotConverged : kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Second-order solver for Poisson problems with interface jumps", "jumpfd"};
  app.require_subcommand(1);

  RunOptions solve_opts;
  int solve_n = 0;
  std::string trace, dump, solve_out;
  CLI::App* solve = app.add_subcommand("solve", "Solve one catalog example at one resolution");
  add_run_options(solve, solve_opts);
  solve->add_option("--n", solve_n, "Grid points per axis")->required();
  solve->add_option("--trace", trace, "Write the outer-iteration trace as JSON lines");
  solve->add_option("--dump-matrix", dump, "Write the operator in coordinate format");
  solve->add_option("--out", solve_out, "Write the per-node solution as CSV");

  RunOptions conv_opts;
  std::string conv_n, format = "csv", conv_out;
  CLI::App* converge = app.add_subcommand("converge", "Grid-refinement study of one catalog example");
  add_run_options(converge, conv_opts);
  converge->add_option("--n", conv_n, "Comma-separated ascending resolutions, at least three")->required();
  converge->add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  converge->add_option("--out", conv_out, "Write the report to a file instead of stdout");

  CLI::App* list = app.add_subcommand("list-examples", "List the built-in examples");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*list) {
      for (ExampleId id : all_examples()) out << example_name(id) << "  " << example_description(id) << '\n';
      return kExitOk;
    }
    if (*solve) return do_solve(solve_opts, solve_n, trace, dump, solve_out, out);
    return do_converge(conv_opts, conv_n, format, conv_out, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\nRun with --help for usage.\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNotConverged;
  }
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace jumpfd
