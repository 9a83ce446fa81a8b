#pragma once

#include <array>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "jumpfd/assembly.hpp"
#include "jumpfd/linsolve.hpp"

namespace jumpfd {

enum class IterationMode { picard, relaxed };

/// Outer stopping rule.
struct Stopping {
  enum class Kind { standard, fixed, u_only };
  Kind kind = Kind::standard;
  int count = 0;  // K for Kind::fixed

  static Stopping standard() { return {Kind::standard, 0}; }
  static Stopping fixed(int k) { return {Kind::fixed, k}; }
  static Stopping u_only() { return {Kind::u_only, 0}; }
};

/// Parses "standard", "u-only" or "fixed:<K>"; throws UsageError otherwise.
Stopping parse_stopping(const std::string& text);
std::string to_string(const Stopping& stopping);

struct IterationConfig {
  IterationMode mode = IterationMode::relaxed;
  double rho = 0.95;
  Stopping stopping = Stopping::standard();
  int max_outer = 500;

  /// Throws UsageError unless rho lies in (0, 1), K >= 1 and max_outer >= 1.
  void validate() const;
};

/// One outer step: k is the number of solves after the step.
struct StepRecord {
  int k = 0;
  double u_d = 0.0;
  double F_d = 0.0;
  double alpha = 1.0;
  std::size_t inner_iters = 0;
};

struct IterationState {
  int k = 0;                        // solves performed so far
  std::vector<double> u;            // u^(k), interior unknowns
  std::vector<double> u_prev;       // u^(k-1)
  std::vector<double> F;            // forcing of the latest accepted step (negated form)
  std::vector<InterfaceValue> u_I;  // interface values from the latest step
  std::vector<std::array<double, 2>> tangential;  // tangential flux jumps from u_I
  double u_d = std::numeric_limits<double>::infinity();
  double F_d = std::numeric_limits<double>::infinity();
  std::vector<double> alpha_history;
  std::vector<StepRecord> trace;
  std::size_t first_inner_iters = 0;
  bool converged = false;
  std::string reason;
  EstimateDiagnostics estimates;
};

struct RelaxResult {
  std::vector<double> F;
  std::vector<double> u;
  double alpha = 1.0;
  double ratio = 0.0;
};

/// Blends a trial step with the previous iterate so the iterate difference shrinks by at least rho:
/// alpha = 1 when r < 1, else rho / r, with r = |u_T - u_k| / |u_k - u_km1| in the max norm.
RelaxResult relax_step(std::span<const double> u_k, std::span<const double> u_km1, std::span<const double> F_prev,
                       std::span<const double> F_trial, std::span<const double> u_trial, double rho);

/// Stopping decision after k solves with the latest diffs.
bool check_stop(const Stopping& stopping, int k, double u_d, double F_d, double h);

double max_abs_diff(std::span<const double> a, std::span<const double> b);

/// Outer iteration driven one step at a time.
class OuterIteration {
 public:
  OuterIteration(const DiscreteSystem& system, IterationConfig config, SolverConfig solver = {});

  /// First solve with the base forcing and zero interface values.
  void initialize();
  /// Starts from a given Cartesian iterate and tangential jump estimate instead of solving.
  void initialize_from(std::vector<double> u, std::vector<std::array<double, 2>> tangential);
  /// One outer step. Returns true once the stopping rule is met.
  bool advance();
  bool finished() const { return finished_; }
  const IterationState& state() const { return state_; }

 private:
  const DiscreteSystem& system_;
  IterationConfig config_;
  SolverConfig solver_;
  IterationState state_;
  bool finished_ = false;
};

/// Runs the outer iteration to its stopping rule or max_outer. A run that hits the cap returns its
/// last iterate with converged = false.
IterationState run(const DiscreteSystem& system, const IterationConfig& config, const SolverConfig& solver = {});

}  // namespace jumpfd
