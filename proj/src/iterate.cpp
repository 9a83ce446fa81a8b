#include "jumpfd/iterate.hpp"

#include <algorithm>
#include <cmath>

namespace jumpfd {

Stopping parse_stopping(const std::string& text) {
  if (text == "standard") return Stopping::standard();
  if (text == "u-only") return Stopping::u_only();
  if (text.rfind("fixed:", 0) == 0) {
    const std::string num = text.substr(6);
    std::size_t used = 0;
    int k = 0;
    try {
      k = std::stoi(num, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (num.empty() || used != num.size() || k < 1) throw UsageError("bad fixed iteration count: " + text);
    return Stopping::fixed(k);
  }
  throw UsageError("unknown stopping rule: " + text);
}

std::string to_string(const Stopping& stopping) {
  switch (stopping.kind) {
    case Stopping::Kind::standard:
      return "standard";
    case Stopping::Kind::u_only:
      return "u-only";
    case Stopping::Kind::fixed:
      return "fixed:" + std::to_string(stopping.count);
  }
  return "standard";
}

void IterationConfig::validate() const {
  if (!(rho > 0.0 && rho < 1.0)) throw UsageError("rho must lie in (0, 1)");
  if (stopping.kind == Stopping::Kind::fixed && stopping.count < 1) throw UsageError("fixed stopping needs K >= 1");
  if (max_outer < 1) throw UsageError("max_outer must be at least 1");
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

RelaxResult relax_step(std::span<const double> u_k, std::span<const double> u_km1, std::span<const double> F_prev,
                       std::span<const double> F_trial, std::span<const double> u_trial, double rho) {
  RelaxResult out;
  const double step = max_abs_diff(u_trial, u_k);
  const double prev = max_abs_diff(u_k, u_km1);
  out.ratio = prev > 0.0 ? step / prev : 0.0;
  out.alpha = out.ratio < 1.0 ? 1.0 : rho / out.ratio;
  const double a = out.alpha;
  out.F.resize(F_trial.size());
  for (std::size_t i = 0; i < F_trial.size(); ++i) out.F[i] = a * F_trial[i] + (1.0 - a) * F_prev[i];
  out.u.resize(u_trial.size());
  for (std::size_t i = 0; i < u_trial.size(); ++i) out.u[i] = a * u_trial[i] + (1.0 - a) * u_k[i];
  return out;
}

bool check_stop(const Stopping& stopping, int k, double u_d, double F_d, double h) {
  switch (stopping.kind) {
    case Stopping::Kind::standard:
      return u_d < h * h && F_d < h;
    case Stopping::Kind::u_only:
      return u_d < h * h;
    case Stopping::Kind::fixed:
      return k >= stopping.count;
  }
  return false;
}

OuterIteration::OuterIteration(const DiscreteSystem& system, IterationConfig config, SolverConfig solver)
    : system_(system), config_(config), solver_(solver) {
  config_.validate();
}

void OuterIteration::initialize() {
  state_ = IterationState{};
  finished_ = false;
  state_.F = system_.base_rhs;
  SolveResult res = solve_spd(system_.matrix, state_.F, solver_);
  state_.u = std::move(res.x);
  state_.u_prev = state_.u;
  state_.first_inner_iters = res.iterations;
  state_.k = 1;
  state_.u_I.assign(system_.crossing_data.size(), InterfaceValue{});
  state_.tangential.assign(system_.crossing_data.size(), {0.0, 0.0});
  if (config_.stopping.kind == Stopping::Kind::fixed && check_stop(config_.stopping, 1, 0.0, 0.0, 0.0)) {
    state_.converged = true;
    state_.reason = "fixed count reached";
    finished_ = true;
  }
}

void OuterIteration::initialize_from(std::vector<double> u, std::vector<std::array<double, 2>> tangential) {
  if (u.size() != system_.num_unknowns() || tangential.size() != system_.crossing_data.size()) {
    throw UsageError("initialize_from: size mismatch");
  }
  state_ = IterationState{};
  finished_ = false;
  state_.u = std::move(u);
  state_.u_prev = state_.u;
  state_.tangential = std::move(tangential);
  state_.u_I.assign(system_.crossing_data.size(), InterfaceValue{});
  state_.F = correction_rhs(system_, system_.expand(state_.u), axis_flux_jumps(system_, state_.tangential));
  state_.k = 1;
}

bool OuterIteration::advance() {
  if (state_.k == 0) throw UsageError("advance: call initialize first");
  if (finished_) return true;

  const std::vector<double> u_full = system_.expand(state_.u);
  // Interface values use the previous tangential estimate; the new forcing uses the fresh one.
  const auto flux_prev = axis_flux_jumps(system_, state_.tangential);
  std::vector<InterfaceValue> u_I = interface_values(system_, u_full, flux_prev, &state_.estimates);
  auto tangential = tangential_jumps(system_, u_I);
  const auto flux = axis_flux_jumps(system_, tangential);
  std::vector<double> F_trial = correction_rhs(system_, u_full, flux, &state_.estimates);
  SolveResult res = solve_spd(system_.matrix, F_trial, solver_, state_.u);

  StepRecord rec;
  rec.inner_iters = res.iterations;
  std::vector<double> F_next;
  std::vector<double> u_next;
  if (config_.mode == IterationMode::relaxed && state_.k >= 2) {
    RelaxResult rr = relax_step(state_.u, state_.u_prev, state_.F, F_trial, res.x, config_.rho);
    rec.alpha = rr.alpha;
    F_next = std::move(rr.F);
    u_next = std::move(rr.u);
  } else {
    F_next = std::move(F_trial);
    u_next = std::move(res.x);
  }
  rec.u_d = max_abs_diff(u_next, state_.u);
  rec.F_d = max_abs_diff(F_next, state_.F);
  rec.k = state_.k + 1;

  state_.u_prev = std::move(state_.u);
  state_.u = std::move(u_next);
  state_.F = std::move(F_next);
  state_.u_I = std::move(u_I);
  state_.tangential = std::move(tangential);
  state_.k = rec.k;
  state_.u_d = rec.u_d;
  state_.F_d = rec.F_d;
  state_.alpha_history.push_back(rec.alpha);
  state_.trace.push_back(rec);

  if (check_stop(config_.stopping, state_.k, state_.u_d, state_.F_d, system_.grid().h())) {
    state_.converged = true;
    state_.reason = config_.stopping.kind == Stopping::Kind::fixed ? "fixed count reached" : "tolerance met";
    finished_ = true;
  } else if (state_.k >= config_.max_outer) {
    state_.converged = false;
    state_.reason = "max_outer reached";
    finished_ = true;
  }
  return finished_;
}

IterationState run(const DiscreteSystem& system, const IterationConfig& config, const SolverConfig& solver) {
  OuterIteration it(system, config, solver);
  it.initialize();
  while (!it.finished()) it.advance();
  return it.state();
}

}  // namespace jumpfd
