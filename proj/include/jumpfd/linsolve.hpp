#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "jumpfd/sparse.hpp"

namespace jumpfd {

enum class Preconditioner { none, diagonal };

struct SolverConfig {
  double rel_tol = 1e-10;
  /// Cap on CG iterations; 0 means 10 * number of unknowns.
  std::size_t max_inner_iters = 0;
  Preconditioner preconditioner = Preconditioner::diagonal;
};

struct SolveResult {
  std::vector<double> x;
  std::size_t iterations = 0;
  double residual_norm = 0.0;  // ||b - A x||_2, recomputed from the returned x
  double rhs_norm = 0.0;
};

/// CG did not reach the requested tolerance within the iteration cap.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double achieved) : std::runtime_error(what), achieved_(achieved) {}
  double achieved_residual() const { return achieved_; }

 private:
  double achieved_;
};

/// Preconditioned conjugate gradients for a symmetric positive definite matrix.
///
/// Returns x with ||A x - b||_2 <= rel_tol ||b||_2. `warm_start`, when non-empty, is the initial
/// iterate. Throws UsageError for an asymmetric matrix or a bad config, SolverError when the cap is hit.
SolveResult solve_spd(const CsrMatrix& matrix, std::span<const double> rhs, const SolverConfig& config,
                      std::span<const double> warm_start = {});

}  // namespace jumpfd
