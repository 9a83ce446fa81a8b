#include "jumpfd/linsolve.hpp"

#include <cmath>

#include "jumpfd/grid.hpp"

namespace jumpfd {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void residual(const CsrMatrix& a, std::span<const double> x, std::span<const double> b, std::vector<double>& r) {
  a.multiply(x, r);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
}

}  // namespace

SolveResult solve_spd(const CsrMatrix& matrix, std::span<const double> rhs, const SolverConfig& config,
                      std::span<const double> warm_start) {
  const std::size_t n = matrix.rows();
  if (!(config.rel_tol > 0.0 && config.rel_tol < 1.0)) throw UsageError("solver rel_tol must lie in (0, 1)");
  if (rhs.size() != n) throw UsageError("rhs size does not match the matrix");
  if (!warm_start.empty() && warm_start.size() != n) throw UsageError("warm start size does not match the matrix");
  if (!matrix.is_symmetric()) throw UsageError("solve_spd: matrix is not symmetric");
  for (const double v : rhs)
    if (!std::isfinite(v)) throw UsageError("solve_spd: rhs is not finite");

  const std::size_t cap = config.max_inner_iters ? config.max_inner_iters : 10 * std::max<std::size_t>(n, 1);

  SolveResult result;
  result.x.assign(n, 0.0);
  if (!warm_start.empty()) result.x.assign(warm_start.begin(), warm_start.end());
  result.rhs_norm = std::sqrt(dot(rhs, rhs));
  const double target = config.rel_tol * result.rhs_norm;

  std::vector<double> inv_diag(n, 1.0);
  if (config.preconditioner == Preconditioner::diagonal) {
    const auto d = matrix.diagonal();
    for (std::size_t i = 0; i < n; ++i) {
      if (!(d[i] > 0.0)) throw UsageError("solve_spd: nonpositive diagonal entry");
      inv_diag[i] = 1.0 / d[i];
    }
  }

  std::vector<double> r(n), z(n), p(n), q(n);
  residual(matrix, result.x, rhs, r);
  double rnorm = std::sqrt(dot(r, r));

  // Restart from the true residual whenever the recurrence claims convergence.
  while (rnorm > target && result.iterations < cap) {
    for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    p = z;
    double rz = dot(r, z);
    while (result.iterations < cap) {
      matrix.multiply(p, q);
      const double pq = dot(p, q);
      if (!(pq > 0.0)) throw SolverError("solve_spd: matrix is not positive definite", rnorm);
      const double alpha = rz / pq;
      for (std::size_t i = 0; i < n; ++i) {
        result.x[i] += alpha * p[i];
        r[i] -= alpha * q[i];
      }
      ++result.iterations;
      if (std::sqrt(dot(r, r)) <= target) break;
      for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
      const double rz_next = dot(r, z);
      const double beta = rz_next / rz;
      rz = rz_next;
      for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    residual(matrix, result.x, rhs, r);
    rnorm = std::sqrt(dot(r, r));
  }
  result.residual_norm = rnorm;
  if (rnorm > target)
    throw SolverError("solve_spd: no convergence within " + std::to_string(cap) + " iterations (residual " +
                          std::to_string(rnorm) + ")",
                      rnorm);
  return result;
}

}  // namespace jumpfd
