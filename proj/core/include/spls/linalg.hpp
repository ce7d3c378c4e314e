#pragma once

#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "spls/types.hpp"

namespace spls {

/// Linear map on coefficient vectors.
using LinearMap = std::function<Vector(const Vector&)>;

/// Sparse Cholesky factorization of an SPD operator.
class Cholesky {
 public:
  Cholesky() = default;
  /// Throws std::runtime_error if the matrix is not numerically SPD.
  explicit Cholesky(const SparseOperator& a);

  Vector solve(const Vector& b) const;
  int size() const { return n_; }
  bool empty() const { return impl_ == nullptr; }

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
  int n_ = 0;
};

struct SolveReport {
  int iterations = 0;
  bool converged = false;
  /// Stopping-norm value at the start and after every iteration.
  std::vector<double> residual_history;
  /// Step lengths and direction updates of the CG recursion, in order.
  std::vector<double> alphas;
  std::vector<double> betas;
  /// Largest deviation seen by the residual-identity check (Uzawa solvers
  /// only, when enabled), relative to the first residual.
  double residual_identity_error = 0.0;

  double final_residual() const { return residual_history.empty() ? 0.0 : residual_history.back(); }
};

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, SolveReport report)
      : std::runtime_error(what), report_(std::move(report)) {}
  const SolveReport& report() const { return report_; }

 private:
  SolveReport report_;
};

/// Preconditioned conjugate gradients from a zero initial guess. Stops when
/// sqrt(r^T P r) <= tol. Throws SolverError after max_iter iterations or on
/// breakdown.
Vector pcg(const LinearMap& op, const LinearMap& precond, const Vector& rhs, double tol, SolveReport& report,
           int max_iter = 10000);

/// Eigenvalues of the Lanczos tridiagonal matrix recovered from the CG
/// coefficients in a report; their extremes estimate the spectrum of the
/// preconditioned operator.
std::vector<double> lanczos_ritz_values(const SolveReport& report);

}  // namespace spls
