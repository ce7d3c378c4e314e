#include "spls/linalg.hpp"

#include <cmath>
#include <Eigen/SparseCholesky>

namespace spls {

struct Cholesky::Impl {
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt;
};

Cholesky::Cholesky(const SparseOperator& a) : n_(static_cast<int>(a.rows())) {
  if (a.rows() != a.cols()) throw std::invalid_argument("Cholesky: matrix is not square");
  auto impl = std::make_shared<Impl>();
  const Eigen::SparseMatrix<double> col_major = a;
  impl->llt.compute(col_major);
  if (impl->llt.info() != Eigen::Success) throw std::runtime_error("Cholesky: matrix is not positive definite");
  impl_ = std::move(impl);
}

Vector Cholesky::solve(const Vector& b) const {
  if (!impl_) throw std::logic_error("Cholesky: not factorized");
  if (b.size() != n_) throw std::invalid_argument("Cholesky::solve: size mismatch");
  return impl_->llt.solve(b);
}

Vector pcg(const LinearMap& op, const LinearMap& precond, const Vector& rhs, double tol, SolveReport& report,
           int max_iter) {
  report = SolveReport{};
  Vector x = Vector::Zero(rhs.size());
  Vector r = rhs;
  Vector z = precond(r);
  double rz = r.dot(z);
  report.residual_history.push_back(std::sqrt(std::max(rz, 0.0)));
  Vector d = z;
  while (report.residual_history.back() > tol) {
    if (report.iterations >= max_iter) throw SolverError("pcg: no convergence within max_iter", report);
    const Vector ad = op(d);
    const double dad = d.dot(ad);
    if (!(dad > 0.0)) throw SolverError("pcg: breakdown, operator not positive on search direction", report);
    const double alpha = rz / dad;
    x += alpha * d;
    r -= alpha * ad;
    z = precond(r);
    const double rz_new = r.dot(z);
    const double beta = rz_new / rz;
    d = z + beta * d;
    rz = rz_new;
    ++report.iterations;
    report.alphas.push_back(alpha);
    report.betas.push_back(beta);
    report.residual_history.push_back(std::sqrt(std::max(rz, 0.0)));
  }
  report.converged = true;
  return x;
}

std::vector<double> lanczos_ritz_values(const SolveReport& report) {
  const int k = static_cast<int>(report.alphas.size());
  if (k == 0) return {};
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k, k);
  for (int i = 0; i < k; ++i) {
    t(i, i) = 1.0 / report.alphas[i] + (i > 0 ? report.betas[i - 1] / report.alphas[i - 1] : 0.0);
    if (i + 1 < k) {
      const double off = std::sqrt(report.betas[i]) / report.alphas[i];
      t(i, i + 1) = off;
      t(i + 1, i) = off;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(t, Eigen::EigenvaluesOnly);
  const Vector& values = eig.eigenvalues();
  return {values.data(), values.data() + values.size()};
}

}  // namespace spls
