#pragma once

#include <functional>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace spls {

using Vector = Eigen::VectorXd;

/// Compressed-row sparse matrix used for every assembled operator and transfer.
using SparseOperator = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;

/// Scalar function of position on the unit square.
using ScalarField = std::function<double(double, double)>;

}  // namespace spls
