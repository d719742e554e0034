#pragma once

#include <Eigen/Cholesky>

#include "hdben/types.hpp"

namespace hdben {

// Cholesky of a symmetric positive definite matrix; throws SingularityError
// naming `context` when the factorization breaks down.
Eigen::LLT<MatrixXd> cholesky_spd(const MatrixXd& m, const char* context);

// Minimum-norm least-squares solution via SVD with singular values below
// 1e-10 * sigma_max treated as zero.
VectorXd min_norm_least_squares(const MatrixXd& x, const VectorXd& y);

}  // namespace hdben
