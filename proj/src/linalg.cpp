#include "hdben/linalg.hpp"

#include <Eigen/SVD>

namespace hdben {

Eigen::LLT<MatrixXd> cholesky_spd(const MatrixXd& m, const char* context) {
  Eigen::LLT<MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) {
    // The factor is only partially formed on failure; its smallest diagonal
    // entry still localizes the breakdown.
    double pivot = llt.matrixLLT().diagonal().minCoeff();
    throw SingularityError(context, pivot);
  }
  return llt;
}

VectorXd min_norm_least_squares(const MatrixXd& x, const VectorXd& y) {
  Eigen::BDCSVD<MatrixXd> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(1e-10);
  return svd.solve(y);
}

}  // namespace hdben
