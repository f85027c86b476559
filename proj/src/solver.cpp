#include "wmfs/solver.hpp"

#include <limits>
#include <stdexcept>

#include <Eigen/SVD>

namespace wmfs {

Eigen::VectorXd min_norm_solve(const Eigen::MatrixXd& a,
                               const Eigen::VectorXd& b,
                               SolveDiagnostics* diag) {
  if (a.rows() != b.size())
    throw std::invalid_argument("min_norm_solve: dimension mismatch");
  if (!a.allFinite() || !b.allFinite())
    throw std::invalid_argument("min_norm_solve: non-finite input");

  Eigen::BDCSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  const double floor = std::numeric_limits<double>::min();

  Eigen::VectorXd beta = svd.matrixU().transpose() * b;
  double smin = 0.0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > floor) {
      beta(i) /= sigma(i);
      smin = sigma(i);  // sigma is sorted descending
    } else {
      beta(i) = 0.0;
    }
  }
  Eigen::VectorXd x = svd.matrixV() * beta;

  if (diag) {
    diag->residual = (a * x - b).norm();
    diag->coeff_norm = x.norm();
    diag->sigma_max = sigma.size() > 0 ? sigma(0) : 0.0;
    diag->sigma_min = smin;
    diag->rows = static_cast<int>(a.rows());
    diag->cols = static_cast<int>(a.cols());
    double thresh = std::max(a.rows(), a.cols()) *
                    std::numeric_limits<double>::epsilon() * diag->sigma_max;
    diag->rank_estimate = 0;
    for (Eigen::Index i = 0; i < sigma.size(); ++i)
      if (sigma(i) > thresh) ++diag->rank_estimate;
  }
  return x;
}

std::pair<Expansion, SolveDiagnostics> min_norm_solve(const BoundarySystem& sys) {
  SolveDiagnostics diag;
  Eigen::VectorXd x = min_norm_solve(sys.matrix, sys.rhs, &diag);
  Expansion exp;
  exp.d.assign(x.data(), x.data() + x.size());
  return {std::move(exp), diag};
}

}  // namespace wmfs
