#pragma once

#include <Eigen/Dense>

#include "wmfs/assembly.hpp"

namespace wmfs {

/// Coefficient vector of a solved system, laid out [d_1..d_sN, d_-1..d_-sN]
/// so the analytic density is f = sum_j (d_j + i d_-j) psi_j.
struct Expansion {
  std::vector<double> d;
  std::size_t s_n() const { return d.size() / 2; }
  cplx coeff(std::size_t j) const { return {d[j], d[s_n() + j]}; }
};

struct SolveDiagnostics {
  double residual = 0.0;    // ||A d - b||_2
  double coeff_norm = 0.0;  // ||d||_2
  double sigma_max = 0.0;
  double sigma_min = 0.0;   // smallest singular value above the underflow floor
  int rank_estimate = 0;    // sigma > max(M,N) eps sigma_max, report only
  int rows = 0;
  int cols = 0;
};

/// Minimum-norm least-squares solution through a full SVD with no rank
/// truncation: every singular value above the underflow floor participates.
Eigen::VectorXd min_norm_solve(const Eigen::MatrixXd& a,
                               const Eigen::VectorXd& b,
                               SolveDiagnostics* diag = nullptr);

std::pair<Expansion, SolveDiagnostics> min_norm_solve(const BoundarySystem& sys);

}  // namespace wmfs
