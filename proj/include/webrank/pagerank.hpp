#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "webrank/matrix.hpp"
#include "webrank/rank_vector.hpp"

namespace webrank {

struct SolveReport {
  std::size_t iterations = 0;
  /// 1-norm of successive iterate differences, one entry per iteration.
  std::vector<double> residual_history;
  bool converged = false;
};

struct PowerOptions {
  double tol = 1e-10;
  std::size_t max_iter = 1000;
};

/// One damped step (1-m) A x + (m/n) 1. The full teleportation matrix is
/// never formed; only the sparse product and the rank-one correction are
/// applied. The result is renormalized when the sum drifts beyond 1e-12.
RankVector teleport_apply(const SparseColumnMatrix& a, double m, const RankVector& x);

/// Power method on the teleportation chain. Stops when the 1-norm of the
/// successive difference falls below tol; non-convergence is reported, not
/// thrown.
std::pair<RankVector, SolveReport> pagerank_power(const SparseColumnMatrix& a, double m,
                                                  const RankVector& x0,
                                                  const PowerOptions& opts = {});
std::pair<RankVector, SolveReport> pagerank_power(const SparseColumnMatrix& a, double m,
                                                  const PowerOptions& opts = {});

/// ||M x - x*||_1 / ||x - x*||_1, or 0 when the denominator vanishes.
/// Bounded by 1 - m for any stochastic x.
double contraction_check(const SparseColumnMatrix& a, double m, const RankVector& x,
                         const RankVector& x_star);

struct SensitivityResult {
  /// Central difference (x*(m+h) - x*(m-h)) / (2h) per page.
  std::vector<double> derivative;
  bool converged = false;
};

/// Finite-difference sensitivity of the rank vector to the damping factor.
/// Every entry is bounded by 1/m up to discretization error.
SensitivityResult sensitivity_to_m(const SparseColumnMatrix& a, double m, double h,
                                   const PowerOptions& opts = {});

/// Dense (1-m) A + (m/n) 1 1^T, for diagnostics and small-scale checks only;
/// the solver never materializes it.
Eigen::MatrixXd dense_teleport_matrix(const SparseColumnMatrix& a, double m);

} // namespace webrank
