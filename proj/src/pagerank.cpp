#include "webrank/pagerank.hpp"

#include <cmath>

namespace webrank {

namespace {

void check_damping(double m) {
  if (!(m > 0.0 && m < 1.0)) throw ValidationError("damping factor must lie in (0, 1)");
}

} // namespace

RankVector teleport_apply(const SparseColumnMatrix& a, double m, const RankVector& x) {
  check_damping(m);
  if (x.size() != a.size()) throw ValidationError("vector length does not match matrix");
  if (!a.is_stochastic()) throw ValidationError("matrix must be column stochastic");
  const std::size_t n = a.size();
  RankVector out(a.multiply(x.values));
  const double jump = m / static_cast<double>(n);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    out.values[i] = (1.0 - m) * out.values[i] + jump;
    sum += out.values[i];
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    for (double& v : out.values) v /= sum;
  }
  return out;
}

std::pair<RankVector, SolveReport> pagerank_power(const SparseColumnMatrix& a, double m,
                                                  const RankVector& x0,
                                                  const PowerOptions& opts) {
  check_damping(m);
  if (!x0.is_stochastic()) throw ValidationError("start vector must be stochastic");
  RankVector x = x0;
  SolveReport report;
  report.residual_history.reserve(opts.max_iter);
  for (std::size_t k = 0; k < opts.max_iter; ++k) {
    RankVector next = teleport_apply(a, m, x);
    const double diff = l1_distance(next, x);
    report.residual_history.push_back(diff);
    x = std::move(next);
    ++report.iterations;
    if (diff < opts.tol) {
      report.converged = true;
      break;
    }
  }
  return {std::move(x), std::move(report)};
}

std::pair<RankVector, SolveReport> pagerank_power(const SparseColumnMatrix& a, double m,
                                                  const PowerOptions& opts) {
  return pagerank_power(a, m, RankVector::uniform(a.size()), opts);
}

double contraction_check(const SparseColumnMatrix& a, double m, const RankVector& x,
                         const RankVector& x_star) {
  const double denom = l1_distance(x, x_star);
  if (denom == 0.0) return 0.0;
  const RankVector mx = teleport_apply(a, m, x);
  return l1_distance(mx, x_star) / denom;
}

SensitivityResult sensitivity_to_m(const SparseColumnMatrix& a, double m, double h,
                                   const PowerOptions& opts) {
  if (!(m - h > 0.0 && m + h < 1.0)) {
    throw ValidationError("m +/- h must stay inside (0, 1)");
  }
  auto [plus, rep_plus] = pagerank_power(a, m + h, opts);
  auto [minus, rep_minus] = pagerank_power(a, m - h, opts);
  SensitivityResult result;
  result.converged = rep_plus.converged && rep_minus.converged;
  result.derivative.resize(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    result.derivative[i] = (plus[i] - minus[i]) / (2.0 * h);
  }
  return result;
}

Eigen::MatrixXd dense_teleport_matrix(const SparseColumnMatrix& a, double m) {
  check_damping(m);
  const auto n = static_cast<Eigen::Index>(a.size());
  Eigen::MatrixXd mm = Eigen::MatrixXd::Constant(n, n, m / static_cast<double>(n));
  mm += (1.0 - m) * a.to_dense();
  return mm;
}

} // namespace webrank
