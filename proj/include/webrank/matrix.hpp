#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "webrank/common.hpp"

namespace webrank {

struct MatrixEntry {
  std::uint32_t row;
  double value;
};

enum class Stochasticity { Substochastic, Stochastic };

/// Column-compressed nonnegative sparse matrix. Every stored value is
/// positive; each column sums to 1 (stochastic) or at most 1 (substochastic).
class SparseColumnMatrix {
public:
  /// Takes ownership of per-column entry lists and classifies the matrix.
  /// `sum_tol` bounds the deviation of column sums from the class limit.
  SparseColumnMatrix(std::size_t n, std::vector<std::vector<MatrixEntry>> columns,
                     double sum_tol = 1e-12);

  std::size_t size() const { return n_; }
  std::size_t nonzeros() const { return nnz_; }
  Stochasticity stochasticity() const { return stochasticity_; }
  bool is_stochastic() const { return stochasticity_ == Stochasticity::Stochastic; }

  std::span<const MatrixEntry> column(std::size_t j) const { return columns_[j]; }
  double column_sum(std::size_t j) const;

  /// out = A x. Columns are accumulated in increasing column index; the
  /// reduction order is fixed, so results are bitwise reproducible.
  void multiply(std::span<const double> x, std::span<double> out) const;
  std::vector<double> multiply(std::span<const double> x) const;

  /// Row-major adjacency (entries of row i across all columns), built on
  /// demand for update schemes that need in-neighbor access.
  std::vector<std::vector<MatrixEntry>> row_adjacency() const;

  Eigen::MatrixXd to_dense() const;

private:
  std::size_t n_ = 0;
  std::size_t nnz_ = 0;
  Stochasticity stochasticity_ = Stochasticity::Substochastic;
  std::vector<std::vector<MatrixEntry>> columns_;
};

/// Column-compressed matrix with entries of either sign; used for the link
/// decomposition and the transformed system blocks.
struct SignedSparseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::vector<MatrixEntry>> columns;

  std::size_t nonzeros() const;
  void multiply(std::span<const double> x, std::span<double> out) const;
  std::vector<double> multiply(std::span<const double> x) const;
  double column_sum(std::size_t j) const;
  double column_abs_sum(std::size_t j) const;
  Eigen::MatrixXd to_dense() const;
};

} // namespace webrank
