#include "webrank/matrix.hpp"

#include <algorithm>
#include <cmath>

namespace webrank {

SparseColumnMatrix::SparseColumnMatrix(std::size_t n, std::vector<std::vector<MatrixEntry>> columns,
                                       double sum_tol)
    : n_(n), columns_(std::move(columns)) {
  if (columns_.size() != n_) throw ValidationError("column count does not match dimension");
  bool all_one = true;
  for (std::size_t j = 0; j < n_; ++j) {
    auto& col = columns_[j];
    std::sort(col.begin(), col.end(),
              [](const MatrixEntry& a, const MatrixEntry& b) { return a.row < b.row; });
    double sum = 0.0;
    std::uint32_t prev_row = 0;
    bool first = true;
    for (const MatrixEntry& e : col) {
      if (e.row >= n_) throw ValidationError("matrix entry row out of range");
      if (!first && e.row == prev_row) throw ValidationError("duplicate matrix entry");
      if (!(e.value > 0.0)) throw ValidationError("stored matrix values must be positive");
      prev_row = e.row;
      first = false;
      sum += e.value;
    }
    nnz_ += col.size();
    if (sum > 1.0 + sum_tol) throw ValidationError("column sum exceeds 1");
    if (std::abs(sum - 1.0) > sum_tol) all_one = false;
  }
  stochasticity_ = all_one ? Stochasticity::Stochastic : Stochasticity::Substochastic;
}

double SparseColumnMatrix::column_sum(std::size_t j) const {
  double s = 0.0;
  for (const MatrixEntry& e : columns_[j]) s += e.value;
  return s;
}

void SparseColumnMatrix::multiply(std::span<const double> x, std::span<double> out) const {
  if (x.size() != n_ || out.size() != n_) throw ValidationError("dimension mismatch in multiply");
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t j = 0; j < n_; ++j) {
    const double xj = x[j];
    if (xj == 0.0) continue;
    for (const MatrixEntry& e : columns_[j]) out[e.row] += e.value * xj;
  }
}

std::vector<double> SparseColumnMatrix::multiply(std::span<const double> x) const {
  std::vector<double> out(n_);
  multiply(x, out);
  return out;
}

std::vector<std::vector<MatrixEntry>> SparseColumnMatrix::row_adjacency() const {
  std::vector<std::vector<MatrixEntry>> rows(n_);
  for (std::size_t j = 0; j < n_; ++j) {
    for (const MatrixEntry& e : columns_[j]) {
      rows[e.row].push_back({static_cast<std::uint32_t>(j), e.value});
    }
  }
  return rows;
}

Eigen::MatrixXd SparseColumnMatrix::to_dense() const {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_),
                                            static_cast<Eigen::Index>(n_));
  for (std::size_t j = 0; j < n_; ++j) {
    for (const MatrixEntry& e : columns_[j]) {
      d(e.row, static_cast<Eigen::Index>(j)) = e.value;
    }
  }
  return d;
}

std::size_t SignedSparseMatrix::nonzeros() const {
  std::size_t c = 0;
  for (const auto& col : columns) c += col.size();
  return c;
}

void SignedSparseMatrix::multiply(std::span<const double> x, std::span<double> out) const {
  if (x.size() != cols || out.size() != rows) {
    throw ValidationError("dimension mismatch in multiply");
  }
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t j = 0; j < cols; ++j) {
    const double xj = x[j];
    if (xj == 0.0) continue;
    for (const MatrixEntry& e : columns[j]) out[e.row] += e.value * xj;
  }
}

std::vector<double> SignedSparseMatrix::multiply(std::span<const double> x) const {
  std::vector<double> out(rows);
  multiply(x, out);
  return out;
}

double SignedSparseMatrix::column_sum(std::size_t j) const {
  double s = 0.0;
  for (const MatrixEntry& e : columns[j]) s += e.value;
  return s;
}

double SignedSparseMatrix::column_abs_sum(std::size_t j) const {
  double s = 0.0;
  for (const MatrixEntry& e : columns[j]) s += std::abs(e.value);
  return s;
}

Eigen::MatrixXd SignedSparseMatrix::to_dense() const {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows),
                                            static_cast<Eigen::Index>(cols));
  for (std::size_t j = 0; j < cols; ++j) {
    for (const MatrixEntry& e : columns[j]) {
      d(e.row, static_cast<Eigen::Index>(j)) = e.value;
    }
  }
  return d;
}

} // namespace webrank
