#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "webrank/common.hpp"

namespace webrank {

/// Nonnegative vector summing to 1: a PageRank vector, a chain state, or a
/// time average.
struct RankVector {
  std::vector<double> values;

  RankVector() = default;
  explicit RankVector(std::vector<double> v) : values(std::move(v)) {}

  static RankVector uniform(std::size_t n) {
    return RankVector(std::vector<double>(n, 1.0 / static_cast<double>(n)));
  }

  /// Unit mass on page i (0-based).
  static RankVector unit(std::size_t n, std::size_t i) {
    RankVector x(std::vector<double>(n, 0.0));
    x.values[i] = 1.0;
    return x;
  }

  /// Validates nonnegativity and unit sum before wrapping.
  static RankVector checked(std::vector<double> v, double tol = 1e-10);

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }

  double sum() const;
  /// Rescales so the entries sum to exactly 1.
  void normalize();
  bool is_stochastic(double tol = 1e-10) const;
};

double l1_norm(std::span<const double> v);
double l1_distance(std::span<const double> a, std::span<const double> b);
double sq2_distance(std::span<const double> a, std::span<const double> b);

inline double l1_distance(const RankVector& a, const RankVector& b) {
  return l1_distance(std::span<const double>(a.values), std::span<const double>(b.values));
}
inline double sq2_distance(const RankVector& a, const RankVector& b) {
  return sq2_distance(std::span<const double>(a.values), std::span<const double>(b.values));
}

} // namespace webrank
