#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace webrank {

/// Sum of absolute differences.
double l1_error(std::span<const double> a, std::span<const double> b);

/// Sample correlation; unset when either argument has zero variance.
std::optional<double> pearson(std::span<const double> a, std::span<const double> b);

/// Average ranks with ties sharing the mean rank.
std::vector<double> average_ranks(std::span<const double> v);

/// Rank correlation (Pearson of average-tie ranks); unset when either
/// argument is constant.
std::optional<double> spearman(std::span<const double> a, std::span<const double> b);

/// Least-squares slope of the through-origin fit of approx against truth.
double slope_through_origin(std::span<const double> x_true, std::span<const double> x_approx);

/// Fraction of indices shared between the two top-k sets. Ties broken by
/// lower index.
double top_k_overlap(std::span<const double> a, std::span<const double> b, std::size_t k);

struct ComparisonReport {
  double l1 = 0.0;
  std::optional<double> pearson;
  std::optional<double> spearman;
  std::optional<double> slope;
  std::optional<double> top_k;
};

ComparisonReport compare_vectors(std::span<const double> x_true, std::span<const double> x_approx,
                                 std::optional<std::size_t> top_k = {});

} // namespace webrank
