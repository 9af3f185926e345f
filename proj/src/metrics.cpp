#include "webrank/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "webrank/common.hpp"

namespace webrank {

double l1_error(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ValidationError("length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s;
}

std::optional<double> pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ValidationError("length mismatch");
  const std::size_t n = a.size();
  if (n < 2) throw ValidationError("need at least 2 samples");
  double mean_a = 0.0, mean_b = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean_a += a[i];
    mean_b += b[i];
  }
  mean_a /= static_cast<double>(n);
  mean_b /= static_cast<double>(n);
  double cov = 0.0, var_a = 0.0, var_b = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double da = a[i] - mean_a;
    const double db = b[i] - mean_b;
    cov += da * db;
    var_a += da * da;
    var_b += db * db;
  }
  if (var_a == 0.0 || var_b == 0.0) return std::nullopt;
  return cov / std::sqrt(var_a * var_b);
}

std::vector<double> average_ranks(std::span<const double> v) {
  const std::size_t n = v.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) { return v[i] < v[j]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double shared = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = shared;
    i = j + 1;
  }
  return ranks;
}

std::optional<double> spearman(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ValidationError("length mismatch");
  if (a.size() < 2) throw ValidationError("need at least 2 samples");
  const auto ra = average_ranks(a);
  const auto rb = average_ranks(b);
  return pearson(ra, rb);
}

double slope_through_origin(std::span<const double> x_true, std::span<const double> x_approx) {
  if (x_true.size() != x_approx.size()) throw ValidationError("length mismatch");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < x_true.size(); ++i) {
    num += x_true[i] * x_approx[i];
    den += x_true[i] * x_true[i];
  }
  if (den == 0.0) throw ValidationError("reference vector is identically zero");
  return num / den;
}

namespace {

std::vector<std::size_t> top_k_indices(std::span<const double> v, std::size_t k) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t i, std::size_t j) { return v[i] > v[j]; });
  idx.resize(std::min(k, idx.size()));
  return idx;
}

} // namespace

double top_k_overlap(std::span<const double> a, std::span<const double> b, std::size_t k) {
  if (a.size() != b.size()) throw ValidationError("length mismatch");
  if (k == 0 || k > a.size()) throw ValidationError("top-k out of range");
  auto ta = top_k_indices(a, k);
  auto tb = top_k_indices(b, k);
  std::sort(ta.begin(), ta.end());
  std::sort(tb.begin(), tb.end());
  std::vector<std::size_t> both;
  std::set_intersection(ta.begin(), ta.end(), tb.begin(), tb.end(), std::back_inserter(both));
  return static_cast<double>(both.size()) / static_cast<double>(k);
}

ComparisonReport compare_vectors(std::span<const double> x_true, std::span<const double> x_approx,
                                 std::optional<std::size_t> top_k) {
  ComparisonReport r;
  r.l1 = l1_error(x_true, x_approx);
  r.pearson = pearson(x_true, x_approx);
  r.spearman = spearman(x_true, x_approx);
  bool all_zero = true;
  for (double v : x_true) {
    if (v != 0.0) all_zero = false;
  }
  if (!all_zero) r.slope = slope_through_origin(x_true, x_approx);
  if (top_k) r.top_k = top_k_overlap(x_true, x_approx, *top_k);
  return r;
}

} // namespace webrank
