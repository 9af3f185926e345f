#include "webrank/rank_vector.hpp"

#include <cmath>
#include <cstdlib>

namespace webrank {

RankVector RankVector::checked(std::vector<double> v, double tol) {
  RankVector x(std::move(v));
  if (!x.is_stochastic(tol)) {
    throw ValidationError("vector is not stochastic (nonnegative entries summing to 1)");
  }
  return x;
}

double RankVector::sum() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s;
}

void RankVector::normalize() {
  const double s = sum();
  if (s <= 0.0) throw ValidationError("cannot normalize a vector with nonpositive sum");
  for (double& v : values) v /= s;
}

bool RankVector::is_stochastic(double tol) const {
  if (values.empty()) return false;
  for (double v : values) {
    if (!(v >= 0.0) || std::isnan(v)) return false;
  }
  return std::abs(sum() - 1.0) <= tol;
}

double l1_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += std::abs(x);
  return s;
}

double l1_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ValidationError("length mismatch in l1 distance");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s;
}

double sq2_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ValidationError("length mismatch in squared distance");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

} // namespace webrank
