#pragma once

#include <random>
#include <vector>

#include "webrank/distributed.hpp"
#include "webrank/matrix.hpp"
#include "webrank/rng.hpp"

namespace webrank::detail {

// Drives one trial of the randomized update scheme over a column-stochastic
// matrix with an arbitrary additive jump vector. The same engine runs the
// full-order scheme (jump = mh/n * 1) and the reduced aggregated one
// (jump = mh/n * u), which keeps their random streams aligned.
class GossipEngine {
public:
  GossipEngine(const SparseColumnMatrix& a, double mh, std::vector<double> jump,
               const GossipOptions& opts, std::vector<double> x0);

  void step();

  const std::vector<double>& state() const { return x_; }
  const std::vector<double>& average() const { return y_; }
  std::size_t steps_done() const { return k_; }
  double last_step_l1_change() const { return last_change_; }

private:
  void step_single(std::uint32_t page, bool exchange);
  void step_simultaneous();

  const SparseColumnMatrix& a_;
  std::vector<std::vector<MatrixEntry>> rows_; // built only for the exchange rule
  std::vector<double> jump_;
  double one_minus_mh_;
  GossipMode mode_;
  UpdateRule rule_;
  std::mt19937_64 gen_;
  std::vector<std::mt19937_64> page_gens_; // simultaneous mode: one stream per page
  std::vector<double> x_;
  std::vector<double> next_;
  std::vector<double> y_;
  std::size_t k_ = 0;
  double last_change_ = 0.0;
};

} // namespace webrank::detail
