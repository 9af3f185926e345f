#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "webrank/graph.hpp"

namespace webrank {

/// One communication pattern: an edge subset that always contains every
/// self-loop (j, j).
struct CommPattern {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
};

/// Family of patterns whose union covers the graph's edge set.
struct CommPatternSet {
  std::size_t n = 0;
  std::vector<CommPattern> patterns;

  /// Checks the self-loop and coverage conditions against the graph.
  void validate(const WebGraph& g) const;
};

/// Pattern for page i: all edges incident to i plus every self-loop.
CommPattern pattern_from_page(const WebGraph& g, std::uint32_t page);

/// One pattern per page.
CommPatternSet per_page_patterns(const WebGraph& g);

/// Single static pattern over the whole edge set.
CommPatternSet static_pattern(const WebGraph& g);

/// Row-compressed row-stochastic matrix: row j averages over the agents
/// sending to j.
class RowStochasticMatrix {
public:
  RowStochasticMatrix(std::size_t n, std::vector<std::vector<MatrixEntry>> rows);

  std::size_t size() const { return n_; }
  std::span<const MatrixEntry> row(std::size_t j) const { return rows_[j]; }
  double row_sum(std::size_t j) const;
  std::vector<double> multiply(std::span<const double> x) const;
  Eigen::MatrixXd to_dense() const;

private:
  std::size_t n_ = 0;
  std::vector<std::vector<MatrixEntry>> rows_;
};

/// Averaging matrix of a pattern: (A)_{jl} = 1/n_j when l sends to j.
RowStochasticMatrix consensus_matrix(const CommPattern& pattern, std::size_t n);

/// True when some agent can reach every agent along directed links, so its
/// value can spread through the whole network. Equivalent to 1 being a
/// simple eigenvalue of the static averaging matrix.
bool globally_reachable(const WebGraph& g);

struct ConsensusTrace {
  std::uint64_t seed = 0;
  std::vector<std::size_t> checkpoint_steps;
  std::vector<std::vector<double>> states;
  /// max_i x_i - min_i x_i per checkpoint (index 0 is the start state).
  std::vector<double> disagreement;
  /// Mean of (x_i - x_j)^2 over ordered pairs per checkpoint; averaging
  /// this across seeds estimates the mean-square disagreement.
  std::vector<double> pairwise_mse;
};

/// Iterates x(k+1) = A_theta(k) x(k) with the pattern chosen uniformly at
/// random each step. No time averaging is applied.
ConsensusTrace consensus_run(const CommPatternSet& patterns, std::span<const double> x0,
                             std::uint64_t seed, std::size_t steps,
                             std::size_t checkpoint_every = 100);

} // namespace webrank
