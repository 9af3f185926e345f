#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "webrank/distributed.hpp"
#include "webrank/graph.hpp"
#include "webrank/matrix.hpp"
#include "webrank/pagerank.hpp"

namespace webrank {

/// Partition of pages into r groups. Group ids are normalized to 0..r-1 in
/// order of first appearance; `order` reindexes pages so group members are
/// contiguous.
struct Grouping {
  std::size_t n = 0;
  std::size_t r = 0;
  std::vector<std::uint32_t> assignment;  // page -> group
  std::vector<std::uint32_t> group_sizes; // per group
  std::vector<std::uint32_t> order;       // grouped position -> page
  std::vector<std::uint32_t> position;    // page -> grouped position
  std::vector<std::uint32_t> group_start; // r+1 offsets into grouped order

  bool is_single(std::uint32_t group) const { return group_sizes[group] == 1; }
  std::size_t single_count() const;
};

Grouping make_grouping(std::size_t n, std::span<const std::uint32_t> raw_assignment);

/// Reads "page_index group_index" lines (1-based pages).
Grouping parse_grouping(std::istream& in, std::size_t n);
Grouping parse_grouping_file(const std::string& path, std::size_t n);

/// Groups pages by the first path component of their label, mirroring a
/// by-domain partition. Requires labels on the graph.
Grouping grouping_from_labels(const WebGraph& g, char separator = '/');

/// Node parameter per page: the fraction of its outlinks leaving its group.
/// The graph must have no dangling pages.
std::vector<double> node_parameters(const WebGraph& g, const Grouping& grouping);

/// Splits every non-single page whose node parameter exceeds `delta` into
/// its own group, recomputes, and repeats until all non-single parameters
/// are within the threshold.
Grouping regroup(const WebGraph& g, const Grouping& initial, double delta);

/// Coordinate change V = [V1; V2] and its explicit block inverse. V1 sums
/// each group; V2 measures member deviations from the group mean (single
/// groups contribute no rows). Operates in grouped coordinates.
class BlockTransform {
public:
  explicit BlockTransform(Grouping grouping);

  const Grouping& grouping() const { return grouping_; }

  /// V x for x in grouped page order; first r entries are group totals.
  std::vector<double> to_aggregated(std::span<const double> x_grouped) const;
  /// V^-1 applied to [x1; x2], returning grouped page order.
  std::vector<double> from_aggregated(std::span<const double> x_tilde) const;

  Eigen::MatrixXd dense() const;
  Eigen::MatrixXd dense_inverse() const;

private:
  Grouping grouping_;
};

BlockTransform build_transform(Grouping grouping);

/// A split as internal + external1 + external2, in grouped coordinates.
/// Internal keeps within-group links with diagonals raised to make each
/// column sum to 1; external1 holds single-group columns with zero column
/// sums; external2 holds the rest, with column absolute sums bounded by
/// twice the node parameter.
struct LinkDecomposition {
  SignedSparseMatrix internal;
  SignedSparseMatrix external1;
  SignedSparseMatrix external2;
};

LinkDecomposition decompose_link_matrix(const SparseColumnMatrix& a, const Grouping& grouping);

/// Triangularized transformed system: the r x r stochastic block, the lower
/// coupling block, and the block-diagonal internal part of the (2,2) block.
struct AggregatedSystem {
  BlockTransform transform;
  SparseColumnMatrix a11;                  // r x r, column stochastic
  SignedSparseMatrix a21;                  // (n-r) x r
  std::vector<Eigen::MatrixXd> a22_blocks; // one per non-single group
  std::vector<std::uint32_t> a22_block_group;
  std::vector<double> u; // group sizes [n_1 ... n_r]

  const Grouping& grouping() const { return transform.grouping(); }
  std::size_t pages() const { return grouping().n; }
  std::size_t groups() const { return grouping().r; }
};

AggregatedSystem build_aggregated_system(const SparseColumnMatrix& a, const Grouping& grouping,
                                         double m);

struct ApproximateResult {
  /// Approximated rank values in original page order. Entries can dip
  /// slightly negative for coarse groupings; the total is always 1.
  std::vector<double> x_prime;
  /// Group totals from the reduced iteration (sums to 1).
  std::vector<double> x1_tilde;
  SolveReport report;
};

/// Three-step reduced computation: iterate the r-dimensional system, solve
/// the block-diagonal complement, transform back.
ApproximateResult approximate_pagerank(const AggregatedSystem& sys, double m,
                                       const PowerOptions& opts = {},
                                       const std::vector<double>* x1_0 = nullptr);

/// Largest node-parameter threshold guaranteeing ||x' - x*||_1 <= epsilon:
/// m epsilon / (4 (1-m) (1+epsilon)).
double error_bound_delta(double m, double epsilon);

/// Runs the randomized scheme on the r-dimensional reduced system and
/// completes the remaining two steps at every checkpoint, reporting states
/// in original page coordinates. With all-single groupings this reproduces
/// gossip_run on A bit for bit.
GossipTrace aggregated_gossip(const AggregatedSystem& sys, double m, const GossipOptions& opts,
                              const RankVector* x_star = nullptr);

struct OperationCounts {
  std::size_t f0_a = 0;      // nonzeros of A
  std::size_t f0_a11 = 0;    // nonzeros of the reduced block
  std::size_t f0_a_ext = 0;  // nonzeros of the external link matrices
  std::size_t iterations = 0;
};

OperationCounts operation_counts(const SparseColumnMatrix& a, const AggregatedSystem& sys,
                                 const LinkDecomposition& parts, const SolveReport& report);

} // namespace webrank
