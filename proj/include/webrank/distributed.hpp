#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "webrank/matrix.hpp"
#include "webrank/rank_vector.hpp"

namespace webrank {

/// Damping replacement for the single-page randomized scheme:
/// 2m / (n - m(n-2)). Chosen so that the expected update matrix, which is
/// (2/n) A + ((n-2)/n) I for the exchange rule below, keeps the original
/// rank vector as its damped fixed point.
double m_hat(double m, std::size_t n);

/// Damping for the simultaneous scheme where each page fires independently
/// with probability p: m p / (1 - m(1-p)). The expected update matrix is
/// p A + (1-p) I; this constant again pins the fixed point to the original
/// rank vector. p = 1 reduces to the centralized step with damping m.
double m_hat_simultaneous(double m, double p);

/// Single-page link matrix of the broadcast form: column `page` equals the
/// corresponding column of A, every other diagonal entry is 1, and all
/// remaining entries are zero. Only the column is stored; the matrix has at
/// most 2n-1 nonzeros.
struct DistributedLinkMatrix {
  std::uint32_t page = 0;
  std::size_t n = 0;
  std::vector<MatrixEntry> column;
};

DistributedLinkMatrix distributed_link_matrix(const SparseColumnMatrix& a, std::uint32_t page);
Eigen::MatrixXd dense_distributed_matrix(const DistributedLinkMatrix& ai);

/// One damped broadcast step (1-mh) A_i x + (mh/n) 1: page i's value is
/// redistributed along its outgoing links while every other entry passes
/// through.
RankVector apply_distributed(const SparseColumnMatrix& a, std::uint32_t page, double mh,
                             const RankVector& x);

/// Single-page link matrix of the exchange form: page i additionally
/// collects the linked share a_il from each in-neighbor l (entry a_il moves
/// to row i, the diagonal of column l becomes 1 - a_il). The uniform average
/// of these matrices is exactly (2/n) A + ((n-2)/n) I, the identity behind
/// m_hat; the broadcast form averages to (1/n) A + ((n-1)/n) I instead.
Eigen::MatrixXd dense_exchange_matrix(const SparseColumnMatrix& a, std::uint32_t page);

/// (2/n) A + ((n-2)/n) I, the expected exchange update. Shares the
/// eigenvalue-1 eigenvector with A.
SparseColumnMatrix average_link_matrix(const SparseColumnMatrix& a);

enum class UpdateRule {
  /// Exchange steps; the time average converges to the rank vector.
  Exchange,
  /// Broadcast steps exactly as the single-column matrices define them.
  /// With the standard m_hat the time average settles on a reweighted
  /// fixed point, not the rank vector; kept for study and comparison.
  Broadcast,
};

struct GossipMode {
  enum Kind { SingleUniform, Simultaneous } kind = SingleUniform;
  double p = 0.2; // firing probability in Simultaneous mode
};

struct GossipOptions {
  std::uint64_t seed = 0;
  std::size_t steps = 0;
  GossipMode mode;
  /// Single-page rule for SingleUniform mode. Simultaneous mode always
  /// fires column redistributions (pages send, nobody pulls).
  UpdateRule rule = UpdateRule::Exchange;
  std::size_t checkpoint_every = 100;
  /// Start state; uniform when absent.
  std::optional<RankVector> x0;
  /// Replaces the derived damping constant when set.
  std::optional<double> mh_override;
};

struct GossipTrace {
  std::uint64_t seed = 0;
  std::vector<std::size_t> checkpoint_steps;
  std::vector<RankVector> states;   // x(k) at checkpoints
  std::vector<RankVector> averages; // y(k) at checkpoints
  /// Errors of y(k) against a reference vector, when one was supplied.
  std::vector<double> err_l1;
  std::vector<double> err_sq2;
};

/// Runs the randomized scheme for `steps` updates, maintaining the running
/// time average y(k) incrementally. A trial is sequential; independent
/// trials may run concurrently on the shared matrix.
GossipTrace gossip_run(const SparseColumnMatrix& a, double m, const GossipOptions& opts,
                       const RankVector* x_star = nullptr);

/// Per-checkpoint mean of ||y(k) - x*||^2 over one trial per seed.
/// The reference x* is computed internally by the power method.
std::vector<double> mse_estimate(const SparseColumnMatrix& a, double m, std::size_t steps,
                                 std::span<const std::uint64_t> seeds,
                                 const GossipOptions& base = {});

} // namespace webrank
