#include "webrank/consensus.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "webrank/rng.hpp"

namespace webrank {

void CommPatternSet::validate(const WebGraph& g) const {
  if (n != g.n) throw ValidationError("pattern set size does not match graph");
  if (patterns.empty()) throw ValidationError("need at least one communication pattern");
  std::set<std::pair<std::uint32_t, std::uint32_t>> cover;
  for (const CommPattern& p : patterns) {
    std::set<std::pair<std::uint32_t, std::uint32_t>> loops;
    for (const auto& e : p.edges) {
      if (e.first >= n || e.second >= n) throw ValidationError("pattern edge out of range");
      if (e.first == e.second) {
        loops.insert(e);
      } else {
        cover.insert(e);
      }
    }
    if (loops.size() != n) {
      throw ValidationError("a pattern is missing self-loops");
    }
  }
  for (const auto& e : g.edges) {
    if (!cover.count(e)) {
      throw ValidationError("patterns do not cover edge (" + std::to_string(e.first + 1) + ", " +
                            std::to_string(e.second + 1) + ")");
    }
  }
}

CommPattern pattern_from_page(const WebGraph& g, std::uint32_t page) {
  if (page >= g.n) throw ValidationError("page index out of range");
  CommPattern p;
  for (std::uint32_t j = 0; j < g.n; ++j) p.edges.emplace_back(j, j);
  for (const auto& e : g.edges) {
    if (e.first == page || e.second == page) p.edges.push_back(e);
  }
  return p;
}

CommPatternSet per_page_patterns(const WebGraph& g) {
  CommPatternSet s;
  s.n = g.n;
  s.patterns.reserve(g.n);
  for (std::uint32_t i = 0; i < g.n; ++i) s.patterns.push_back(pattern_from_page(g, i));
  return s;
}

CommPatternSet static_pattern(const WebGraph& g) {
  CommPatternSet s;
  s.n = g.n;
  CommPattern p;
  for (std::uint32_t j = 0; j < g.n; ++j) p.edges.emplace_back(j, j);
  p.edges.insert(p.edges.end(), g.edges.begin(), g.edges.end());
  s.patterns.push_back(std::move(p));
  return s;
}

RowStochasticMatrix::RowStochasticMatrix(std::size_t n, std::vector<std::vector<MatrixEntry>> rows)
    : n_(n), rows_(std::move(rows)) {
  if (rows_.size() != n_) throw ValidationError("row count does not match dimension");
  for (std::size_t j = 0; j < n_; ++j) {
    auto& row = rows_[j];
    std::sort(row.begin(), row.end(),
              [](const MatrixEntry& a, const MatrixEntry& b) { return a.row < b.row; });
    double sum = 0.0;
    for (const MatrixEntry& e : row) {
      if (e.row >= n_) throw ValidationError("matrix entry out of range");
      sum += e.value;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw ValidationError("row does not sum to 1");
  }
}

double RowStochasticMatrix::row_sum(std::size_t j) const {
  double s = 0.0;
  for (const MatrixEntry& e : rows_[j]) s += e.value;
  return s;
}

std::vector<double> RowStochasticMatrix::multiply(std::span<const double> x) const {
  if (x.size() != n_) throw ValidationError("dimension mismatch in multiply");
  std::vector<double> out(n_, 0.0);
  for (std::size_t j = 0; j < n_; ++j) {
    double s = 0.0;
    for (const MatrixEntry& e : rows_[j]) s += e.value * x[e.row];
    out[j] = s;
  }
  return out;
}

Eigen::MatrixXd RowStochasticMatrix::to_dense() const {
  const auto n = static_cast<Eigen::Index>(n_);
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t j = 0; j < n_; ++j) {
    for (const MatrixEntry& e : rows_[j]) d(static_cast<Eigen::Index>(j), e.row) = e.value;
  }
  return d;
}

RowStochasticMatrix consensus_matrix(const CommPattern& pattern, std::size_t n) {
  std::vector<std::set<std::uint32_t>> senders(n);
  bool loops_ok = true;
  for (const auto& [from, to] : pattern.edges) {
    if (from >= n || to >= n) throw ValidationError("pattern edge out of range");
    senders[to].insert(from);
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!senders[j].count(static_cast<std::uint32_t>(j))) loops_ok = false;
  }
  if (!loops_ok) throw ValidationError("pattern must contain every self-loop");
  std::vector<std::vector<MatrixEntry>> rows(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double w = 1.0 / static_cast<double>(senders[j].size());
    for (std::uint32_t from : senders[j]) rows[j].push_back({from, w});
  }
  return RowStochasticMatrix(n, std::move(rows));
}

bool globally_reachable(const WebGraph& g) {
  // an agent whose value can spread to every other agent: forward search
  // from some vertex must visit all of them
  std::vector<std::vector<std::uint32_t>> fwd(g.n);
  for (const auto& [src, dst] : g.edges) fwd[src].push_back(dst);
  std::vector<std::uint32_t> stack, seen_at(g.n, UINT32_MAX);
  for (std::uint32_t v = 0; v < g.n; ++v) {
    stack.assign(1, v);
    seen_at[v] = v;
    std::size_t visited = 1;
    while (!stack.empty()) {
      const std::uint32_t u = stack.back();
      stack.pop_back();
      for (std::uint32_t w : fwd[u]) {
        if (seen_at[w] != v) {
          seen_at[w] = v;
          ++visited;
          stack.push_back(w);
        }
      }
    }
    if (visited == g.n) return true;
  }
  return false;
}

ConsensusTrace consensus_run(const CommPatternSet& patterns, std::span<const double> x0,
                             std::uint64_t seed, std::size_t steps,
                             std::size_t checkpoint_every) {
  if (patterns.patterns.empty()) throw ValidationError("need at least one pattern");
  if (x0.size() != patterns.n) throw ValidationError("state length does not match agents");
  std::vector<RowStochasticMatrix> mats;
  mats.reserve(patterns.patterns.size());
  for (const CommPattern& p : patterns.patterns) mats.push_back(consensus_matrix(p, patterns.n));

  ConsensusTrace trace;
  trace.seed = seed;
  std::vector<double> x(x0.begin(), x0.end());
  auto disagreement = [](const std::vector<double>& v) {
    const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
    return *mx - *mn;
  };
  auto pairwise = [](const std::vector<double>& v) {
    // mean over ordered pairs of (x_i - x_j)^2 equals twice the variance
    const double n = static_cast<double>(v.size());
    double mean = 0.0, sq = 0.0;
    for (double a : v) {
      mean += a;
      sq += a * a;
    }
    mean /= n;
    return 2.0 * std::max(0.0, sq / n - mean * mean);
  };
  const std::size_t every = checkpoint_every == 0 ? 100 : checkpoint_every;
  auto record = [&](std::size_t k) {
    trace.checkpoint_steps.push_back(k);
    trace.states.push_back(x);
    trace.disagreement.push_back(disagreement(x));
    trace.pairwise_mse.push_back(pairwise(x));
  };
  record(0);
  std::mt19937_64 gen(derive_seed(seed, 0));
  const auto d = static_cast<std::uint32_t>(mats.size());
  for (std::size_t k = 1; k <= steps; ++k) {
    const std::uint32_t pick = d == 1 ? 0 : uniform_index(gen, d);
    x = mats[pick].multiply(x);
    if (k % every == 0 || k == steps) record(k);
  }
  return trace;
}

} // namespace webrank
