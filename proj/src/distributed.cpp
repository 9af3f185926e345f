#include "webrank/distributed.hpp"

#include <cmath>

#include "webrank/detail/gossip_engine.hpp"
#include "webrank/pagerank.hpp"
#include "webrank/rng.hpp"

namespace webrank {

double m_hat(double m, std::size_t n) {
  if (!(m > 0.0 && m < 1.0)) throw ValidationError("damping factor must lie in (0, 1)");
  if (n < 2) throw ValidationError("need at least 2 pages");
  const double nn = static_cast<double>(n);
  return 2.0 * m / (nn - m * (nn - 2.0));
}

double m_hat_simultaneous(double m, double p) {
  if (!(m > 0.0 && m < 1.0)) throw ValidationError("damping factor must lie in (0, 1)");
  if (!(p > 0.0 && p <= 1.0)) throw ValidationError("firing probability must lie in (0, 1]");
  return m * p / (1.0 - m * (1.0 - p));
}

DistributedLinkMatrix distributed_link_matrix(const SparseColumnMatrix& a, std::uint32_t page) {
  if (page >= a.size()) throw ValidationError("page index out of range");
  if (!a.is_stochastic()) throw ValidationError("matrix must be column stochastic");
  DistributedLinkMatrix ai;
  ai.page = page;
  ai.n = a.size();
  auto col = a.column(page);
  ai.column.assign(col.begin(), col.end());
  return ai;
}

Eigen::MatrixXd dense_distributed_matrix(const DistributedLinkMatrix& ai) {
  const auto n = static_cast<Eigen::Index>(ai.n);
  Eigen::MatrixXd d = Eigen::MatrixXd::Identity(n, n);
  d(ai.page, ai.page) = 0.0;
  for (const MatrixEntry& e : ai.column) d(e.row, ai.page) = e.value;
  return d;
}

RankVector apply_distributed(const SparseColumnMatrix& a, std::uint32_t page, double mh,
                             const RankVector& x) {
  if (page >= a.size()) throw ValidationError("page index out of range");
  if (x.size() != a.size()) throw ValidationError("vector length does not match matrix");
  if (!(mh > 0.0 && mh < 1.0)) throw ValidationError("damping factor must lie in (0, 1)");
  const std::size_t n = a.size();
  std::vector<double> out = x.values;
  const double xi = out[page];
  out[page] = 0.0;
  for (const MatrixEntry& e : a.column(page)) out[e.row] += e.value * xi;
  const double jump = mh / static_cast<double>(n);
  for (double& v : out) v = (1.0 - mh) * v + jump;
  return RankVector(std::move(out));
}

Eigen::MatrixXd dense_exchange_matrix(const SparseColumnMatrix& a, std::uint32_t page) {
  if (page >= a.size()) throw ValidationError("page index out of range");
  const auto n = static_cast<Eigen::Index>(a.size());
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index l = 0; l < n; ++l) {
    if (l != page) d(l, l) = 1.0;
  }
  for (const MatrixEntry& e : a.column(page)) d(e.row, page) = e.value;
  const Eigen::MatrixXd dense_a = a.to_dense();
  for (Eigen::Index l = 0; l < n; ++l) {
    if (l == page) continue;
    const double w = dense_a(page, l);
    if (w != 0.0) {
      d(page, l) = w;
      d(l, l) = 1.0 - w;
    }
  }
  return d;
}

SparseColumnMatrix average_link_matrix(const SparseColumnMatrix& a) {
  if (!a.is_stochastic()) throw ValidationError("matrix must be column stochastic");
  const std::size_t n = a.size();
  const double nn = static_cast<double>(n);
  const double link_w = 2.0 / nn;
  const double diag_w = (nn - 2.0) / nn;
  std::vector<std::vector<MatrixEntry>> columns(n);
  for (std::size_t j = 0; j < n; ++j) {
    bool diag_seen = false;
    for (const MatrixEntry& e : a.column(j)) {
      double v = link_w * e.value;
      if (e.row == j) {
        v += diag_w;
        diag_seen = true;
      }
      columns[j].push_back({e.row, v});
    }
    if (!diag_seen && diag_w > 0.0) {
      columns[j].push_back({static_cast<std::uint32_t>(j), diag_w});
    }
  }
  return SparseColumnMatrix(n, std::move(columns));
}

namespace detail {

GossipEngine::GossipEngine(const SparseColumnMatrix& a, double mh, std::vector<double> jump,
                           const GossipOptions& opts, std::vector<double> x0)
    : a_(a),
      jump_(std::move(jump)),
      one_minus_mh_(1.0 - mh),
      mode_(opts.mode),
      rule_(opts.rule),
      gen_(derive_seed(opts.seed, 0)),
      x_(std::move(x0)),
      next_(a.size()),
      y_(x_) {
  if (!(mh > 0.0 && mh < 1.0)) throw ValidationError("damping factor must lie in (0, 1)");
  if (x_.size() != a_.size() || jump_.size() != a_.size()) {
    throw ValidationError("dimension mismatch in gossip engine");
  }
  if (mode_.kind == GossipMode::Simultaneous) {
    if (!(mode_.p > 0.0 && mode_.p <= 1.0)) {
      throw ValidationError("firing probability must lie in (0, 1]");
    }
    page_gens_.reserve(a_.size());
    for (std::size_t i = 0; i < a_.size(); ++i) {
      page_gens_.emplace_back(derive_seed(opts.seed, i + 1));
    }
  } else if (rule_ == UpdateRule::Exchange) {
    rows_ = a_.row_adjacency();
  }
}

void GossipEngine::step_single(std::uint32_t page, bool exchange) {
  next_ = x_;
  const double xi = next_[page];
  next_[page] = 0.0;
  for (const MatrixEntry& e : a_.column(page)) next_[e.row] += e.value * xi;
  if (exchange) {
    // page pulls the linked share from each in-neighbor
    for (const MatrixEntry& e : rows_[page]) {
      if (e.row == page) continue; // e.row holds the column index here
      const double t = e.value * x_[e.row];
      next_[e.row] -= t;
      next_[page] += t;
    }
  }
}

void GossipEngine::step_simultaneous() {
  next_ = x_;
  // every page draws each step, in page order, so streams stay aligned
  for (std::size_t i = 0; i < x_.size(); ++i) {
    if (uniform_double(page_gens_[i]) < mode_.p) {
      const double xi = x_[i];
      next_[i] -= xi;
      for (const MatrixEntry& e : a_.column(i)) next_[e.row] += e.value * xi;
    }
  }
}

void GossipEngine::step() {
  if (mode_.kind == GossipMode::Simultaneous) {
    step_simultaneous();
  } else {
    const auto page = uniform_index(gen_, static_cast<std::uint32_t>(a_.size()));
    step_single(page, rule_ == UpdateRule::Exchange);
  }
  double change = 0.0;
  for (std::size_t i = 0; i < x_.size(); ++i) {
    const double v = one_minus_mh_ * next_[i] + jump_[i];
    change += std::abs(v - x_[i]);
    x_[i] = v;
  }
  last_change_ = change;
  ++k_;
  const double w = 1.0 / static_cast<double>(k_ + 1);
  for (std::size_t i = 0; i < y_.size(); ++i) y_[i] += (x_[i] - y_[i]) * w;
}

} // namespace detail

namespace {

void record_checkpoint(GossipTrace& trace, const detail::GossipEngine& engine,
                       const RankVector* x_star) {
  trace.checkpoint_steps.push_back(engine.steps_done());
  trace.states.emplace_back(engine.state());
  trace.averages.emplace_back(engine.average());
  if (x_star) {
    trace.err_l1.push_back(l1_distance(engine.average(), x_star->values));
    trace.err_sq2.push_back(sq2_distance(engine.average(), x_star->values));
  }
}

} // namespace

GossipTrace gossip_run(const SparseColumnMatrix& a, double m, const GossipOptions& opts,
                       const RankVector* x_star) {
  if (!a.is_stochastic()) throw ValidationError("matrix must be column stochastic");
  const std::size_t n = a.size();
  const double mh = opts.mh_override.value_or(opts.mode.kind == GossipMode::Simultaneous
                                                  ? m_hat_simultaneous(m, opts.mode.p)
                                                  : m_hat(m, n));
  RankVector x0 = opts.x0.value_or(RankVector::uniform(n));
  if (x0.size() != n || !x0.is_stochastic(1e-9)) {
    throw ValidationError("start vector must be stochastic of matching length");
  }
  std::vector<double> jump(n, mh / static_cast<double>(n));
  detail::GossipEngine engine(a, mh, std::move(jump), opts, std::move(x0.values));

  GossipTrace trace;
  trace.seed = opts.seed;
  const std::size_t every = opts.checkpoint_every == 0 ? 100 : opts.checkpoint_every;
  record_checkpoint(trace, engine, x_star);
  for (std::size_t k = 1; k <= opts.steps; ++k) {
    engine.step();
    if (k % every == 0 || k == opts.steps) record_checkpoint(trace, engine, x_star);
  }
  return trace;
}

std::vector<double> mse_estimate(const SparseColumnMatrix& a, double m, std::size_t steps,
                                 std::span<const std::uint64_t> seeds,
                                 const GossipOptions& base) {
  if (seeds.empty()) throw ValidationError("need at least one seed");
  auto [x_star, report] = pagerank_power(a, m);
  if (!report.converged) throw ValidationError("reference solve did not converge");
  std::vector<double> mean;
  for (std::size_t t = 0; t < seeds.size(); ++t) {
    GossipOptions opts = base;
    opts.seed = seeds[t];
    opts.steps = steps;
    GossipTrace trace = gossip_run(a, m, opts, &x_star);
    if (t == 0) {
      mean = trace.err_sq2;
    } else {
      if (trace.err_sq2.size() != mean.size()) {
        throw ValidationError("checkpoint schedules differ between trials");
      }
      for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += trace.err_sq2[i];
    }
  }
  for (double& v : mean) v /= static_cast<double>(seeds.size());
  return mean;
}

} // namespace webrank
