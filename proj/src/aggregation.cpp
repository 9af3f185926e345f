#include "webrank/aggregation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>

#include <Eigen/LU>

#include "webrank/detail/gossip_engine.hpp"

namespace webrank {

std::size_t Grouping::single_count() const {
  std::size_t c = 0;
  for (std::uint32_t s : group_sizes) {
    if (s == 1) ++c;
  }
  return c;
}

Grouping make_grouping(std::size_t n, std::span<const std::uint32_t> raw_assignment) {
  if (raw_assignment.size() != n) throw ValidationError("assignment must cover every page");
  Grouping g;
  g.n = n;
  g.assignment.resize(n);
  std::map<std::uint32_t, std::uint32_t> remap; // raw id -> normalized id
  for (std::size_t p = 0; p < n; ++p) {
    auto [it, inserted] = remap.try_emplace(raw_assignment[p],
                                            static_cast<std::uint32_t>(remap.size()));
    (void)inserted;
    g.assignment[p] = it->second;
  }
  g.r = remap.size();
  g.group_sizes.assign(g.r, 0);
  for (std::uint32_t grp : g.assignment) ++g.group_sizes[grp];
  g.group_start.assign(g.r + 1, 0);
  for (std::size_t i = 0; i < g.r; ++i) g.group_start[i + 1] = g.group_start[i] + g.group_sizes[i];
  g.order.resize(n);
  g.position.resize(n);
  std::vector<std::uint32_t> cursor(g.group_start.begin(), g.group_start.end() - 1);
  for (std::uint32_t p = 0; p < n; ++p) {
    const std::uint32_t pos = cursor[g.assignment[p]]++;
    g.order[pos] = p;
    g.position[p] = pos;
  }
  return g;
}

Grouping parse_grouping(std::istream& in, std::size_t n) {
  std::vector<std::uint32_t> raw(n, UINT32_MAX);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ss(line);
    std::string first;
    if (!(ss >> first)) continue;
    if (first[0] == '#') continue;
    std::uint64_t page = 0, group = 0;
    try {
      page = std::stoull(first);
    } catch (const std::exception&) {
      throw ParseError("not an integer: '" + first + "'", line_no);
    }
    if (!(ss >> group)) throw ParseError("expected 'page_index group_index'", line_no);
    if (page == 0 || page > n) {
      throw ValidationError("line " + std::to_string(line_no) + ": page index out of range");
    }
    if (raw[page - 1] != UINT32_MAX) {
      throw ValidationError("line " + std::to_string(line_no) + ": page assigned twice");
    }
    raw[page - 1] = static_cast<std::uint32_t>(group);
  }
  for (std::size_t p = 0; p < n; ++p) {
    if (raw[p] == UINT32_MAX) {
      throw ValidationError("page " + std::to_string(p + 1) + " has no group assignment");
    }
  }
  return make_grouping(n, raw);
}

Grouping parse_grouping_file(const std::string& path, std::size_t n) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open grouping file '" + path + "'");
  return parse_grouping(in, n);
}

Grouping grouping_from_labels(const WebGraph& g, char separator) {
  if (g.labels.size() != g.n) throw ValidationError("graph has no labels to group by");
  std::vector<std::uint32_t> raw(g.n);
  std::map<std::string, std::uint32_t> keys;
  std::uint32_t next = 0;
  for (std::size_t p = 0; p < g.n; ++p) {
    const std::string& label = g.labels[p];
    if (label.empty()) { // unlabeled pages stand alone
      raw[p] = next++;
      continue;
    }
    std::string key = label.substr(0, label.find(separator));
    auto [it, inserted] = keys.try_emplace(std::move(key), 0);
    if (inserted) it->second = next++;
    raw[p] = it->second;
  }
  return make_grouping(g.n, raw);
}

std::vector<double> node_parameters(const WebGraph& g, const Grouping& grouping) {
  if (grouping.n != g.n) throw ValidationError("grouping size does not match graph");
  auto adj = g.out_adjacency();
  std::vector<double> delta(g.n, 0.0);
  for (std::size_t p = 0; p < g.n; ++p) {
    if (adj[p].empty()) {
      throw ValidationError("page " + std::to_string(p + 1) +
                            " is dangling; repair the graph before grouping");
    }
    std::size_t external = 0;
    for (std::uint32_t t : adj[p]) {
      if (grouping.assignment[t] != grouping.assignment[p]) ++external;
    }
    delta[p] = static_cast<double>(external) / static_cast<double>(adj[p].size());
  }
  return delta;
}

Grouping regroup(const WebGraph& g, const Grouping& initial, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw ValidationError("threshold must lie in (0, 1)");
  Grouping cur = initial;
  for (std::size_t pass = 0; pass <= g.n; ++pass) {
    const auto params = node_parameters(g, cur);
    std::vector<std::uint32_t> raw = cur.assignment;
    std::uint32_t fresh = static_cast<std::uint32_t>(cur.r);
    bool changed = false;
    for (std::size_t p = 0; p < g.n; ++p) {
      if (!cur.is_single(cur.assignment[p]) && params[p] > delta) {
        raw[p] = fresh++;
        changed = true;
      }
    }
    if (!changed) return cur;
    cur = make_grouping(g.n, raw);
  }
  // each pass creates at least one new single group, so this cannot be hit
  throw ValidationError("regrouping failed to settle");
}

BlockTransform::BlockTransform(Grouping grouping) : grouping_(std::move(grouping)) {
  // spot-check V V^-1 = I blockwise
  for (std::uint32_t grp = 0; grp < grouping_.r; ++grp) {
    const std::size_t s = grouping_.group_sizes[grp];
    if (s == 1) continue;
    const auto sz = static_cast<Eigen::Index>(s);
    Eigen::MatrixXd v(sz, sz);
    v.row(0).setOnes();
    for (Eigen::Index i = 0; i + 1 < sz; ++i) {
      for (Eigen::Index j = 0; j < sz; ++j) {
        v(i + 1, j) = (i == j ? 1.0 : 0.0) - 1.0 / static_cast<double>(s);
      }
    }
    Eigen::MatrixXd w(sz, sz);
    w.col(0).setConstant(1.0 / static_cast<double>(s));
    for (Eigen::Index j = 0; j + 1 < sz; ++j) {
      for (Eigen::Index i = 0; i < sz; ++i) {
        w(i, j + 1) = (i == j ? 1.0 : (i == sz - 1 ? -1.0 : 0.0));
      }
    }
    const double err = (v * w - Eigen::MatrixXd::Identity(sz, sz)).cwiseAbs().maxCoeff();
    if (err > 1e-12) throw ValidationError("transform inverse check failed");
  }
}

std::vector<double> BlockTransform::to_aggregated(std::span<const double> x_grouped) const {
  const Grouping& g = grouping_;
  if (x_grouped.size() != g.n) throw ValidationError("vector length does not match grouping");
  std::vector<double> out(g.n, 0.0);
  std::size_t dev_row = g.r;
  for (std::uint32_t grp = 0; grp < g.r; ++grp) {
    const std::size_t a = g.group_start[grp];
    const std::size_t s = g.group_sizes[grp];
    double sum = 0.0;
    for (std::size_t j = 0; j < s; ++j) sum += x_grouped[a + j];
    out[grp] = sum;
    if (s > 1) {
      const double mean = sum / static_cast<double>(s);
      for (std::size_t j = 0; j + 1 < s; ++j) out[dev_row++] = x_grouped[a + j] - mean;
    }
  }
  return out;
}

std::vector<double> BlockTransform::from_aggregated(std::span<const double> x_tilde) const {
  const Grouping& g = grouping_;
  if (x_tilde.size() != g.n) throw ValidationError("vector length does not match grouping");
  std::vector<double> out(g.n, 0.0);
  std::size_t dev_row = g.r;
  for (std::uint32_t grp = 0; grp < g.r; ++grp) {
    const std::size_t a = g.group_start[grp];
    const std::size_t s = g.group_sizes[grp];
    const double mean = x_tilde[grp] / static_cast<double>(s);
    if (s == 1) {
      out[a] = x_tilde[grp];
      continue;
    }
    double dev_sum = 0.0;
    for (std::size_t j = 0; j + 1 < s; ++j) {
      const double dev = x_tilde[dev_row++];
      out[a + j] = mean + dev;
      dev_sum += dev;
    }
    out[a + s - 1] = mean - dev_sum;
  }
  return out;
}

Eigen::MatrixXd BlockTransform::dense() const {
  const Grouping& g = grouping_;
  const auto n = static_cast<Eigen::Index>(g.n);
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(n, n);
  Eigen::Index dev_row = static_cast<Eigen::Index>(g.r);
  for (std::uint32_t grp = 0; grp < g.r; ++grp) {
    const std::size_t a = g.group_start[grp];
    const std::size_t s = g.group_sizes[grp];
    for (std::size_t j = 0; j < s; ++j) v(grp, static_cast<Eigen::Index>(a + j)) = 1.0;
    if (s > 1) {
      for (std::size_t i = 0; i + 1 < s; ++i, ++dev_row) {
        for (std::size_t j = 0; j < s; ++j) {
          v(dev_row, static_cast<Eigen::Index>(a + j)) =
              (i == j ? 1.0 : 0.0) - 1.0 / static_cast<double>(s);
        }
      }
    }
  }
  return v;
}

Eigen::MatrixXd BlockTransform::dense_inverse() const {
  const Grouping& g = grouping_;
  const auto n = static_cast<Eigen::Index>(g.n);
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  Eigen::Index dev_col = static_cast<Eigen::Index>(g.r);
  for (std::uint32_t grp = 0; grp < g.r; ++grp) {
    const std::size_t a = g.group_start[grp];
    const std::size_t s = g.group_sizes[grp];
    for (std::size_t i = 0; i < s; ++i) {
      w(static_cast<Eigen::Index>(a + i), grp) = 1.0 / static_cast<double>(s);
    }
    if (s > 1) {
      for (std::size_t j = 0; j + 1 < s; ++j, ++dev_col) {
        w(static_cast<Eigen::Index>(a + j), dev_col) = 1.0;
        w(static_cast<Eigen::Index>(a + s - 1), dev_col) = -1.0;
      }
    }
  }
  return w;
}

BlockTransform build_transform(Grouping grouping) { return BlockTransform(std::move(grouping)); }

namespace {

// A permuted into grouped page order.
std::vector<std::vector<MatrixEntry>> grouped_columns(const SparseColumnMatrix& a,
                                                      const Grouping& g) {
  std::vector<std::vector<MatrixEntry>> cols(g.n);
  for (std::size_t pos = 0; pos < g.n; ++pos) {
    const std::uint32_t page = g.order[pos];
    auto col = a.column(page);
    auto& out = cols[pos];
    out.reserve(col.size());
    for (const MatrixEntry& e : col) out.push_back({g.position[e.row], e.value});
    std::sort(out.begin(), out.end(),
              [](const MatrixEntry& x, const MatrixEntry& y) { return x.row < y.row; });
  }
  return cols;
}

std::uint32_t group_of_position(const Grouping& g, std::uint32_t pos) {
  return g.assignment[g.order[pos]];
}

} // namespace

LinkDecomposition decompose_link_matrix(const SparseColumnMatrix& a, const Grouping& g) {
  if (a.size() != g.n) throw ValidationError("matrix size does not match grouping");
  if (!a.is_stochastic()) throw ValidationError("matrix must be column stochastic");
  auto cols = grouped_columns(a, g);
  LinkDecomposition d;
  for (SignedSparseMatrix* mp : {&d.internal, &d.external1, &d.external2}) {
    mp->rows = g.n;
    mp->cols = g.n;
    mp->columns.resize(g.n);
  }
  for (std::uint32_t grp = 0; grp < g.r; ++grp) {
    const std::uint32_t a0 = g.group_start[grp];
    const std::uint32_t a1 = g.group_start[grp + 1];
    for (std::uint32_t j = a0; j < a1; ++j) {
      if (g.is_single(grp)) {
        // whole column moves to external1 with the diagonal making it sum to 0
        double sum = 0.0;
        for (const MatrixEntry& e : cols[j]) {
          d.external1.columns[j].push_back(e);
          sum += e.value;
        }
        if (sum != 0.0) d.external1.columns[j].push_back({j, -sum});
        d.internal.columns[j].push_back({j, 1.0});
        continue;
      }
      double internal_off = 0.0;
      double external_sum = 0.0;
      for (const MatrixEntry& e : cols[j]) {
        if (e.row >= a0 && e.row < a1) {
          if (e.row != j) {
            d.internal.columns[j].push_back(e);
            internal_off += e.value;
          }
        } else {
          d.external2.columns[j].push_back(e);
          external_sum += e.value;
        }
      }
      const double diag = 1.0 - internal_off;
      if (diag != 0.0) d.internal.columns[j].push_back({j, diag});
      if (external_sum != 0.0) d.external2.columns[j].push_back({j, -external_sum});
      for (auto* col : {&d.internal.columns[j], &d.external2.columns[j]}) {
        std::sort(col->begin(), col->end(),
                  [](const MatrixEntry& x, const MatrixEntry& y) { return x.row < y.row; });
      }
    }
  }
  return d;
}

AggregatedSystem build_aggregated_system(const SparseColumnMatrix& a, const Grouping& grouping,
                                         double m) {
  if (!(m > 0.0 && m < 1.0)) throw ValidationError("damping factor must lie in (0, 1)");
  if (a.size() != grouping.n) throw ValidationError("matrix size does not match grouping");
  if (!a.is_stochastic()) throw ValidationError("matrix must be column stochastic");
  const Grouping& g = grouping;
  const std::size_t n = g.n;
  const std::size_t r = g.r;
  auto cols = grouped_columns(a, g);

  // A11: group-to-group totals scaled by source group size
  std::vector<std::vector<MatrixEntry>> a11_cols(r);
  std::vector<double> acc(r, 0.0);
  std::vector<std::uint32_t> touched;
  for (std::uint32_t grp = 0; grp < r; ++grp) {
    const double scale = 1.0 / static_cast<double>(g.group_sizes[grp]);
    touched.clear();
    for (std::uint32_t j = g.group_start[grp]; j < g.group_start[grp + 1]; ++j) {
      for (const MatrixEntry& e : cols[j]) {
        const std::uint32_t tg = group_of_position(g, e.row);
        if (acc[tg] == 0.0) touched.push_back(tg);
        acc[tg] += e.value;
      }
    }
    std::sort(touched.begin(), touched.end());
    for (std::uint32_t tg : touched) {
      a11_cols[grp].push_back({tg, acc[tg] * scale});
      acc[tg] = 0.0;
    }
  }

  // A21: deviations-from-group-mean of the group-summed columns
  SignedSparseMatrix a21;
  a21.rows = n - r;
  a21.cols = r;
  a21.columns.resize(r);
  std::vector<double> dense_col(n, 0.0);
  for (std::uint32_t grp = 0; grp < r; ++grp) {
    const double scale = 1.0 / static_cast<double>(g.group_sizes[grp]);
    std::vector<std::uint32_t> rows_touched;
    for (std::uint32_t j = g.group_start[grp]; j < g.group_start[grp + 1]; ++j) {
      for (const MatrixEntry& e : cols[j]) {
        if (dense_col[e.row] == 0.0) rows_touched.push_back(e.row);
        dense_col[e.row] += e.value;
      }
    }
    std::vector<std::uint32_t> target_groups;
    for (std::uint32_t row : rows_touched) {
      const std::uint32_t tg = group_of_position(g, row);
      if (!g.is_single(tg)) target_groups.push_back(tg);
    }
    std::sort(target_groups.begin(), target_groups.end());
    target_groups.erase(std::unique(target_groups.begin(), target_groups.end()),
                        target_groups.end());
    for (std::uint32_t tg : target_groups) {
      const std::uint32_t b0 = g.group_start[tg];
      const std::size_t s = g.group_sizes[tg];
      double sum = 0.0;
      for (std::size_t i = 0; i < s; ++i) sum += dense_col[b0 + i];
      const double mean = sum / static_cast<double>(s);
      // deviation rows for group tg start at (group_start - group index) in x2
      const std::uint32_t dev0 = b0 - tg;
      for (std::size_t i = 0; i + 1 < s; ++i) {
        const double v = (dense_col[b0 + i] - mean) * scale;
        if (v != 0.0) a21.columns[grp].push_back({static_cast<std::uint32_t>(dev0 + i), v});
      }
    }
    for (std::uint32_t row : rows_touched) dense_col[row] = 0.0;
  }

  // A22' blocks: internal-link contribution only, per non-single group
  const LinkDecomposition parts = decompose_link_matrix(a, g);
  std::vector<Eigen::MatrixXd> blocks;
  std::vector<std::uint32_t> block_group;
  for (std::uint32_t grp = 0; grp < r; ++grp) {
    const std::size_t s = g.group_sizes[grp];
    if (s == 1) continue;
    const std::uint32_t a0 = g.group_start[grp];
    const auto sz = static_cast<Eigen::Index>(s);
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(sz, sz);
    for (std::size_t j = 0; j < s; ++j) {
      for (const MatrixEntry& e : parts.internal.columns[a0 + j]) {
        b(e.row - a0, static_cast<Eigen::Index>(j)) = e.value;
      }
    }
    Eigen::MatrixXd vg(sz - 1, sz);
    for (Eigen::Index i = 0; i + 1 < sz; ++i) {
      for (Eigen::Index j = 0; j < sz; ++j) {
        vg(i, j) = (i == j ? 1.0 : 0.0) - 1.0 / static_cast<double>(s);
      }
    }
    Eigen::MatrixXd wg = Eigen::MatrixXd::Zero(sz, sz - 1);
    for (Eigen::Index j = 0; j + 1 < sz; ++j) {
      wg(j, j) = 1.0;
      wg(sz - 1, j) = -1.0;
    }
    blocks.emplace_back(vg * b * wg);
    block_group.push_back(grp);
  }

  AggregatedSystem sys{BlockTransform(g),
                       SparseColumnMatrix(r, std::move(a11_cols), 1e-10),
                       std::move(a21),
                       std::move(blocks),
                       std::move(block_group),
                       std::vector<double>(r)};
  if (!sys.a11.is_stochastic()) {
    throw ValidationError("aggregated block is not column stochastic");
  }
  for (std::uint32_t grp = 0; grp < r; ++grp) {
    sys.u[grp] = static_cast<double>(g.group_sizes[grp]);
  }
  return sys;
}

ApproximateResult approximate_pagerank(const AggregatedSystem& sys, double m,
                                       const PowerOptions& opts,
                                       const std::vector<double>* x1_0) {
  if (!(m > 0.0 && m < 1.0)) throw ValidationError("damping factor must lie in (0, 1)");
  const Grouping& g = sys.grouping();
  const std::size_t n = g.n;
  const std::size_t r = g.r;

  // step 1: iterate the reduced system
  std::vector<double> x1;
  if (x1_0) {
    if (x1_0->size() != r) throw ValidationError("start vector length does not match groups");
    x1 = *x1_0;
  } else {
    x1.resize(r);
    for (std::size_t i = 0; i < r; ++i) x1[i] = sys.u[i] / static_cast<double>(n);
  }
  const double jump_scale = m / static_cast<double>(n);
  SolveReport report;
  std::vector<double> next(r);
  for (std::size_t k = 0; k < opts.max_iter; ++k) {
    sys.a11.multiply(x1, next);
    double sum = 0.0;
    for (std::size_t i = 0; i < r; ++i) {
      next[i] = (1.0 - m) * next[i] + jump_scale * sys.u[i];
      sum += next[i];
    }
    if (std::abs(sum - 1.0) > 1e-12) {
      for (double& v : next) v /= sum;
    }
    const double diff = l1_distance(next, x1);
    report.residual_history.push_back(diff);
    x1.swap(next);
    ++report.iterations;
    if (diff < opts.tol) {
      report.converged = true;
      break;
    }
  }

  // step 2: blockwise steady-state solve for the deviations
  std::vector<double> w = sys.a21.multiply(x1);
  std::vector<double> x2(n - r, 0.0);
  for (std::size_t b = 0; b < sys.a22_blocks.size(); ++b) {
    const std::uint32_t grp = sys.a22_block_group[b];
    const std::size_t s = g.group_sizes[grp];
    const std::uint32_t dev0 = g.group_start[grp] - grp;
    const auto sz = static_cast<Eigen::Index>(s - 1);
    Eigen::MatrixXd lhs = Eigen::MatrixXd::Identity(sz, sz) - (1.0 - m) * sys.a22_blocks[b];
    Eigen::VectorXd rhs(sz);
    for (Eigen::Index i = 0; i < sz; ++i) rhs(i) = (1.0 - m) * w[dev0 + i];
    const Eigen::VectorXd sol = lhs.partialPivLu().solve(rhs);
    const double resid = (lhs * sol - rhs).cwiseAbs().maxCoeff();
    if (!sol.allFinite() || resid > 1e-8 * (1.0 + rhs.cwiseAbs().maxCoeff())) {
      throw ValidationError("deviation solve is singular for group " + std::to_string(grp + 1));
    }
    for (Eigen::Index i = 0; i < sz; ++i) x2[dev0 + i] = sol(i);
  }

  // step 3: back to page coordinates
  std::vector<double> tilde(n);
  std::copy(x1.begin(), x1.end(), tilde.begin());
  std::copy(x2.begin(), x2.end(), tilde.begin() + static_cast<std::ptrdiff_t>(r));
  const std::vector<double> grouped = sys.transform.from_aggregated(tilde);
  ApproximateResult result;
  result.x_prime.resize(n);
  for (std::size_t pos = 0; pos < n; ++pos) result.x_prime[g.order[pos]] = grouped[pos];
  result.x1_tilde = std::move(x1);
  result.report = std::move(report);
  return result;
}

double error_bound_delta(double m, double epsilon) {
  if (!(m > 0.0 && m < 1.0)) throw ValidationError("damping factor must lie in (0, 1)");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ValidationError("target error must lie in (0, 1)");
  return m * epsilon / (4.0 * (1.0 - m) * (1.0 + epsilon));
}

GossipTrace aggregated_gossip(const AggregatedSystem& sys, double m, const GossipOptions& opts,
                              const RankVector* x_star) {
  const Grouping& g = sys.grouping();
  const std::size_t n = g.n;
  const std::size_t r = g.r;
  const double mh = opts.mh_override.value_or(m_hat(m, r));
  std::vector<double> x0;
  if (opts.x0) {
    if (opts.x0->size() != r) throw ValidationError("start vector length does not match groups");
    x0 = opts.x0->values;
  } else {
    x0.resize(r);
    for (std::size_t i = 0; i < r; ++i) x0[i] = sys.u[i] / static_cast<double>(n);
  }
  std::vector<double> jump(r);
  for (std::size_t i = 0; i < r; ++i) jump[i] = mh / static_cast<double>(n) * sys.u[i];
  detail::GossipEngine engine(sys.a11, mh, std::move(jump), opts, std::move(x0));

  // completing steps 2-3 for a reduced state yields the full-order vector
  auto complete = [&](const std::vector<double>& x1) {
    std::vector<double> w = sys.a21.multiply(x1);
    std::vector<double> tilde(n, 0.0);
    std::copy(x1.begin(), x1.end(), tilde.begin());
    for (std::size_t b = 0; b < sys.a22_blocks.size(); ++b) {
      const std::uint32_t grp = sys.a22_block_group[b];
      const std::size_t s = g.group_sizes[grp];
      const std::uint32_t dev0 = g.group_start[grp] - grp;
      const auto sz = static_cast<Eigen::Index>(s - 1);
      Eigen::MatrixXd lhs = Eigen::MatrixXd::Identity(sz, sz) - (1.0 - m) * sys.a22_blocks[b];
      Eigen::VectorXd rhs(sz);
      for (Eigen::Index i = 0; i < sz; ++i) rhs(i) = (1.0 - m) * w[dev0 + i];
      const Eigen::VectorXd sol = lhs.partialPivLu().solve(rhs);
      for (Eigen::Index i = 0; i < sz; ++i) tilde[r + dev0 + i] = sol(i);
    }
    const std::vector<double> grouped = sys.transform.from_aggregated(tilde);
    std::vector<double> full(n);
    for (std::size_t pos = 0; pos < n; ++pos) full[g.order[pos]] = grouped[pos];
    return full;
  };

  GossipTrace trace;
  trace.seed = opts.seed;
  const std::size_t every = opts.checkpoint_every == 0 ? 100 : opts.checkpoint_every;
  auto record = [&]() {
    trace.checkpoint_steps.push_back(engine.steps_done());
    trace.states.emplace_back(complete(engine.state()));
    RankVector avg(complete(engine.average()));
    if (x_star) {
      trace.err_l1.push_back(l1_distance(avg.values, x_star->values));
      trace.err_sq2.push_back(sq2_distance(avg.values, x_star->values));
    }
    trace.averages.push_back(std::move(avg));
  };
  record();
  for (std::size_t k = 1; k <= opts.steps; ++k) {
    engine.step();
    if (k % every == 0 || k == opts.steps) record();
  }
  return trace;
}

OperationCounts operation_counts(const SparseColumnMatrix& a, const AggregatedSystem& sys,
                                 const LinkDecomposition& parts, const SolveReport& report) {
  OperationCounts c;
  c.f0_a = a.nonzeros();
  c.f0_a11 = sys.a11.nonzeros();
  c.f0_a_ext = parts.external1.nonzeros() + parts.external2.nonzeros();
  c.iterations = report.iterations;
  return c;
}

} // namespace webrank
