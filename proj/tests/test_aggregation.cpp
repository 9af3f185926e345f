#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "test_support.hpp"
#include "webrank/aggregation.hpp"
#include "webrank/graph.hpp"
#include "webrank/pagerank.hpp"

using namespace webrank;
namespace wt = webrank::testing;

namespace {

const SparseColumnMatrix& six_page_matrix() {
  static const SparseColumnMatrix a = hyperlink_matrix(wt::six_page_graph());
  return a;
}

Grouping six_page_grouping() {
  const std::vector<std::uint32_t> raw = {0, 0, 1, 2, 2, 2}; // {1,2} {3} {4,5,6}
  return make_grouping(6, raw);
}

Grouping random_grouping(std::mt19937_64& gen, std::size_t n, std::size_t groups) {
  std::vector<std::uint32_t> raw(n);
  for (auto& v : raw) v = uniform_index(gen, static_cast<std::uint32_t>(groups));
  return make_grouping(n, raw);
}

} // namespace

TEST_CASE("grouping normalization and ordering") {
  const std::vector<std::uint32_t> raw = {7, 2, 7, 9, 2};
  const Grouping g = make_grouping(5, raw);
  CHECK(g.r == 3);
  CHECK(g.assignment == std::vector<std::uint32_t>{0, 1, 0, 2, 1});
  CHECK(g.group_sizes == std::vector<std::uint32_t>{2, 2, 1});
  CHECK(g.order == std::vector<std::uint32_t>{0, 2, 1, 4, 3});
  CHECK(g.single_count() == 1);
  for (std::uint32_t p = 0; p < 5; ++p) CHECK(g.order[g.position[p]] == p);
}

TEST_CASE("grouping file parsing") {
  std::istringstream in("1 1\n2 1\n3 2\n4 3\n5 3\n6 3\n");
  const Grouping g = parse_grouping(in, 6);
  CHECK(g.r == 3);
  CHECK(g.group_sizes == std::vector<std::uint32_t>{2, 1, 3});

  std::istringstream missing("1 1\n2 1\n");
  CHECK_THROWS_AS(parse_grouping(missing, 6), ValidationError);
  std::istringstream twice("1 1\n1 2\n");
  CHECK_THROWS_AS(parse_grouping(twice, 2), ValidationError);
}

TEST_CASE("grouping by label prefix") {
  WebGraph g = wt::six_page_graph();
  g.labels = {"a/x", "a/y", "hub", "b/1", "b/2", "b/3"};
  const Grouping grp = grouping_from_labels(g);
  CHECK(grp.r == 3);
  CHECK(grp.assignment == std::vector<std::uint32_t>{0, 0, 1, 2, 2, 2});
}

TEST_CASE("node parameters of the six-page web") {
  const auto d = node_parameters(wt::six_page_graph(), six_page_grouping());
  const std::vector<double> gold = {0.5, 0.5, 1.0, 1.0 / 3.0, 0.0, 0.0};
  REQUIRE(d.size() == 6);
  for (int i = 0; i < 6; ++i) CHECK(d[i] == gold[i]);
}

TEST_CASE("node parameter extremes") {
  const WebGraph g = wt::six_page_graph();
  const Grouping one = make_grouping(6, std::vector<std::uint32_t>(6, 0));
  for (double v : node_parameters(g, one)) CHECK(v == 0.0);
  std::vector<std::uint32_t> all(6);
  for (std::uint32_t i = 0; i < 6; ++i) all[i] = i;
  for (double v : node_parameters(g, make_grouping(6, all))) CHECK(v == 1.0);
}

TEST_CASE("node parameters require a repaired graph") {
  CHECK_THROWS_AS(node_parameters(wt::six_page_dangling(), six_page_grouping()),
                  ValidationError);
}

TEST_CASE("regroup splits pages over the threshold") {
  const WebGraph g = wt::six_page_graph();
  SUBCASE("0.5 keeps the grouping") {
    const Grouping r = regroup(g, six_page_grouping(), 0.5);
    CHECK(r.assignment == six_page_grouping().assignment);
  }
  SUBCASE("0.3 cascades to all singles") {
    // pass 1 splits pages 1, 2, 4; page 6 then exceeds the bound, then page 5
    const Grouping r = regroup(g, six_page_grouping(), 0.3);
    CHECK(r.r == 6);
    CHECK(r.single_count() == 6);
  }
  SUBCASE("threshold above every parameter is the identity") {
    const Grouping r = regroup(g, six_page_grouping(), 0.9);
    CHECK(r.assignment == six_page_grouping().assignment);
  }
}

TEST_CASE("transform of the six-page grouping") {
  const BlockTransform t(six_page_grouping());
  Eigen::MatrixXd gold(6, 6);
  const double th = 1.0 / 3.0;
  gold << 1, 1, 0, 0, 0, 0,
      0, 0, 1, 0, 0, 0,
      0, 0, 0, 1, 1, 1,
      0.5, -0.5, 0, 0, 0, 0,
      0, 0, 0, 2 * th, -th, -th,
      0, 0, 0, -th, 2 * th, -th;
  CHECK(wt::max_abs_diff(t.dense(), gold) < 1e-15);
  CHECK(wt::max_abs_diff(t.dense() * t.dense_inverse(), Eigen::MatrixXd::Identity(6, 6)) <
        1e-15);
}

TEST_CASE("all-single transform is the identity") {
  std::vector<std::uint32_t> all(5);
  for (std::uint32_t i = 0; i < 5; ++i) all[i] = i;
  const BlockTransform t(make_grouping(5, all));
  CHECK(wt::max_abs_diff(t.dense(), Eigen::MatrixXd::Identity(5, 5)) == 0.0);
}

TEST_CASE("block inverse matches dense inversion on random groupings") {
  std::mt19937_64 gen(2);
  for (int t = 0; t < 10; ++t) {
    const Grouping g = random_grouping(gen, 40, 7);
    const BlockTransform bt(g);
    const Eigen::MatrixXd v = bt.dense();
    CHECK(wt::max_abs_diff(v * bt.dense_inverse(), Eigen::MatrixXd::Identity(40, 40)) < 1e-12);
    CHECK(wt::max_abs_diff(bt.dense_inverse(), v.inverse()) < 1e-12);
    // the structured apply agrees with the dense product
    const RankVector x = wt::random_stochastic(gen, 40);
    const auto tilde = bt.to_aggregated(x.values);
    const Eigen::Map<const Eigen::VectorXd> xv(x.values.data(), 40);
    const Eigen::VectorXd gold = v * xv;
    for (int i = 0; i < 40; ++i) CHECK(tilde[i] == doctest::Approx(gold(i)).epsilon(1e-12));
    const auto back = bt.from_aggregated(tilde);
    for (int i = 0; i < 40; ++i) CHECK(back[i] == doctest::Approx(x.values[i]).epsilon(1e-12));
  }
}

TEST_CASE("six-page link decomposition") {
  const auto parts = decompose_link_matrix(six_page_matrix(), six_page_grouping());
  const double h = 0.5, th = 1.0 / 3.0;
  Eigen::MatrixXd internal(6, 6), ext1(6, 6), ext2(6, 6);
  internal << h, h, 0, 0, 0, 0,
      h, h, 0, 0, 0, 0,
      0, 0, 1, 0, 0, 0,
      0, 0, 0, th, 0, h,
      0, 0, 0, th, 0, h,
      0, 0, 0, th, 1, 0;
  ext1 << 0, 0, 0, 0, 0, 0,
      0, 0, th, 0, 0, 0,
      0, 0, -1, 0, 0, 0,
      0, 0, th, 0, 0, 0,
      0, 0, 0, 0, 0, 0,
      0, 0, th, 0, 0, 0;
  ext2 << -h, 0, 0, 0, 0, 0,
      0, -h, 0, 0, 0, 0,
      0, h, 0, th, 0, 0,
      h, 0, 0, -th, 0, 0,
      0, 0, 0, 0, 0, 0,
      0, 0, 0, 0, 0, 0;
  CHECK(wt::max_abs_diff(parts.internal.to_dense(), internal) < 1e-15);
  CHECK(wt::max_abs_diff(parts.external1.to_dense(), ext1) < 1e-15);
  CHECK(wt::max_abs_diff(parts.external2.to_dense(), ext2) < 1e-15);
}

TEST_CASE("a single all-encompassing group keeps everything internal") {
  const auto parts =
      decompose_link_matrix(six_page_matrix(), make_grouping(6, std::vector<std::uint32_t>(6, 0)));
  CHECK(wt::max_abs_diff(parts.internal.to_dense(), six_page_matrix().to_dense()) == 0.0);
  CHECK(parts.external1.nonzeros() == 0);
  CHECK(parts.external2.nonzeros() == 0);
}

TEST_CASE("decomposition reconstructs the matrix with bounded external parts") {
  std::mt19937_64 gen(6);
  for (int t = 0; t < 8; ++t) {
    const WebGraph g = wt::random_strong_graph(gen, 60, 240);
    const auto a = hyperlink_matrix(g);
    const Grouping grp = random_grouping(gen, 60, 9);
    const auto parts = decompose_link_matrix(a, grp);
    // permute A into grouped order for the comparison
    Eigen::MatrixXd ag(60, 60);
    const Eigen::MatrixXd ad = a.to_dense();
    for (int i = 0; i < 60; ++i) {
      for (int j = 0; j < 60; ++j) ag(grp.position[i], grp.position[j]) = ad(i, j);
    }
    const Eigen::MatrixXd sum = parts.internal.to_dense() + parts.external1.to_dense() +
                                parts.external2.to_dense();
    CHECK(wt::max_abs_diff(sum, ag) < 1e-14);
    const auto delta = node_parameters(g, grp);
    for (std::size_t j = 0; j < 60; ++j) {
      CHECK(std::abs(parts.external1.column_sum(j)) < 1e-12);
      CHECK(std::abs(parts.external2.column_sum(j)) < 1e-12);
      const std::uint32_t page = grp.order[j];
      if (!grp.is_single(grp.assignment[page])) {
        CHECK(parts.external2.column_abs_sum(j) <= 2.0 * delta[page] + 1e-12);
      }
      // internal block columns are stochastic
      double s = 0.0;
      for (const auto& e : parts.internal.columns[j]) s += e.value;
      CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("six-page aggregated system matches the printed blocks") {
  const auto sys = build_aggregated_system(six_page_matrix(), six_page_grouping(), 0.15);
  CHECK(sys.u == std::vector<double>{2.0, 1.0, 3.0});

  const Eigen::MatrixXd a11 = sys.a11.to_dense();
  Eigen::MatrixXd a11_gold(3, 3);
  a11_gold << 0.5, 1.0 / 3.0, 0.0,
      0.25, 0.0, 1.0 / 9.0,
      0.25, 2.0 / 3.0, 8.0 / 9.0;
  CHECK(wt::max_abs_diff(a11, a11_gold) < 1e-12);
  for (int j = 0; j < 3; ++j) CHECK(a11.col(j).sum() == doctest::Approx(1.0).epsilon(1e-10));

  // the (2,2) block keeps only the internal-link contribution
  REQUIRE(sys.a22_blocks.size() == 2);
  CHECK(sys.a22_block_group == std::vector<std::uint32_t>{0, 2});
  CHECK(sys.a22_blocks[0].rows() == 1);
  CHECK(std::abs(sys.a22_blocks[0](0, 0)) < 1e-15);
  Eigen::MatrixXd b3(2, 2);
  b3 << -1.0 / 6.0, -0.5, -1.0 / 6.0, -0.5;
  CHECK(wt::max_abs_diff(sys.a22_blocks[1], b3) < 1e-12);

  // full transformed matrix against the dense similarity transform
  const BlockTransform t(six_page_grouping());
  const Eigen::MatrixXd at = t.dense() * six_page_matrix().to_dense() * t.dense_inverse();
  CHECK(wt::max_abs_diff(a11, at.topLeftCorner(3, 3)) < 1e-12);
  CHECK(wt::max_abs_diff(sys.a21.to_dense(), at.bottomLeftCorner(3, 3)) < 1e-12);
  // spot value from the printed matrix
  CHECK(at(3, 1) == doctest::Approx(-1.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("one group collapses the reduced block to [1]") {
  const auto sys = build_aggregated_system(six_page_matrix(),
                                           make_grouping(6, std::vector<std::uint32_t>(6, 0)),
                                           0.15);
  CHECK(sys.groups() == 1);
  CHECK(sys.u == std::vector<double>{6.0});
  CHECK(sys.a11.to_dense()(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("aggregated blocks match the dense transform on random webs") {
  std::mt19937_64 gen(14);
  for (int t = 0; t < 6; ++t) {
    const std::size_t n = 20 + uniform_index(gen, 30);
    const auto a = hyperlink_matrix(wt::random_strong_graph(gen, n, 4 * n));
    const Grouping grp = random_grouping(gen, n, 2 + uniform_index(gen, 6));
    const auto sys = build_aggregated_system(a, grp, 0.15);
    const BlockTransform bt(grp);
    Eigen::MatrixXd ag(n, n);
    const Eigen::MatrixXd ad = a.to_dense();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) ag(grp.position[i], grp.position[j]) = ad(i, j);
    }
    const Eigen::MatrixXd at = bt.dense() * ag * bt.dense_inverse();
    const auto r = static_cast<Eigen::Index>(grp.r);
    CHECK(wt::max_abs_diff(sys.a11.to_dense(), at.topLeftCorner(r, r)) < 1e-10);
    CHECK(wt::max_abs_diff(sys.a21.to_dense(),
                           at.bottomLeftCorner(at.rows() - r, r)) < 1e-10);
  }
}

TEST_CASE("six-page approximate rank") {
  const auto sys = build_aggregated_system(six_page_matrix(), six_page_grouping(), 0.15);
  const auto res = approximate_pagerank(sys, 0.15, {1e-12, 2000});
  REQUIRE(res.report.converged);
  const double gold[] = {0.0566, 0.0920, 0.125, 0.212, 0.213, 0.302};
  for (int i = 0; i < 6; ++i) CHECK(std::abs(res.x_prime[i] - gold[i]) < 1e-3);

  auto [x_star, rep] = pagerank_power(six_page_matrix(), 0.15, {1e-13, 1000});
  CHECK(std::abs(l1_distance(res.x_prime, x_star.values) - 0.0188) < 1e-3);

  // group totals of the reduced iteration sum to 1
  double s = 0.0;
  for (double v : res.x1_tilde) s += v;
  CHECK(s == doctest::Approx(1.0).epsilon(1e-10));
  double sx = 0.0;
  for (double v : res.x_prime) sx += v;
  CHECK(sx == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("all singles reproduce the rank vector") {
  std::vector<std::uint32_t> all(6);
  for (std::uint32_t i = 0; i < 6; ++i) all[i] = i;
  const auto sys = build_aggregated_system(six_page_matrix(), make_grouping(6, all), 0.15);
  const double tol = 1e-10;
  const auto res = approximate_pagerank(sys, 0.15, {tol, 2000});
  auto [x_star, rep] = pagerank_power(six_page_matrix(), 0.15, {1e-14, 2000});
  CHECK(l1_distance(res.x_prime, x_star.values) <= 10.0 * tol);
}

TEST_CASE("different reduced starts land on the same answer") {
  const auto sys = build_aggregated_system(six_page_matrix(), six_page_grouping(), 0.15);
  const double tol = 1e-10;
  const std::vector<double> e1 = {1.0, 0.0, 0.0};
  const auto a = approximate_pagerank(sys, 0.15, {tol, 5000});
  const auto b = approximate_pagerank(sys, 0.15, {tol, 5000}, &e1);
  CHECK(l1_distance(a.x_prime, b.x_prime) <= 2.0 * tol);
}

TEST_CASE("transformed fixed point satisfies the aggregated equation") {
  std::mt19937_64 gen(27);
  for (int t = 0; t < 5; ++t) {
    const std::size_t n = 20 + uniform_index(gen, 20);
    const auto a = hyperlink_matrix(wt::random_strong_graph(gen, n, 3 * n));
    const Grouping grp = random_grouping(gen, n, 5);
    auto [x_star, rep] = pagerank_power(a, 0.15, {1e-13, 2000});
    REQUIRE(rep.converged);
    const BlockTransform bt(grp);
    std::vector<double> xg(n);
    for (std::size_t p = 0; p < n; ++p) xg[grp.position[p]] = x_star[p];
    const auto tilde = bt.to_aggregated(xg);
    // residual of x~ = (1-m) A~ x~ + (m/n) [u; 0]
    Eigen::MatrixXd ag(n, n);
    const Eigen::MatrixXd ad = a.to_dense();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) ag(grp.position[i], grp.position[j]) = ad(i, j);
    }
    const Eigen::MatrixXd at = bt.dense() * ag * bt.dense_inverse();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    for (std::size_t i = 0; i < grp.r; ++i) {
      rhs(i) = 0.15 / static_cast<double>(n) * grp.group_sizes[i];
    }
    const Eigen::Map<const Eigen::VectorXd> tv(tilde.data(), static_cast<Eigen::Index>(n));
    const Eigen::VectorXd resid = tv - 0.85 * (at * tv) - rhs;
    CHECK(resid.cwiseAbs().sum() < 1e-8);
    // group totals of the exact rank vector
    double sum1 = 0.0;
    for (std::size_t i = 0; i < grp.r; ++i) sum1 += tilde[i];
    CHECK(sum1 == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("error bound formula") {
  CHECK(error_bound_delta(0.15, 0.1) == doctest::Approx(0.004010695187).epsilon(1e-9));
  CHECK(error_bound_delta(0.15, 0.05) < error_bound_delta(0.15, 0.1));
  CHECK(error_bound_delta(0.15, 0.1) < error_bound_delta(0.15, 0.2));
  CHECK_THROWS_AS(error_bound_delta(0.15, 0.0), ValidationError);
}

TEST_CASE("regrouping to the bound meets the target error") {
  std::mt19937_64 gen(8);
  for (double eps : {0.1, 0.2}) {
    const double bound = error_bound_delta(0.15, eps);
    for (int t = 0; t < 5; ++t) {
      const std::size_t n = 30 + uniform_index(gen, 60);
      const WebGraph g = wt::random_strong_graph(gen, n, 2 * n);
      const Grouping init = random_grouping(gen, n, std::max<std::size_t>(2, n / 8));
      const Grouping grp = regroup(g, init, bound);
      const auto a = hyperlink_matrix(g);
      const auto sys = build_aggregated_system(a, grp, 0.15);
      const auto res = approximate_pagerank(sys, 0.15, {1e-12, 5000});
      auto [x_star, rep] = pagerank_power(a, 0.15, {1e-13, 2000});
      CHECK(l1_distance(res.x_prime, x_star.values) <= eps);
    }
  }
}

TEST_CASE("aggregated gossip error settles at the approximation error") {
  const auto sys = build_aggregated_system(six_page_matrix(), six_page_grouping(), 0.15);
  auto [x_star, rep] = pagerank_power(six_page_matrix(), 0.15, {1e-13, 1000});
  GossipOptions opts;
  opts.seed = 15;
  opts.steps = 100000;
  opts.checkpoint_every = 10000;
  const GossipTrace t = aggregated_gossip(sys, 0.15, opts, &x_star);
  CHECK(std::abs(t.err_l1.back() - 0.0188) < 5e-3);
}

TEST_CASE("all-single aggregated gossip equals the plain scheme bit for bit") {
  std::vector<std::uint32_t> all(6);
  for (std::uint32_t i = 0; i < 6; ++i) all[i] = i;
  const auto sys = build_aggregated_system(six_page_matrix(), make_grouping(6, all), 0.15);
  auto [x_star, rep] = pagerank_power(six_page_matrix(), 0.15, {1e-13, 1000});
  GossipOptions opts;
  opts.seed = 77;
  opts.steps = 20000;
  const GossipTrace plain = gossip_run(six_page_matrix(), 0.15, opts, &x_star);
  const GossipTrace agg = aggregated_gossip(sys, 0.15, opts, &x_star);
  REQUIRE(plain.states.size() == agg.states.size());
  for (std::size_t c = 0; c < plain.states.size(); ++c) {
    CHECK(plain.states[c].values == agg.states[c].values);
    CHECK(plain.averages[c].values == agg.averages[c].values);
  }
  CHECK(plain.err_l1 == agg.err_l1);
}

TEST_CASE("aggregation reaches its error level faster than the full scheme") {
  // paired seeds: steps for the reduced scheme to first dip under the level
  // vs the full scheme reaching the same level
  std::mt19937_64 gen(55);
  const std::size_t n = 200;
  const WebGraph g = wt::random_strong_graph(gen, n, 5 * n);
  const Grouping init = random_grouping(gen, n, 12);
  const Grouping grp = regroup(g, init, 0.4);
  const auto a = hyperlink_matrix(g);
  const auto sys = build_aggregated_system(a, grp, 0.15);
  auto [x_star, rep] = pagerank_power(a, 0.15, {1e-13, 2000});
  const auto res = approximate_pagerank(sys, 0.15, {1e-12, 5000});
  const double plateau = l1_distance(res.x_prime, x_star.values);
  const double level = std::max(2.0 * plateau, 0.05);

  GossipOptions opts;
  opts.seed = 3;
  opts.steps = 60000;
  opts.checkpoint_every = 500;
  const GossipTrace agg = aggregated_gossip(sys, 0.15, opts, &x_star);
  const GossipTrace full = gossip_run(a, 0.15, opts, &x_star);
  auto first_below = [&](const GossipTrace& t) {
    for (std::size_t c = 0; c < t.err_l1.size(); ++c) {
      if (t.err_l1[c] <= level) return t.checkpoint_steps[c];
    }
    return std::size_t(-1);
  };
  const auto agg_steps = first_below(agg);
  const auto full_steps = first_below(full);
  REQUIRE(agg_steps != std::size_t(-1));
  CHECK(agg_steps <= full_steps);
}
