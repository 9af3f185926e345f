#include <cctype>
#include <iomanip>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "webrank/aggregation.hpp"
#include "webrank/consensus.hpp"
#include "webrank/distributed.hpp"
#include "webrank/eigenfactor.hpp"
#include "webrank/graph.hpp"
#include "webrank/metrics.hpp"
#include "webrank/pagerank.hpp"
#include "webrank/rng.hpp"

using json = nlohmann::ordered_json;

namespace {

struct GlobalOpts {
  std::string output;
  std::string format = "json";
  bool quiet = false;
};

void note(const GlobalOpts& g, const std::string& msg) {
  if (!g.quiet) std::cerr << msg << "\n";
}

void write_text(const GlobalOpts& g, const std::string& text) {
  if (g.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(g.output, std::ios::binary);
  if (!out) throw webrank::ValidationError("cannot open output file '" + g.output + "'");
  out << text;
}

void emit(const GlobalOpts& g, const json& j) { write_text(g, j.dump(2) + "\n"); }

json optional_to_json(const std::optional<double>& v) {
  if (v) return *v;
  return nullptr;
}

webrank::WebGraph load_graph(const std::string& path, const std::string& labels_path) {
  webrank::WebGraph g = webrank::parse_edge_list_file(path);
  if (!labels_path.empty()) {
    std::ifstream in(labels_path);
    if (!in) throw webrank::ValidationError("cannot open labels file '" + labels_path + "'");
    webrank::parse_labels(g, in);
  }
  return g;
}

webrank::RepairPolicy parse_repair(const std::string& name) {
  if (name == "back-links") return webrank::RepairPolicy::BackLinks;
  if (name == "uniform") return webrank::RepairPolicy::UniformColumn;
  throw webrank::ValidationError("unknown repair policy '" + name + "'");
}

std::vector<double> load_rank_values(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw webrank::ValidationError("cannot open rank file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw webrank::ValidationError("bad JSON in '" + path + "': " + e.what());
  }
  if (!j.contains("values") || !j["values"].is_array()) {
    throw webrank::ValidationError("'" + path + "' has no \"values\" array");
  }
  return j["values"].get<std::vector<double>>();
}

// ---- rank ----------------------------------------------------------------

struct RankArgs {
  std::string input;
  double m = 0.15;
  double tol = 1e-10;
  std::size_t max_iter = 1000;
  std::string repair = "back-links";
  bool prune = false;
};

int run_rank(const GlobalOpts& g, const RankArgs& args) {
  webrank::WebGraph graph = load_graph(args.input, "");
  if (args.prune) {
    std::vector<std::uint32_t> removed;
    graph = webrank::prune_no_inlinks(graph, &removed);
    if (!removed.empty()) note(g, "pruned " + std::to_string(removed.size()) + " page(s)");
  }
  const auto dangling = webrank::find_dangling(graph);
  graph = webrank::repair_dangling(graph, parse_repair(args.repair));
  if (!dangling.empty()) {
    note(g, "repaired " + std::to_string(dangling.size()) + " dangling page(s)");
  }
  const auto a = webrank::hyperlink_matrix(graph);
  auto [x, report] = webrank::pagerank_power(a, args.m, {args.tol, args.max_iter});

  if (g.format == "csv") {
    std::ostringstream out;
    out << std::setprecision(17) << "page,value\n";
    for (std::size_t i = 0; i < x.size(); ++i) out << (i + 1) << "," << x[i] << "\n";
    write_text(g, out.str());
  } else {
    json j;
    j["command"] = "rank";
    j["n"] = graph.n;
    j["m"] = args.m;
    j["repair"] = args.repair;
    json repaired = json::array();
    for (auto d : dangling) repaired.push_back(d + 1);
    j["repaired_pages"] = repaired;
    j["duplicates_collapsed"] = graph.duplicates_collapsed;
    j["iterations"] = report.iterations;
    j["converged"] = report.converged;
    j["values"] = x.values;
    j["residual_history"] = report.residual_history;
    emit(g, j);
  }
  return report.converged ? 0 : 2;
}

// ---- simulate-gossip -------------------------------------------------------

struct GossipArgs {
  std::string input;
  double m = 0.15;
  std::uint64_t seed = 0;
  std::size_t steps = 100000;
  std::string mode = "uniform";
  double p = 0.2;
  std::size_t trials = 1;
  std::size_t checkpoint_every = 100;
  std::string ref_rank;
  std::string update = "exchange";
  double mhat_override = 0.0;
  std::string repair = "back-links";
  std::string groups; // run the reduced scheme when set
  std::string labels;
  std::string track; // comma-separated pages whose averages go into the output
};

std::vector<std::uint32_t> parse_track_list(const std::string& spec, std::size_t n) {
  std::vector<std::uint32_t> pages;
  std::istringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    const auto idx = std::stoull(tok);
    if (idx == 0 || idx > n) throw webrank::ValidationError("tracked page out of range");
    pages.push_back(static_cast<std::uint32_t>(idx - 1));
  }
  return pages;
}

int run_gossip(const GlobalOpts& g, const GossipArgs& args) {
  webrank::WebGraph graph = load_graph(args.input, args.labels);
  graph = webrank::repair_dangling(graph, parse_repair(args.repair));
  const auto a = webrank::hyperlink_matrix(graph);

  webrank::RankVector x_star;
  if (!args.ref_rank.empty()) {
    x_star = webrank::RankVector(load_rank_values(args.ref_rank));
  } else {
    auto [xs, rep] = webrank::pagerank_power(a, args.m);
    if (!rep.converged) throw webrank::ValidationError("reference solve did not converge");
    x_star = std::move(xs);
    note(g, "reference rank computed internally (" + std::to_string(rep.iterations) +
                " iterations)");
  }
  if (x_star.size() != a.size()) {
    throw webrank::ValidationError("reference rank length does not match the graph");
  }

  webrank::GossipOptions opts;
  opts.steps = args.steps;
  opts.checkpoint_every = args.checkpoint_every;
  if (args.mode == "simultaneous") {
    opts.mode.kind = webrank::GossipMode::Simultaneous;
    opts.mode.p = args.p;
  } else if (args.mode != "uniform") {
    throw webrank::ValidationError("unknown mode '" + args.mode + "'");
  }
  if (args.update == "broadcast") {
    opts.rule = webrank::UpdateRule::Broadcast;
  } else if (args.update != "exchange") {
    throw webrank::ValidationError("unknown update rule '" + args.update + "'");
  }
  if (args.mhat_override > 0.0) opts.mh_override = args.mhat_override;

  std::optional<webrank::AggregatedSystem> sys;
  if (!args.groups.empty()) {
    webrank::Grouping grouping = args.groups == "by-label-prefix"
                                     ? webrank::grouping_from_labels(graph)
                                     : webrank::parse_grouping_file(args.groups, graph.n);
    sys.emplace(webrank::build_aggregated_system(a, grouping, args.m));
    note(g, "reduced scheme over " + std::to_string(sys->groups()) + " groups");
  }
  std::vector<webrank::GossipTrace> traces;
  traces.reserve(args.trials);
  for (std::size_t t = 0; t < args.trials; ++t) {
    opts.seed = args.seed + t;
    traces.push_back(sys ? webrank::aggregated_gossip(*sys, args.m, opts, &x_star)
                         : webrank::gossip_run(a, args.m, opts, &x_star));
  }
  const auto tracked = parse_track_list(args.track, a.size());
  const std::size_t ncp = traces.front().checkpoint_steps.size();
  auto series = [&](auto getter) {
    json mean = json::array(), mn = json::array(), mx = json::array();
    for (std::size_t c = 0; c < ncp; ++c) {
      double s = 0.0, lo = 0.0, hi = 0.0;
      for (std::size_t t = 0; t < traces.size(); ++t) {
        const double v = getter(traces[t], c);
        s += v;
        lo = t == 0 ? v : std::min(lo, v);
        hi = t == 0 ? v : std::max(hi, v);
      }
      mean.push_back(s / static_cast<double>(traces.size()));
      mn.push_back(lo);
      mx.push_back(hi);
    }
    return json{{"mean", mean}, {"min", mn}, {"max", mx}};
  };
  const json l1 = series([](const webrank::GossipTrace& t, std::size_t c) { return t.err_l1[c]; });
  const json sq2 =
      series([](const webrank::GossipTrace& t, std::size_t c) { return t.err_sq2[c]; });

  if (g.format == "csv") {
    std::ostringstream out;
    out << std::setprecision(17) << "checkpoint,step,mean_l1,min_l1,max_l1,mean_sq2,min_sq2,max_sq2";
    for (auto p : tracked) out << ",y_" << (p + 1);
    out << "\n";
    for (std::size_t c = 0; c < ncp; ++c) {
      out << c << "," << traces.front().checkpoint_steps[c] << "," << l1["mean"][c].dump() << ","
          << l1["min"][c].dump() << "," << l1["max"][c].dump() << "," << sq2["mean"][c].dump()
          << "," << sq2["min"][c].dump() << "," << sq2["max"][c].dump();
      for (auto p : tracked) out << "," << traces.front().averages[c][p];
      out << "\n";
    }
    write_text(g, out.str());
  } else {
    json j;
    j["command"] = "simulate-gossip";
    j["n"] = a.size();
    j["m"] = args.m;
    j["mode"] = args.mode;
    if (args.mode == "simultaneous") j["p"] = args.p;
    j["update"] = args.update;
    j["m_hat"] = opts.mh_override.value_or(args.mode == "simultaneous"
                                               ? webrank::m_hat_simultaneous(args.m, args.p)
                                               : webrank::m_hat(args.m, a.size()));
    j["seed"] = args.seed;
    j["trials"] = args.trials;
    j["steps"] = args.steps;
    j["checkpoint_every"] = args.checkpoint_every;
    j["checkpoints"] = traces.front().checkpoint_steps;
    j["l1"] = l1;
    j["sq2"] = sq2;
    if (sys) j["groups"] = sys->groups();
    json finals = json::array();
    for (const auto& t : traces) finals.push_back(t.err_l1.back());
    j["final_l1_per_trial"] = finals;
    if (!tracked.empty()) {
      json series = json::object();
      for (auto p : tracked) {
        json col = json::array();
        for (std::size_t c = 0; c < ncp; ++c) col.push_back(traces.front().averages[c][p]);
        series[std::to_string(p + 1)] = col;
      }
      j["tracked_averages"] = series;
    }
    emit(g, j);
  }
  return 0;
}

// ---- aggregate -------------------------------------------------------------

struct AggregateArgs {
  std::string input;
  std::string groups; // file path or "by-label-prefix"
  std::string labels;
  double delta = 0.0;
  std::string delta_sweep; // comma-separated thresholds
  double m = 0.15;
  double tol = 1e-10;
  std::size_t max_iter = 1000;
  std::string ref_rank;
  std::string repair = "back-links";
};

// One row of the threshold sweep: group counts and comparison metrics of the
// approximation produced by regrouping at the given threshold.
json sweep_row(const webrank::WebGraph& graph, const webrank::SparseColumnMatrix& a,
               const webrank::Grouping& initial, double delta, double m,
               const webrank::PowerOptions& opts, const std::vector<double>& x_star) {
  const webrank::Grouping grouping = webrank::regroup(graph, initial, delta);
  const auto sys = webrank::build_aggregated_system(a, grouping, m);
  const auto res = webrank::approximate_pagerank(sys, m, opts);
  const auto cmp = webrank::compare_vectors(x_star, res.x_prime);
  json row;
  row["delta"] = delta;
  row["r"] = grouping.r;
  row["r1"] = grouping.single_count();
  row["l1_error"] = cmp.l1;
  row["pearson"] = optional_to_json(cmp.pearson);
  row["spearman"] = optional_to_json(cmp.spearman);
  row["slope"] = optional_to_json(cmp.slope);
  return row;
}

int run_aggregate(const GlobalOpts& g, const AggregateArgs& args) {
  webrank::WebGraph graph = load_graph(args.input, args.labels);
  graph = webrank::repair_dangling(graph, parse_repair(args.repair));
  webrank::Grouping grouping = args.groups == "by-label-prefix"
                                   ? webrank::grouping_from_labels(graph)
                                   : webrank::parse_grouping_file(args.groups, graph.n);
  const auto a_for_sweep = webrank::hyperlink_matrix(graph);

  if (!args.delta_sweep.empty()) {
    std::vector<double> x_star;
    if (!args.ref_rank.empty()) {
      x_star = load_rank_values(args.ref_rank);
    } else {
      auto [xs, rep] = webrank::pagerank_power(a_for_sweep, args.m);
      if (!rep.converged) throw webrank::ValidationError("reference solve did not converge");
      x_star = std::move(xs.values);
    }
    json rows = json::array();
    std::istringstream ss(args.delta_sweep);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (tok.empty()) continue;
      rows.push_back(sweep_row(graph, a_for_sweep, grouping, std::stod(tok), args.m,
                               {args.tol, args.max_iter}, x_star));
    }
    if (g.format == "csv") {
      std::ostringstream out;
      out << "delta,r,r1,l1_error,pearson,spearman,slope\n";
      for (const auto& row : rows) {
        out << row["delta"].dump() << "," << row["r"].dump() << "," << row["r1"].dump() << ","
            << row["l1_error"].dump() << "," << row["pearson"].dump() << ","
            << row["spearman"].dump() << "," << row["slope"].dump() << "\n";
      }
      write_text(g, out.str());
    } else {
      json j;
      j["command"] = "aggregate";
      j["n"] = graph.n;
      j["m"] = args.m;
      j["sweep"] = rows;
      emit(g, j);
    }
    return 0;
  }

  if (args.delta > 0.0) grouping = webrank::regroup(graph, grouping, args.delta);
  const auto params = webrank::node_parameters(graph, grouping);
  const auto& a = a_for_sweep;
  const auto parts = webrank::decompose_link_matrix(a, grouping);
  const auto sys = webrank::build_aggregated_system(a, grouping, args.m);
  const auto result = webrank::approximate_pagerank(sys, args.m, {args.tol, args.max_iter});
  const auto counts = webrank::operation_counts(a, sys, parts, result.report);

  if (g.format == "csv") {
    std::ostringstream out;
    out << std::setprecision(17) << "page,value\n";
    for (std::size_t i = 0; i < result.x_prime.size(); ++i) {
      out << (i + 1) << "," << result.x_prime[i] << "\n";
    }
    write_text(g, out.str());
    return result.report.converged ? 0 : 2;
  }

  json j;
  j["command"] = "aggregate";
  j["n"] = graph.n;
  j["m"] = args.m;
  j["r"] = grouping.r;
  j["r1"] = grouping.single_count();
  if (args.delta > 0.0) j["delta_threshold"] = args.delta;
  json hist = json::array();
  {
    std::vector<std::size_t> bins(11, 0);
    for (std::size_t p = 0; p < params.size(); ++p) {
      const auto b = static_cast<std::size_t>(std::min(10.0, params[p] * 10.0));
      ++bins[b];
    }
    for (std::size_t b = 0; b < bins.size(); ++b) hist.push_back(bins[b]);
  }
  j["delta_histogram"] = hist;
  double max_nonsingle = 0.0;
  for (std::size_t p = 0; p < params.size(); ++p) {
    if (!grouping.is_single(grouping.assignment[p])) {
      max_nonsingle = std::max(max_nonsingle, params[p]);
    }
  }
  j["delta_max_nonsingle"] = max_nonsingle;
  j["iterations"] = result.report.iterations;
  j["converged"] = result.report.converged;
  j["counts"] = {{"f0_A", counts.f0_a}, {"f0_A11", counts.f0_a11}, {"f0_A_ext", counts.f0_a_ext}};
  j["x1_tilde"] = result.x1_tilde;
  j["values"] = result.x_prime; // same key as `rank`, so `compare` accepts both
  if (!args.ref_rank.empty()) {
    const auto ref = load_rank_values(args.ref_rank);
    const auto cmp = webrank::compare_vectors(ref, result.x_prime);
    j["l1_error"] = cmp.l1;
    j["pearson"] = optional_to_json(cmp.pearson);
    j["spearman"] = optional_to_json(cmp.spearman);
    j["slope"] = optional_to_json(cmp.slope);
  }
  emit(g, j);
  return result.report.converged ? 0 : 2;
}

// ---- consensus ------------------------------------------------------------

struct ConsensusArgs {
  std::string input;
  std::string x0 = "e1";
  std::uint64_t seed = 0;
  std::size_t steps = 10000;
  std::string patterns = "per-page";
  std::size_t checkpoint_every = 100;
};

std::vector<double> parse_x0(const std::string& spec, std::size_t n, std::uint64_t seed) {
  if (spec == "uniform-random") {
    std::mt19937_64 gen(webrank::derive_seed(seed, 0x5eedULL));
    std::vector<double> x(n);
    for (double& v : x) v = webrank::uniform_double(gen);
    return x;
  }
  if (spec.size() > 1 && spec[0] == 'e' && std::isdigit(static_cast<unsigned char>(spec[1]))) {
    const auto idx = std::stoull(spec.substr(1));
    if (idx == 0 || idx > n) throw webrank::ValidationError("x0 index out of range");
    std::vector<double> x(n, 0.0);
    x[idx - 1] = 1.0;
    return x;
  }
  std::ifstream in(spec);
  if (!in) throw webrank::ValidationError("cannot open x0 file '" + spec + "'");
  std::vector<double> x;
  double v = 0.0;
  while (in >> v) x.push_back(v);
  if (x.size() != n) throw webrank::ValidationError("x0 file length does not match agents");
  return x;
}

webrank::CommPatternSet parse_patterns(const std::string& spec, const webrank::WebGraph& g) {
  if (spec == "per-page") return webrank::per_page_patterns(g);
  if (spec == "static") return webrank::static_pattern(g);
  std::ifstream in(spec);
  if (!in) throw webrank::ValidationError("cannot open patterns file '" + spec + "'");
  // lines "pattern_index src dst", 1-based; self-loops are added automatically
  std::map<std::uint64_t, webrank::CommPattern> pats;
  std::uint64_t k = 0, src = 0, dst = 0;
  while (in >> k >> src >> dst) {
    if (src == 0 || dst == 0 || src > g.n || dst > g.n) {
      throw webrank::ValidationError("pattern edge index out of range");
    }
    pats[k].edges.emplace_back(static_cast<std::uint32_t>(src - 1),
                               static_cast<std::uint32_t>(dst - 1));
  }
  webrank::CommPatternSet set;
  set.n = g.n;
  for (auto& [id, pat] : pats) {
    for (std::uint32_t j = 0; j < g.n; ++j) pat.edges.emplace_back(j, j);
    std::sort(pat.edges.begin(), pat.edges.end());
    pat.edges.erase(std::unique(pat.edges.begin(), pat.edges.end()), pat.edges.end());
    set.patterns.push_back(std::move(pat));
  }
  set.validate(g);
  return set;
}

int run_consensus(const GlobalOpts& g, const ConsensusArgs& args) {
  webrank::WebGraph graph = load_graph(args.input, "");
  const auto patterns = parse_patterns(args.patterns, graph);
  const auto x0 = parse_x0(args.x0, graph.n, args.seed);
  const auto trace =
      webrank::consensus_run(patterns, x0, args.seed, args.steps, args.checkpoint_every);

  if (g.format == "csv") {
    std::ostringstream out;
    out << std::setprecision(17) << "step,disagreement,pairwise_mse\n";
    for (std::size_t c = 0; c < trace.checkpoint_steps.size(); ++c) {
      out << trace.checkpoint_steps[c] << "," << trace.disagreement[c] << ","
          << trace.pairwise_mse[c] << "\n";
    }
    write_text(g, out.str());
    return 0;
  }
  json j;
  j["command"] = "consensus";
  j["n"] = graph.n;
  j["d"] = patterns.patterns.size();
  j["patterns"] = args.patterns;
  j["x0"] = args.x0;
  j["seed"] = args.seed;
  j["steps"] = args.steps;
  j["checkpoints"] = trace.checkpoint_steps;
  j["disagreement"] = trace.disagreement;
  j["pairwise_mse"] = trace.pairwise_mse;
  j["final_disagreement"] = trace.disagreement.back();
  j["final_state"] = trace.states.back();
  emit(g, j);
  return 0;
}

// ---- eigenfactor ------------------------------------------------------------

struct EigenfactorArgs {
  std::string citations;
  std::string articles;
  double m = 0.15;
  double tol = 1e-12;
  std::size_t max_iter = 1000;
};

int run_eigenfactor(const GlobalOpts& g, const EigenfactorArgs& args) {
  const auto data = webrank::load_citation_data_files(args.citations, args.articles);
  const auto result = webrank::eigenfactor(data, args.m, {args.tol, args.max_iter});

  std::vector<std::size_t> order(data.n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return result.ef[a] > result.ef[b]; });

  if (g.format == "csv") {
    std::ostringstream out;
    out << std::setprecision(17) << "journal,influence,ef,ai,rank\n";
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
      const std::size_t i = order[pos];
      out << data.journals[i] << "," << result.influence[i] << "," << result.ef[i] << ",";
      if (result.ai[i]) out << *result.ai[i];
      out << "," << (pos + 1) << "\n";
    }
    write_text(g, out.str());
    return result.report.converged ? 0 : 2;
  }
  json j;
  j["command"] = "eigenfactor";
  j["n"] = data.n;
  j["m"] = args.m;
  j["iterations"] = result.report.iterations;
  j["converged"] = result.report.converged;
  j["values"] = result.influence.values; // influence in input order, for `compare`
  json rows = json::array();
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const std::size_t i = order[pos];
    json row;
    row["journal"] = data.journals[i];
    row["influence"] = result.influence[i];
    row["ef"] = result.ef[i];
    row["ai"] = optional_to_json(result.ai[i]);
    row["rank"] = pos + 1;
    rows.push_back(row);
  }
  j["journals"] = rows;
  emit(g, j);
  return result.report.converged ? 0 : 2;
}

// ---- compare ----------------------------------------------------------------

struct CompareArgs {
  std::string a;
  std::string b;
  std::size_t top_k = 0;
};

int run_compare(const GlobalOpts& g, const CompareArgs& args) {
  const auto va = load_rank_values(args.a);
  const auto vb = load_rank_values(args.b);
  std::optional<std::size_t> k;
  if (args.top_k > 0) k = args.top_k;
  const auto r = webrank::compare_vectors(va, vb, k);
  json j;
  j["command"] = "compare";
  j["n"] = va.size();
  j["l1_error"] = r.l1;
  j["pearson"] = optional_to_json(r.pearson);
  j["spearman"] = optional_to_json(r.spearman);
  j["slope"] = optional_to_json(r.slope);
  if (k) j["top_k_overlap"] = optional_to_json(r.top_k);
  emit(g, j);
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"PageRank, randomized gossip, web aggregation, consensus and journal ranking"};
  app.require_subcommand(1);
  app.fallthrough(); // global flags may follow the subcommand

  GlobalOpts g;
  app.add_option("--output", g.output, "Write the report to this file instead of stdout");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_flag("--quiet", g.quiet, "Suppress progress notes on stderr");

  RankArgs rank;
  auto* c_rank = app.add_subcommand("rank", "Compute the rank vector by the power method");
  c_rank->add_option("--input", rank.input, "Edge-list file")->required();
  c_rank->add_option("--m", rank.m, "Damping factor");
  c_rank->add_option("--tol", rank.tol, "Termination tolerance (1-norm)");
  c_rank->add_option("--max-iter", rank.max_iter, "Iteration cap");
  c_rank->add_option("--repair", rank.repair, "Dangling-node repair policy")
      ->check(CLI::IsMember({"back-links", "uniform"}));
  c_rank->add_flag("--prune-no-inlinks", rank.prune, "Drop pages without incoming links first");

  GossipArgs gossip;
  auto* c_gossip = app.add_subcommand("simulate-gossip", "Randomized distributed computation");
  c_gossip->add_option("--input", gossip.input, "Edge-list file")->required();
  c_gossip->add_option("--m", gossip.m, "Damping factor");
  c_gossip->add_option("--seed", gossip.seed, "Base seed; trial t uses seed+t");
  c_gossip->add_option("--steps", gossip.steps, "Updates per trial");
  c_gossip->add_option("--mode", gossip.mode, "Page selection scheme")
      ->check(CLI::IsMember({"uniform", "simultaneous"}));
  c_gossip->add_option("--p", gossip.p, "Firing probability (simultaneous mode)");
  c_gossip->add_option("--trials", gossip.trials, "Independent trials");
  c_gossip->add_option("--checkpoint-every", gossip.checkpoint_every, "Checkpoint interval");
  c_gossip->add_option("--ref-rank", gossip.ref_rank, "Rank JSON used as the error reference");
  c_gossip->add_option("--update", gossip.update, "Single-page update rule")
      ->check(CLI::IsMember({"exchange", "broadcast"}));
  c_gossip->add_option("--mhat", gossip.mhat_override, "Override the derived damping constant");
  c_gossip->add_option("--repair", gossip.repair, "Dangling-node repair policy")
      ->check(CLI::IsMember({"back-links", "uniform"}));
  c_gossip->add_option("--groups", gossip.groups,
                       "Run the reduced scheme over this grouping (file or 'by-label-prefix')");
  c_gossip->add_option("--labels", gossip.labels, "Page labels file (with by-label-prefix)");
  c_gossip->add_option("--track", gossip.track,
                       "Comma-separated pages whose time averages join the output");

  AggregateArgs agg;
  auto* c_agg = app.add_subcommand("aggregate", "Grouped approximate rank computation");
  c_agg->add_option("--input", agg.input, "Edge-list file")->required();
  c_agg->add_option("--groups", agg.groups, "Grouping file, or 'by-label-prefix'")->required();
  c_agg->add_option("--labels", agg.labels, "Page labels file (with by-label-prefix)");
  c_agg->add_option("--delta", agg.delta, "Regroup until non-single parameters stay below this");
  c_agg->add_option("--delta-sweep", agg.delta_sweep,
                    "Comma-separated thresholds; emit error/correlation series instead");
  c_agg->add_option("--m", agg.m, "Damping factor");
  c_agg->add_option("--tol", agg.tol, "Termination tolerance");
  c_agg->add_option("--max-iter", agg.max_iter, "Iteration cap");
  c_agg->add_option("--ref-rank", agg.ref_rank, "Rank JSON to compare against");
  c_agg->add_option("--repair", agg.repair, "Dangling-node repair policy")
      ->check(CLI::IsMember({"back-links", "uniform"}));

  ConsensusArgs cons;
  auto* c_cons = app.add_subcommand("consensus", "Stochastic multi-agent consensus");
  c_cons->add_option("--input", cons.input, "Edge-list file")->required();
  c_cons->add_option("--x0", cons.x0, "e<i>, uniform-random, or a file of values");
  c_cons->add_option("--seed", cons.seed, "Seed");
  c_cons->add_option("--steps", cons.steps, "Updates");
  c_cons->add_option("--patterns", cons.patterns, "per-page, static, or a pattern file");
  c_cons->add_option("--checkpoint-every", cons.checkpoint_every, "Checkpoint interval");

  EigenfactorArgs ef;
  auto* c_ef = app.add_subcommand("eigenfactor", "Journal ranking from citation counts");
  c_ef->add_option("--citations", ef.citations, "CSV citing,cited,count")->required();
  c_ef->add_option("--articles", ef.articles, "CSV journal,articles")->required();
  c_ef->add_option("--m", ef.m, "Damping factor");
  c_ef->add_option("--tol", ef.tol, "Termination tolerance");
  c_ef->add_option("--max-iter", ef.max_iter, "Iteration cap");

  CompareArgs cmp;
  auto* c_cmp = app.add_subcommand("compare", "Compare two rank JSON files");
  c_cmp->add_option("--a", cmp.a, "Reference rank JSON")->required();
  c_cmp->add_option("--b", cmp.b, "Candidate rank JSON")->required();
  c_cmp->add_option("--top-k", cmp.top_k, "Also report top-k overlap");

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_rank->parsed()) return run_rank(g, rank);
    if (c_gossip->parsed()) return run_gossip(g, gossip);
    if (c_agg->parsed()) return run_aggregate(g, agg);
    if (c_cons->parsed()) return run_consensus(g, cons);
    if (c_ef->parsed()) return run_eigenfactor(g, ef);
    if (c_cmp->parsed()) return run_compare(g, cmp);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
