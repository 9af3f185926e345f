#include "webrank/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string>

namespace webrank {

namespace {

bool parse_u64(std::string_view token, std::uint64_t& out) {
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
  return ec == std::errc{} && ptr == token.data() + token.size();
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

} // namespace

std::vector<std::uint32_t> WebGraph::out_degrees() const {
  std::vector<std::uint32_t> deg(n, 0);
  for (const auto& [src, dst] : edges) {
    (void)dst;
    ++deg[src];
  }
  return deg;
}

std::vector<std::uint32_t> WebGraph::in_degrees() const {
  std::vector<std::uint32_t> deg(n, 0);
  for (const auto& [src, dst] : edges) {
    (void)src;
    ++deg[dst];
  }
  return deg;
}

std::vector<std::vector<std::uint32_t>> WebGraph::out_adjacency() const {
  std::vector<std::vector<std::uint32_t>> adj(n);
  for (const auto& [src, dst] : edges) adj[src].push_back(dst);
  return adj;
}

void WebGraph::validate() const {
  if (n < 2) throw ValidationError("graph needs at least 2 pages");
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (!(edges[i - 1] < edges[i])) throw ValidationError("edges must be sorted and unique");
  }
  for (const auto& [src, dst] : edges) {
    if (src >= n || dst >= n) throw ValidationError("edge index out of range");
    if (src == dst) throw ValidationError("self-loops are not allowed");
  }
  if (!labels.empty() && labels.size() != n) throw ValidationError("label count mismatch");
}

WebGraph parse_edge_list(std::istream& in, bool one_based) {
  WebGraph g;
  std::set<std::pair<std::uint32_t, std::uint32_t>> edges;
  std::uint64_t declared_n = 0;
  std::uint64_t max_index = 0;
  bool saw_directive = false;
  bool saw_edge = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto tokens = split_ws(line);
    if (tokens.empty() || tokens[0].front() == '#') continue;
    if (!saw_edge && !saw_directive && tokens.size() == 1 && tokens[0].starts_with("n=")) {
      if (!parse_u64(tokens[0].substr(2), declared_n) || declared_n < 2) {
        throw ParseError("bad page-count directive '" + std::string(tokens[0]) + "'", line_no);
      }
      saw_directive = true;
      continue;
    }
    if (tokens.size() != 2) {
      throw ParseError("expected two integer tokens, got " + std::to_string(tokens.size()),
                       line_no);
    }
    std::uint64_t raw[2];
    for (int t = 0; t < 2; ++t) {
      if (!parse_u64(tokens[t], raw[t])) {
        throw ParseError("not an integer: '" + std::string(tokens[t]) + "'", line_no);
      }
    }
    if (one_based) {
      for (int t = 0; t < 2; ++t) {
        if (raw[t] == 0) {
          throw ValidationError("line " + std::to_string(line_no) +
                                ": page index 0 in a 1-based edge list");
        }
        --raw[t];
      }
    }
    if (raw[0] == raw[1]) {
      throw ValidationError("line " + std::to_string(line_no) + ": self-loop on page " +
                            std::to_string(raw[0] + (one_based ? 1 : 0)));
    }
    if (declared_n != 0 && (raw[0] >= declared_n || raw[1] >= declared_n)) {
      throw ValidationError("line " + std::to_string(line_no) + ": page index exceeds n=" +
                            std::to_string(declared_n));
    }
    max_index = std::max({max_index, raw[0], raw[1]});
    saw_edge = true;
    auto [it, inserted] = edges.emplace(static_cast<std::uint32_t>(raw[0]),
                                        static_cast<std::uint32_t>(raw[1]));
    (void)it;
    if (!inserted) ++g.duplicates_collapsed;
  }
  if (!saw_edge && declared_n == 0) throw ValidationError("edge list has no edges");
  g.n = declared_n != 0 ? declared_n : static_cast<std::size_t>(max_index) + 1;
  if (g.n < 2) throw ValidationError("graph needs at least 2 pages");
  g.edges.assign(edges.begin(), edges.end());
  g.validate();
  return g;
}

WebGraph parse_edge_list_file(const std::string& path, bool one_based) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open edge list '" + path + "'");
  return parse_edge_list(in, one_based);
}

void serialize_edge_list(const WebGraph& g, std::ostream& out, bool one_based) {
  const std::uint32_t off = one_based ? 1 : 0;
  out << "n=" << g.n << "\n";
  for (const auto& [src, dst] : g.edges) {
    out << (src + off) << " " << (dst + off) << "\n";
  }
}

void parse_labels(WebGraph& g, std::istream& in, bool one_based) {
  g.labels.assign(g.n, std::string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto tokens = split_ws(line);
    if (tokens.empty() || tokens[0].front() == '#') continue;
    if (tokens.size() < 2) throw ParseError("expected 'index label'", line_no);
    std::uint64_t idx = 0;
    if (!parse_u64(tokens[0], idx)) {
      throw ParseError("not an integer: '" + std::string(tokens[0]) + "'", line_no);
    }
    if (one_based) {
      if (idx == 0) throw ValidationError("line " + std::to_string(line_no) + ": page index 0");
      --idx;
    }
    if (idx >= g.n) {
      throw ValidationError("line " + std::to_string(line_no) + ": page index out of range");
    }
    g.labels[idx] = std::string(tokens[1]);
  }
}

std::vector<std::uint32_t> find_dangling(const WebGraph& g) {
  auto deg = g.out_degrees();
  std::vector<std::uint32_t> dangling;
  for (std::uint32_t i = 0; i < g.n; ++i) {
    if (deg[i] == 0 &&
        std::find(g.uniform_columns.begin(), g.uniform_columns.end(), i) ==
            g.uniform_columns.end()) {
      dangling.push_back(i);
    }
  }
  return dangling;
}

WebGraph repair_dangling(WebGraph g, RepairPolicy policy) {
  const auto dangling = find_dangling(g);
  if (dangling.empty()) return g;
  if (policy == RepairPolicy::UniformColumn) {
    auto marks = g.uniform_columns;
    marks.insert(marks.end(), dangling.begin(), dangling.end());
    std::sort(marks.begin(), marks.end());
    marks.erase(std::unique(marks.begin(), marks.end()), marks.end());
    g.uniform_columns = std::move(marks);
    return g;
  }
  std::vector<std::vector<std::uint32_t>> in_adj(g.n);
  for (const auto& [src, dst] : g.edges) in_adj[dst].push_back(src);
  std::set<std::pair<std::uint32_t, std::uint32_t>> edges(g.edges.begin(), g.edges.end());
  for (std::uint32_t d : dangling) {
    if (in_adj[d].empty()) {
      throw ValidationError("page " + std::to_string(d + 1) +
                            " is dangling and has no inlinks to turn into back links");
    }
    for (std::uint32_t j : in_adj[d]) edges.emplace(d, j);
  }
  g.edges.assign(edges.begin(), edges.end());
  return g;
}

WebGraph prune_no_inlinks(const WebGraph& g, std::vector<std::uint32_t>* removed) {
  auto indeg = g.in_degrees();
  std::vector<std::uint32_t> keep_map(g.n, 0);
  std::uint32_t next = 0;
  std::vector<std::uint32_t> dropped;
  for (std::uint32_t i = 0; i < g.n; ++i) {
    if (indeg[i] == 0) {
      dropped.push_back(i);
      keep_map[i] = UINT32_MAX;
    } else {
      keep_map[i] = next++;
    }
  }
  if (removed) *removed = dropped;
  if (dropped.empty()) return g;
  if (next < 2) throw ValidationError("pruning would leave fewer than 2 pages");
  WebGraph out;
  out.n = next;
  for (const auto& [src, dst] : g.edges) {
    if (keep_map[src] != UINT32_MAX && keep_map[dst] != UINT32_MAX) {
      out.edges.emplace_back(keep_map[src], keep_map[dst]);
    }
  }
  std::sort(out.edges.begin(), out.edges.end());
  if (!g.labels.empty()) {
    out.labels.resize(out.n);
    for (std::uint32_t i = 0; i < g.n; ++i) {
      if (keep_map[i] != UINT32_MAX) out.labels[keep_map[i]] = g.labels[i];
    }
  }
  for (std::uint32_t u : g.uniform_columns) {
    if (keep_map[u] != UINT32_MAX) out.uniform_columns.push_back(keep_map[u]);
  }
  out.validate();
  return out;
}

SparseColumnMatrix hyperlink_matrix(const WebGraph& g) {
  g.validate();
  auto deg = g.out_degrees();
  std::vector<std::vector<MatrixEntry>> columns(g.n);
  for (const auto& [src, dst] : g.edges) {
    columns[src].push_back({dst, 1.0 / static_cast<double>(deg[src])});
  }
  for (std::uint32_t u : g.uniform_columns) {
    if (deg[u] != 0) continue; // a real outlink supersedes the mark
    const double w = 1.0 / static_cast<double>(g.n - 1);
    for (std::uint32_t i = 0; i < g.n; ++i) {
      if (i != u) columns[u].push_back({i, w});
    }
  }
  return SparseColumnMatrix(g.n, std::move(columns));
}

} // namespace webrank
