#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "webrank/common.hpp"
#include "webrank/matrix.hpp"

namespace webrank {

/// Directed web graph. Pages are 0-based internally; the parser and
/// serializer translate to the 1-based external convention.
struct WebGraph {
  std::size_t n = 0;
  /// Sorted, duplicate-free (source, target) pairs. No self-loops.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  /// Optional page names (empty or size n).
  std::vector<std::string> labels;
  /// Dangling pages repaired with the uniform-column policy: the hyperlink
  /// matrix fills their columns with 1/(n-1) instead of graph edges.
  std::vector<std::uint32_t> uniform_columns;
  /// Duplicate edges collapsed while parsing.
  std::size_t duplicates_collapsed = 0;

  std::vector<std::uint32_t> out_degrees() const;
  std::vector<std::uint32_t> in_degrees() const;
  /// Outgoing targets per page, sorted.
  std::vector<std::vector<std::uint32_t>> out_adjacency() const;
  void validate() const;
};

/// Reads an edge list: '#' comment lines, an optional leading "n=<int>"
/// directive, then whitespace-separated index pairs "src dst".
WebGraph parse_edge_list(std::istream& in, bool one_based = true);
WebGraph parse_edge_list_file(const std::string& path, bool one_based = true);

/// Writes the graph back in the same format (directive line plus sorted
/// edges); parse(serialize(g)) reproduces the edge set exactly.
void serialize_edge_list(const WebGraph& g, std::ostream& out, bool one_based = true);

/// Reads "index label" lines into g.labels.
void parse_labels(WebGraph& g, std::istream& in, bool one_based = true);

/// Pages with no outgoing edges (and no uniform-column mark), ascending.
std::vector<std::uint32_t> find_dangling(const WebGraph& g);

enum class RepairPolicy {
  /// Add an edge from each dangling page back to every page linking to it.
  BackLinks,
  /// Mark the page so its matrix column becomes uniform over the other pages.
  UniformColumn,
};

/// Returns a graph with no dangling pages. BackLinks fails with a
/// ValidationError naming the page if a dangling page has no inlinks.
WebGraph repair_dangling(WebGraph g, RepairPolicy policy = RepairPolicy::BackLinks);

/// Removes pages with no incoming links (single pass) and compacts indices.
/// `removed` receives the original indices of dropped pages if non-null.
WebGraph prune_no_inlinks(const WebGraph& g, std::vector<std::uint32_t>* removed = nullptr);

/// Hyperlink matrix: column j carries 1/outdeg(j) at each link target.
/// Stochastic exactly when the graph has no dangling pages.
SparseColumnMatrix hyperlink_matrix(const WebGraph& g);

} // namespace webrank
