#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "webrank/matrix.hpp"
#include "webrank/pagerank.hpp"
#include "webrank/rank_vector.hpp"

namespace webrank {

/// Journal citation counts over the census window. The diagonal is forced
/// to zero on ingest; self-citations never enter the scores.
struct CitationData {
  std::size_t n = 0;
  std::vector<std::string> journals;
  /// counts[j] holds (cited journal, count) pairs for citations made by j.
  std::vector<std::vector<MatrixEntry>> counts;
  std::vector<double> articles;

  void validate() const;
};

/// Loads "citing,cited,count" rows; the articles CSV ("journal,count")
/// defines the journal universe and its order.
CitationData load_citation_data(std::istream& citations_csv, std::istream& articles_csv);
CitationData load_citation_data_files(const std::string& citations_path,
                                      const std::string& articles_path);

struct CrossCitation {
  /// Column-normalized citation matrix; columns of journals that cite
  /// nothing stay zero, so it may be substochastic.
  SparseColumnMatrix a;
  /// a with zero columns replaced by the article vector; stochastic.
  SparseColumnMatrix a_tilde;
  /// Article shares per journal; a stochastic vector.
  std::vector<double> v;
};

CrossCitation cross_citation(const CitationData& data);

struct EigenfactorResult {
  RankVector influence;                  // x*
  std::vector<double> ef;                // percentages summing to 100
  std::vector<std::optional<double>> ai; // unset where the journal has no articles
  SolveReport report;
};

/// Influence vector from x(k+1) = (1-m) A~ x(k) + m v, then
/// EF = 100 A x* / sum(A x*) and AI_i = 0.01 EF_i / v_i.
EigenfactorResult eigenfactor(const CitationData& data, double m = 0.15,
                              const PowerOptions& opts = {});

} // namespace webrank
