#include "webrank/eigenfactor.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>

namespace webrank {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) {
    // trim surrounding whitespace
    const auto b = field.find_first_not_of(" \t\r");
    const auto e = field.find_last_not_of(" \t\r");
    fields.push_back(b == std::string::npos ? std::string() : field.substr(b, e - b + 1));
  }
  return fields;
}

bool numeric_field(const std::string& s) {
  if (s.empty()) return false;
  return s.find_first_not_of("0123456789.+-eE") == std::string::npos;
}

} // namespace

void CitationData::validate() const {
  if (n == 0) throw ValidationError("no journals");
  if (journals.size() != n || counts.size() != n || articles.size() != n) {
    throw ValidationError("inconsistent citation data");
  }
  double total_articles = 0.0;
  for (double a : articles) {
    if (a < 0.0) throw ValidationError("negative article count");
    total_articles += a;
  }
  if (total_articles <= 0.0) throw ValidationError("total article count must be positive");
  for (std::size_t j = 0; j < n; ++j) {
    for (const MatrixEntry& e : counts[j]) {
      if (e.row >= n) throw ValidationError("citation to unknown journal");
      if (e.row == j) throw ValidationError("self-citation should have been dropped on ingest");
      if (e.value < 0.0) throw ValidationError("negative citation count");
    }
  }
}

CitationData load_citation_data(std::istream& citations_csv, std::istream& articles_csv) {
  CitationData data;
  std::map<std::string, std::uint32_t> index;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(articles_csv, line)) {
    ++line_no;
    auto fields = split_csv(line);
    if (fields.empty() || fields[0].empty() || fields[0][0] == '#') continue;
    if (fields.size() != 2) throw ParseError("expected 'journal,articles'", line_no);
    if (line_no == 1 && !numeric_field(fields[1])) continue; // header row
    auto [it, inserted] = index.try_emplace(fields[0], static_cast<std::uint32_t>(data.n));
    if (!inserted) {
      throw ValidationError("line " + std::to_string(line_no) + ": journal '" + fields[0] +
                            "' listed twice");
    }
    data.journals.push_back(fields[0]);
    try {
      data.articles.push_back(std::stod(fields[1]));
    } catch (const std::exception&) {
      throw ParseError("bad article count '" + fields[1] + "'", line_no);
    }
    ++data.n;
  }
  data.counts.resize(data.n);
  std::map<std::pair<std::uint32_t, std::uint32_t>, double> sums; // (cited, citing) -> count
  line_no = 0;
  while (std::getline(citations_csv, line)) {
    ++line_no;
    auto fields = split_csv(line);
    if (fields.empty() || fields[0].empty() || fields[0][0] == '#') continue;
    if (fields.size() != 3) throw ParseError("expected 'citing,cited,count'", line_no);
    if (line_no == 1 && !numeric_field(fields[2])) continue; // header row
    const auto citing = index.find(fields[0]);
    const auto cited = index.find(fields[1]);
    if (citing == index.end() || cited == index.end()) {
      throw ValidationError("line " + std::to_string(line_no) +
                            ": journal not present in the articles file");
    }
    double count = 0.0;
    try {
      count = std::stod(fields[2]);
    } catch (const std::exception&) {
      throw ParseError("bad citation count '" + fields[2] + "'", line_no);
    }
    if (count < 0.0) {
      throw ValidationError("line " + std::to_string(line_no) + ": negative citation count");
    }
    if (cited->second == citing->second) continue; // self-citations are dropped
    sums[{cited->second, citing->second}] += count;
  }
  for (const auto& [key, count] : sums) {
    if (count > 0.0) data.counts[key.second].push_back({key.first, count});
  }
  data.validate();
  return data;
}

CitationData load_citation_data_files(const std::string& citations_path,
                                      const std::string& articles_path) {
  std::ifstream cit(citations_path);
  if (!cit) throw ValidationError("cannot open citations CSV '" + citations_path + "'");
  std::ifstream art(articles_path);
  if (!art) throw ValidationError("cannot open articles CSV '" + articles_path + "'");
  return load_citation_data(cit, art);
}

CrossCitation cross_citation(const CitationData& data) {
  data.validate();
  const std::size_t n = data.n;
  double total_articles = 0.0;
  for (double a : data.articles) total_articles += a;
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = data.articles[i] / total_articles;

  std::vector<std::vector<MatrixEntry>> a_cols(n);
  std::vector<std::vector<MatrixEntry>> at_cols(n);
  for (std::size_t j = 0; j < n; ++j) {
    double total = 0.0;
    for (const MatrixEntry& e : data.counts[j]) total += e.value;
    if (total <= 0.0) {
      // journal j cites nothing: its normalized column stays zero and the
      // stochastic variant substitutes the article vector
      for (std::uint32_t i = 0; i < n; ++i) {
        if (v[i] > 0.0) at_cols[j].push_back({i, v[i]});
      }
      continue;
    }
    for (const MatrixEntry& e : data.counts[j]) {
      if (e.value <= 0.0) continue;
      const double w = e.value / total;
      a_cols[j].push_back({e.row, w});
      at_cols[j].push_back({e.row, w});
    }
  }
  return CrossCitation{SparseColumnMatrix(n, std::move(a_cols), 1e-9),
                       SparseColumnMatrix(n, std::move(at_cols), 1e-9), std::move(v)};
}

EigenfactorResult eigenfactor(const CitationData& data, double m, const PowerOptions& opts) {
  if (!(m > 0.0 && m < 1.0)) throw ValidationError("damping factor must lie in (0, 1)");
  const CrossCitation cc = cross_citation(data);
  if (!cc.a_tilde.is_stochastic()) {
    throw ValidationError("cross-citation matrix did not normalize to stochastic");
  }
  const std::size_t n = data.n;

  EigenfactorResult result;
  std::vector<double> x = cc.v; // any stochastic start works; v is a natural one
  for (std::size_t k = 0; k < opts.max_iter; ++k) {
    std::vector<double> next = cc.a_tilde.multiply(x);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      next[i] = (1.0 - m) * next[i] + m * cc.v[i];
      sum += next[i];
    }
    if (std::abs(sum - 1.0) > 1e-12) {
      for (double& val : next) val /= sum;
    }
    const double diff = l1_distance(next, x);
    result.report.residual_history.push_back(diff);
    x.swap(next);
    ++result.report.iterations;
    if (diff < opts.tol) {
      result.report.converged = true;
      break;
    }
  }
  result.influence = RankVector(std::move(x));

  // the score uses the original substochastic matrix, not the repaired one
  std::vector<double> weighted = cc.a.multiply(result.influence.values);
  double total = 0.0;
  for (double w : weighted) total += w;
  if (total <= 0.0) {
    throw ValidationError("citation matrix has no citations; scores are undefined");
  }
  result.ef.resize(n);
  result.ai.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    result.ef[i] = 100.0 * weighted[i] / total;
    if (cc.v[i] > 0.0) {
      result.ai[i] = 0.01 * result.ef[i] / cc.v[i];
    }
  }
  return result;
}

} // namespace webrank
