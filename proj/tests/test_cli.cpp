#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "test_support.hpp"

using json = nlohmann::json;
namespace fs = std::filesystem;
namespace wt = webrank::testing;

namespace {

struct RunResult {
  int status = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(WEBRANK_CLI_PATH) + " " + args + " 2>/dev/null";
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf;
  std::size_t got = 0;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int rc = pclose(pipe);
  r.status = WEXITSTATUS(rc);
  return r;
}

fs::path temp_file(const std::string& name) {
  return fs::temp_directory_path() / ("webrank_cli_test_" + name);
}

} // namespace

TEST_CASE("rank emits the six-page values") {
  const auto r = run_cli("rank --input " + wt::data_path("six_page.txt") + " --m 0.15");
  REQUIRE(r.status == 0);
  const json j = json::parse(r.out);
  CHECK(j["command"] == "rank");
  CHECK(j["n"] == 6);
  CHECK(j["converged"] == true);
  const auto values = j["values"].get<std::vector<double>>();
  const double gold[] = {0.0614, 0.0857, 0.122, 0.214, 0.214, 0.302};
  REQUIRE(values.size() == 6);
  for (int i = 0; i < 6; ++i) CHECK(std::abs(values[i] - gold[i]) < 5e-4);
  CHECK(j["iterations"].get<int>() <= 100);
  CHECK(j["residual_history"].size() == j["iterations"].get<std::size_t>());
}

TEST_CASE("rank csv output") {
  const auto r =
      run_cli("--format csv rank --input " + wt::data_path("six_page.txt"));
  REQUIRE(r.status == 0);
  CHECK(r.out.rfind("page,value\n1,", 0) == 0);
}

TEST_CASE("compare of a file with itself") {
  const auto rank_file = temp_file("self.json");
  const auto r1 = run_cli("--output " + rank_file.string() + " rank --input " +
                          wt::data_path("six_page.txt"));
  REQUIRE(r1.status == 0);
  const auto r2 =
      run_cli("compare --a " + rank_file.string() + " --b " + rank_file.string() + " --top-k 3");
  REQUIRE(r2.status == 0);
  const json j = json::parse(r2.out);
  CHECK(j["l1_error"] == 0.0);
  CHECK(j["pearson"] == 1.0);
  CHECK(j["spearman"] == 1.0);
  CHECK(j["top_k_overlap"] == 1.0);
}

TEST_CASE("aggregate reports the known approximation error") {
  const auto rank_file = temp_file("ref.json");
  REQUIRE(run_cli("--output " + rank_file.string() + " rank --input " +
                  wt::data_path("six_page.txt"))
              .status == 0);
  const auto r = run_cli("aggregate --input " + wt::data_path("six_page.txt") + " --groups " +
                         wt::data_path("six_groups.txt") + " --ref-rank " + rank_file.string());
  REQUIRE(r.status == 0);
  const json j = json::parse(r.out);
  CHECK(j["r"] == 3);
  CHECK(j["r1"] == 1);
  CHECK(std::abs(j["l1_error"].get<double>() - 0.0188) < 1e-3);
  CHECK(j["counts"]["f0_A"] == 13);
}

TEST_CASE("gossip run is reproducible and converging") {
  const std::string args = "simulate-gossip --input " + wt::data_path("six_page.txt") +
                           " --seed 5 --steps 30000 --trials 2 --checkpoint-every 3000";
  const auto r1 = run_cli(args);
  REQUIRE(r1.status == 0);
  const json j = json::parse(r1.out);
  CHECK(j["m_hat"].get<double>() == doctest::Approx(0.3 / 5.4).epsilon(1e-12));
  const auto mean = j["l1"]["mean"].get<std::vector<double>>();
  CHECK(mean.back() < 0.05);
  const auto r2 = run_cli(args);
  CHECK(r1.out == r2.out); // byte-identical reruns
}

TEST_CASE("consensus settles") {
  const auto r = run_cli("consensus --input " + wt::data_path("six_page.txt") +
                         " --x0 e1 --seed 9 --steps 10000");
  REQUIRE(r.status == 0);
  const json j = json::parse(r.out);
  CHECK(j["final_disagreement"].get<double>() < 1e-6);
}

TEST_CASE("eigenfactor ranks journals") {
  const auto r = run_cli("eigenfactor --citations " + wt::data_path("citations.csv") +
                         " --articles " + wt::data_path("articles.csv"));
  REQUIRE(r.status == 0);
  const json j = json::parse(r.out);
  double sum = 0.0;
  for (const auto& row : j["journals"]) sum += row["ef"].get<double>();
  CHECK(sum == doctest::Approx(100.0).epsilon(1e-8));
  CHECK(j["journals"][0]["rank"] == 1);
  // descending score order
  CHECK(j["journals"][0]["ef"].get<double>() >= j["journals"][1]["ef"].get<double>());
}

TEST_CASE("missing input file exits with status 1") {
  const auto r = run_cli("rank --input /nonexistent/file.txt");
  CHECK(r.status == 1);
}

TEST_CASE("parse errors exit with status 1") {
  const auto bad = temp_file("bad.txt");
  std::ofstream(bad) << "1 2\n3 3\n";
  const auto r = run_cli("rank --input " + bad.string());
  CHECK(r.status == 1);
}

TEST_CASE("non-convergence exits with status 2 and still reports") {
  const auto r = run_cli("rank --input " + wt::data_path("six_page.txt") +
                         " --tol 1e-12 --max-iter 3");
  CHECK(r.status == 2);
  const json j = json::parse(r.out);
  CHECK(j["converged"] == false);
  CHECK(j["values"].size() == 6);
}

TEST_CASE("unknown flags are rejected") {
  const auto r = run_cli("rank --input " + wt::data_path("six_page.txt") + " --bogus 1");
  CHECK(r.status != 0);
}

TEST_CASE("aggregate output feeds back into compare") {
  const auto rank_file = temp_file("rt_rank.json");
  const auto agg_file = temp_file("rt_agg.json");
  REQUIRE(run_cli("--output " + rank_file.string() + " rank --input " +
                  wt::data_path("six_page.txt"))
              .status == 0);
  REQUIRE(run_cli("--output " + agg_file.string() + " aggregate --input " +
                  wt::data_path("six_page.txt") + " --groups " + wt::data_path("six_groups.txt"))
              .status == 0);
  const auto r = run_cli("compare --a " + rank_file.string() + " --b " + agg_file.string());
  REQUIRE(r.status == 0);
  const json j = json::parse(r.out);
  CHECK(std::abs(j["l1_error"].get<double>() - 0.0188) < 1e-3);
}

TEST_CASE("threshold sweep emits one row per threshold") {
  const auto r = run_cli("--format csv aggregate --input " + wt::data_path("six_page.txt") +
                         " --groups " + wt::data_path("six_groups.txt") +
                         " --delta-sweep 0.3,0.5");
  REQUIRE(r.status == 0);
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "delta,r,r1,l1_error,pearson,spearman,slope");
  int rows = 0;
  while (std::getline(lines, line)) ++rows;
  CHECK(rows == 2);
}

TEST_CASE("gossip over a grouping runs the reduced scheme") {
  const auto r = run_cli("simulate-gossip --input " + wt::data_path("six_page.txt") +
                         " --groups " + wt::data_path("six_groups.txt") +
                         " --seed 2 --steps 20000 --checkpoint-every 2000");
  REQUIRE(r.status == 0);
  const json j = json::parse(r.out);
  CHECK(j["groups"] == 3);
  // the reduced scheme plateaus at the approximation error, not at zero
  const double last = j["l1"]["mean"].get<std::vector<double>>().back();
  CHECK(last < 0.05);
  CHECK(last > 0.005);
}

TEST_CASE("tracked pages appear in the gossip csv") {
  const auto r = run_cli("--format csv simulate-gossip --input " + wt::data_path("six_page.txt") +
                         " --seed 1 --steps 2000 --checkpoint-every 1000 --track 4,6");
  REQUIRE(r.status == 0);
  CHECK(r.out.find(",y_4,y_6") != std::string::npos);
}

TEST_CASE("eigenfactor output carries the influence vector for compare") {
  const auto r = run_cli("eigenfactor --citations " + wt::data_path("citations.csv") +
                         " --articles " + wt::data_path("articles.csv"));
  REQUIRE(r.status == 0);
  const json j = json::parse(r.out);
  const auto values = j["values"].get<std::vector<double>>();
  REQUIRE(values.size() == 3);
  double sum = 0.0;
  for (double v : values) sum += v;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("dangling fixture is repaired on the fly") {
  const auto r = run_cli("rank --input " + wt::data_path("six_page_dangling.txt"));
  REQUIRE(r.status == 0);
  const json j = json::parse(r.out);
  const auto repaired = j["repaired_pages"].get<std::vector<int>>();
  REQUIRE(repaired.size() == 1);
  CHECK(repaired[0] == 5);
}
