// Runs the built CLI as a subprocess from the project root.

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "exact_oracle.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("leadalloc_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

Result run(const std::string& args, const std::string& env = "") {
  const auto out = scratch() / "stdout";
  const auto err = scratch() / "stderr";
  const std::string cmd = env + " \"" LEADALLOC_CLI "\" " + args + " >\"" + out.string() + "\" 2>\"" +
                          err.string() + "\"";
  const int status = std::system(cmd.c_str());
  Result r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

const std::string kEval = "evaluate --runs data/recorded_runs.json --targets data/targets.json";
const std::string kDemo = "--input data/demo/chicago_synthetic.csv --city chicago";

}  // namespace

TEST(Evaluate, TableMatchesGolden) {
  const auto r = run(kEval);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, slurp("tests/golden/evaluate_recorded.txt"));
  for (const char* shown : {"0.66", "0.55", "0.33", "0.22", "21/45      0.46"})
    EXPECT_NE(r.out.find(shown), std::string::npos) << shown;
}

TEST(Evaluate, JsonMatchesGolden) {
  const auto r = run(kEval + " --format json");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, slurp("tests/golden/evaluate_recorded.json"));
  EXPECT_EQ(run(kEval + " --json").out, r.out);
  const auto doc = json::parse(r.out);
  EXPECT_EQ(doc["overall"]["pooled_exact"], "21/45");
}

TEST(Evaluate, DepthOneRecount) {
  const auto r = run(kEval + " --k 1");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, slurp("tests/golden/evaluate_recorded_k1.txt"));
  const auto doc = json::parse(run(kEval + " --k 1 --json").out);
  const int expect[] = {3, 2, 2, 2, 0};
  for (int i = 0; i < 5; ++i) EXPECT_EQ(doc["runs"][i]["total_hits"], expect[i]);
  EXPECT_EQ(doc["overall"]["pooled_exact"], "9/45");
}

TEST(Evaluate, MissingTargetsExitsTwo) {
  const auto r = run("evaluate --runs data/recorded_runs.json --targets data/no_such_targets.json");
  EXPECT_EQ(r.code, 2);
  EXPECT_TRUE(r.out.empty());
  EXPECT_FALSE(r.err.empty());
}

TEST(Evaluate, ValidationErrorExitsTwo) {
  const auto bad = scratch() / "bad_runs.json";
  std::ofstream(bad) << R"({"runs":[{"model":"m","mode":"x","cities":{"chicago":[{"neighborhood":"Austin","kits":-5}]}}]})";
  const auto r = run("evaluate --runs \"" + bad.string() + "\" --targets data/targets.json");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("negative kits"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("runs[0].cities.chicago[0].kits"), std::string::npos) << r.err;
}

TEST(Score, DefaultTopIsTen) {
  const auto r = run("score " + kDemo);
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream lines(r.out);
  std::string line;
  bool seen = false;
  while (std::getline(lines, line))
    if (line.rfind("   1  ", 0) == 0) {
      EXPECT_NE(line.find("10.00"), std::string::npos) << line;
      seen = true;
    }
  EXPECT_TRUE(seen) << r.out;
  EXPECT_NE(r.out.find("Scaled PS"), std::string::npos);
}

TEST(Score, VariantsDisagreeDeterministically) {
  const std::string base = "score --input tests/fixtures/variant_disagree.csv --city chicago --r-override 0.6";
  const auto text = run(base);
  const auto algo = run(base + " --variant algorithm");
  ASSERT_EQ(text.code, 0) << text.err;
  ASSERT_EQ(algo.code, 0) << algo.err;
  EXPECT_EQ(text.out, slurp("tests/golden/score_variant_text.txt"));
  EXPECT_EQ(algo.out, slurp("tests/golden/score_variant_algorithm.txt"));
  EXPECT_EQ(run(base).out, text.out);

  const auto tj = json::parse(run(base + " --json").out);
  const auto aj = json::parse(run(base + " --variant algorithm --json").out);
  EXPECT_EQ(tj["entries"][0]["neighborhood"], "a");
  EXPECT_EQ(aj["entries"][0]["neighborhood"], "b");
}

TEST(Score, AlphaOutOfRangeExitsTwo) {
  for (const char* a : {"1.0", "0", "-0.2"}) {
    const auto r = run("score " + kDemo + " --alpha " + a);
    EXPECT_EQ(r.code, 2) << a;
    EXPECT_NE(r.err.find("alpha"), std::string::npos) << r.err;
  }
}

TEST(Score, UsageErrorsExitTwo) {
  EXPECT_EQ(run("score --city chicago").code, 2);
  EXPECT_EQ(run("score " + kDemo + " --variant prose").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("score --input data/demo/chicago_synthetic.csv --city atlantis").code, 2);
  EXPECT_EQ(run("--help").code, 0);
}

TEST(Score, StrictPromotesMissingCells) {
  EXPECT_EQ(run("score " + kDemo).code, 0);
  const auto r = run("score " + kDemo + " --strict");
  // Blank extra-factor cells (demo turbidity) are not metric gaps.
  EXPECT_EQ(r.code, 0) << r.err;
  const auto missing = scratch() / "missing.csv";
  std::ofstream(missing) << "neighborhood,prevalence_per_1000,untested_pct,public_coverage_pct\n"
                            "A,1,10,20\nB,,10,30\nC,3,20,10\nD,2,5,15\n";
  EXPECT_EQ(run("score --input \"" + missing.string() + "\" --city chicago").code, 0);
  EXPECT_EQ(run("score --input \"" + missing.string() + "\" --city chicago --strict").code, 2);
}

TEST(Allocate, SumsToBudgetAndTopKLimitsRows) {
  const auto ranking = scratch() / "ranking.json";
  ASSERT_EQ(run("score " + kDemo + " --output \"" + ranking.string() + "\"").code, 0);

  const auto prop = run("allocate --ranking \"" + ranking.string() + "\" --kits 1000 --json");
  ASSERT_EQ(prop.code, 0) << prop.err;
  const auto doc = json::parse(prop.out);
  long sum = 0;
  for (const auto& a : doc["allocations"]) sum += a["kits"].get<long>();
  EXPECT_EQ(sum, 1000);

  const auto topk =
      json::parse(run("allocate --ranking \"" + ranking.string() + "\" --kits 1000 --strategy top_k_equal --k 3 --json").out);
  for (std::size_t i = 0; i < topk["allocations"].size(); ++i)
    EXPECT_EQ(topk["allocations"][i]["kits"].get<long>() > 0, i < 3) << i;

  const auto table = run("allocate --ranking \"" + ranking.string() + "\" --kits 1000");
  EXPECT_EQ(table.code, 0);
  EXPECT_NE(table.out.find("1000"), std::string::npos);
}

TEST(Allocate, ZeroKitsExitsTwo) {
  const auto ranking = scratch() / "ranking0.json";
  ASSERT_EQ(run("score " + kDemo + " --output \"" + ranking.string() + "\"").code, 0);
  EXPECT_EQ(run("allocate --ranking \"" + ranking.string() + "\" --kits 0").code, 2);
  EXPECT_EQ(run("allocate --ranking data/no_such_ranking.json").code, 2);
}

TEST(Correlate, TwoDecimalTable) {
  const auto r = run("correlate " + kDemo + " --factors public_coverage_pct");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("public_coverage_pct"), std::string::npos);
  // r column: "0.xx" with exactly two decimals.
  std::istringstream lines(r.out);
  std::string line, factor, value;
  while (std::getline(lines, line))
    if (line.rfind("public_coverage_pct", 0) == 0) {
      std::istringstream(line) >> factor >> value;
      ASSERT_EQ(value.size(), value.find('.') + 3) << line;
    }
}

TEST(Correlate, UnknownFactorExitsTwo) {
  const auto r = run("correlate " + kDemo + " --factors lead_pipes");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("unknown factor"), std::string::npos) << r.err;
}

TEST(Correlate, JsonCarriesFullPrecision) {
  const auto r = run("correlate --input tests/fixtures/correlate_small.csv --city chicago --json");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = json::parse(r.out);
  const std::vector<double> p{1, 2, 4, 3};
  const std::map<std::string, std::vector<double>> columns{
      {"untested_pct", {10, 12, 15, 11}}, {"public_coverage_pct", {1, 2, 4, 2.5}}, {"renter_pct", {30, 20, 50, 10}}};
  ASSERT_EQ(doc["results"].size(), columns.size());
  for (const auto& row : doc["results"]) {
    const auto& col = columns.at(row["factor"].get<std::string>());
    EXPECT_NEAR(row["r"].get<double>(), oracle::pearson(col, p), 1e-15) << row["factor"];
    EXPECT_EQ(row["n"], 4);
  }
}

TEST(Aliases, EnvironmentVariableIsHonored) {
  const auto aliases = scratch() / "aliases.json";
  std::ofstream(aliases) << R"({"englewood": ["Engl."]})";
  const auto targets = scratch() / "targets.json";
  std::ofstream(targets) << R"({"chicago": ["Engl.", "Austin", "West Englewood"]})";
  const auto without = run("evaluate --runs data/recorded_runs.json --targets \"" + targets.string() + "\" --json");
  const auto with = run("evaluate --runs data/recorded_runs.json --targets \"" + targets.string() + "\" --json",
                        "LEADALLOC_ALIAS_FILE=\"" + aliases.string() + "\"");
  ASSERT_EQ(without.code, 0) << without.err;
  ASSERT_EQ(with.code, 0) << with.err;
  EXPECT_EQ(json::parse(without.out)["runs"][0]["hits_per_city"]["chicago"], 1);
  EXPECT_EQ(json::parse(with.out)["runs"][0]["hits_per_city"]["chicago"], 2);
}
