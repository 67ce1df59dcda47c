#include "menon/report.hpp"
#include "menon/sweep.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

namespace menon {
namespace {

std::vector<nlohmann::json> json_lines(const std::string& text) {
  std::vector<nlohmann::json> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(nlohmann::json::parse(line));
  return out;
}

IdentityInstance sample_instance() {
  IdentityInstance inst;
  inst.n = 9;
  inst.chars = {DirichletCharacter::from_index(9, 1)};
  inst.shifts = {2};
  inst.weights = {3};
  return inst;
}

TEST(ReportTest, JsonRoundTripIsByteIdentical) {
  for (Mode mode : {Mode::kExact, Mode::kFloat, Mode::kBoth}) {
    const auto report = verify(sample_instance(), {mode, kDefaultBudget});
    const std::string line = dump_line(to_json(report));
    EXPECT_EQ(dump_line(nlohmann::json::parse(line)), line);
  }
}

TEST(ReportTest, Schema) {
  const auto j = to_json(verify(sample_instance(), {Mode::kBoth, kDefaultBudget}));
  for (const char* key : {"elapsed_us", "equal", "instance", "kind", "lhs", "lhs_float", "lhs_method", "mode", "rhs",
                          "rhs_float", "rhs_method"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j["instance"]["chars"], nlohmann::json::array({"9:1"}));
  EXPECT_EQ(j["instance"]["conductors"], nlohmann::json::array({9}));
  EXPECT_EQ(j["instance"]["F"], "identity");
  EXPECT_EQ(j["mode"], "both");
  EXPECT_TRUE(j["equal"].get<bool>());
  EXPECT_EQ(j["lhs"]["level"], instance_level(9));
  EXPECT_NEAR(j["lhs_float"][0].get<double>(), 3.0, 1e-9);
  EXPECT_NEAR(j["lhs_float"][1].get<double>(), 5.196152422706632, 1e-9);
}

TEST(ReportTest, HugeCoefficientsAreStrings) {
  CycElement e(2);
  e.add_at(0, BigInt(1) << 70);
  e.add_at(1, 5);
  const auto j = to_json(e);
  EXPECT_EQ(j["terms"][0][1], (BigInt(1) << 70).str());
  EXPECT_EQ(j["terms"][1][1], 5);
}

TEST(ReportTest, CsvRowMatchesHeader) {
  const auto row = csv_row(verify(sample_instance()));
  const auto commas = [](const std::string& s) { return std::count(s.begin(), s.end(), ','); };
  EXPECT_EQ(commas(row), commas(csv_header()));
  EXPECT_EQ(row.rfind("9,1,1,9:1,2,3,identity,true,", 0), 0u) << row;
}

TEST(SweepConfigTest, Defaults) {
  const auto c = SweepConfig::from_json(nlohmann::json::parse(R"({"n_range": [1, 4]})"));
  EXPECT_EQ(c.n_min, 1);
  EXPECT_EQ(c.n_max, 4);
  EXPECT_EQ(c.m_values, std::vector<unsigned>{1});
  EXPECT_EQ(c.chars.kind, CharSelector::Kind::kAll);
  EXPECT_EQ(expand(c).size(), 1u + 1u + 2u + 2u);
}

TEST(SweepConfigTest, Errors) {
  const auto bad = [](const char* text) {
    EXPECT_THROW(SweepConfig::from_json(nlohmann::json::parse(text)), std::invalid_argument) << text;
  };
  bad(R"({"n_range": [5, 4]})");
  bad(R"({"n_range": [0, 4]})");
  bad(R"({"n_range": [1]})");
  bad(R"({"n_range": [1, 4], "samples": 10})");
  bad(R"({"n_range": [1, 4], "colour": "red"})");
  bad(R"({"n_range": [1, 4], "chars": "even"})");
  bad(R"({"n_range": [1, 4], "m": 0, "k": 0})");
  bad(R"({"n_range": [1, 4], "F": "zeta"})");
  bad(R"({"n_range": [1, 4], "mode": "fast"})");
  bad(R"({"n_range": [1, 4], "shifts": "one"})");
  bad(R"([1, 4])");
}

TEST(SweepConfigTest, GridOrder) {
  const auto c = SweepConfig::from_json(nlohmann::json::parse(
      R"({"n_range": [5, 5], "m": [1], "k": [0, 1], "chars": [0, 2, 99], "shifts": [1, 2], "weights": [0, 1]})"));
  const auto insts = expand(c);
  // k = 0: 2 chars * 2 shifts; k = 1: 2 * 2 * 2 weights.
  ASSERT_EQ(insts.size(), 4u + 8u);
  EXPECT_EQ(insts[0].chars[0].index(), 0);
  EXPECT_EQ(insts[0].shifts[0], 1);
  EXPECT_EQ(insts[1].shifts[0], 2);
  EXPECT_EQ(insts[2].chars[0].index(), 2);
  EXPECT_EQ(insts[4].weights, std::vector<std::int64_t>{0});
  EXPECT_EQ(insts[5].weights, std::vector<std::int64_t>{1});
}

TEST(SweepConfigTest, SamplingIsSeeded) {
  const auto j = nlohmann::json::parse(
      R"({"n_range": [1, 30], "m": [1, 2], "k": [0, 1], "weights": [0, 1, 3], "shifts": [1, -1, 5], "seed": 7, "samples": 25})");
  const auto a = expand(SweepConfig::from_json(j));
  const auto b = expand(SweepConfig::from_json(j));
  ASSERT_EQ(a.size(), 25u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(instance_to_json(a[i], {}), instance_to_json(b[i], {}));
    EXPECT_NO_THROW(a[i].validate());
  }
}

TEST(SweepConfigTest, TableFileRelativeToConfig) {
  const auto dir = std::filesystem::temp_directory_path() / "menon_report_test";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "f.json") << R"({"name": "squares", "values": [1, 4, 9, 16, 25, 36]})";
  std::ofstream(dir / "cfg.json") << R"({"n_range": [1, 6], "F": ["f.json", "tau"]})";
  const auto c = SweepConfig::load(dir / "cfg.json");
  ASSERT_EQ(c.functions.size(), 2u);
  EXPECT_EQ(c.functions[0].name(), "squares");
  EXPECT_EQ(c.functions[0](4), 16);

  std::ofstream(dir / "r.json") << R"([0.5, 1.5])";
  EXPECT_FALSE(load_function_table(dir / "r.json").is_integral());
  std::ofstream(dir / "bad.json") << R"([])";
  EXPECT_THROW(load_function_table(dir / "bad.json"), std::invalid_argument);
  EXPECT_THROW(load_function_table(dir / "missing.json"), std::invalid_argument);
  std::filesystem::remove_all(dir);
}

TEST(RunSweepTest, StreamsInOrderWithSummary) {
  const auto c = SweepConfig::from_json(nlohmann::json::parse(
      R"({"n_range": [1, 12], "m": [1], "k": [0, 1], "shifts": [1, 2], "weights": [0, 3], "F": ["identity", "tau"]})"));
  const auto insts = expand(c);
  std::ostringstream one;
  std::ostringstream four;
  const auto s1 = run_sweep(insts, {}, one, OutputFormat::kJson, 1);
  const auto s4 = run_sweep(insts, {}, four, OutputFormat::kJson, 4);
  EXPECT_EQ(s1.total, insts.size());
  EXPECT_EQ(s1.passed, insts.size());
  EXPECT_EQ(s1.failed, 0u);
  EXPECT_EQ(s4.passed, s1.passed);

  const auto lines1 = json_lines(one.str());
  const auto lines4 = json_lines(four.str());
  ASSERT_EQ(lines1.size(), insts.size() + 1);
  ASSERT_EQ(lines4.size(), lines1.size());
  for (std::size_t i = 0; i < insts.size(); ++i) {
    EXPECT_EQ(lines1[i]["index"], i);
    EXPECT_EQ(lines1[i]["status"], "pass");
    EXPECT_EQ(lines1[i]["instance"], lines4[i]["instance"]);
    EXPECT_EQ(lines1[i]["lhs"], lines4[i]["lhs"]);
  }
  EXPECT_EQ(lines1.back()["type"], "summary");
  EXPECT_EQ(lines1.back()["total"], insts.size());
}

TEST(RunSweepTest, BudgetSkipsAreCountedSeparately) {
  const auto c = SweepConfig::from_json(
      nlohmann::json::parse(R"({"n_range": [3, 6], "m": [1], "k": [1], "chars": "principal", "budget": 20})"));
  std::ostringstream out;
  const auto s = run_sweep(expand(c), {Mode::kExact, c.budget}, out, OutputFormat::kJson, 1);
  // n^2 <= 20 only for n = 3, 4.
  EXPECT_EQ(s.total, 4u);
  EXPECT_EQ(s.passed, 2u);
  EXPECT_EQ(s.skipped, 2u);
  EXPECT_EQ(s.failed, 0u);
  const auto lines = json_lines(out.str());
  EXPECT_EQ(lines[2]["status"], "skipped");
  EXPECT_TRUE(lines[2].contains("reason"));
}

TEST(RunSweepTest, ErrorsCountAsFailures) {
  IdentityInstance bad = sample_instance();
  bad.f = FunctionSpec::table({1, 2});
  std::ostringstream out;
  const auto s = run_sweep({bad, sample_instance()}, {}, out, OutputFormat::kJson, 2);
  EXPECT_EQ(s.failed, 1u);
  EXPECT_EQ(s.passed, 1u);
  EXPECT_EQ(json_lines(out.str())[0]["status"], "error");
}

TEST(RunSweepTest, CsvHasHeaderAndNoSummaryLine) {
  std::ostringstream out;
  run_sweep({sample_instance(), sample_instance()}, {}, out, OutputFormat::kCsv, 1);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, csv_header());
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 2);
}

}  // namespace
}  // namespace menon
