#include "menon/cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace menon {
namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "menon");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() : path_(std::filesystem::temp_directory_path() / ("menon_cli_" + std::to_string(::getpid()))) {
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  std::string write(const std::string& name, const std::string& body) const {
    std::ofstream(path_ / name) << body;
    return (path_ / name).string();
  }

 private:
  std::filesystem::path path_;
};

TEST(SplitListTest, BracketAware) {
  EXPECT_EQ(split_list("8:[1,0], 8:3"), (std::vector<std::string>{"8:[1,0]", "8:3"}));
  EXPECT_EQ(split_list(""), std::vector<std::string>{});
  EXPECT_EQ(split_list(" 1 ,, -2 "), (std::vector<std::string>{"1", "-2"}));
}

TEST(VerifyCommandTest, PrincipalMenon) {
  const auto r = run({"verify", "--n", "6", "--chars", "6:0"});
  ASSERT_EQ(r.code, kExitEqual) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j["equal"].get<bool>());
  EXPECT_EQ(j["instance"]["shifts"], nlohmann::json::array({1}));
  EXPECT_NEAR(j["lhs"]["float"][0].get<double>(), 8.0, 1e-9);
}

TEST(VerifyCommandTest, Vanishing) {
  const auto r = run({"verify", "--n", "4", "--chars", "4:1", "--shifts", "2"});
  ASSERT_EQ(r.code, kExitEqual) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j["equal"].get<bool>());
  EXPECT_EQ(j["rhs"]["terms"], nlohmann::json::array());
  EXPECT_NEAR(std::abs(j["lhs"]["float"][0].get<double>()) + std::abs(j["lhs"]["float"][1].get<double>()), 0.0, 1e-9);
}

TEST(VerifyCommandTest, NegativeShiftAndCsvAndModes) {
  EXPECT_EQ(run({"verify", "--n", "10", "--chars", "10:1", "--shifts", "-1", "--weights", "5"}).code, kExitEqual);
  const auto csv = run({"verify", "--n", "9", "--chars=9:1", "--shifts=2", "--weights=3", "--out", "csv"});
  ASSERT_EQ(csv.code, kExitEqual) << csv.err;
  EXPECT_EQ(csv.out.rfind("n,m,k,", 0), 0u);
  EXPECT_EQ(run({"verify", "--n", "9", "--chars=9:1", "--shifts=2", "--mode", "both"}).code, kExitEqual);
  EXPECT_EQ(run({"verify", "--n", "9", "--chars=9:1", "--shifts=2", "--mode", "float"}).code, kExitEqual);
}

TEST(VerifyCommandTest, TableFromFile) {
  TempDir dir;
  const auto ints = dir.write("ints.json", "[3, 1, 4, 1, 5, 9, 2, 6]");
  EXPECT_EQ(run({"verify", "--n", "8", "--chars", "8:1", "--shifts", "3", "--F", ints}).code, kExitEqual);
  const auto reals = dir.write("reals.json", R"({"name": "r", "values": [0.5, 0.25, 2.5, 1.0]})");
  EXPECT_EQ(run({"verify", "--n", "4", "--chars", "4:1", "--F", reals, "--mode", "float"}).code, kExitEqual);
  EXPECT_EQ(run({"verify", "--n", "4", "--chars", "4:1", "--F", reals}).code, kExitInvalid);
  EXPECT_EQ(run({"verify", "--n", "12", "--chars", "12:1", "--F", ints}).code, kExitInvalid);
}

TEST(VerifyCommandTest, InvalidInputExitsTwo) {
  EXPECT_EQ(run({"verify"}).code, kExitInvalid);
  EXPECT_EQ(run({"verify", "--n", "0", "--chars", "1:0"}).code, kExitInvalid);
  EXPECT_EQ(run({"verify", "--n", "6", "--chars", "4:1"}).code, kExitInvalid);
  EXPECT_EQ(run({"verify", "--n", "6", "--chars", "6:0,6:1", "--shifts", "1"}).code, kExitInvalid);
  EXPECT_EQ(run({"verify", "--n", "6"}).code, kExitInvalid);
  EXPECT_EQ(run({"verify", "--n", "6", "--chars", "6:0", "--F", "zeta"}).code, kExitInvalid);
  EXPECT_EQ(run({"verify", "--n", "6", "--chars", "6:0", "--mode", "fast"}).code, kExitInvalid);
  EXPECT_EQ(run({"verify", "--n", "6", "--chars", "6:0", "--shifts", "x"}).code, kExitInvalid);
  const auto over = run({"verify", "--n", "50", "--chars", "50:0", "--weights", "0,0,0,0", "--budget", "1000"});
  EXPECT_EQ(over.code, kExitInvalid);
  EXPECT_NE(over.err.find("budget"), std::string::npos);
  EXPECT_EQ(run({"bogus"}).code, kExitInvalid);
  EXPECT_EQ(run({}).code, kExitInvalid);
}

TEST(SweepCommandTest, PassingGrid) {
  TempDir dir;
  const auto cfg = dir.write("cfg.json", R"j({"n_range": [1, 10], "m": [1], "k": [0, 1], "shifts": [1, 3],
                                             "weights": [0, 2], "F": ["identity", "sigma(2)"]})j");
  const auto r = run({"sweep", "--config", cfg, "--jobs", "2"});
  ASSERT_EQ(r.code, kExitEqual) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::string last;
  while (std::getline(in, line)) last = line;
  const auto summary = nlohmann::json::parse(last);
  EXPECT_EQ(summary["type"], "summary");
  EXPECT_EQ(summary["failed"], 0);
  EXPECT_EQ(summary["passed"], summary["total"]);

  const auto csv = run({"sweep", "--config", cfg, "--out", "csv"});
  EXPECT_EQ(csv.code, kExitEqual);
  EXPECT_NE(csv.err.find("\"summary\""), std::string::npos);
}

TEST(SweepCommandTest, InvalidConfigExitsTwo) {
  TempDir dir;
  EXPECT_EQ(run({"sweep", "--config", dir.write("a.json", R"({"n_range": [9, 3]})")}).code, kExitInvalid);
  EXPECT_EQ(run({"sweep", "--config", dir.write("b.json", R"({"n_range": [1, 3], "samples": 4})")}).code,
            kExitInvalid);
  EXPECT_EQ(run({"sweep", "--config", dir.write("c.json", "{not json")}).code, kExitInvalid);
  EXPECT_EQ(run({"sweep", "--config", "/nonexistent/cfg.json"}).code, kExitInvalid);
  EXPECT_EQ(run({"sweep"}).code, kExitInvalid);
}

TEST(SweepCommandTest, ErrorsMakeExitOne) {
  TempDir dir;
  dir.write("short.json", "[1, 2, 3]");
  const auto cfg = dir.write("cfg.json", R"({"n_range": [2, 5], "chars": "principal", "F": "short.json"})");
  const auto r = run({"sweep", "--config", cfg});
  EXPECT_EQ(r.code, kExitMismatch);
  EXPECT_NE(r.out.find("\"error\""), std::string::npos);
}

TEST(TableCommandTest, Mod8) {
  const auto r = run({"table", "--n", "8"});
  ASSERT_EQ(r.code, kExitEqual) << r.err;
  std::istringstream in(r.out);
  std::vector<nlohmann::json> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(nlohmann::json::parse(line));
  ASSERT_EQ(lines.size(), 5u);
  EXPECT_EQ(lines[0]["generators"], nlohmann::json::array({7, 5}));
  EXPECT_EQ(lines[0]["units"], nlohmann::json::array({1, 3, 5, 7}));
  std::vector<std::int64_t> conductors;
  for (std::size_t i = 1; i < lines.size(); ++i) conductors.push_back(lines[i]["conductor"]);
  EXPECT_EQ(conductors, (std::vector<std::int64_t>{1, 8, 4, 8}));
  EXPECT_EQ(lines[3]["values"], nlohmann::json::array({"0/1", "1/2", "0/1", "1/2"}));

  const auto csv = run({"table", "--n", "5", "--out", "csv"});
  EXPECT_EQ(csv.code, kExitEqual);
  EXPECT_EQ(std::count(csv.out.begin(), csv.out.end(), '\n'), 5);
  EXPECT_EQ(run({"table", "--n", "0"}).code, kExitInvalid);
}

}  // namespace
}  // namespace menon
