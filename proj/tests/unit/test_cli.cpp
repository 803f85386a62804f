#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "dsent_cli/cli.hpp"

namespace fs = std::filesystem;
using dsent::cli::run;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliFiles : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("dsent_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                        "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string file(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }

  fs::path dir_;
};

const char* kCycle3 = R"({"weights": [0.25, 0.25, 0.5], "matrix": [[0, 0, 1], [0, 0, 1], [0.5, 0.5, 0]]})";
const char* kPerm3 = R"({"weights": [0.3333333333333333, 0.3333333333333333, 0.3333333333333334],
                         "matrix": [[0, 1, 0], [0, 0, 1], [1, 0, 0]]})";
const char* kIdentity = R"({"weights": [0.5, 0.5], "matrix": [[1, 0], [0, 1]]})";
const char* kHalf = R"({"functions": [[1, 0, 0.5]]})";

}  // namespace

TEST(Cli, UsageErrors) {
  EXPECT_EQ(call({}).code, dsent::cli::kValidation);
  EXPECT_EQ(call({"bogus"}).code, dsent::cli::kValidation);
  EXPECT_EQ(call({"--help"}).code, dsent::cli::kOk);
  EXPECT_EQ(call({"entropy"}).code, dsent::cli::kValidation);
  EXPECT_EQ(call({"entropy", "--shift", "koopman", "--base", "10"}).code, dsent::cli::kValidation);
}

TEST_F(CliFiles, RowMassIsValidationError) {
  const auto op = file("bad.json", R"({"weights": [0.5, 0.5], "matrix": [[1.1, 0], [0, 1]]})");
  const Result r = call({"decompose", "--operator", op});
  EXPECT_EQ(r.code, dsent::cli::kValidation);
  EXPECT_NE(r.err.find("RowMassError"), std::string::npos);
}

TEST_F(CliFiles, NotErgodicIsHypothesisFailure) {
  const Result r = call({"factor", "--operator", file("id.json", kIdentity)});
  EXPECT_EQ(r.code, dsent::cli::kHypothesis);
  EXPECT_NE(r.err.find("NotErgodic"), std::string::npos);
}

TEST_F(CliFiles, BadSequenceIsValidationError) {
  const auto op = file("p.json", kPerm3);
  const auto f = file("f.json", kHalf);
  EXPECT_EQ(call({"seq-entropy", "--operator", op, "--collection", f, "--sequence", "3,2"}).code,
            dsent::cli::kValidation);
  EXPECT_EQ(call({"seq-entropy", "--operator", op, "--collection", f, "--sequence", "1,2,5", "--n", "3"}).code,
            dsent::cli::kOk);
}

TEST_F(CliFiles, EntropyCsv) {
  const Result r = call({"entropy", "--operator", file("p.json", kPerm3), "--collection", file("f.json", kHalf),
                         "--n", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream lines(r.out);
  std::string header;
  std::getline(lines, header);
  EXPECT_EQ(header, "n,H,H_over_n");
  int rows = 0;
  for (std::string line; std::getline(lines, line);) ++rows;
  EXPECT_EQ(rows, 4);
}

TEST(Cli, ShiftEntropyJsonBase2) {
  const Result r = call({"entropy", "--shift", "koopman", "--n", "6", "--base", "2", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  for (const auto& row : doc["rows"]) EXPECT_NEAR(row["H"].get<double>(), row["n"].get<double>(), 1e-12);
}

TEST(Cli, CellBudgetPrintsPartialTrace) {
  const Result r = call({"entropy", "--shift", "koopman", "--n", "12", "--cell-budget", "100"});
  EXPECT_EQ(r.code, dsent::cli::kBudget);
  EXPECT_EQ(r.out.rfind("n,H,H_over_n\n", 0), 0u);
  EXPECT_NE(r.err.find("CellBudgetExceeded"), std::string::npos);
}

TEST_F(CliFiles, DecomposeAndNullity) {
  const auto op = file("c.json", kCycle3);
  const Result d = call({"decompose", "--operator", op, "--radius", "0.5"});
  ASSERT_EQ(d.code, 0) << d.err;
  const auto doc = nlohmann::json::parse(d.out);
  EXPECT_EQ(doc["rev_dim"].get<int>() + doc["aws_dim"].get<int>(), 3);
  EXPECT_TRUE(doc.contains("quasi_compact"));

  const Result n = call({"nullity", "--operator", op});
  ASSERT_EQ(n.code, 0) << n.err;
  EXPECT_EQ(nlohmann::json::parse(n.out)["verdict"], "null");

  const Result k = call({"nullity", "--shift", "koopman", "--n", "16"});
  ASSERT_EQ(k.code, 0) << k.err;
  EXPECT_EQ(nlohmann::json::parse(k.out)["verdict"], "not_null");
  EXPECT_EQ(call({"nullity", "--operator", op, "--format", "csv"}).code, dsent::cli::kValidation);
}

TEST(Cli, Examples) {
  const Result all = call({"examples"});
  EXPECT_EQ(all.code, 0) << all.out;
  EXPECT_TRUE(nlohmann::json::parse(all.out)["passed"].get<bool>());
  EXPECT_EQ(call({"examples", "--list"}).code, 0);
  EXPECT_EQ(call({"examples", "--name", "nope"}).code, dsent::cli::kValidation);
}

TEST_F(CliFiles, PerturbStudy) {
  const Result r = call({"perturb-study", "--operator", file("p.json", kPerm3), "--collection", file("f.json", kHalf),
                         "--alphas", "0.25,0.3", "--n", "8"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "alpha,l1_distance,bound,slope");
  std::getline(lines, line);
  EXPECT_EQ(line.rfind("0.25,", 0), 0u);
  EXPECT_NE(line.find(",0.5,"), std::string::npos);
  std::getline(lines, line);
  EXPECT_NE(line.find(",,"), std::string::npos);
  EXPECT_EQ(call({"perturb-study", "--operator", file("q.json", kPerm3), "--collection", file("g.json", kHalf),
                  "--alphas", "1.5"})
                .code,
            dsent::cli::kValidation);
}

TEST_F(CliFiles, RandomStudyIsDeterministic) {
  const std::vector<std::string> args{"random-study", "--count", "5", "--size", "6", "--n", "12", "--seed", "3",
                                      "--format", "json"};
  const Result a = call(args);
  const Result b = call(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(nlohmann::json::parse(a.out)["null_count"], 5);

  const Result dumped = call({"random-study", "--count", "2", "--size", "4", "--dump", (dir_ / "ops").string()});
  ASSERT_EQ(dumped.code, 0);
  EXPECT_TRUE(fs::exists(dir_ / "ops" / "sample_0001.json"));
}
