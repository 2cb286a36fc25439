//
// Copyright 2026 The dpkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "cli/commands.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "gtest/gtest.h"
#include "json.hpp"
#include "testing/oracles.h"

namespace dpkit::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

struct RunResult {
  int code;
  std::string out;
  std::string err;
  json report() const { return json::parse(out); }
};

RunResult Dpkit(const std::vector<std::string>& args,
              const std::string& stdin_text = "") {
  std::istringstream in(stdin_text);
  std::ostringstream out, err;
  const int code = RunDpkit(args, in, out, err);
  return {code, out.str(), err.str()};
}

std::string ReadFile(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

size_t LineCount(const fs::path& p) {
  const std::string text = ReadFile(p);
  return static_cast<size_t>(std::count(text.begin(), text.end(), '\n'));
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("dpkit_cli_" +
            std::string(::testing::UnitTest::GetInstance()
                            ->current_test_info()
                            ->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    // 100 values of x in [5, 10] plus a grouping column and categories.
    std::ofstream data(Path("data.csv"));
    data << "x,g,c\n";
    for (int i = 0; i < 100; ++i) {
      data << 5 + 5.0 * i / 99 << "," << (i % 2 ? "a" : "b") << ","
           << (i % 3 == 0 ? "u" : "v") << "\n";
    }
    std::ofstream bounds(Path("bounds.json"));
    bounds << R"({"x": {"lower": 5, "upper": 10},
                  "c": {"categories": ["u", "v"]},
                  "g": {"categories": ["a", "b"]},
                  "x1": {"lower": -1, "upper": 1},
                  "x2": {"lower": -1, "upper": 1},
                  "y": {"lower": -1, "upper": 1}})";
    const auto toy = testing::MakeSlantedClasses(40, 3);
    std::ofstream train(Path("train.csv"));
    train << "x1,x2,y\n";
    train.precision(17);
    for (Eigen::Index i = 0; i < toy.X.rows(); ++i) {
      train << toy.X(i, 0) << "," << toy.X(i, 1) << "," << toy.y(i) << "\n";
    }
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Path(const std::string& name) const {
    return (dir_ / name).string();
  }

  std::vector<std::string> MeanArgs(const std::string& eps = "1") const {
    return {"stat", "mean", "--input", Path("data.csv"), "--bounds-file",
            Path("bounds.json"), "--column", "x", "--eps", eps, "--seed", "7"};
  }

  fs::path dir_;
};

TEST_F(CliTest, MeanReportMatchesGoldenSchema) {
  const RunResult r = Dpkit(MeanArgs());
  ASSERT_EQ(r.code, kExitOk) << r.err;
  json report = r.report();
  // The released value is checked independently below; the rest of the
  // report must match the golden document exactly.
  const double value = report["result"]["value"];
  report["result"]["value"] = nullptr;
  const json golden =
      json::parse(ReadFile(fs::path(DPKIT_GOLDEN_DIR) / "stat_mean.json"));
  EXPECT_EQ(report, golden) << report.dump(2);
  std::vector<std::string> keys;
  const ordered_json ordered = ordered_json::parse(r.out);
  for (const auto& item : ordered.items()) {
    keys.push_back(item.key());
  }
  EXPECT_EQ(keys, (std::vector<std::string>{"command", "result", "metadata",
                                            "delta_used", "charged", "neighbor",
                                            "seed", "version"}));

  // Oracle: mean 7.5 plus Laplace(0.05) noise from the first 53-bit uniform
  // of mt19937_64(7).
  std::mt19937_64 engine(7);
  const double u = (static_cast<double>(engine() >> 11) + 0.5) / 9007199254740992.0;
  const double noise = -0.05 * std::copysign(1.0, u - 0.5) *
                       std::log(1 - 2 * std::abs(u - 0.5));
  EXPECT_NEAR(value, 7.5 + noise, 1e-12);
}

TEST_F(CliTest, SameSeedSameOutput) {
  EXPECT_EQ(Dpkit(MeanArgs()).out, Dpkit(MeanArgs()).out);
  auto args = MeanArgs();
  args.back() = "8";
  EXPECT_NE(Dpkit(MeanArgs()).out, Dpkit(args).out);
}

TEST_F(CliTest, SeedIsEchoedWhenDrawnFromEntropy) {
  auto args = MeanArgs();
  args.resize(args.size() - 2);
  const RunResult r = Dpkit(args);
  ASSERT_EQ(r.code, kExitOk);
  EXPECT_TRUE(r.report()["seed"].is_number_unsigned());
}

TEST_F(CliTest, BothNeighborsChargeTwice) {
  auto args = MeanArgs("0.5");
  args.insert(args.end(),
              {"--neighbor", "both", "--ledger", Path("ledger.jsonl")});
  const RunResult r = Dpkit(args);
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json report = r.report();
  ASSERT_EQ(report["result"].size(), 2u);
  EXPECT_EQ(report["result"][0]["neighbor"], "bounded");
  EXPECT_EQ(report["delta_used"], json({0.05, 0.05}));
  EXPECT_EQ(report["charged"]["epsilon"], 1.0);
  EXPECT_EQ(LineCount(Path("ledger.jsonl")), 2u);
}

TEST_F(CliTest, CapStopsReleaseAndLeavesLedgerUnchanged) {
  auto args = MeanArgs("0.6");
  args.insert(args.end(), {"--ledger", Path("ledger.jsonl"), "--cap-eps", "1"});
  EXPECT_EQ(Dpkit(args).code, kExitOk);
  const std::string before = ReadFile(Path("ledger.jsonl"));
  const RunResult second = Dpkit(args);
  EXPECT_EQ(second.code, kExitBudget);
  EXPECT_TRUE(second.out.empty());
  EXPECT_EQ(ReadFile(Path("ledger.jsonl")), before);

  const RunResult report =
      Dpkit({"budget", "report", "--ledger", Path("ledger.jsonl"), "--cap-eps",
           "1"});
  ASSERT_EQ(report.code, kExitOk);
  EXPECT_EQ(report.report()["result"]["entries"], 1);
  EXPECT_NEAR(report.report()["result"]["remaining"]["epsilon"].get<double>(),
              0.4, 1e-12);
  EXPECT_TRUE(report.report()["seed"].is_null());
  EXPECT_EQ(Dpkit({"budget", "check", "--ledger", Path("ledger.jsonl"),
                 "--cap-eps", "1", "--eps", "0.5"})
                .code,
            kExitBudget);
  EXPECT_EQ(Dpkit({"budget", "check", "--ledger", Path("ledger.jsonl"),
                 "--cap-eps", "1", "--eps", "0.4"})
                .code,
            kExitOk);
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(Dpkit({}).code, kExitUsage);
  EXPECT_EQ(Dpkit({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(Dpkit({"--help"}).code, kExitOk);
  EXPECT_EQ(Dpkit({"stat", "median2"}).code, kExitUsage);
  EXPECT_EQ(Dpkit(MeanArgs("-1")).code, kExitUsage);
  EXPECT_EQ(Dpkit(MeanArgs("0")).code, kExitUsage);
  auto no_eps = MeanArgs();
  no_eps.erase(no_eps.begin() + 8, no_eps.begin() + 10);
  EXPECT_EQ(Dpkit(no_eps).code, kExitUsage);
  auto missing = MeanArgs();
  missing[3] = Path("nope.csv");
  EXPECT_EQ(Dpkit(missing).code, kExitData);
  auto no_bounds = MeanArgs();
  no_bounds[7] = "c";
  EXPECT_EQ(Dpkit(no_bounds).code, kExitData);
  // The approximate Gaussian calibration needs eps < 1.
  auto gauss = MeanArgs("1.5");
  gauss.insert(gauss.end(), {"--mechanism", "gaussian", "--delta", "0.01"});
  EXPECT_EQ(Dpkit(gauss).code, kExitUsage);
  gauss.push_back("--type-dp");
  gauss.push_back("pdp");
  EXPECT_EQ(Dpkit(gauss).code, kExitOk);
  // Laplace with delta is a usage error.
  auto lap_delta = MeanArgs();
  lap_delta.push_back("--delta");
  lap_delta.push_back("0.1");
  EXPECT_EQ(Dpkit(lap_delta).code, kExitUsage);
  // A corrupted ledger is a data error.
  std::ofstream(Path("bad.jsonl")) << "{\"op\": 1}\n";
  auto bad_ledger = MeanArgs();
  bad_ledger.push_back("--ledger");
  bad_ledger.push_back(Path("bad.jsonl"));
  EXPECT_EQ(Dpkit(bad_ledger).code, kExitData);
}

TEST_F(CliTest, StdinInput) {
  auto args = MeanArgs();
  args[3] = "-";
  const RunResult r = Dpkit(args, ReadFile(Path("data.csv")));
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.out, Dpkit(MeanArgs()).out);
}

TEST_F(CliTest, OtherStatistics) {
  const std::string data = Path("data.csv");
  const std::string bounds = Path("bounds.json");
  const auto ok = [&](std::vector<std::string> args) {
    args.insert(args.end(), {"--input", data, "--bounds-file", bounds,
                             "--eps", "1", "--seed", "3"});
    const RunResult r = Dpkit(args);
    EXPECT_EQ(r.code, kExitOk) << args[1] << ": " << r.err;
    return r.code == kExitOk ? r.report() : json();
  };
  ok({"stat", "var", "--column", "x"});
  ok({"stat", "sd", "--column", "x"});
  ok({"stat", "median", "--column", "x"});
  ok({"stat", "quantile", "--column", "x", "--q", "0.9", "--uniform-sampling"});
  ok({"stat", "pooled-var", "--column", "x", "--group-column", "g"});
  const json hist = ok({"stat", "histogram", "--column", "x", "--breaks", "4"});
  EXPECT_EQ(hist["result"]["edges"].size(), 5u);
  EXPECT_EQ(hist["delta_used"], 2.0);
  const json table = ok({"stat", "table", "--columns", "g,c"});
  EXPECT_EQ(table["result"]["counts"].size(), 4u);
}

TEST_F(CliTest, MechCommand) {
  const RunResult lap = Dpkit({"mech", "laplace", "--values", "1,2",
                             "--sensitivity", "1", "--eps", "0.5", "--seed",
                             "1"});
  ASSERT_EQ(lap.code, kExitOk) << lap.err;
  EXPECT_EQ(lap.report()["metadata"]["scales"], json({4.0, 4.0}));
  const RunResult em =
      Dpkit({"mech", "exponential", "--utility", "0,1,0", "--sensitivity", "1",
           "--eps", "1", "--seed", "1"});
  ASSERT_EQ(em.code, kExitOk) << em.err;
  EXPECT_EQ(em.report()["metadata"]["probabilities"].size(), 3u);
  EXPECT_EQ(Dpkit({"mech", "laplace", "--values", "1,2", "--sensitivity",
                 "1,2,3", "--eps", "1"})
                .code,
            kExitUsage);
}

TEST_F(CliTest, FitPredictRoundTripDoesNotTouchLedger) {
  const RunResult fit =
      Dpkit({"fit", "logit", "--input", Path("train.csv"), "--bounds-file",
           Path("bounds.json"), "--eps", "1", "--gamma", "0.1", "--seed", "5",
           "--model-out", Path("model.json"), "--ledger", Path("l.jsonl")});
  ASSERT_EQ(fit.code, kExitOk) << fit.err;
  EXPECT_EQ(fit.report()["result"]["kind"], "logistic");
  EXPECT_EQ(LineCount(Path("l.jsonl")), 1u);
  const std::string ledger_before = ReadFile(Path("l.jsonl"));

  const RunResult pred = Dpkit({"predict", "--model", Path("model.json"),
                              "--input", Path("train.csv"), "--ledger",
                              Path("l.jsonl")});
  ASSERT_EQ(pred.code, kExitOk) << pred.err;
  EXPECT_EQ(pred.report()["result"]["predictions"].size(), 80u);
  EXPECT_TRUE(pred.report()["charged"]["epsilon"] == 0.0);
  EXPECT_EQ(ReadFile(Path("l.jsonl")), ledger_before);

  EXPECT_EQ(Dpkit({"predict", "--model", Path("missing.json"), "--input",
                 Path("train.csv")})
                .code,
            kExitData);
  EXPECT_EQ(Dpkit({"predict", "--model", Path("model.json"), "--input",
                 Path("train.csv"), "--add-bias"})
                .code,
            kExitUsage);
}

TEST_F(CliTest, FitVariants) {
  const std::string train = Path("train.csv");
  const std::string bounds = Path("bounds.json");
  EXPECT_EQ(Dpkit({"fit", "svm", "--input", train, "--bounds-file", bounds,
                 "--eps", "1", "--method", "output", "--add-bias"})
                .code,
            kExitOk);
  // The Gaussian kernel runs without a bounds file.
  const RunResult gauss = Dpkit({"fit", "svm", "--kernel", "gaussian", "--D", "20",
                               "--input", train, "--eps", "1"});
  EXPECT_EQ(gauss.code, kExitOk) << gauss.err;
  EXPECT_TRUE(gauss.err.empty());
  const RunResult warned =
      Dpkit({"fit", "svm", "--kernel", "gaussian", "--D", "20", "--input", train,
           "--bounds-file", bounds, "--eps", "1"});
  EXPECT_NE(warned.err.find("warning"), std::string::npos);
  EXPECT_EQ(Dpkit({"fit", "linreg", "--input", train, "--label", "x2",
                 "--features", "x1", "--bounds-file", bounds, "--eps", "0.5",
                 "--delta", "1e-5", "--add-bias"})
                .code,
            kExitOk);
  // Classifiers are pure DP only.
  EXPECT_EQ(Dpkit({"fit", "logit", "--input", train, "--bounds-file", bounds,
                 "--eps", "1", "--delta", "1e-5"})
                .code,
            kExitUsage);
  EXPECT_EQ(Dpkit({"fit", "logit", "--input", train, "--eps", "1"}).code,
            kExitUsage);
}

TEST_F(CliTest, TuneCommand) {
  const std::string train = Path("train.csv");
  const std::string bounds = Path("bounds.json");
  const RunResult one = Dpkit({"tune", "logit", "--input", train, "--bounds-file",
                             bounds, "--eps", "1", "--gamma-grid", "0.5",
                             "--seed", "2", "--ledger", Path("t.jsonl")});
  ASSERT_EQ(one.code, kExitOk) << one.err;
  EXPECT_EQ(one.report()["result"]["selected_index"], 0);
  EXPECT_EQ(one.report()["result"]["chosen_gamma"], 0.5);
  EXPECT_FALSE(one.report()["result"].contains("utilities"));
  EXPECT_EQ(LineCount(Path("t.jsonl")), 1u);

  std::ofstream(Path("tiny.csv")) << "x1,x2,y\n0,0,1\n0.1,0.1,0\n0.2,0,1\n";
  EXPECT_EQ(Dpkit({"tune", "logit", "--input", Path("tiny.csv"), "--bounds-file",
                 bounds, "--eps", "1", "--gamma-grid", "0.1,1,10"})
                .code,
            kExitData);
}

}  // namespace
}  // namespace dpkit::cli
