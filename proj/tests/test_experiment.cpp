#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "sinrsched/experiment.hpp"
#include "sinrsched/instance_io.hpp"

namespace sinrsched {
namespace {

using nlohmann::json;

json BaseConfig() {
  return json::parse(R"({
    "instances": [
      {"id": "tree5", "generator": "firstfit-tree", "params": {"k": 5}},
      {"id": "rand", "generator": "random", "params": {"n": 30, "side": 40, "seed": 3}}
    ],
    "algorithms": [
      {"name": "first-fit"},
      {"name": "conflict", "params": {"gamma": 2.0, "m": 2}}
    ],
    "seeds": [1]
  })");
}

std::string Slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(Experiment, RowCountAndOrder) {
  const auto rows = RunExperiment(ExperimentConfig::FromJson(BaseConfig()));
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0].instance, "rand");
  EXPECT_EQ(rows[0].algorithm, "conflict");
  EXPECT_EQ(rows[3].instance, "tree5");
  EXPECT_EQ(rows[3].algorithm, "first-fit");
  for (const auto& r : rows) {
    EXPECT_TRUE(r.verified);
    EXPECT_TRUE(r.slots.has_value());
    EXPECT_FALSE(r.ms.has_value());
  }
}

TEST(Experiment, CsvFormat) {
  const auto csv = ResultsCsv(RunExperiment(ExperimentConfig::FromJson(BaseConfig())));
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, kResultsHeader);
  std::getline(in, line);
  EXPECT_EQ(line.rfind("rand,30,", 0), 0u) << line;
  EXPECT_NE(line.find(",conflict,gamma=2;m=2,"), std::string::npos) << line;
  EXPECT_NE(line.find(",true,"), std::string::npos) << line;
  EXPECT_EQ(line.substr(line.size() - 4), ",-,1") << line;
}

TEST(Experiment, ParallelismDoesNotChangeOutput) {
  json cfg = BaseConfig();
  cfg["seeds"] = {1, 2, 3};
  cfg["algorithms"].push_back({{"name", "randomized"}, {"params", {{"p", {0.25, 0.5}}}}});
  const std::string serial = ResultsCsv(RunExperiment(ExperimentConfig::FromJson(cfg)));
  cfg["parallelism"] = 8;
  EXPECT_EQ(ResultsCsv(RunExperiment(ExperimentConfig::FromJson(cfg))), serial);
  EXPECT_EQ(ResultsCsv(RunExperiment(ExperimentConfig::FromJson(cfg))), serial);
}

TEST(Experiment, GridExpansion) {
  json cfg = BaseConfig();
  cfg["algorithms"] = json::array({{{"name", "first-fit"}, {"params", {{"tau", {0.0, 0.5, 1.0}}}}}});
  const ExperimentConfig c = ExperimentConfig::FromJson(cfg);
  ASSERT_EQ(c.algorithms.size(), 3u);
  EXPECT_EQ(RunExperiment(c).size(), 6u);
}

TEST(Experiment, ValidationErrors) {
  json cfg = BaseConfig();
  cfg["algorithms"] = json::array({{{"name", "simulated-annealing"}}});
  EXPECT_THROW(ExperimentConfig::FromJson(cfg).Validate(), ParameterError);

  cfg = BaseConfig();
  cfg["instances"][1]["id"] = "tree5";
  EXPECT_THROW(ExperimentConfig::FromJson(cfg).Validate(), ParameterError);

  cfg = BaseConfig();
  cfg["instances"][0]["params"]["colour"] = 1;
  EXPECT_THROW(RunExperiment(ExperimentConfig::FromJson(cfg)), ParameterError);

  cfg = BaseConfig();
  cfg["algorithms"][0]["params"] = {{"tau", 0.5}, {"bogus", 1}};
  EXPECT_THROW(RunExperiment(ExperimentConfig::FromJson(cfg)), ParameterError);

  EXPECT_THROW(ExperimentConfig::FromJson(json::parse(R"({"instances": 3})")), ParameterError);
}

TEST(Experiment, FileInstancesAndOutputs) {
  const std::string dir = ::testing::TempDir();
  SaveInstance(GenerateFromSpec("general-metric", {{"K", 2}}), dir + "/gm.json");
  json cfg = json::parse(R"({
    "instances": [{"id": "gm", "file": "gm.json"}],
    "algorithms": [{"name": "first-fit"}, {"name": "exact-fixed"}],
    "ratios": [["first-fit", "exact-fixed"]],
    "output": "out.csv"
  })");
  const ExperimentConfig c = ExperimentConfig::FromJson(cfg, dir);
  RunExperimentToFile(c);
  const std::string csv = Slurp(dir + "/out.csv");
  EXPECT_EQ(csv.rfind(kResultsHeader, 0), 0u);
  EXPECT_EQ(Slurp(dir + "/out.csv.ratios.csv"),
            "instance,numerator,denominator,ratio\ngm,first-fit,exact-fixed,1\n");
}

TEST(Experiment, RatioGrowsOnFirstFitTrees) {
  json cfg = json::parse(R"({"algorithms": [{"name": "first-fit"},
                            {"name": "conflict", "params": {"gamma": "calibrated", "m": 1}}],
                            "calibration": {"trials": 100}})");
  std::vector<std::string> order;
  for (int k = 5; k <= 9; ++k) {
    const std::string id = "k" + std::to_string(k);
    order.push_back(id);
    cfg["instances"].push_back({{"id", id}, {"generator", "firstfit-tree"}, {"params", {{"k", k}}}});
  }
  const auto rows = RunExperiment(ExperimentConfig::FromJson(cfg));
  const auto ratios = SlotRatios(rows, order, "first-fit", "conflict");
  ASSERT_EQ(ratios.size(), 5u);
  for (std::size_t i = 1; i < ratios.size(); ++i) EXPECT_GE(ratios[i].ratio, ratios[i - 1].ratio);
  EXPECT_GT(ratios.back().ratio, ratios.front().ratio);
}

TEST(Experiment, TimingColumn) {
  json cfg = BaseConfig();
  cfg["timing"] = true;
  for (const auto& r : RunExperiment(ExperimentConfig::FromJson(cfg))) EXPECT_TRUE(r.ms.has_value());
}

TEST(GenerateFromSpec, Families) {
  EXPECT_EQ(GenerateFromSpec("firstfit-tree", {{"k", 3}}).size(), 8u);
  EXPECT_EQ(GenerateFromSpec("general-metric", {{"K", 3}}).size(), 21u);
  EXPECT_EQ(GenerateFromSpec("weighted-plane", {{"t", 1}, {"q", 2}}).size(), 5u);
  EXPECT_EQ(GenerateFromSpec("random", {{"n", 0}}).size(), 0u);
  EXPECT_THROW(GenerateFromSpec("hypercube", json::object()), ParameterError);
}

}  // namespace
}  // namespace sinrsched
