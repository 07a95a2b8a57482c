#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sinrsched/calibration.hpp"
#include "sinrsched/model.hpp"

namespace sinrsched {

// Builds an instance of a named family ("random", "firstfit-tree",
// "randomized-tree", "weighted-plane", "general-metric") from JSON params.
// Missing SINR parameters fall back to `base`.
Instance GenerateFromSpec(const std::string& family, const nlohmann::json& params,
                          const SinrParams& base = {});

struct InstanceSource {
  std::string id;
  std::string file;                     // either a file ...
  std::string generator;                // ... or a generator family
  nlohmann::json params = nlohmann::json::object();
};

struct AlgorithmSpec {
  std::string name;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();  // scalars only
};

struct ExperimentConfig {
  std::vector<InstanceSource> instances;
  std::vector<AlgorithmSpec> algorithms;  // grids already expanded
  std::vector<std::uint64_t> seeds{1};
  std::string output;
  int parallelism = 1;
  bool timing = false;
  std::vector<std::pair<std::string, std::string>> ratios;  // numerator, denominator
  std::string calibration_cache;
  int calibration_trials = 100;
  std::uint64_t calibration_seed = 1;
  SinrParams base_params;

  // Parses the JSON layout; list-valued algorithm params expand into a
  // cartesian grid. Relative file paths resolve against `base_dir`.
  static ExperimentConfig FromJson(const nlohmann::json& j, const std::string& base_dir = "");
  void Validate() const;
};

struct ResultRow {
  std::string instance;
  std::size_t n = 0;
  double delta = 1.0;
  std::string algorithm;
  std::string params;
  std::optional<int> slots;
  std::optional<double> weight;
  bool verified = false;
  std::vector<std::string> flags;
  std::optional<double> ms;
  std::uint64_t seed = 0;
};

inline constexpr char kResultsHeader[] =
    "instance,n,delta,algorithm,params,slots,weight,verified,flags,ms,seed";

std::string FormatRow(const ResultRow& row);
std::string ResultsCsv(std::vector<ResultRow> rows);

struct RatioRow {
  std::string instance;
  std::string numerator;
  std::string denominator;
  double ratio = 0.0;
};

// One ratio of slot counts per instance, in `instance_order`, using the
// lowest-seed row of each algorithm.
std::vector<RatioRow> SlotRatios(const std::vector<ResultRow>& rows,
                                 const std::vector<std::string>& instance_order,
                                 const std::string& numerator, const std::string& denominator);
std::string RatiosCsv(const std::vector<RatioRow>& ratios);

// Runs every (instance, algorithm, seed) task; rows come back sorted by
// (instance, algorithm, params, seed) whatever the parallelism.
std::vector<ResultRow> RunExperiment(const ExperimentConfig& cfg);

// Runs and writes the results file (and `<output>.ratios.csv` when ratios are
// requested). Returns the rows.
std::vector<ResultRow> RunExperimentToFile(const ExperimentConfig& cfg);

}  // namespace sinrsched
