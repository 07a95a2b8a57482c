#include "sinrsched/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <thread>

#include "sinrsched/generators.hpp"
#include "sinrsched/instance_io.hpp"
#include "sinrsched/schedulers.hpp"

namespace sinrsched {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string Num6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

class ParamReader {
 public:
  ParamReader(const std::string& what, const json& params) : what_(what), params_(params) {
    if (!params_.is_object()) throw ParameterError(what_ + ": params must be an object");
  }

  double Real(const std::string& key, double fallback) {
    used_.insert(key);
    if (!params_.contains(key)) return fallback;
    if (!params_.at(key).is_number()) throw ParameterError(what_ + ": '" + key + "' must be a number");
    return params_.at(key).get<double>();
  }

  int Int(const std::string& key, int fallback) {
    const double v = Real(key, fallback);
    if (v != std::floor(v)) throw ParameterError(what_ + ": '" + key + "' must be an integer");
    return static_cast<int>(v);
  }

  std::optional<double> Maybe(const std::string& key) {
    used_.insert(key);
    if (!params_.contains(key) || params_.at(key).is_null()) return std::nullopt;
    return Real(key, 0.0);
  }

  std::string Str(const std::string& key, const std::string& fallback) {
    used_.insert(key);
    if (!params_.contains(key)) return fallback;
    if (!params_.at(key).is_string()) throw ParameterError(what_ + ": '" + key + "' must be a string");
    return params_.at(key).get<std::string>();
  }

  void Done() const {
    for (auto it = params_.begin(); it != params_.end(); ++it) {
      if (!used_.count(it.key())) {
        throw ParameterError(what_ + ": unknown parameter '" + it.key() + "'");
      }
    }
  }

 private:
  std::string what_;
  const json& params_;
  std::set<std::string> used_;
};

SinrParams ReadSinr(ParamReader& r, const SinrParams& base) {
  SinrParams p;
  p.alpha = r.Real("alpha", base.alpha);
  p.beta = r.Real("beta", base.beta);
  p.noise = r.Real("noise", base.noise);
  return p;
}

}  // namespace

Instance GenerateFromSpec(const std::string& family, const json& params, const SinrParams& base) {
  ParamReader r("generator '" + family + "'", params);
  Instance inst;
  if (family == "random") {
    RandomConfig cfg;
    cfg.n = r.Int("n", 0);
    cfg.dim = r.Int("dim", 2);
    cfg.side = r.Real("side", cfg.side);
    cfg.min_length = r.Real("min_length", cfg.min_length);
    cfg.max_length = r.Real("max_length", cfg.max_length);
    const std::string w = r.Str("weights", "unit");
    if (w == "unit") {
      cfg.weights = WeightKind::kUnit;
    } else if (w == "uniform") {
      cfg.weights = WeightKind::kUniform;
    } else {
      throw ParameterError("weights must be 'unit' or 'uniform'");
    }
    cfg.min_weight = r.Real("min_weight", 1.0);
    cfg.max_weight = r.Real("max_weight", 1.0);
    const double seed = r.Real("seed", 1.0);
    if (seed < 0 || seed != std::floor(seed)) throw ParameterError("seed must be a nonnegative integer");
    cfg.seed = static_cast<std::uint64_t>(seed);
    cfg.params = ReadSinr(r, base);
    r.Done();
    inst = GenRandom(cfg);
  } else if (family == "firstfit-tree") {
    const int k = r.Int("k", 0);
    const double delta = r.Real("delta", 0.0);
    const std::optional<double> x = r.Maybe("x");
    const SinrParams p = ReadSinr(r, base);
    r.Done();
    inst = GenFirstFitTree(k, delta, x, p);
  } else if (family == "randomized-tree") {
    const int levels = r.Int("levels", 1);
    const double b = r.Real("b", 5.0 / 3.0);
    const int copies = r.Int("M", 64);
    const double delta = r.Real("delta", 0.3);
    const SinrParams p = ReadSinr(r, base);
    r.Done();
    inst = GenRandomizedTree(levels, b, copies, delta, p);
  } else if (family == "weighted-plane") {
    const int t = r.Int("t", 0);
    const int q = r.Int("q", 2);
    const double alpha = r.Real("alpha", base.alpha);
    r.Done();
    inst = GenWeightedPlane(t, q, alpha);
  } else if (family == "general-metric") {
    const int k = r.Int("K", 1);
    const double gamma = r.Real("gamma", 6.0);
    const double alpha = r.Real("alpha", base.alpha);
    r.Done();
    inst = GenGeneralMetric(k, gamma, alpha);
  } else {
    throw ParameterError("unknown generator family '" + family + "'");
  }
  return inst;
}

namespace {

void ExpandGrid(const std::string& name, const json& params, std::vector<AlgorithmSpec>& out) {
  std::vector<std::pair<std::string, std::vector<json>>> axes;
  for (auto it = params.begin(); it != params.end(); ++it) {
    if (it->is_array()) {
      if (it->empty()) throw ParameterError("empty parameter grid for '" + it.key() + "'");
      axes.emplace_back(it.key(), std::vector<json>(it->begin(), it->end()));
    } else {
      axes.emplace_back(it.key(), std::vector<json>{*it});
    }
  }
  std::vector<std::size_t> idx(axes.size(), 0);
  while (true) {
    AlgorithmSpec spec;
    spec.name = name;
    for (std::size_t a = 0; a < axes.size(); ++a) spec.params[axes[a].first] = axes[a].second[idx[a]];
    out.push_back(std::move(spec));
    std::size_t a = axes.size();
    while (a > 0) {
      --a;
      if (++idx[a] < axes[a].second.size()) break;
      idx[a] = 0;
      if (a == 0) return;
    }
    if (axes.empty()) return;
  }
}

const std::set<std::string>& KnownAlgorithms() {
  static const std::set<std::string> k{"conflict",     "wcapacity",   "first-fit",   "randomized",
                                       "length-class", "exact-fixed", "exact-optimal"};
  return k;
}

}  // namespace

ExperimentConfig ExperimentConfig::FromJson(const json& j, const std::string& base_dir) {
  try {
    ExperimentConfig cfg;
    for (const json& s : j.at("instances")) {
      InstanceSource src;
      src.id = s.at("id").get<std::string>();
      if (s.contains("file")) {
        src.file = s.at("file").get<std::string>();
        if (!base_dir.empty() && std::filesystem::path(src.file).is_relative()) {
          src.file = (std::filesystem::path(base_dir) / src.file).string();
        }
      }
      if (s.contains("generator")) src.generator = s.at("generator").get<std::string>();
      if (s.contains("params")) src.params = s.at("params");
      cfg.instances.push_back(std::move(src));
    }
    for (const json& a : j.at("algorithms")) {
      const std::string name = a.at("name").get<std::string>();
      ExpandGrid(name, a.value("params", json::object()), cfg.algorithms);
    }
    if (j.contains("seeds")) cfg.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    cfg.output = j.value("output", std::string());
    if (!cfg.output.empty() && !base_dir.empty() && std::filesystem::path(cfg.output).is_relative()) {
      cfg.output = (std::filesystem::path(base_dir) / cfg.output).string();
    }
    cfg.parallelism = j.value("parallelism", 1);
    cfg.timing = j.value("timing", false);
    if (j.contains("ratios")) {
      for (const json& r : j.at("ratios")) {
        cfg.ratios.emplace_back(r.at(0).get<std::string>(), r.at(1).get<std::string>());
      }
    }
    if (j.contains("calibration")) {
      const json& c = j.at("calibration");
      cfg.calibration_cache = c.value("cache", std::string());
      cfg.calibration_trials = c.value("trials", cfg.calibration_trials);
      cfg.calibration_seed = c.value("seed", cfg.calibration_seed);
    }
    if (j.contains("params")) {
      const json& p = j.at("params");
      cfg.base_params.alpha = p.value("alpha", cfg.base_params.alpha);
      cfg.base_params.beta = p.value("beta", cfg.base_params.beta);
      cfg.base_params.noise = p.value("noise", cfg.base_params.noise);
    }
    cfg.Validate();
    return cfg;
  } catch (const json::exception& e) {
    throw ParameterError(std::string("malformed experiment config: ") + e.what());
  }
}

void ExperimentConfig::Validate() const {
  if (instances.empty()) throw ParameterError("experiment needs at least one instance");
  if (algorithms.empty()) throw ParameterError("experiment needs at least one algorithm");
  if (seeds.empty()) throw ParameterError("experiment needs at least one seed");
  if (parallelism < 1) throw ParameterError("parallelism must be >= 1");
  std::set<std::string> ids;
  for (const auto& s : instances) {
    if (s.id.empty() || s.id.find_first_of(",\n\"") != std::string::npos) {
      throw ParameterError("instance id '" + s.id + "' must be nonempty without commas or quotes");
    }
    if (!ids.insert(s.id).second) throw ParameterError("duplicate instance id '" + s.id + "'");
    if (s.file.empty() == s.generator.empty()) {
      throw ParameterError("instance '" + s.id + "' needs exactly one of 'file' or 'generator'");
    }
  }
  for (const auto& a : algorithms) {
    if (!KnownAlgorithms().count(a.name)) throw ParameterError("unknown algorithm '" + a.name + "'");
  }
}

std::string FormatRow(const ResultRow& row) {
  std::string flags;
  for (const auto& f : row.flags) {
    if (!flags.empty()) flags += '|';
    flags += f;
  }
  std::string out = row.instance;
  out += ',' + std::to_string(row.n);
  out += ',' + Num6(row.delta);
  out += ',' + row.algorithm;
  out += ',' + row.params;
  out += ',' + (row.slots ? std::to_string(*row.slots) : std::string("-"));
  out += ',' + (row.weight ? Num6(*row.weight) : std::string("-"));
  out += row.verified ? ",true" : ",false";
  out += ',' + flags;
  out += ',' + (row.ms ? Num6(*row.ms) : std::string("-"));
  out += ',' + std::to_string(row.seed);
  return out;
}

namespace {

bool RowLess(const ResultRow& a, const ResultRow& b) {
  return std::tie(a.instance, a.algorithm, a.params, a.seed) <
         std::tie(b.instance, b.algorithm, b.params, b.seed);
}

}  // namespace

std::string ResultsCsv(std::vector<ResultRow> rows) {
  std::stable_sort(rows.begin(), rows.end(), RowLess);
  std::string out = kResultsHeader;
  out += '\n';
  for (const auto& r : rows) {
    out += FormatRow(r);
    out += '\n';
  }
  return out;
}

std::vector<RatioRow> SlotRatios(const std::vector<ResultRow>& rows,
                                 const std::vector<std::string>& instance_order,
                                 const std::string& numerator, const std::string& denominator) {
  auto pick = [&](const std::string& inst, const std::string& alg) -> const ResultRow* {
    const ResultRow* best = nullptr;
    for (const auto& r : rows) {
      if (r.instance != inst || r.algorithm != alg || !r.slots) continue;
      if (!best || RowLess(r, *best)) best = &r;
    }
    return best;
  };
  std::vector<RatioRow> out;
  for (const auto& id : instance_order) {
    const ResultRow* a = pick(id, numerator);
    const ResultRow* b = pick(id, denominator);
    if (!a || !b || *b->slots == 0) continue;
    out.push_back({id, numerator, denominator,
                   static_cast<double>(*a->slots) / static_cast<double>(*b->slots)});
  }
  return out;
}

std::string RatiosCsv(const std::vector<RatioRow>& ratios) {
  std::string out = "instance,numerator,denominator,ratio\n";
  for (const auto& r : ratios) {
    out += r.instance + ',' + r.numerator + ',' + r.denominator + ',' + Num6(r.ratio) + '\n';
  }
  return out;
}

namespace {

struct Task {
  std::size_t instance;
  std::size_t algorithm;
  std::uint64_t seed;
};

ConflictOptions ReadConflict(ParamReader& r, const std::optional<double>& gamma) {
  ConflictOptions opt;
  opt.delta = r.Real("delta", opt.delta);
  opt.tau = r.Real("tau", opt.tau);
  if (const auto m = r.Maybe("m")) opt.dimension = static_cast<int>(*m);
  opt.gamma = gamma.value_or(1.0);
  return opt;
}

ResultRow RunTask(const Instance& inst, const std::string& inst_id, const AlgorithmSpec& alg,
                  std::uint64_t seed, const std::optional<double>& gamma, bool timing) {
  ResultRow row;
  row.instance = inst_id;
  row.n = inst.size();
  row.delta = inst.empty() ? 1.0 : LengthRatio(inst);
  row.algorithm = alg.name;
  row.seed = seed;
  ordered_json shown = alg.params;
  if (gamma && shown.contains("gamma")) shown["gamma"] = *gamma;
  row.params = EncodeParams(shown);

  json params = json::object();
  for (auto it = alg.params.begin(); it != alg.params.end(); ++it) params[it.key()] = *it;
  if (params.contains("gamma")) params.erase("gamma");
  ParamReader r("algorithm '" + alg.name + "'", params);

  const auto start = std::chrono::steady_clock::now();
  auto take_schedule = [&](const Schedule& s, bool cover) {
    row.slots = s.slot_count();
    row.flags = s.flags;
    row.verified = VerifySchedule(inst, s, cover);
    if (!row.verified) throw VerificationError(alg.name + " schedule failed re-verification");
  };
  if (alg.name == "conflict") {
    const ConflictOptions opt = ReadConflict(r, gamma);
    r.Done();
    take_schedule(ScheduleConflict(inst, opt), true);
  } else if (alg.name == "wcapacity") {
    const ConflictOptions opt = ReadConflict(r, gamma);
    r.Done();
    const CapacityResult c = WCapacityConflict(inst, opt);
    row.weight = c.weight;
    row.flags = c.flags;
    row.verified = c.set.empty() || IsFeasible(inst, c.set, c.power, inst.params().beta);
    if (!row.verified) throw VerificationError("capacity set failed re-verification");
  } else if (alg.name == "first-fit") {
    const double tau = r.Real("tau", 0.0);
    r.Done();
    take_schedule(FirstFit(inst, tau), true);
  } else if (alg.name == "length-class") {
    const double tau = r.Real("tau", 0.0);
    r.Done();
    take_schedule(LengthClassSchedule(inst, tau), true);
  } else if (alg.name == "randomized") {
    const double tau = r.Real("tau", 0.0);
    const std::string kind = r.Str("probs", "constant");
    const double p = r.Real("p", kind == "harmonic" ? 1.0 : 0.5);
    const int cap = r.Int("cap", 10000);
    r.Done();
    ProbSequence seq;
    if (kind == "constant") {
      seq = ProbSequence::Constant(p, cap);
    } else if (kind == "harmonic") {
      seq = ProbSequence::Harmonic(p, cap);
    } else {
      throw ParameterError("probs must be 'constant' or 'harmonic'");
    }
    const RandomizedResult rr = RandomizedSchedule(inst, tau, seq, seed);
    take_schedule(rr.schedule, !rr.schedule.HasFlag(kFlagCapReached));
  } else if (alg.name == "exact-fixed") {
    const double tau = r.Real("tau", 0.0);
    r.Done();
    row.slots = ExactMinSchedule(inst, PowerMode::kFixed, tau);
    row.verified = true;
  } else if (alg.name == "exact-optimal") {
    r.Done();
    row.slots = ExactMinSchedule(inst, PowerMode::kOptimal);
    row.verified = true;
  }
  if (timing) {
    row.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                 .count();
  }
  return row;
}

[[noreturn]] void Rethrow(std::exception_ptr e, const std::string& context) {
  try {
    std::rethrow_exception(e);
  } catch (const VerificationError& err) {
    throw VerificationError(context + ": " + err.what());
  } catch (const ParameterError& err) {
    throw ParameterError(context + ": " + err.what());
  } catch (const std::exception& err) {
    throw Error(context + ": " + err.what());
  }
}

}  // namespace

std::vector<ResultRow> RunExperiment(const ExperimentConfig& cfg) {
  cfg.Validate();
  std::vector<Instance> instances;
  for (const auto& src : cfg.instances) {
    try {
      instances.push_back(src.file.empty()
                              ? GenerateFromSpec(src.generator, src.params, cfg.base_params)
                              : LoadInstance(src.file));
    } catch (...) {
      Rethrow(std::current_exception(), "instance '" + src.id + "'");
    }
  }

  // Calibrated gammas are resolved up front so tasks share no mutable state.
  CalibrationCache cache(cfg.calibration_cache);
  std::map<std::pair<std::size_t, std::size_t>, double> gammas;
  for (std::size_t a = 0; a < cfg.algorithms.size(); ++a) {
    const AlgorithmSpec& alg = cfg.algorithms[a];
    if (!alg.params.contains("gamma")) continue;
    for (std::size_t i = 0; i < instances.size(); ++i) {
      const auto& g = alg.params.at("gamma");
      if (g.is_number()) {
        gammas[{i, a}] = g.get<double>();
        continue;
      }
      if (!g.is_string() || g.get<std::string>() != "calibrated") {
        throw ParameterError("gamma must be a number or \"calibrated\"");
      }
      CalibrationKey key;
      key.alpha = instances[i].params().alpha;
      key.beta = instances[i].params().beta;
      key.m = alg.params.contains("m") ? alg.params.at("m").get<int>()
                                       : instances[i].space().dimension();
      key.delta = alg.params.value("delta", 0.9);
      key.tau = alg.params.value("tau", 0.8);
      try {
        gammas[{i, a}] = cache.Get(key, cfg.calibration_trials, cfg.calibration_seed);
      } catch (...) {
        Rethrow(std::current_exception(), "calibration for instance '" + cfg.instances[i].id + "'");
      }
    }
  }

  std::vector<Task> tasks;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    for (std::size_t a = 0; a < cfg.algorithms.size(); ++a) {
      for (std::uint64_t seed : cfg.seeds) tasks.push_back({i, a, seed});
    }
  }
  std::vector<ResultRow> rows(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t = next++; t < tasks.size(); t = next++) {
      const Task& task = tasks[t];
      try {
        std::optional<double> gamma;
        if (auto it = gammas.find({task.instance, task.algorithm}); it != gammas.end()) {
          gamma = it->second;
        }
        rows[t] = RunTask(instances[task.instance], cfg.instances[task.instance].id,
                          cfg.algorithms[task.algorithm], task.seed, gamma, cfg.timing);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    }
  };
  const auto threads =
      static_cast<std::size_t>(std::min<std::size_t>(static_cast<std::size_t>(cfg.parallelism),
                                                      std::max<std::size_t>(tasks.size(), 1)));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t k = 0; k < threads; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    if (errors[t]) {
      Rethrow(errors[t], "instance '" + cfg.instances[tasks[t].instance].id + "', algorithm '" +
                             cfg.algorithms[tasks[t].algorithm].name + "', seed " +
                             std::to_string(tasks[t].seed));
    }
  }
  std::stable_sort(rows.begin(), rows.end(), RowLess);
  return rows;
}

std::vector<ResultRow> RunExperimentToFile(const ExperimentConfig& cfg) {
  if (cfg.output.empty()) throw ParameterError("experiment config has no output path");
  std::vector<ResultRow> rows = RunExperiment(cfg);
  {
    std::ofstream out(cfg.output, std::ios::binary);
    if (!out) throw ParameterError("cannot write results to '" + cfg.output + "'");
    out << ResultsCsv(rows);
  }
  if (!cfg.ratios.empty()) {
    std::vector<std::string> order;
    for (const auto& s : cfg.instances) order.push_back(s.id);
    std::vector<RatioRow> all;
    for (const auto& [num, den] : cfg.ratios) {
      auto part = SlotRatios(rows, order, num, den);
      all.insert(all.end(), part.begin(), part.end());
    }
    std::ofstream out(cfg.output + ".ratios.csv", std::ios::binary);
    if (!out) throw ParameterError("cannot write ratios next to '" + cfg.output + "'");
    out << RatiosCsv(all);
  }
  return rows;
}

}  // namespace sinrsched
