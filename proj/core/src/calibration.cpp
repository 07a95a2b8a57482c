#include "sinrsched/calibration.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "sinrsched/conflict_graph.hpp"
#include "sinrsched/generators.hpp"
#include "sinrsched/random.hpp"
#include "sinrsched/sinr.hpp"

namespace sinrsched {

std::string CalibrationKey::ToString() const {
  char buf[160];
  std::snprintf(buf, sizeof buf, "alpha=%.17g;m=%d;delta=%.17g;tau=%.17g;beta=%.17g", alpha, m,
                delta, tau, beta);
  return buf;
}

std::vector<double> GammaGrid() {
  std::vector<double> g{1.0, 1.5};
  for (double v = 2.0; v <= kMaxCalibratedGamma; v *= 1.5) g.push_back(v);
  return g;
}

Instance CalibrationInstance(const CalibrationKey& key, std::uint64_t seed) {
  Rng rng(seed);
  RandomConfig cfg;
  cfg.n = 2 + static_cast<int>(rng.Below(63));
  cfg.dim = key.m;
  cfg.side = 5.0 * std::pow(static_cast<double>(cfg.n), 1.0 / key.m);
  cfg.min_length = 1.0;
  cfg.max_length = 16.0;
  cfg.seed = rng.Next();
  cfg.params = SinrParams{key.alpha, key.beta, 0.0};
  return GenRandom(cfg);
}

bool ColorClassesFeasible(const Instance& inst, double gamma, double delta, double tau) {
  const ConflictGraph g = BuildGraph(inst, {gamma, delta});
  const PowerAssignment power = ObliviousPowers({tau, 1.0}, inst);
  for (const LinkSet& cls : ColorClasses(GreedyColor(g))) {
    if (!IsFeasible(inst, cls, power, inst.params().beta)) return false;
  }
  return true;
}

double CalibrateGamma(const CalibrationKey& key, int trials, std::uint64_t seed) {
  if (trials < 1) throw ParameterError("calibration needs at least one trial");
  const TauInterval iv = ValidTauInterval(key.alpha, key.m, key.delta);
  if (!iv.Contains(key.tau)) throw ParameterError("tau outside the valid interval");
  std::vector<Instance> pool;
  Rng seeds(seed);
  for (int t = 0; t < trials; ++t) pool.push_back(CalibrationInstance(key, seeds.Next()));
  for (double gamma : GammaGrid()) {
    bool ok = true;
    for (const Instance& inst : pool) {
      if (!ColorClassesFeasible(inst, gamma, key.delta, key.tau)) {
        ok = false;
        break;
      }
    }
    if (ok) return gamma;
  }
  throw Error("gamma calibration exhausted the grid (gamma > 512) for " + key.ToString());
}

CalibrationCache::CalibrationCache(std::string path) : path_(std::move(path)) { Load(); }

void CalibrationCache::Load() {
  if (path_.empty() || !std::filesystem::exists(path_)) return;
  std::ifstream in(path_);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError("calibration cache '" + path_ + "' is not valid JSON");
  }
  for (auto it = j.begin(); it != j.end(); ++it) values_[it.key()] = it->get<double>();
}

bool CalibrationCache::Contains(const CalibrationKey& key) const {
  std::lock_guard<std::mutex> lock(mu_);
  return values_.count(key.ToString()) != 0;
}

double CalibrationCache::Get(const CalibrationKey& key, int trials, std::uint64_t seed,
                             bool recalibrate) {
  const std::string k = key.ToString();
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = values_.find(k);
    if (!recalibrate && it != values_.end()) return it->second;
  }
  const double gamma = CalibrateGamma(key, trials, seed);
  {
    std::lock_guard<std::mutex> lock(mu_);
    values_[k] = gamma;
  }
  Save();
  return gamma;
}

void CalibrationCache::Save() const {
  if (path_.empty()) return;
  nlohmann::json j = nlohmann::json::object();
  {
    std::lock_guard<std::mutex> lock(mu_);
    for (const auto& [k, v] : values_) j[k] = v;
  }
  std::ofstream out(path_);
  if (!out) throw ParameterError("cannot write calibration cache '" + path_ + "'");
  out << j.dump(1) << '\n';
}

}  // namespace sinrsched
