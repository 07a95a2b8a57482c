#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "sinrsched/model.hpp"

namespace sinrsched {

struct CalibrationKey {
  double alpha = 3.0;
  int m = 2;
  double delta = 0.9;
  double tau = 0.8;
  double beta = 1.0;

  std::string ToString() const;
};

inline constexpr double kMaxCalibratedGamma = 512.0;

// 1, 1.5, 2, 3, 4.5, ... (2 * 1.5^j after the first two), up to 512.
std::vector<double> GammaGrid();

// Random instance of the calibration family: n uniform in [2, 64], senders in
// a box of side 5 n^(1/m), lengths uniform in [1, 16].
Instance CalibrationInstance(const CalibrationKey& key, std::uint64_t seed);

// True if every greedy color class of G_gamma^delta on `inst` is
// P_tau-feasible at threshold beta.
bool ColorClassesFeasible(const Instance& inst, double gamma, double delta, double tau);

// Smallest grid gamma for which all `trials` calibration instances pass.
double CalibrateGamma(const CalibrationKey& key, int trials, std::uint64_t seed);

// Calibration results keyed by (alpha, m, delta, tau, beta), kept in memory
// and optionally persisted as JSON.
class CalibrationCache {
 public:
  CalibrationCache() = default;
  explicit CalibrationCache(std::string path);

  double Get(const CalibrationKey& key, int trials, std::uint64_t seed, bool recalibrate = false);
  bool Contains(const CalibrationKey& key) const;
  void Save() const;

 private:
  void Load();

  std::string path_;
  mutable std::mutex mu_;
  std::map<std::string, double> values_;
};

}  // namespace sinrsched
