#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sinrsched/conflict_graph.hpp"
#include "sinrsched/model.hpp"
#include "sinrsched/sinr.hpp"

namespace sinrsched {

inline constexpr char kFlagGammaTooSmall[] = "gamma-too-small";
inline constexpr char kFlagCapReached[] = "cap-reached";

// Ordered partition of links into slots. All slots share one oblivious power
// scheme and are checked in normalized mode at threshold p (= beta).
struct Schedule {
  std::string algorithm;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  PowerScheme scheme;
  PowerAssignment power;
  double p = 1.0;
  std::vector<LinkSet> slots;
  std::vector<FeasibilityReport> reports;
  std::vector<std::string> flags;
  std::vector<std::string> warnings;
  bool verified = false;

  int slot_count() const { return static_cast<int>(slots.size()); }
  bool HasFlag(const std::string& f) const;
};

// Recomputes every slot report from scratch. With require_cover the slots
// must partition all links; otherwise they only need to be disjoint.
bool VerifySchedule(const Instance& inst, const Schedule& s, bool require_cover = true);

nlohmann::ordered_json ScheduleToJson(const Schedule& s);
// "k=v;k=v" with numbers printed to 6 significant digits.
std::string EncodeParams(const nlohmann::ordered_json& params);

struct ConflictOptions {
  double gamma = 1.0;
  double delta = 0.9;
  double tau = 0.8;
  // Doubling dimension; defaults to the euclidean dimension. Required for
  // explicit metrics.
  std::optional<int> dimension;
};

// Validates alpha > m, delta in (0,1) and tau inside the valid interval.
void CheckConflictOptions(const Instance& inst, const ConflictOptions& opt);

Schedule ScheduleConflict(const Instance& inst, const ConflictOptions& opt);

struct CapacityResult {
  LinkSet set;
  double weight = 0.0;
  PowerAssignment power;
  int k_emp = 1;
  std::vector<std::string> flags;
  bool verified = false;
};

CapacityResult WCapacityConflict(const Instance& inst, const ConflictOptions& opt);
nlohmann::ordered_json CapacityToJson(const CapacityResult& r, const ConflictOptions& opt);

// Greedy first fit in the given order (increasing length, ties by id, when
// empty). `order` must be a permutation of all link ids.
Schedule FirstFit(const Instance& inst, double tau_power, std::vector<LinkId> order = {});

struct ProbSequence {
  enum class Kind { kConstant, kHarmonic, kCustom };
  Kind kind = Kind::kConstant;
  double value = 0.5;          // p for constant, c for harmonic (p = c/n)
  std::vector<double> custom;  // per round; the last entry repeats
  int cap = 10000;

  static ProbSequence Constant(double p, int cap);
  static ProbSequence Harmonic(double c, int cap);
  static ProbSequence Custom(std::vector<double> probs, int cap);

  void Validate() const;
  // Probability used in round r (1-based) for an instance of n links.
  double At(int round, std::size_t n) const;
  std::string Describe() const;
};

struct RandomizedResult {
  Schedule schedule;
  int rounds = 0;
};

RandomizedResult RandomizedSchedule(const Instance& inst, double tau_power,
                                    const ProbSequence& probs, std::uint64_t seed);

Schedule LengthClassSchedule(const Instance& inst, double tau_power);

enum class PowerMode { kFixed, kOptimal };

inline constexpr int kExactScheduleLimit = 15;

// Minimum number of slots; kFixed uses P_tau, kOptimal asks exists_power.
int ExactMinSchedule(const Instance& inst, PowerMode mode, double tau = 0.0);

// Maximum-weight feasible subset by exhaustive search over all subsets
// (hereditary pruning), for small instances.
inline constexpr int kExactCapacityLimit = 24;
LinkSet ExactMaxWeightFeasible(const Instance& inst, const PowerAssignment& power);

}  // namespace sinrsched
