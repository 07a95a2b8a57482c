#pragma once

#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "sinrsched/model.hpp"

namespace sinrsched {

// Oblivious power scheme P_tau(i) = scale * l_i^(tau * alpha).
struct PowerScheme {
  double tau = 0.0;
  double scale = 1.0;
};

// Transmit power per link, indexed by link id.
using PowerAssignment = std::vector<double>;

enum class AffectanceMode {
  kNormalized,  // c_i = 1
  kExact,       // c_i = 1 / (1 - beta N l_i^alpha / P(i))
};

double ObliviousPower(const PowerScheme& scheme, const Instance& inst, LinkId i);
PowerAssignment ObliviousPowers(const PowerScheme& scheme, const Instance& inst);

// a_P(j, i): affectance of link j on link i. Zero when j == i; +inf when
// s_j sits on r_i.
double Affectance(const Instance& inst, const PowerAssignment& power, LinkId j, LinkId i,
                  AffectanceMode mode = AffectanceMode::kNormalized);
// a_P(S, i), summed in ascending id order; i itself is skipped.
double SetAffectance(const Instance& inst, const PowerAssignment& power,
                     std::span<const LinkId> set, LinkId i,
                     AffectanceMode mode = AffectanceMode::kNormalized);

// l_i^(tau alpha) l_j^((1-tau) alpha) / d(i,j)^alpha. Throws when d(i,j) == 0.
double FTau(const Instance& inst, double tau, LinkId i, LinkId j);

struct LinkAffectance {
  LinkId link = 0;
  double affectance = 0.0;
};

struct FeasibilityReport {
  bool feasible = false;
  double p = 1.0;
  LinkId worst_link = -1;
  double margin = 0.0;  // 1/p - max affectance
  std::vector<LinkAffectance> per_link;
};

FeasibilityReport CheckFeasible(const Instance& inst, std::span<const LinkId> set,
                                const PowerAssignment& power, double p,
                                AffectanceMode mode = AffectanceMode::kNormalized);
// Shorthand for CheckFeasible(...).feasible.
bool IsFeasible(const Instance& inst, std::span<const LinkId> set, const PowerAssignment& power,
                double p, AffectanceMode mode = AffectanceMode::kNormalized);

nlohmann::json ReportToJson(const FeasibilityReport& report);

// Splits a p-feasible set into p_target-feasible parts, at most
// ceil(2 p_target / p) of them.
std::vector<LinkSet> StrengthenPartition(const Instance& inst, std::span<const LinkId> set,
                                         const PowerAssignment& power, double p, double p_target);
int StrengthenBound(double p, double p_target);

struct TauInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool nonempty = false;

  bool Contains(double tau) const { return nonempty && tau > lo && tau < hi; }
};

double DeltaZero(double alpha, int m);
TauInterval ValidTauInterval(double alpha, int m, double delta);

struct PowerSolution {
  bool feasible = false;
  PowerAssignment power;  // full length; links outside the set keep power 1
  int iterations = 0;
};

// Decides whether some power assignment makes `set` beta-feasible. A positive
// answer carries a verified witness.
PowerSolution ExistsPower(const Instance& inst, std::span<const LinkId> set,
                          AffectanceMode mode = AffectanceMode::kNormalized);

// Spectral radius of the normalized gain matrix G_ij = l_i^alpha / d_ji^alpha
// (i != j) restricted to `set`. +inf if some gain is infinite.
double GainSpectralRadius(const Instance& inst, std::span<const LinkId> set);

}  // namespace sinrsched
