#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sinrsched/model.hpp"
#include "sinrsched/sinr.hpp"

namespace sinrsched {

enum class WeightKind { kUnit, kUniform };

struct RandomConfig {
  int n = 0;
  int dim = 2;
  double side = 100.0;
  double min_length = 1.0;
  double max_length = 10.0;
  WeightKind weights = WeightKind::kUnit;
  double min_weight = 1.0;
  double max_weight = 1.0;
  std::uint64_t seed = 1;
  SinrParams params;
};

// Senders uniform in [0, side]^dim, lengths uniform in the range, directions
// uniform on the sphere.
Instance GenRandom(const RandomConfig& cfg);

// Layered binomial tree T_k on the line (first-fit lower bound).
struct FirstFitTree {
  Instance instance;
  std::vector<int> parent;  // -1 for the root
  std::vector<int> rank;    // link length is x^rank
  double x = 0.0;
};

double FirstFitDefaultX(double delta);
FirstFitTree BuildFirstFitTree(int k, double delta, std::optional<double> x = std::nullopt,
                               SinrParams params = {});
Instance GenFirstFitTree(int k, double delta, std::optional<double> x = std::nullopt,
                         SinrParams params = {});

// Complete f-ary layered tree on the line with M co-located copies per node
// (randomized-algorithm lower bound).
struct RandomizedTree {
  Instance instance;
  int fanout = 0;
  int copies = 1;
  std::vector<int> level;   // per link
  std::vector<int> node;    // tree node index per link
  std::vector<int> parent;  // first copy of the parent node, -1 at the root
  std::vector<double> level_length;
};

// Smallest f with f >= ceil(log2(n)^b), n = M (f^(k+1) - 1) / (f - 1).
int RandomizedTreeFanout(int levels, double b, int copies);
RandomizedTree BuildRandomizedTree(int levels, double b, int copies, double delta,
                                   SinrParams params = {});
Instance GenRandomizedTree(int levels, double b, int copies, double delta,
                           SinrParams params = {});

// Recursive weighted planar instance S_t(q).
struct WeightedPlane {
  Instance instance;
  std::vector<int> level;          // per link; weight is q^(2 level)
  std::vector<double> main_length; // l_0..l_t
  std::vector<double> height;      // h_0..h_t
  int q = 2;
};

WeightedPlane BuildWeightedPlane(int t, int q, double alpha);
Instance GenWeightedPlane(int t, int q, double alpha);

// Weighted equilength instance in an explicit metric.
struct GeneralMetric {
  Instance instance;
  std::vector<int> set_index;  // k in 1..K per link
};

GeneralMetric BuildGeneralMetric(int big_k, double gamma, double alpha);
Instance GenGeneralMetric(int big_k, double gamma = 6.0, double alpha = 3.0);
// P(i) = 2^-k for i in L_k.
PowerAssignment GeneralMetricWitness(const GeneralMetric& gm);

struct WeakLinkConfig {
  double p_max = 1.0;
  double tau = 0.0;
};

// l_max = (P_max / (beta N))^(1/alpha).
double WeakMaxLength(const SinrParams& params, double p_max);
// e(x) = x / (1 - (x/l_max)^alpha)^(1/alpha) and its inverse
// f(y) = y / (1 + (y/l_max)^alpha)^(1/alpha).
double EffectiveLength(double x, double l_max, double alpha);
double InverseEffectiveLength(double y, double l_max, double alpha);
bool IsWeakLink(const Instance& inst, LinkId i, double p_max);
// P_tau for weak links: P_max (l / l_max)^(tau alpha).
PowerAssignment WeakPowers(const Instance& inst, const WeakLinkConfig& cfg);

Instance Weaken(const Instance& source, const WeakLinkConfig& cfg);

}  // namespace sinrsched
