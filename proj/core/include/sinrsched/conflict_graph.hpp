#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sinrsched/model.hpp"

namespace sinrsched {

// (gamma, delta) conflict predicate; delta = 0 gives G_gamma.
struct ConflictParams {
  double gamma = 1.0;
  double delta = 0.0;
};

void ValidateConflictParams(const ConflictParams& params);

// With l_i >= l_j: independent iff d(i,j) > gamma * l_i^delta * l_j^(1-delta).
bool Independent(const Instance& inst, const ConflictParams& params, LinkId i, LinkId j);

class ConflictGraph {
 public:
  ConflictGraph() = default;
  // `order` defaults to 0..n-1.
  static ConflictGraph FromEdges(int n, std::span<const std::pair<int, int>> edges,
                                 std::vector<int> order = {});

  int size() const { return n_; }
  bool adjacent(int u, int v) const;
  const std::vector<int>& neighbors(int v) const { return adj_[static_cast<std::size_t>(v)]; }
  // Non-increasing link length, ties by ascending id.
  const std::vector<int>& order() const { return order_; }
  // Index of v inside order().
  int position(int v) const { return pos_[static_cast<std::size_t>(v)]; }
  const ConflictParams& params() const { return params_; }
  std::size_t edge_count() const;

 private:
  friend ConflictGraph BuildGraph(const Instance&, const ConflictParams&);
  void Init(int n, std::vector<int> order);
  void AddEdge(int u, int v);
  void Finish();

  int n_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> bits_;
  std::vector<std::vector<int>> adj_;
  std::vector<int> order_;
  std::vector<int> pos_;
  ConflictParams params_;
};

ConflictGraph BuildGraph(const Instance& inst, const ConflictParams& params);

// Edge list text: n on the first line, then "u v" (u < v) per edge.
std::string EdgeListText(const ConflictGraph& g);

// color[v] for every vertex, colors 0..k-1.
using Coloring = std::vector<int>;

Coloring GreedyColor(const ConflictGraph& g);
int ColorCount(const Coloring& coloring);
std::vector<LinkSet> ColorClasses(const Coloring& coloring);
bool IsProperColoring(const ConflictGraph& g, const Coloring& coloring);
bool IsIndependentSet(const ConflictGraph& g, std::span<const int> set);

// Largest greedy clique cover, over all vertices, of the neighbors that
// precede the vertex in order() (its longer neighbors). At least 1.
int MeasureSimpliciality(const ConflictGraph& g);

struct MwisResult {
  LinkSet set;  // ascending
  double weight = 0.0;
  int k_emp = 1;
};

// Local-ratio independent set over the elimination order (shortest first).
MwisResult Mwis(const ConflictGraph& g, std::span<const double> weights);

inline constexpr int kExactChromaticLimit = 20;
inline constexpr int kExactMwisLimit = 25;

int ExactChromatic(const ConflictGraph& g);
LinkSet ExactMwis(const ConflictGraph& g, std::span<const double> weights);

// Number of applications of x -> x^delta needed to reach a value <= 2; 1 when
// x <= 2 already.
int FStar(double delta, double x);

// Largest gamma for which `set` is gamma-independent in the delta = 0 sense:
// min over pairs of d(i,j) / min(l_i, l_j). +inf for fewer than two links.
double IndependenceGamma(const Instance& inst, std::span<const LinkId> set);

}  // namespace sinrsched
