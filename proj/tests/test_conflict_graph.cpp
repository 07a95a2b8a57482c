#include <algorithm>
#include <cmath>
#include <functional>

#include <gtest/gtest.h>

#include "sinrsched/calibration.hpp"
#include "sinrsched/conflict_graph.hpp"
#include "sinrsched/generators.hpp"
#include "sinrsched/random.hpp"
#include "test_util.hpp"

namespace sinrsched {
namespace {

using testing::Line;
using testing::Plane;

Instance RandomPlane(std::uint64_t seed, int n, double side = 30) {
  RandomConfig cfg;
  cfg.n = n;
  cfg.side = side;
  cfg.min_length = 1;
  cfg.max_length = 8;
  cfg.seed = seed;
  return GenRandom(cfg);
}

ConflictGraph Graph(int n, const std::vector<std::pair<int, int>>& edges) {
  return ConflictGraph::FromEdges(n, edges);
}

ConflictGraph RandomGraph(std::uint64_t seed, int n, double p) {
  Rng rng(seed);
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (rng.Bernoulli(p)) edges.emplace_back(u, v);
  return Graph(n, edges);
}

TEST(Independent, DiagonalExample) {
  // l_i = 2, l_j = 1, d(i,j) = 1.5 > 1 * 2^0.5 * 1^0.5
  const Instance inst = Line({{0, 2}, {3.5, 4.5}});
  EXPECT_TRUE(Independent(inst, {1.0, 0.5}, 0, 1));
  EXPECT_FALSE(Independent(inst, {1.1, 0.5}, 0, 1));
}

TEST(Independent, BoundaryIsConflict) {
  const Instance inst = Line({{0, 1}, {2, 3}});
  EXPECT_FALSE(Independent(inst, {1.0, 0.0}, 0, 1));
}

TEST(Independent, TouchingLinksConflict) {
  const Instance inst = Line({{0, 1}, {1, 2}});
  EXPECT_FALSE(Independent(inst, {1e-9, 0.5}, 0, 1));
}

TEST(Independent, Symmetric) {
  const Instance inst = RandomPlane(3, 50);
  Rng rng(1);
  for (int t = 0; t < 1000; ++t) {
    const ConflictParams cp{rng.Uniform(0.5, 4.0), rng.Uniform()};
    const auto i = static_cast<LinkId>(rng.Below(50));
    auto j = static_cast<LinkId>(rng.Below(50));
    if (i == j) j = (j + 1) % 50;
    EXPECT_EQ(Independent(inst, cp, i, j), Independent(inst, cp, j, i));
  }
}

TEST(Independent, SameLinkRejected) {
  const Instance inst = Line({{0, 1}, {2, 3}});
  EXPECT_THROW(Independent(inst, {1.0, 0.5}, 0, 0), ParameterError);
  EXPECT_THROW(Independent(inst, {0.0, 0.5}, 0, 1), ParameterError);
  EXPECT_THROW(Independent(inst, {1.0, 1.5}, 0, 1), ParameterError);
}

TEST(BuildGraph, SingleLinkEdgeless) {
  const ConflictGraph g = BuildGraph(Line({{0, 1}}), {2.0, 0.5});
  EXPECT_EQ(g.size(), 1);
  EXPECT_EQ(g.edge_count(), 0u);
}

TEST(BuildGraph, CoLocatedPair) {
  const ConflictGraph g = BuildGraph(Line({{0, 1}, {0, 1}}), {1.0, 0.5});
  EXPECT_EQ(g.edge_count(), 1u);
  EXPECT_TRUE(g.adjacent(0, 1));
}

TEST(BuildGraph, EdgesMonotoneInGamma) {
  const Instance inst = RandomPlane(5, 60);
  const ConflictGraph small = BuildGraph(inst, {1.0, 0.7});
  const ConflictGraph big = BuildGraph(inst, {3.0, 0.7});
  for (int u = 0; u < 60; ++u)
    for (int v : small.neighbors(u)) EXPECT_TRUE(big.adjacent(u, v));
  EXPECT_GE(big.edge_count(), small.edge_count());
}

TEST(BuildGraph, MatchesPairwisePredicate) {
  const Instance inst = RandomPlane(6, 40);
  const ConflictParams cp{2.0, 0.9};
  const ConflictGraph g = BuildGraph(inst, cp);
  for (LinkId i = 0; i < 40; ++i)
    for (LinkId j = i + 1; j < 40; ++j) EXPECT_EQ(g.adjacent(i, j), !Independent(inst, cp, i, j));
}

TEST(BuildGraph, OrderByLengthThenId) {
  const Instance inst = Line({{0, 1}, {10, 13}, {20, 21}, {30, 33}});
  const ConflictGraph g = BuildGraph(inst, {1.0, 0.0});
  EXPECT_EQ(g.order(), (std::vector<int>{1, 3, 0, 2}));
  EXPECT_EQ(g.position(3), 1);
}

TEST(BuildGraph, ScaleInvariant) {
  const Instance inst = RandomPlane(8, 40);
  auto coords = inst.space().euclidean().coords;
  for (double& c : coords) c *= 4.0;
  const Instance big(MetricSpace::Euclidean(2, coords), {inst.links().begin(), inst.links().end()},
                     inst.params());
  const ConflictParams cp{1.5, 0.6};
  EXPECT_EQ(EdgeListText(BuildGraph(big, cp)), EdgeListText(BuildGraph(inst, cp)));
}

TEST(EdgeListText, Format) {
  const ConflictGraph g = Graph(3, {{2, 0}, {1, 2}});
  EXPECT_EQ(EdgeListText(g), "3\n0 2\n1 2\n");
}

TEST(GreedyColor, Triangle) {
  const ConflictGraph g = Graph(3, {{0, 1}, {1, 2}, {0, 2}});
  const Coloring c = GreedyColor(g);
  EXPECT_EQ(ColorCount(c), 3);
  EXPECT_TRUE(IsProperColoring(g, c));
}

TEST(GreedyColor, Edgeless) { EXPECT_EQ(ColorCount(GreedyColor(Graph(5, {}))), 1); }

TEST(GreedyColor, Path) {
  const ConflictGraph g = Graph(4, {{0, 1}, {1, 2}, {2, 3}});
  EXPECT_EQ(ColorCount(GreedyColor(g)), 2);
  EXPECT_EQ(ExactChromatic(g), 2);
}

TEST(GreedyColor, ClassesPartition) {
  const Coloring c = GreedyColor(RandomGraph(2, 30, 0.3));
  const auto classes = ColorClasses(c);
  std::size_t total = 0;
  for (const auto& cls : classes) total += cls.size();
  EXPECT_EQ(total, 30u);
  EXPECT_EQ(static_cast<int>(classes.size()), ColorCount(c));
}

TEST(GreedyColor, BoundedBySimplicialityTimesChromatic) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Instance inst = RandomPlane(seed, 14, 12);
    const ConflictGraph g = BuildGraph(inst, {1.5, 0.8});
    const int greedy = ColorCount(GreedyColor(g));
    EXPECT_LE(greedy, (1 + MeasureSimpliciality(g)) * ExactChromatic(g));
  }
}

// Backtracking chromatic number, independent of the inclusion-exclusion oracle.
int BacktrackChromatic(const ConflictGraph& g) {
  const int n = g.size();
  if (n == 0) return 0;
  std::vector<int> color(static_cast<std::size_t>(n), -1);
  for (int k = 1;; ++k) {
    std::function<bool(int)> place = [&](int v) {
      if (v == n) return true;
      for (int c = 0; c < k; ++c) {
        bool ok = true;
        for (int u : g.neighbors(v))
          if (color[static_cast<std::size_t>(u)] == c) ok = false;
        if (!ok) continue;
        color[static_cast<std::size_t>(v)] = c;
        if (place(v + 1)) return true;
        color[static_cast<std::size_t>(v)] = -1;
      }
      return false;
    };
    std::fill(color.begin(), color.end(), -1);
    if (place(0)) return k;
  }
}

TEST(ExactChromatic, SmallGraphs) {
  EXPECT_EQ(ExactChromatic(Graph(4, {})), 1);
  EXPECT_EQ(ExactChromatic(Graph(3, {{0, 1}, {1, 2}, {0, 2}})), 3);
  EXPECT_EQ(ExactChromatic(Graph(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}})), 3);
}

TEST(ExactChromatic, AgreesWithBacktracking) {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const ConflictGraph g = RandomGraph(seed, 10, 0.2 + 0.02 * static_cast<double>(seed));
    EXPECT_EQ(ExactChromatic(g), BacktrackChromatic(g)) << "seed " << seed;
  }
}

TEST(ExactChromatic, SizeLimit) {
  EXPECT_THROW(ExactChromatic(Graph(kExactChromaticLimit + 1, {})), ParameterError);
}

double SetWeight(const LinkSet& s, const std::vector<double>& w) {
  double total = 0;
  for (int v : s) total += w[static_cast<std::size_t>(v)];
  return total;
}

double BruteForceMwis(const ConflictGraph& g, const std::vector<double>& w) {
  const int n = g.size();
  double best = 0;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    bool ok = true;
    double total = 0;
    for (int u = 0; u < n && ok; ++u) {
      if (!(mask >> u & 1u)) continue;
      total += w[static_cast<std::size_t>(u)];
      for (int v : g.neighbors(u))
        if (mask >> v & 1u) ok = false;
    }
    if (ok) best = std::max(best, total);
  }
  return best;
}

TEST(Mwis, SingleVertex) {
  const std::vector<double> w{2.5};
  const MwisResult r = Mwis(Graph(1, {}), w);
  EXPECT_EQ(r.set, (LinkSet{0}));
  EXPECT_EQ(r.weight, 2.5);
}

TEST(Mwis, TriangleTakesHeaviest) {
  const std::vector<double> w{3, 2, 1};
  const MwisResult r = Mwis(Graph(3, {{0, 1}, {1, 2}, {0, 2}}), w);
  EXPECT_EQ(r.set, (LinkSet{0}));
  EXPECT_EQ(r.weight, 3.0);
}

TEST(Mwis, PathTakesMiddle) {
  const std::vector<double> w{1, 3, 1};
  const MwisResult r = Mwis(Graph(3, {{0, 1}, {1, 2}}), w);
  EXPECT_EQ(r.set, (LinkSet{1}));
}

TEST(Mwis, ApproximationAgainstBruteForce) {
  Rng rng(3);
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const Instance inst = RandomPlane(seed, 12, 15);
    const ConflictGraph g = BuildGraph(inst, {1.5, 0.7});
    std::vector<double> w(12);
    for (double& x : w) x = rng.Uniform(1, 10);
    const MwisResult r = Mwis(g, w);
    EXPECT_TRUE(IsIndependentSet(g, r.set));
    EXPECT_DOUBLE_EQ(r.weight, SetWeight(r.set, w));
    const double opt = BruteForceMwis(g, w);
    EXPECT_GE(r.weight * r.k_emp, opt * (1 - 1e-12)) << "seed " << seed;
    const LinkSet exact = ExactMwis(g, w);
    EXPECT_TRUE(IsIndependentSet(g, exact));
    EXPECT_NEAR(SetWeight(exact, w), opt, 1e-9);
    EXPECT_GE(SetWeight(exact, w), r.weight - 1e-9);
  }
}

TEST(ExactMwis, FourCycle) {
  const std::vector<double> w{1, 1, 1, 1};
  const LinkSet s = ExactMwis(Graph(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}), w);
  EXPECT_EQ(s.size(), 2u);
}

TEST(ExactMwis, SizeLimit) {
  const std::vector<double> w(kExactMwisLimit + 1, 1.0);
  EXPECT_THROW(ExactMwis(Graph(kExactMwisLimit + 1, {}), w), ParameterError);
}

TEST(FStar, AlreadySmall) { EXPECT_EQ(FStar(0.5, 2.0), 1); }

TEST(FStar, SquareRoots) {
  EXPECT_EQ(FStar(0.5, 65536.0), 4);
  EXPECT_EQ(FStar(0.5, 4.0), 1);
}

TEST(FStar, MatchesIteratedLogFormula) {
  Rng rng(4);
  for (int t = 0; t < 500; ++t) {
    const double delta = rng.Uniform(0.1, 0.95);
    const double x = std::exp2(rng.Uniform(1.5, 60.0));
    const double exact = std::log(std::log2(x)) / std::log(1.0 / delta);
    if (std::abs(exact - std::round(exact)) < 1e-6) continue;
    EXPECT_EQ(FStar(delta, x), std::max(1, static_cast<int>(std::ceil(exact))))
        << "delta " << delta << " x " << x;
  }
}

TEST(ColorClasses, CalibratedGammaGivesFeasibleClasses) {
  const CalibrationKey key{3.0, 2, 0.9, 0.8, 1.0};
  const double gamma = CalibrateGamma(key, 40, 7);
  for (std::uint64_t seed = 100; seed < 140; ++seed) {
    const Instance inst = RandomPlane(seed, 40, 35);
    EXPECT_TRUE(ColorClassesFeasible(inst, gamma, key.delta, key.tau)) << "seed " << seed;
  }
}

}  // namespace
}  // namespace sinrsched
