#include "sinrsched/conflict_graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace sinrsched {

void ValidateConflictParams(const ConflictParams& params) {
  if (!(params.gamma > 0.0) || !std::isfinite(params.gamma)) {
    throw ParameterError("gamma must be positive");
  }
  if (!(params.delta >= 0.0 && params.delta <= 1.0)) {
    throw ParameterError("delta must lie in [0,1]");
  }
}

bool Independent(const Instance& inst, const ConflictParams& params, LinkId i, LinkId j) {
  if (i == j) throw ParameterError("independence predicate needs two distinct links");
  ValidateConflictParams(params);
  double li = LinkLength(inst, i);
  double lj = LinkLength(inst, j);
  if (li < lj) std::swap(li, lj);
  const double d = LinkGap(inst, i, j);
  const double thr = params.gamma * std::pow(li, params.delta) * std::pow(lj, 1.0 - params.delta);
  return d > thr;
}

void ConflictGraph::Init(int n, std::vector<int> order) {
  if (n < 0) throw ParameterError("negative vertex count");
  n_ = n;
  words_ = (static_cast<std::size_t>(n) + 63) / 64;
  bits_.assign(words_ * static_cast<std::size_t>(n), 0);
  adj_.assign(static_cast<std::size_t>(n), {});
  if (order.empty()) {
    order.resize(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
  }
  if (order.size() != static_cast<std::size_t>(n)) throw ParameterError("order has wrong length");
  pos_.assign(static_cast<std::size_t>(n), -1);
  for (std::size_t k = 0; k < order.size(); ++k) {
    const int v = order[k];
    if (v < 0 || v >= n || pos_[static_cast<std::size_t>(v)] != -1) {
      throw ParameterError("order is not a permutation");
    }
    pos_[static_cast<std::size_t>(v)] = static_cast<int>(k);
  }
  order_ = std::move(order);
}

void ConflictGraph::AddEdge(int u, int v) {
  if (u == v) throw ParameterError("self loops are not allowed");
  if (u < 0 || v < 0 || u >= n_ || v >= n_) throw ParameterError("edge endpoint out of range");
  if (adjacent(u, v)) return;
  bits_[static_cast<std::size_t>(u) * words_ + static_cast<std::size_t>(v) / 64] |=
      std::uint64_t{1} << (v % 64);
  bits_[static_cast<std::size_t>(v) * words_ + static_cast<std::size_t>(u) / 64] |=
      std::uint64_t{1} << (u % 64);
  adj_[static_cast<std::size_t>(u)].push_back(v);
  adj_[static_cast<std::size_t>(v)].push_back(u);
}

void ConflictGraph::Finish() {
  for (auto& a : adj_) std::sort(a.begin(), a.end());
}

bool ConflictGraph::adjacent(int u, int v) const {
  return (bits_[static_cast<std::size_t>(u) * words_ + static_cast<std::size_t>(v) / 64] >>
          (v % 64)) & 1U;
}

std::size_t ConflictGraph::edge_count() const {
  std::size_t deg = 0;
  for (const auto& a : adj_) deg += a.size();
  return deg / 2;
}

ConflictGraph ConflictGraph::FromEdges(int n, std::span<const std::pair<int, int>> edges,
                                       std::vector<int> order) {
  ConflictGraph g;
  g.Init(n, std::move(order));
  for (const auto& [u, v] : edges) g.AddEdge(u, v);
  g.Finish();
  return g;
}

ConflictGraph BuildGraph(const Instance& inst, const ConflictParams& params) {
  ValidateConflictParams(params);
  const int n = static_cast<int>(inst.size());
  const std::vector<double> len = AllLengths(inst);
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return len[static_cast<std::size_t>(a)] > len[static_cast<std::size_t>(b)];
  });
  ConflictGraph g;
  g.Init(n, std::move(order));
  g.params_ = params;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (!Independent(inst, params, i, j)) g.AddEdge(i, j);
    }
  }
  g.Finish();
  return g;
}

std::string EdgeListText(const ConflictGraph& g) {
  std::ostringstream os;
  os << g.size() << '\n';
  for (int u = 0; u < g.size(); ++u) {
    for (int v : g.neighbors(u)) {
      if (u < v) os << u << ' ' << v << '\n';
    }
  }
  return os.str();
}

Coloring GreedyColor(const ConflictGraph& g) {
  Coloring color(static_cast<std::size_t>(g.size()), -1);
  std::vector<int> seen(static_cast<std::size_t>(g.size()) + 1, -1);
  for (int v : g.order()) {
    for (int u : g.neighbors(v)) {
      const int c = color[static_cast<std::size_t>(u)];
      if (c >= 0) seen[static_cast<std::size_t>(c)] = v;
    }
    int c = 0;
    while (seen[static_cast<std::size_t>(c)] == v) ++c;
    color[static_cast<std::size_t>(v)] = c;
  }
  return color;
}

int ColorCount(const Coloring& coloring) {
  int k = 0;
  for (int c : coloring) k = std::max(k, c + 1);
  return k;
}

std::vector<LinkSet> ColorClasses(const Coloring& coloring) {
  std::vector<LinkSet> classes(static_cast<std::size_t>(ColorCount(coloring)));
  for (std::size_t v = 0; v < coloring.size(); ++v) {
    classes[static_cast<std::size_t>(coloring[v])].push_back(static_cast<LinkId>(v));
  }
  return classes;
}

bool IsProperColoring(const ConflictGraph& g, const Coloring& coloring) {
  if (coloring.size() != static_cast<std::size_t>(g.size())) return false;
  for (int u = 0; u < g.size(); ++u) {
    if (coloring[static_cast<std::size_t>(u)] < 0) return false;
    for (int v : g.neighbors(u)) {
      if (coloring[static_cast<std::size_t>(u)] == coloring[static_cast<std::size_t>(v)]) {
        return false;
      }
    }
  }
  return true;
}

bool IsIndependentSet(const ConflictGraph& g, std::span<const int> set) {
  for (std::size_t a = 0; a < set.size(); ++a) {
    for (std::size_t b = a + 1; b < set.size(); ++b) {
      if (set[a] == set[b] || g.adjacent(set[a], set[b])) return false;
    }
  }
  return true;
}

int MeasureSimpliciality(const ConflictGraph& g) {
  int k = 1;
  std::vector<int> rest;
  for (int v = 0; v < g.size(); ++v) {
    rest.clear();
    for (int u : g.neighbors(v)) {
      if (g.position(u) < g.position(v)) rest.push_back(u);
    }
    std::sort(rest.begin(), rest.end(),
              [&](int a, int b) { return g.position(a) < g.position(b); });
    int cliques = 0;
    while (!rest.empty()) {
      std::vector<int> clique{rest.front()};
      std::vector<int> left;
      for (std::size_t t = 1; t < rest.size(); ++t) {
        const int w = rest[t];
        const bool fits =
            std::all_of(clique.begin(), clique.end(), [&](int c) { return g.adjacent(c, w); });
        if (fits) {
          clique.push_back(w);
        } else {
          left.push_back(w);
        }
      }
      rest.swap(left);
      ++cliques;
    }
    k = std::max(k, cliques);
  }
  return k;
}

MwisResult Mwis(const ConflictGraph& g, std::span<const double> weights) {
  if (weights.size() != static_cast<std::size_t>(g.size())) {
    throw ParameterError("weight vector does not match the graph");
  }
  for (double w : weights) {
    if (!(w > 0.0)) throw ParameterError("weights must be positive");
  }
  std::vector<double> residual(weights.begin(), weights.end());
  std::vector<int> stack;
  const auto& order = g.order();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int v = *it;
    const double r = residual[static_cast<std::size_t>(v)];
    if (r <= 0.0) continue;
    stack.push_back(v);
    residual[static_cast<std::size_t>(v)] = 0.0;
    for (int u : g.neighbors(v)) {
      if (g.position(u) < g.position(v)) residual[static_cast<std::size_t>(u)] -= r;
    }
  }
  MwisResult out;
  std::vector<char> chosen(static_cast<std::size_t>(g.size()), 0);
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    const bool free = std::none_of(g.neighbors(v).begin(), g.neighbors(v).end(),
                                   [&](int u) { return chosen[static_cast<std::size_t>(u)]; });
    if (free) {
      chosen[static_cast<std::size_t>(v)] = 1;
      out.set.push_back(v);
    }
  }
  std::sort(out.set.begin(), out.set.end());
  for (int v : out.set) out.weight += weights[static_cast<std::size_t>(v)];
  out.k_emp = MeasureSimpliciality(g);
  return out;
}

namespace {

constexpr std::uint64_t kPrimeA = 2305843009213693951ULL;  // 2^61 - 1
constexpr std::uint64_t kPrimeB = 2305843009213693921ULL;

__extension__ using Wide = unsigned __int128;

std::uint64_t MulMod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<Wide>(a) * b % m);
}

}  // namespace

int ExactChromatic(const ConflictGraph& g) {
  const int n = g.size();
  if (n > kExactChromaticLimit) {
    throw ParameterError("exact chromatic number limited to " +
                         std::to_string(kExactChromaticLimit) + " vertices");
  }
  if (n == 0) return 0;
  if (g.edge_count() == 0) return 1;
  std::vector<std::uint32_t> closed(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) {
    std::uint32_t m = 1U << v;
    for (int u : g.neighbors(v)) m |= 1U << u;
    closed[static_cast<std::size_t>(v)] = m;
  }
  const std::size_t full = std::size_t{1} << n;
  // ind[X]: number of independent subsets of X, empty set included.
  std::vector<std::uint32_t> ind(full);
  ind[0] = 1;
  for (std::size_t x = 1; x < full; ++x) {
    const int v = std::countr_zero(static_cast<std::uint32_t>(x));
    const auto without = static_cast<std::uint32_t>(x) & ~(1U << v);
    ind[x] = ind[without] + ind[without & ~closed[static_cast<std::size_t>(v)]];
  }
  std::vector<std::uint64_t> pa(full, 1), pb(full, 1);
  for (int k = 1; k <= n; ++k) {
    std::uint64_t sa = 0, sb = 0;
    for (std::size_t x = 0; x < full; ++x) {
      pa[x] = MulMod(pa[x], ind[x] % kPrimeA, kPrimeA);
      pb[x] = MulMod(pb[x], ind[x] % kPrimeB, kPrimeB);
      const bool negative = ((n - std::popcount(static_cast<std::uint32_t>(x))) & 1) != 0;
      if (negative) {
        sa = (sa + kPrimeA - pa[x]) % kPrimeA;
        sb = (sb + kPrimeB - pb[x]) % kPrimeB;
      } else {
        sa = (sa + pa[x]) % kPrimeA;
        sb = (sb + pb[x]) % kPrimeB;
      }
    }
    if (sa != 0 || sb != 0) return k;
  }
  return n;
}

namespace {

struct MwisSearch {
  const std::vector<std::uint32_t>* closed;
  std::span<const double> w;
  double best = -1.0;
  std::uint32_t best_set = 0;

  void Run(std::uint32_t cand, std::uint32_t cur, double cur_w) {
    if (cand == 0) {
      if (cur_w > best) {
        best = cur_w;
        best_set = cur;
      }
      return;
    }
    double bound = cur_w;
    for (std::uint32_t c = cand; c != 0; c &= c - 1) {
      bound += w[static_cast<std::size_t>(std::countr_zero(c))];
    }
    if (bound <= best) return;
    const int v = std::countr_zero(cand);
    const std::uint32_t bit = 1U << v;
    Run(cand & ~(*closed)[static_cast<std::size_t>(v)], cur | bit,
        cur_w + w[static_cast<std::size_t>(v)]);
    Run(cand & ~bit, cur, cur_w);
  }
};

}  // namespace

LinkSet ExactMwis(const ConflictGraph& g, std::span<const double> weights) {
  const int n = g.size();
  if (n > kExactMwisLimit) {
    throw ParameterError("exact MWIS limited to " + std::to_string(kExactMwisLimit) + " vertices");
  }
  if (weights.size() != static_cast<std::size_t>(n)) {
    throw ParameterError("weight vector does not match the graph");
  }
  std::vector<std::uint32_t> closed(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) {
    std::uint32_t m = 1U << v;
    for (int u : g.neighbors(v)) m |= 1U << u;
    closed[static_cast<std::size_t>(v)] = m;
  }
  MwisSearch s{&closed, weights};
  const std::uint32_t all = n == 32 ? ~0U : ((1U << n) - 1U);
  s.Run(all, 0, 0.0);
  LinkSet out;
  for (int v = 0; v < n; ++v) {
    if ((s.best_set >> v) & 1U) out.push_back(v);
  }
  return out;
}

int FStar(double delta, double x) {
  if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("f_star needs delta in (0,1)");
  if (!(x >= 1.0)) throw ParameterError("f_star needs x >= 1");
  if (x <= 2.0) return 1;
  double l = std::log2(x);
  int c = 0;
  while (l > 1.0) {
    l *= delta;
    ++c;
  }
  return c;
}

double IndependenceGamma(const Instance& inst, std::span<const LinkId> set) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < set.size(); ++a) {
    for (std::size_t b = a + 1; b < set.size(); ++b) {
      const double lmin = std::min(LinkLength(inst, set[a]), LinkLength(inst, set[b]));
      best = std::min(best, LinkGap(inst, set[a], set[b]) / lmin);
    }
  }
  return best;
}

}  // namespace sinrsched
