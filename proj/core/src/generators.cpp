#include "sinrsched/generators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sinrsched/random.hpp"

namespace sinrsched {

Instance GenRandom(const RandomConfig& cfg) {
  if (cfg.n < 0) throw ParameterError("n must be nonnegative");
  if (cfg.dim < 1) throw ParameterError("dimension must be >= 1");
  if (!(cfg.side > 0.0)) throw ParameterError("side must be positive");
  if (!(cfg.min_length > 0.0) || !(cfg.max_length >= cfg.min_length)) {
    throw ParameterError("length range must satisfy 0 < min <= max");
  }
  if (cfg.weights == WeightKind::kUniform &&
      (!(cfg.min_weight > 0.0) || !(cfg.max_weight >= cfg.min_weight))) {
    throw ParameterError("weight range must satisfy 0 < min <= max");
  }
  ValidateParams(cfg.params);
  Rng rng(cfg.seed);
  const auto dim = static_cast<std::size_t>(cfg.dim);
  std::vector<double> coords;
  coords.reserve(2 * dim * static_cast<std::size_t>(cfg.n));
  std::vector<Link> links;
  std::vector<double> sender(dim), dir(dim);
  for (int i = 0; i < cfg.n; ++i) {
    for (auto& c : sender) c = rng.Uniform(0.0, cfg.side);
    const double len = rng.Uniform(cfg.min_length, cfg.max_length);
    if (dim == 1) {
      dir[0] = rng.Uniform() < 0.5 ? -1.0 : 1.0;
    } else {
      double norm = 0.0;
      while (norm == 0.0) {
        norm = 0.0;
        for (auto& c : dir) {
          c = rng.Normal();
          norm += c * c;
        }
      }
      norm = std::sqrt(norm);
      for (auto& c : dir) c /= norm;
    }
    const double w = cfg.weights == WeightKind::kUnit ? 1.0
                                                      : rng.Uniform(cfg.min_weight, cfg.max_weight);
    for (std::size_t a = 0; a < dim; ++a) coords.push_back(sender[a]);
    for (std::size_t a = 0; a < dim; ++a) coords.push_back(sender[a] + len * dir[a]);
    links.push_back({2 * i, 2 * i + 1, w, i});
  }
  return Instance(MetricSpace::Euclidean(cfg.dim, std::move(coords)), std::move(links),
                  cfg.params);
}

double FirstFitDefaultX(double delta) {
  if (!(delta >= 0.0 && delta < 1.0)) throw ParameterError("delta must lie in [0,1)");
  return std::floor(std::pow(16.0, 1.0 / (1.0 - delta))) + 1.0;
}

namespace {

struct TreeBuilder {
  double x;
  double delta;
  std::vector<double> len;  // x^rank
  std::vector<double> coords;
  std::vector<Link> links;
  FirstFitTree* out;

  double Place(int rank, double s, int parent) {
    const int id = static_cast<int>(links.size());
    const double l = len[static_cast<std::size_t>(rank)];
    const int p = static_cast<int>(coords.size());
    coords.push_back(s);
    coords.push_back(s + l);
    links.push_back({p, p + 1, 1.0, id});
    out->parent.push_back(parent);
    out->rank.push_back(rank);
    const double r = s + l;
    double right = r;
    for (int c = rank - 1; c >= 0; --c) {
      const double lc = len[static_cast<std::size_t>(c)];
      double sc = r + std::pow(l, 1.0 - delta) * std::pow(lc, delta);
      if (c != rank - 1) sc = std::max(sc, right + 2.0 * lc);
      right = std::max(right, Place(c, sc, id));
    }
    if (right - s > 4.0 * l) {
      throw Error("first-fit tree subtree span exceeds 4 x^t at rank " + std::to_string(rank));
    }
    return right;
  }
};

}  // namespace

FirstFitTree BuildFirstFitTree(int k, double delta, std::optional<double> x, SinrParams params) {
  if (k < 0) throw ParameterError("k must be nonnegative");
  if (k > 24) throw ParameterError("k too large (at most 24)");
  if (!(delta >= 0.0 && delta < 1.0)) throw ParameterError("delta must lie in [0,1)");
  ValidateParams(params);
  const double bound = std::pow(16.0, 1.0 / (1.0 - delta));
  const double xv = x.value_or(FirstFitDefaultX(delta));
  if (!(xv > bound)) {
    throw ParameterError("x below bound: need x > 16^(1/(1-delta)) = " + std::to_string(bound));
  }
  if (4.0 * std::pow(xv, k) > 0x1.0p53) {
    throw ParameterError("first-fit tree span 4 x^k exceeds 2^53; unit leaf lengths would not be "
                         "representable");
  }
  FirstFitTree out;
  out.x = xv;
  TreeBuilder b{xv, delta, {}, {}, {}, &out};
  b.len.push_back(1.0);
  for (int t = 1; t <= k; ++t) b.len.push_back(b.len.back() * xv);
  b.Place(k, 0.0, -1);
  out.instance = Instance(MetricSpace::Euclidean(1, std::move(b.coords)), std::move(b.links),
                          params);
  return out;
}

Instance GenFirstFitTree(int k, double delta, std::optional<double> x, SinrParams params) {
  return BuildFirstFitTree(k, delta, x, params).instance;
}

namespace {

double TreeSize(int f, int levels) {
  double total = 0.0, layer = 1.0;
  for (int t = 0; t <= levels; ++t) {
    total += layer;
    layer *= f;
  }
  return total;
}

}  // namespace

int RandomizedTreeFanout(int levels, double b, int copies) {
  if (levels < 1) throw ParameterError("levels must be >= 1");
  if (!(b >= 1.0)) throw ParameterError("fanout exponent b must be >= 1");
  if (copies < 1) throw ParameterError("copies M must be >= 1");
  for (int f = 1;; ++f) {
    const double n = copies * TreeSize(f, levels);
    if (n > 5e7) throw ParameterError("randomized tree would exceed 5e7 links");
    const double need = std::ceil(std::pow(std::log2(n), b));
    if (f >= need) return f;
  }
}

RandomizedTree BuildRandomizedTree(int levels, double b, int copies, double delta,
                                   SinrParams params) {
  if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("delta must lie in (0,1)");
  ValidateParams(params);
  const int f = RandomizedTreeFanout(levels, b, copies);
  const double n = copies * TreeSize(f, levels);
  const double lg = std::log2(n);
  const double alpha = params.alpha;
  const double c = std::pow(2.0, 1.0 / delta);
  const double d = std::ceil(2.0 * b / (alpha * delta));

  RandomizedTree out;
  out.fanout = f;
  out.copies = copies;
  out.level_length.assign(static_cast<std::size_t>(levels) + 1, 1.0);
  for (int t = levels - 1; t >= 0; --t) {
    out.level_length[static_cast<std::size_t>(t)] =
        c * out.level_length[static_cast<std::size_t>(t) + 1] * std::pow(lg, d * (t + 1));
  }

  if (out.level_length[0] > 0x1.0p40) {
    throw ParameterError("randomized tree length ratio exceeds 2^40; coordinates would lose the "
                         "leaf lengths to rounding");
  }

  // Breadth-first node layout; node v occupies points 2v, 2v+1.
  std::vector<double> coords{0.0, out.level_length[0]};
  std::vector<int> node_level{0};
  std::vector<int> node_parent{-1};
  for (std::size_t v = 0; v < node_level.size(); ++v) {
    const int t = node_level[v];
    if (t == levels) continue;
    const double lp = out.level_length[static_cast<std::size_t>(t)];
    const double lc = out.level_length[static_cast<std::size_t>(t) + 1];
    const double r = coords[2 * v + 1];
    const double w = std::pow(lp, 1.0 - delta) * std::pow(lc, delta);
    const double spacing = f > 1 ? 0.4 * w / (f - 1) : 0.0;
    if (f > 1 && spacing < 3.0 * lc) {
      throw Error("randomized tree window too small for " + std::to_string(f) +
                  " children at level " + std::to_string(t + 1));
    }
    for (int j = 0; j < f; ++j) {
      const double dist = f > 1 ? 0.95 * w - spacing * j : 0.75 * w;
      const double rc = r - dist;
      coords.push_back(rc - lc);
      coords.push_back(rc);
      node_level.push_back(t + 1);
      node_parent.push_back(static_cast<int>(v));
    }
  }

  auto gap_to_point = [&](std::size_t node, double p) {
    return std::min(std::fabs(coords[2 * node] - p), std::fabs(coords[2 * node + 1] - p));
  };
  for (std::size_t v = 0; v < node_level.size(); ++v) {
    const int t = node_level[v];
    if (t == levels) continue;
    const double lp = out.level_length[static_cast<std::size_t>(t)];
    const double lc = out.level_length[static_cast<std::size_t>(t) + 1];
    const double w = std::pow(lp, 1.0 - delta) * std::pow(lc, delta);
    std::vector<std::size_t> kids;
    for (std::size_t u = v + 1; u < node_level.size(); ++u) {
      if (node_parent[u] == static_cast<int>(v)) kids.push_back(u);
    }
    auto fail = [&](const char* what) {
      throw Error(std::string("randomized tree constraint violated (") + what + ") at node " +
                  std::to_string(v));
    };
    for (std::size_t a = 0; a < kids.size(); ++a) {
      const double to_r = gap_to_point(kids[a], coords[2 * v + 1]);
      if (!(to_r >= w / 2.0)) fail("child too close to parent receiver");
      if (!(to_r <= w)) fail("child too far from parent receiver");
      if (!(gap_to_point(kids[a], coords[2 * v]) >= lp / 2.0)) fail("child too close to sender");
      for (std::size_t e = a + 1; e < kids.size(); ++e) {
        const double g = std::min({std::fabs(coords[2 * kids[a]] - coords[2 * kids[e]]),
                                   std::fabs(coords[2 * kids[a]] - coords[2 * kids[e] + 1]),
                                   std::fabs(coords[2 * kids[a] + 1] - coords[2 * kids[e]]),
                                   std::fabs(coords[2 * kids[a] + 1] - coords[2 * kids[e] + 1])});
        if (!(g >= 2.0 * lc)) fail("children closer than 2 l_child");
      }
    }
  }

  std::vector<Link> links;
  for (std::size_t v = 0; v < node_level.size(); ++v) {
    for (int m = 0; m < copies; ++m) {
      const int id = static_cast<int>(links.size());
      links.push_back({static_cast<int>(2 * v), static_cast<int>(2 * v + 1), 1.0, id});
      out.level.push_back(node_level[v]);
      out.node.push_back(static_cast<int>(v));
      out.parent.push_back(node_parent[v] < 0 ? -1 : node_parent[v] * copies);
    }
  }
  out.instance = Instance(MetricSpace::Euclidean(1, std::move(coords)), std::move(links), params);
  return out;
}

Instance GenRandomizedTree(int levels, double b, int copies, double delta, SinrParams params) {
  return BuildRandomizedTree(levels, b, copies, delta, params).instance;
}

namespace {

struct PlaneBuilder {
  int q;
  const std::vector<double>* len;
  const std::vector<double>* height;
  std::vector<double> coords;
  std::vector<Link> links;
  std::vector<int> level;

  void Add(int t, double ox, double oy) {
    const int id = static_cast<int>(links.size());
    const int p = static_cast<int>(coords.size() / 2);
    const double l = (*len)[static_cast<std::size_t>(t)];
    coords.insert(coords.end(), {ox, oy, ox + l, oy});
    links.push_back({p, p + 1, std::pow(static_cast<double>(q), 2.0 * t), id});
    level.push_back(t);
    if (t == 0) return;
    const double lp = (*len)[static_cast<std::size_t>(t) - 1];
    const double hp = (*height)[static_cast<std::size_t>(t) - 1];
    for (int i = 0; i < q; ++i) {
      for (int j = 0; j < q; ++j) {
        Add(t - 1, ox + 2.0 * i * lp, oy + l + j * (lp + hp));
      }
    }
  }
};

}  // namespace

WeightedPlane BuildWeightedPlane(int t, int q, double alpha) {
  if (t < 0) throw ParameterError("t must be nonnegative");
  if (q < 2) throw ParameterError("q must be >= 2");
  if (std::pow(static_cast<double>(q) * q, t) > 2e6) {
    throw ParameterError("weighted plane instance too large");
  }
  SinrParams params{alpha, 1.0, 0.0};
  ValidateParams(params);
  WeightedPlane out;
  out.q = q;
  out.main_length.push_back(1.0);
  out.height.push_back(0.0);
  for (int s = 1; s <= t; ++s) {
    const double l = 3.0 * q * out.main_length.back();
    const double h = l + q * (out.main_length.back() + out.height.back());
    if (h > 2.0 * l) throw Error("weighted plane height exceeds 2 l_t");
    out.main_length.push_back(l);
    out.height.push_back(h);
  }
  PlaneBuilder b{q, &out.main_length, &out.height, {}, {}, {}};
  b.Add(t, 0.0, 0.0);
  out.level = std::move(b.level);
  out.instance = Instance(MetricSpace::Euclidean(2, std::move(b.coords)), std::move(b.links),
                          params);
  return out;
}

Instance GenWeightedPlane(int t, int q, double alpha) {
  return BuildWeightedPlane(t, q, alpha).instance;
}

GeneralMetric BuildGeneralMetric(int big_k, double gamma, double alpha) {
  if (big_k < 1) throw ParameterError("K must be >= 1");
  if (big_k > 6) throw ParameterError("K too large (at most 6)");
  if (!(gamma >= 6.0)) throw ParameterError("gamma must be >= 6");
  if (!(alpha > 1.0)) throw ParameterError("alpha must exceed 1");
  GeneralMetric out;
  std::vector<double> tk;
  std::vector<double> weights;
  for (int k = 1; k <= big_k; ++k) {
    const double size = std::pow(4.0, k - 1);
    tk.push_back(std::pow(gamma * size, 1.0 / alpha));
    for (int c = 0; c < static_cast<int>(size); ++c) {
      out.set_index.push_back(k);
      weights.push_back(1.0 / size);
    }
  }
  const std::size_t n = out.set_index.size();
  const std::size_t pts = 2 * n;
  std::vector<double> full(pts * pts, 0.0);
  for (std::size_t a = 0; a < pts; ++a) {
    for (std::size_t b = 0; b < pts; ++b) {
      if (a == b) continue;
      const std::size_t la = a / 2, lb = b / 2;
      full[a * pts + b] =
          la == lb ? 1.0
                   : tk[static_cast<std::size_t>(out.set_index[la] - 1)] +
                         tk[static_cast<std::size_t>(out.set_index[lb] - 1)];
    }
  }
  std::vector<Link> links;
  for (std::size_t i = 0; i < n; ++i) {
    links.push_back({static_cast<int>(2 * i), static_cast<int>(2 * i + 1), weights[i],
                     static_cast<LinkId>(i)});
  }
  out.instance = Instance(MetricSpace::Matrix(static_cast<int>(pts), std::move(full)),
                          std::move(links), SinrParams{alpha, 1.0, 0.0});
  return out;
}

Instance GenGeneralMetric(int big_k, double gamma, double alpha) {
  return BuildGeneralMetric(big_k, gamma, alpha).instance;
}

PowerAssignment GeneralMetricWitness(const GeneralMetric& gm) {
  PowerAssignment p(gm.set_index.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::ldexp(1.0, -gm.set_index[i]);
  return p;
}

double WeakMaxLength(const SinrParams& params, double p_max) {
  if (!(params.noise > 0.0)) throw ParameterError("weak links need positive noise");
  if (!(p_max > 0.0)) throw ParameterError("P_max must be positive");
  return std::pow(p_max / (params.beta * params.noise), 1.0 / params.alpha);
}

double EffectiveLength(double x, double l_max, double alpha) {
  if (!(x > 0.0 && x < l_max)) throw ParameterError("effective length needs 0 < x < l_max");
  return x / std::pow(1.0 - std::pow(x / l_max, alpha), 1.0 / alpha);
}

double InverseEffectiveLength(double y, double l_max, double alpha) {
  if (!(y > 0.0)) throw ParameterError("inverse effective length needs y > 0");
  return y / std::pow(1.0 + std::pow(y / l_max, alpha), 1.0 / alpha);
}

bool IsWeakLink(const Instance& inst, LinkId i, double p_max) {
  const auto& prm = inst.params();
  const double need = 2.0 * prm.beta * prm.noise * std::pow(LinkLength(inst, i), prm.alpha);
  return p_max <= need * (1.0 + 1e-9);
}

PowerAssignment WeakPowers(const Instance& inst, const WeakLinkConfig& cfg) {
  const double l_max = WeakMaxLength(inst.params(), cfg.p_max);
  PowerAssignment p(inst.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = cfg.p_max *
           std::pow(LinkLength(inst, static_cast<LinkId>(i)) / l_max, cfg.tau * inst.params().alpha);
  }
  return p;
}

Instance Weaken(const Instance& source, const WeakLinkConfig& cfg) {
  if (!source.space().is_euclidean()) throw ParameterError("weaken needs a euclidean instance");
  if (!(cfg.tau >= 0.0 && cfg.tau < 1.0)) throw ParameterError("tau must lie in [0,1)");
  const auto& prm = source.params();
  const double l_max = WeakMaxLength(prm, cfg.p_max);
  if (source.empty()) return source;
  const auto lengths = AllLengths(source);
  const double l_min = *std::min_element(lengths.begin(), lengths.end());
  const double alpha = prm.alpha;
  const double l_hat = l_max / std::pow(2.0, 1.0 / alpha);
  const double scale = std::pow(2.0, 1.0 / alpha) * l_hat / l_min;
  const int dim = source.space().dimension();
  const auto udim = static_cast<std::size_t>(dim);
  std::vector<double> coords;
  std::vector<Link> links;
  for (const Link& l : source.links()) {
    double len = InverseEffectiveLength(scale * lengths[static_cast<std::size_t>(l.id)], l_max,
                                        alpha);
    len = std::max(len, l_hat);
    const auto s = source.space().point(static_cast<std::size_t>(l.sender));
    const int p = static_cast<int>(coords.size() / udim);
    for (std::size_t a = 0; a < udim; ++a) coords.push_back(s[a] * scale);
    for (std::size_t a = 0; a < udim; ++a) coords.push_back(s[a] * scale + (a == 0 ? len : 0.0));
    links.push_back({p, p + 1, l.weight, l.id});
  }
  return Instance(MetricSpace::Euclidean(dim, std::move(coords)), std::move(links), prm);
}

}  // namespace sinrsched
