#include "sinrsched/schedulers.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "sinrsched/random.hpp"

namespace sinrsched {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string Num6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Normalized affectance a(j, i) under `power`.
double Aff(const Instance& inst, const PowerAssignment& power, LinkId j, LinkId i) {
  const double d = SenderReceiverDistance(inst, j, i);
  if (d == 0.0) return kInf;
  return power[static_cast<std::size_t>(j)] / power[static_cast<std::size_t>(i)] *
         std::pow(LinkLength(inst, i) / d, inst.params().alpha);
}

// Slot with running incoming affectance per member.
struct OpenSlot {
  LinkSet members;
  std::vector<double> incoming;

  bool TryAdd(const Instance& inst, const PowerAssignment& power, LinkId v, double budget) {
    double in_v = 0.0;
    std::vector<double> out(members.size());
    for (std::size_t m = 0; m < members.size(); ++m) {
      in_v += Aff(inst, power, members[m], v);
      if (!(in_v <= budget)) return false;
      out[m] = Aff(inst, power, v, members[m]);
      if (!(incoming[m] + out[m] <= budget)) return false;
    }
    for (std::size_t m = 0; m < members.size(); ++m) incoming[m] += out[m];
    members.push_back(v);
    incoming.push_back(in_v);
    return true;
  }
};

std::vector<LinkSet> GreedyFirstFit(const Instance& inst, const PowerAssignment& power,
                                    std::span<const LinkId> order) {
  const double budget = 1.0 / inst.params().beta;
  std::vector<OpenSlot> slots;
  for (LinkId v : order) {
    bool placed = false;
    for (auto& s : slots) {
      if (s.TryAdd(inst, power, v, budget)) {
        placed = true;
        break;
      }
    }
    if (!placed) slots.push_back(OpenSlot{{v}, {0.0}});
  }
  std::vector<LinkSet> out;
  out.reserve(slots.size());
  for (auto& s : slots) {
    std::sort(s.members.begin(), s.members.end());
    out.push_back(std::move(s.members));
  }
  return out;
}

LinkSet IncreasingLengthOrder(const Instance& inst, std::span<const LinkId> ids) {
  LinkSet order(ids.begin(), ids.end());
  std::stable_sort(order.begin(), order.end(), [&](LinkId a, LinkId b) {
    return LinkLength(inst, a) < LinkLength(inst, b);
  });
  return order;
}

LinkSet DecreasingLengthOrder(const Instance& inst, std::span<const LinkId> ids) {
  LinkSet order(ids.begin(), ids.end());
  std::stable_sort(order.begin(), order.end(), [&](LinkId a, LinkId b) {
    return LinkLength(inst, a) > LinkLength(inst, b);
  });
  return order;
}

Schedule Begin(const Instance& inst, std::string algorithm, double tau) {
  Schedule s;
  s.algorithm = std::move(algorithm);
  s.scheme = PowerScheme{tau, 1.0};
  s.power = ObliviousPowers(s.scheme, inst);
  s.p = inst.params().beta;
  return s;
}

void Finish(const Instance& inst, Schedule& s, bool require_cover = true) {
  s.reports.clear();
  for (const auto& slot : s.slots) {
    s.reports.push_back(CheckFeasible(inst, slot, s.power, s.p));
  }
  s.verified = VerifySchedule(inst, s, require_cover);
  if (!s.verified) {
    throw VerificationError(s.algorithm + " produced a schedule that fails re-verification");
  }
}

int ResolveDimension(const Instance& inst, const ConflictOptions& opt) {
  if (opt.dimension) return *opt.dimension;
  if (!inst.space().is_euclidean()) {
    throw ParameterError("explicit metrics need an explicit doubling dimension");
  }
  return inst.space().dimension();
}

}  // namespace

bool Schedule::HasFlag(const std::string& f) const {
  return std::find(flags.begin(), flags.end(), f) != flags.end();
}

bool VerifySchedule(const Instance& inst, const Schedule& s, bool require_cover) {
  if (s.power.size() != inst.size()) return false;
  std::vector<char> seen(inst.size(), 0);
  std::size_t covered = 0;
  for (const auto& slot : s.slots) {
    if (slot.empty()) return false;
    for (LinkId id : slot) {
      if (id < 0 || static_cast<std::size_t>(id) >= inst.size()) return false;
      if (seen[static_cast<std::size_t>(id)]) return false;
      seen[static_cast<std::size_t>(id)] = 1;
      ++covered;
    }
    if (!CheckFeasible(inst, slot, s.power, s.p).feasible) return false;
  }
  return !require_cover || covered == inst.size();
}

std::string EncodeParams(const nlohmann::ordered_json& params) {
  std::string out;
  for (auto it = params.begin(); it != params.end(); ++it) {
    if (!out.empty()) out += ';';
    out += it.key();
    out += '=';
    if (it->is_number()) {
      out += Num6(it->get<double>());
    } else if (it->is_string()) {
      out += it->get<std::string>();
    } else {
      out += it->dump();
    }
  }
  return out;
}

nlohmann::ordered_json ScheduleToJson(const Schedule& s) {
  nlohmann::ordered_json j;
  j["algorithm"] = s.algorithm;
  j["params"] = s.params;
  j["slots"] = s.slots;
  j["verified"] = s.verified;
  j["flags"] = s.flags;
  return j;
}

void CheckConflictOptions(const Instance& inst, const ConflictOptions& opt) {
  const int m = ResolveDimension(inst, opt);
  const double alpha = inst.params().alpha;
  if (!(alpha > m)) {
    throw ParameterError("conflict scheduler needs alpha > m (alpha=" + Num6(alpha) +
                         ", m=" + std::to_string(m) + ")");
  }
  if (!(opt.delta > 0.0 && opt.delta < 1.0)) throw ParameterError("delta must lie in (0,1)");
  if (!(opt.gamma > 0.0)) throw ParameterError("gamma must be positive");
  const TauInterval iv = ValidTauInterval(alpha, m, opt.delta);
  if (!iv.nonempty) {
    throw ParameterError("empty tau interval: delta=" + Num6(opt.delta) +
                         " must exceed delta0=" + Num6(DeltaZero(alpha, m)));
  }
  if (!iv.Contains(opt.tau)) {
    throw ParameterError("tau=" + Num6(opt.tau) + " outside the valid interval (" + Num6(iv.lo) +
                         ", " + Num6(iv.hi) + ")");
  }
}

Schedule ScheduleConflict(const Instance& inst, const ConflictOptions& opt) {
  CheckConflictOptions(inst, opt);
  Schedule s = Begin(inst, "conflict", opt.tau);
  s.params["gamma"] = opt.gamma;
  s.params["delta"] = opt.delta;
  s.params["tau"] = opt.tau;
  if (inst.params().beta <= 1.0) {
    s.warnings.push_back("beta <= 1: the gamma-independence lower bound does not apply");
  }
  const ConflictGraph g = BuildGraph(inst, {opt.gamma, opt.delta});
  bool resplit = false;
  for (const LinkSet& cls : ColorClasses(GreedyColor(g))) {
    if (IsFeasible(inst, cls, s.power, s.p)) {
      s.slots.push_back(cls);
      continue;
    }
    resplit = true;
    for (auto& part : GreedyFirstFit(inst, s.power, DecreasingLengthOrder(inst, cls))) {
      s.slots.push_back(std::move(part));
    }
  }
  if (resplit) s.flags.push_back(kFlagGammaTooSmall);
  Finish(inst, s);
  return s;
}

CapacityResult WCapacityConflict(const Instance& inst, const ConflictOptions& opt) {
  CheckConflictOptions(inst, opt);
  CapacityResult r;
  r.power = ObliviousPowers({opt.tau, 1.0}, inst);
  if (inst.empty()) {
    r.verified = true;
    return r;
  }
  const ConflictGraph g = BuildGraph(inst, {opt.gamma, opt.delta});
  std::vector<double> w;
  for (const Link& l : inst.links()) w.push_back(l.weight);
  MwisResult m = Mwis(g, w);
  r.k_emp = m.k_emp;
  r.set = m.set;
  const double beta = inst.params().beta;
  if (!IsFeasible(inst, r.set, r.power, beta)) {
    r.flags.push_back(kFlagGammaTooSmall);
    LinkSet order = m.set;
    std::stable_sort(order.begin(), order.end(), [&](LinkId a, LinkId b) {
      return w[static_cast<std::size_t>(a)] > w[static_cast<std::size_t>(b)];
    });
    OpenSlot slot;
    for (LinkId v : order) slot.TryAdd(inst, r.power, v, 1.0 / beta);
    r.set = slot.members;
    std::sort(r.set.begin(), r.set.end());
  }
  r.weight = TotalWeight(inst, r.set);
  r.verified = IsFeasible(inst, r.set, r.power, beta);
  if (!r.verified) throw VerificationError("capacity set fails re-verification");
  return r;
}

nlohmann::ordered_json CapacityToJson(const CapacityResult& r, const ConflictOptions& opt) {
  nlohmann::ordered_json j;
  j["algorithm"] = "wcapacity-conflict";
  j["params"] = {{"gamma", opt.gamma}, {"delta", opt.delta}, {"tau", opt.tau}};
  j["set"] = r.set;
  j["weight"] = r.weight;
  j["k_emp"] = r.k_emp;
  j["verified"] = r.verified;
  j["flags"] = r.flags;
  return j;
}

Schedule FirstFit(const Instance& inst, double tau_power, std::vector<LinkId> order) {
  Schedule s = Begin(inst, "first-fit", tau_power);
  s.params["tau"] = tau_power;
  if (order.empty()) {
    s.params["order"] = "increasing";
    order = IncreasingLengthOrder(inst, AllLinks(inst));
  } else {
    s.params["order"] = "custom";
    LinkSet sorted = order;
    std::sort(sorted.begin(), sorted.end());
    LinkSet all = AllLinks(inst);
    if (sorted != all) throw ParameterError("custom order must be a permutation of all links");
  }
  s.slots = GreedyFirstFit(inst, s.power, order);
  Finish(inst, s);
  return s;
}

ProbSequence ProbSequence::Constant(double p, int cap) {
  ProbSequence s;
  s.kind = Kind::kConstant;
  s.value = p;
  s.cap = cap;
  s.Validate();
  return s;
}

ProbSequence ProbSequence::Harmonic(double c, int cap) {
  ProbSequence s;
  s.kind = Kind::kHarmonic;
  s.value = c;
  s.cap = cap;
  s.Validate();
  return s;
}

ProbSequence ProbSequence::Custom(std::vector<double> probs, int cap) {
  ProbSequence s;
  s.kind = Kind::kCustom;
  s.custom = std::move(probs);
  s.cap = cap;
  s.Validate();
  return s;
}

void ProbSequence::Validate() const {
  if (cap < 1) throw ParameterError("round cap must be >= 1");
  switch (kind) {
    case Kind::kConstant:
      if (!(value > 0.0 && value <= 1.0)) throw ParameterError("probability must lie in (0,1]");
      break;
    case Kind::kHarmonic:
      if (!(value > 0.0)) throw ParameterError("harmonic constant must be positive");
      break;
    case Kind::kCustom:
      if (custom.empty()) throw ParameterError("custom probability list is empty");
      for (double p : custom) {
        if (!(p > 0.0 && p <= 1.0)) throw ParameterError("probability must lie in (0,1]");
      }
      break;
  }
}

double ProbSequence::At(int round, std::size_t n) const {
  switch (kind) {
    case Kind::kConstant:
      return value;
    case Kind::kHarmonic:
      return std::min(1.0, value / static_cast<double>(std::max<std::size_t>(n, 1)));
    case Kind::kCustom: {
      const auto idx = std::min(static_cast<std::size_t>(round - 1), custom.size() - 1);
      return custom[idx];
    }
  }
  return value;
}

std::string ProbSequence::Describe() const {
  switch (kind) {
    case Kind::kConstant:
      return "constant";
    case Kind::kHarmonic:
      return "harmonic";
    case Kind::kCustom:
      return "custom";
  }
  return "constant";
}

RandomizedResult RandomizedSchedule(const Instance& inst, double tau_power,
                                    const ProbSequence& probs, std::uint64_t seed) {
  probs.Validate();
  RandomizedResult out;
  Schedule& s = out.schedule;
  s = Begin(inst, "randomized", tau_power);
  s.params["tau"] = tau_power;
  s.params["probs"] = probs.Describe();
  if (probs.kind != ProbSequence::Kind::kCustom) s.params["p"] = probs.value;
  s.params["cap"] = probs.cap;
  const double budget = 1.0 / s.p;
  Rng rng(seed);
  std::vector<LinkId> remaining = AllLinks(inst);
  std::vector<LinkId> tx;
  std::vector<char> ok;
  int round = 0;
  while (!remaining.empty() && round < probs.cap) {
    ++round;
    const double p = probs.At(round, inst.size());
    tx.clear();
    for (LinkId v : remaining) {
      if (rng.Bernoulli(p)) tx.push_back(v);
    }
    if (tx.empty()) continue;
    ok.assign(tx.size(), 0);
    // Scan outward from a so nearby ids, often nearby links, are summed first.
    for (std::size_t a = 0; a < tx.size(); ++a) {
      double sum = 0.0;
      std::size_t up = a + 1, down = a;
      bool fine = true;
      while (fine && (up < tx.size() || down > 0)) {
        if (up < tx.size()) sum += Aff(inst, s.power, tx[up++], tx[a]);
        if (down > 0) sum += Aff(inst, s.power, tx[--down], tx[a]);
        fine = sum <= budget;
      }
      ok[a] = fine;
    }
    LinkSet slot;
    for (std::size_t a = 0; a < tx.size(); ++a) {
      if (ok[a]) slot.push_back(tx[a]);
    }
    if (slot.empty()) continue;
    out.rounds = round;
    std::vector<LinkId> next;
    next.reserve(remaining.size() - slot.size());
    std::set_difference(remaining.begin(), remaining.end(), slot.begin(), slot.end(),
                        std::back_inserter(next));
    remaining.swap(next);
    s.slots.push_back(std::move(slot));
  }
  const bool partial = !remaining.empty();
  if (partial) {
    s.flags.push_back(kFlagCapReached);
    out.rounds = probs.cap;
  }
  Finish(inst, s, !partial);
  return out;
}

Schedule LengthClassSchedule(const Instance& inst, double tau_power) {
  Schedule s = Begin(inst, "length-class", tau_power);
  s.params["tau"] = tau_power;
  if (!inst.empty()) {
    for (const LinkSet& cls : LengthClasses(inst)) {
      for (auto& slot : GreedyFirstFit(inst, s.power, IncreasingLengthOrder(inst, cls))) {
        s.slots.push_back(std::move(slot));
      }
    }
  }
  Finish(inst, s);
  return s;
}

int ExactMinSchedule(const Instance& inst, PowerMode mode, double tau) {
  const int n = static_cast<int>(inst.size());
  if (n > kExactScheduleLimit) {
    throw ParameterError("exact schedule limited to " + std::to_string(kExactScheduleLimit) +
                         " links");
  }
  if (n == 0) return 0;
  const std::size_t full = std::size_t{1} << n;
  const PowerAssignment power = ObliviousPowers({tau, 1.0}, inst);
  std::vector<char> feasible(full, 0);
  LinkSet members;
  for (std::size_t x = 1; x < full; ++x) {
    bool heredity = true;
    for (std::size_t y = x; y != 0 && heredity; y &= y - 1) {
      const std::size_t sub = x & ~(y & (~y + 1));
      if (sub != 0 && !feasible[sub]) heredity = false;
    }
    if (!heredity) continue;
    members.clear();
    for (int v = 0; v < n; ++v) {
      if ((x >> v) & 1U) members.push_back(v);
    }
    if (members.size() == 1) {
      feasible[x] = 1;
    } else if (mode == PowerMode::kFixed) {
      feasible[x] = IsFeasible(inst, members, power, inst.params().beta);
    } else {
      feasible[x] = ExistsPower(inst, members).feasible;
    }
  }
  std::vector<int> best(full, std::numeric_limits<int>::max());
  best[0] = 0;
  for (std::size_t x = 1; x < full; ++x) {
    const std::size_t low = x & (~x + 1);
    const std::size_t rest = x & ~low;
    // Enumerate subsets of `rest`, always including the lowest link.
    for (std::size_t sub = rest;; sub = (sub - 1) & rest) {
      const std::size_t part = sub | low;
      if (feasible[part] && best[x & ~part] != std::numeric_limits<int>::max()) {
        best[x] = std::min(best[x], best[x & ~part] + 1);
      }
      if (sub == 0) break;
    }
  }
  return best[full - 1];
}

namespace {

struct CapacitySearch {
  const Instance* inst;
  std::vector<double> a;  // a[j * n + i]
  std::vector<double> w;
  std::size_t n;
  double budget;
  LinkSet cur;
  std::vector<double> incoming;
  double cur_w = 0.0;
  double best_w = -1.0;
  LinkSet best;
  std::vector<double> suffix;  // weight of links >= v

  void Run(std::size_t from) {
    if (cur_w > best_w) {
      best_w = cur_w;
      best = cur;
    }
    for (std::size_t v = from; v < n; ++v) {
      if (cur_w + suffix[v] <= best_w) return;
      double in_v = 0.0;
      bool ok = true;
      for (std::size_t m = 0; m < cur.size() && ok; ++m) {
        const auto u = static_cast<std::size_t>(cur[m]);
        in_v += a[u * n + v];
        ok = in_v <= budget && incoming[m] + a[v * n + u] <= budget;
      }
      if (!ok) continue;
      for (std::size_t m = 0; m < cur.size(); ++m) {
        incoming[m] += a[v * n + static_cast<std::size_t>(cur[m])];
      }
      cur.push_back(static_cast<LinkId>(v));
      incoming.push_back(in_v);
      cur_w += w[v];
      Run(v + 1);
      cur_w -= w[v];
      incoming.pop_back();
      cur.pop_back();
      for (std::size_t m = 0; m < cur.size(); ++m) {
        incoming[m] -= a[v * n + static_cast<std::size_t>(cur[m])];
      }
    }
  }
};

}  // namespace

LinkSet ExactMaxWeightFeasible(const Instance& inst, const PowerAssignment& power) {
  const std::size_t n = inst.size();
  if (n > static_cast<std::size_t>(kExactCapacityLimit)) {
    throw ParameterError("exact capacity limited to " + std::to_string(kExactCapacityLimit) +
                         " links");
  }
  if (power.size() != n) throw ParameterError("power assignment does not match the instance");
  if (n == 0) return {};
  CapacitySearch s{&inst, std::vector<double>(n * n, 0.0), {}, n, 1.0 / inst.params().beta,
                   {}, {}, 0.0, -1.0, {}, std::vector<double>(n + 1, 0.0)};
  for (std::size_t j = 0; j < n; ++j) {
    s.w.push_back(inst.links()[j].weight);
    for (std::size_t i = 0; i < n; ++i) {
      if (i != j) s.a[j * n + i] = Aff(inst, power, static_cast<LinkId>(j), static_cast<LinkId>(i));
    }
  }
  for (std::size_t v = n; v-- > 0;) s.suffix[v] = s.suffix[v + 1] + s.w[v];
  s.Run(0);
  // Incremental sums are re-checked from scratch.
  if (!s.best.empty() && !IsFeasible(inst, s.best, power, inst.params().beta)) {
    throw VerificationError("exact capacity search returned an infeasible set");
  }
  return s.best;
}

}  // namespace sinrsched
