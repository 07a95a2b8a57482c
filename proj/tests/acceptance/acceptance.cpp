// Acceptance suite: one line per criterion, exit status 1 if any hard
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sinrsched/calibration.hpp"
#include "sinrsched/conflict_graph.hpp"
#include "sinrsched/experiment.hpp"
#include "sinrsched/generators.hpp"
#include "sinrsched/instance_io.hpp"
#include "sinrsched/random.hpp"
#include "sinrsched/schedulers.hpp"
#include "sinrsched/sinr.hpp"

namespace {

using namespace sinrsched;

constexpr double kTauIntervalTol = 1e-12;
constexpr double kSpectralTol = 1e-9;
constexpr double kInverseRelTol = 1e-12;
constexpr double kInverseMaxRatio = 10.0;  // y / l_max
constexpr double kWeakBand = 8.0;
constexpr double kApproxFactor = 10.0;
constexpr double kGeneralMetricBound = 49.0;
constexpr int kRandomizedSeeds = 20;
constexpr int kRandomizedRequired = 18;
constexpr double kRandomizedFactor = 3.0;

constexpr int kCalibrationTrials = 100;
constexpr std::uint64_t kCalibrationSeed = 1;

enum class Verdict { kPass, kFail, kSoftFail };

struct Outcome {
  Verdict verdict;
  std::string detail;
};

std::string Fmt(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

CalibrationCache& Cache() {
  static CalibrationCache cache;
  return cache;
}

double Gamma(int m) {
  return Cache().Get({3.0, m, 0.9, 0.8, 1.0}, kCalibrationTrials, kCalibrationSeed);
}

ConflictOptions Conflict(int m) {
  ConflictOptions o;
  o.gamma = Gamma(m);
  o.delta = 0.9;
  o.tau = 0.8;
  o.dimension = m;
  return o;
}

LinkSet Members(unsigned mask, int n) {
  LinkSet s;
  for (int i = 0; i < n; ++i)
    if (mask >> i & 1u) s.push_back(i);
  return s;
}

Outcome UpperBound() {
  const ConflictOptions opt = Conflict(2);
  Rng rng(1001);
  int slots = 0, infeasible = 0, flagged = 0;
  const double sides[] = {2.0, 5.0, 10.0};
  const double max_lengths[] = {4.0, 16.0, 64.0};
  for (int t = 0; t < 200; ++t) {
    RandomConfig cfg;
    cfg.n = 2 + static_cast<int>(rng.Below(63));
    cfg.side = sides[t % 3] * std::sqrt(static_cast<double>(cfg.n));
    cfg.min_length = 1.0;
    cfg.max_length = max_lengths[(t / 3) % 3];
    cfg.seed = rng.Next();
    const Instance inst = GenRandom(cfg);
    const Schedule s = ScheduleConflict(inst, opt);
    if (s.HasFlag(kFlagGammaTooSmall)) ++flagged;
    const PowerAssignment power = ObliviousPowers({opt.tau, 1.0}, inst);
    for (const LinkSet& slot : s.slots) {
      ++slots;
      if (!CheckFeasible(inst, slot, power, inst.params().beta).feasible) ++infeasible;
    }
  }
  return {infeasible == 0 && flagged == 0 ? Verdict::kPass : Verdict::kFail,
          Fmt("gamma=%g, 200 instances, %d slots, %d infeasible, %d gamma-too-small", opt.gamma,
              slots, infeasible, flagged)};
}

Outcome TauArithmetic() {
  const TauInterval iv = ValidTauInterval(3.0, 2, 0.9);
  const bool values =
      std::abs(iv.lo - 0.7) <= kTauIntervalTol && std::abs(iv.hi - 14.0 / 15.0) <= kTauIntervalTol;
  int mismatches = 0;
  for (int i = 1; i < 1000; ++i) {
    const double delta = i / 1000.0;
    if (ValidTauInterval(3.0, 2, delta).nonempty != (delta > 2.0 / 3.0)) ++mismatches;
  }
  if (ValidTauInterval(3.0, 2, 2.0 / 3.0).nonempty) ++mismatches;
  return {values && mismatches == 0 ? Verdict::kPass : Verdict::kFail,
          Fmt("interval (%.15g, %.15g), emptiness mismatches %d", iv.lo, iv.hi, mismatches)};
}

Outcome FirstFitSeparation() {
  const ConflictOptions opt = Conflict(1);
  std::vector<int> ff, cf;
  bool ok = true;
  for (int k = 6; k <= 12; ++k) {
    const Instance inst = GenFirstFitTree(k, 0.0);
    ff.push_back(FirstFit(inst, 0.0).slot_count());
    cf.push_back(ScheduleConflict(inst, opt).slot_count());
    if (2 * ff.back() < k) ok = false;
    if (ff.size() > 1 && ff.back() <= ff[ff.size() - 2]) ok = false;
    if (cf.back() != cf.front()) ok = false;
  }
  std::string ffs, cfs;
  for (std::size_t i = 0; i < ff.size(); ++i) {
    ffs += (i ? "," : "") + std::to_string(ff[i]);
    cfs += (i ? "," : "") + std::to_string(cf[i]);
  }
  return {ok ? Verdict::kPass : Verdict::kFail,
          "k=6..12 first-fit [" + ffs + "] conflict [" + cfs + "]"};
}

Outcome WeightedPlaneBound() {
  const double alpha = 3.0, tau = 0.0;
  const double q_bound = std::pow(2.0 * std::pow(3.0, tau * alpha), 1.0 / (2.0 - tau * alpha));
  const int q = std::max(2, static_cast<int>(std::ceil(q_bound)));
  bool weight_ok = true;
  int dependent = 0;
  std::string weights;
  for (int t = 0; t <= 2; ++t) {
    const Instance inst = GenWeightedPlane(t, q, alpha);
    const LinkSet best = ExactMaxWeightFeasible(inst, ObliviousPowers({tau, 1.0}, inst));
    const double w = TotalWeight(inst, best);
    const double bound = 2.0 * std::pow(3.0, alpha) * std::pow(q, 2 * t);
    if (w > bound) weight_ok = false;
    weights += Fmt("%st=%d %g<=%g", t ? ", " : "", t, w, bound);
    if (t == 2) {
      const auto n = static_cast<LinkId>(inst.size());
      for (LinkId i = 0; i < n; ++i)
        for (LinkId j = i + 1; j < n; ++j)
          if (!Independent(inst, {1.0, 1.0}, i, j)) ++dependent;
    }
  }
  return {weight_ok && dependent == 0 ? Verdict::kPass : Verdict::kFail,
          Fmt("q=%d, max feasible weight %s; (1,1)-dependent pairs at t=2: %d", q, weights.c_str(),
              dependent)};
}

Outcome GeneralMetricBound() {
  const GeneralMetric gm = BuildGeneralMetric(4, 6.0, 3.0);
  const FeasibilityReport r =
      CheckFeasible(gm.instance, AllLinks(gm.instance), GeneralMetricWitness(gm), 1.0);
  double worst_sum = 0.0;
  for (const auto& la : r.per_link) worst_sum = std::max(worst_sum, la.affectance);
  const bool witness_ok = r.feasible && worst_sum < 1.0;

  const Instance sub = GenGeneralMetric(3, 6.0, 3.0);
  const int n = static_cast<int>(sub.size());
  const PowerAssignment uniform(static_cast<std::size_t>(n), 1.0);
  double heaviest = TotalWeight(sub, ExactMaxWeightFeasible(sub, uniform));
  Rng rng(5005);
  int sampled = 0;
  for (int trial = 0; trial < 20000; ++trial) {
    std::vector<LinkId> perm = AllLinks(sub);
    for (int i = n - 1; i > 0; --i)
      std::swap(perm[static_cast<std::size_t>(i)],
                perm[static_cast<std::size_t>(rng.Below(static_cast<std::uint64_t>(i) + 1))]);
    const bool greedy = trial % 2 == 1;
    const std::size_t size = greedy ? perm.size() : 1 + rng.Below(12);
    LinkSet s;
    for (std::size_t i = 0; i < size; ++i) {
      s.push_back(perm[i]);
      if (greedy && !IsFeasible(sub, s, uniform, 1.0)) s.pop_back();
    }
    if (!IsFeasible(sub, s, uniform, 1.0)) continue;
    ++sampled;
    heaviest = std::max(heaviest, TotalWeight(sub, s));
  }
  return {witness_ok && heaviest <= kGeneralMetricBound ? Verdict::kPass : Verdict::kFail,
          Fmt("K=4 witness max affectance sum %.6g; K=3 uniform-feasible weight max %.6g <= %g "
              "(exhaustive plus %d sampled sets)",
              worst_sum, heaviest, kGeneralMetricBound, sampled)};
}

Outcome Strengthening() {
  int sets = 0, too_many = 0, bad = 0, max_parts = 0;
  Rng rng(6006);
  while (sets < 100) {
    RandomConfig cfg;
    cfg.n = 40;
    cfg.side = 60;
    cfg.min_length = 1;
    cfg.max_length = 12;
    cfg.seed = rng.Next();
    const Instance inst = GenRandom(cfg);
    const double tau = rng.Uniform();
    const Schedule ff = FirstFit(inst, tau);
    for (const LinkSet& slot : ff.slots) {
      if (slot.size() < 2 || sets >= 100) continue;
      ++sets;
      const auto parts = StrengthenPartition(inst, slot, ff.power, 1.0, 2.0);
      max_parts = std::max(max_parts, static_cast<int>(parts.size()));
      if (parts.size() > 4) ++too_many;
      for (const LinkSet& part : parts)
        if (!IsFeasible(inst, part, ff.power, 2.0)) ++bad;
    }
  }
  return {too_many == 0 && bad == 0 ? Verdict::kPass : Verdict::kFail,
          Fmt("100 sets, max parts %d (bound 4), %d over bound, %d parts not 2-feasible", max_parts,
              too_many, bad)};
}

Outcome OracleAgreement() {
  Rng rng(7007);
  int subsets = 0, disagreements = 0, feasible = 0;
  for (int t = 0; t < 50; ++t) {
    RandomConfig cfg;
    cfg.n = 2 + static_cast<int>(rng.Below(7));
    cfg.side = rng.Uniform(4, 30);
    cfg.min_length = 1;
    cfg.max_length = 8;
    cfg.seed = rng.Next();
    const Instance inst = GenRandom(cfg);
    const int n = static_cast<int>(inst.size());
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
      const LinkSet s = Members(mask, n);
      const double rho = GainSpectralRadius(inst, s) * inst.params().beta;
      const bool fp = ExistsPower(inst, s).feasible;
      ++subsets;
      feasible += fp;
      if (std::abs(rho - 1.0) <= kSpectralTol) continue;
      if (fp != (rho < 1.0)) ++disagreements;
    }
  }
  return {disagreements == 0 ? Verdict::kPass : Verdict::kFail,
          Fmt("%d subsets (%d feasible), %d disagreements", subsets, feasible, disagreements)};
}

Outcome ApproximationDiagnostic() {
  const ConflictOptions opt = Conflict(2);
  Rng rng(8008);
  int violations = 0;
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    RandomConfig cfg;
    cfg.n = 2 + static_cast<int>(rng.Below(11));
    cfg.side = rng.Uniform(5, 40);
    cfg.min_length = 1;
    cfg.max_length = rng.Uniform(2, 64);
    cfg.seed = rng.Next();
    const Instance inst = GenRandom(cfg);
    const int slots = ScheduleConflict(inst, opt).slot_count();
    const int opt_slots = ExactMinSchedule(inst, PowerMode::kOptimal);
    const int fs = FStar(opt.delta, LengthRatio(inst));
    const double ratio = static_cast<double>(slots) / (fs * opt_slots);
    worst = std::max(worst, ratio);
    if (slots > kApproxFactor * fs * opt_slots) ++violations;
  }
  return {violations == 0 ? Verdict::kPass : Verdict::kFail,
          Fmt("100 instances, worst slots/(f*(delta,Delta) OPT) = %.3g (limit %g), %d violations",
              worst, kApproxFactor, violations)};
}

Outcome RandomizedSeparation() {
  const RandomizedTree tree = BuildRandomizedTree(1, 5.0 / 3.0, 64, 0.3);
  const Instance& inst = tree.instance;
  const int conflict = ScheduleConflict(inst, Conflict(1)).slot_count();
  const int need = static_cast<int>(std::ceil(kRandomizedFactor * conflict));
  int good_const = 0, good_harm = 0, min_const = 1 << 30, min_harm = 1 << 30;
  for (int seed = 1; seed <= kRandomizedSeeds; ++seed) {
    const int rc =
        RandomizedSchedule(inst, 0.0, ProbSequence::Constant(0.5, 10000), seed).rounds;
    const int rh = RandomizedSchedule(inst, 0.0, ProbSequence::Harmonic(1.0, 10000), seed).rounds;
    good_const += rc >= need;
    good_harm += rh >= need;
    min_const = std::min(min_const, rc);
    min_harm = std::min(min_harm, rh);
  }
  const bool ok = good_const >= kRandomizedRequired && good_harm >= kRandomizedRequired;
  return {ok ? Verdict::kPass : Verdict::kSoftFail,
          Fmt("n=%zu, conflict slots %d; rounds >= %d in %d/%d (p=1/2, min %d) and %d/%d "
              "(harmonic, min %d) seeds",
              inst.size(), conflict, need, good_const, kRandomizedSeeds, min_const, good_harm,
              kRandomizedSeeds, min_harm)};
}

Outcome WeakLinks() {
  const WeakLinkConfig cfg{1.0, 0.5};
  const SinrParams params{3.0, 1.0, 0.01};
  const double l_max = WeakMaxLength(params, cfg.p_max);
  Rng rng(10010);
  double band = 1.0, worst_inverse = 0.0;
  int not_weak = 0;
  for (int t = 0; t < 1000; ++t) {
    const double y = l_max * std::exp(rng.Uniform(-8, std::log(kInverseMaxRatio)));
    const double back = EffectiveLength(InverseEffectiveLength(y, l_max, params.alpha), l_max,
                                        params.alpha);
    worst_inverse = std::max(worst_inverse, std::abs(back - y) / y);
  }
  for (int t = 0; t < 50; ++t) {
    RandomConfig rc;
    rc.n = 10 + static_cast<int>(rng.Below(31));
    rc.side = rng.Uniform(20, 200);
    rc.min_length = 1;
    rc.max_length = rng.Uniform(2, 50);
    rc.seed = rng.Next();
    rc.params = params;
    const Instance w = Weaken(GenRandom(rc), cfg);
    const PowerAssignment uniform(w.size(), cfg.p_max);
    const PowerAssignment ptau = WeakPowers(w, cfg);
    const auto n = static_cast<LinkId>(w.size());
    for (LinkId i = 0; i < n; ++i) {
      if (!IsWeakLink(w, i, cfg.p_max)) ++not_weak;
      for (LinkId j = 0; j < n; ++j) {
        if (i == j) continue;
        const double r = Affectance(w, uniform, i, j, AffectanceMode::kExact) /
                         Affectance(w, ptau, i, j, AffectanceMode::kExact);
        band = std::max({band, r, 1.0 / r});
      }
    }
  }
  const bool ok = band <= kWeakBand && worst_inverse <= kInverseRelTol && not_weak == 0;
  return {ok ? Verdict::kPass : Verdict::kFail,
          Fmt("c_b=%.4g (limit %g), inverse rel err %.3g, non-weak links %d", band, kWeakBand,
              worst_inverse, not_weak)};
}

Outcome Determinism() {
  using nlohmann::json;
  const std::vector<std::pair<std::string, json>> specs = {
      {"random", {{"n", 200}, {"seed", 42}, {"weights", "uniform"}, {"max_weight", 5}}},
      {"random", {{"n", 50}, {"dim", 3}, {"seed", 7}}},
      {"firstfit-tree", {{"k", 8}, {"delta", 0.25}}},
      {"randomized-tree", {{"levels", 1}, {"M", 8}}},
      {"weighted-plane", {{"t", 2}, {"q", 3}}},
      {"general-metric", {{"K", 4}}},
  };
  int mismatches = 0;
  for (const auto& [family, params] : specs) {
    if (DumpInstance(GenerateFromSpec(family, params)) !=
        DumpInstance(GenerateFromSpec(family, params)))
      ++mismatches;
  }
  json cfg = json::parse(R"({
    "instances": [
      {"id": "ff", "generator": "firstfit-tree", "params": {"k": 7}},
      {"id": "rt", "generator": "randomized-tree", "params": {"levels": 1, "M": 4}},
      {"id": "rnd", "generator": "random", "params": {"n": 40, "side": 30, "seed": 9}},
      {"id": "gm", "generator": "general-metric", "params": {"K": 2}}
    ],
    "algorithms": [
      {"name": "conflict", "params": {"gamma": [2, 4], "m": 2}},
      {"name": "wcapacity", "params": {"gamma": 3, "m": 2}},
      {"name": "first-fit", "params": {"tau": [0, 0.5]}},
      {"name": "randomized", "params": {"p": [0.25, 0.5], "cap": 3000}},
      {"name": "length-class"}
    ],
    "seeds": [1, 2, 3, 4]
  })");
  std::string serial;
  int experiment_mismatch = 0;
  for (int parallelism : {1, 8, 1, 8}) {
    cfg["parallelism"] = parallelism;
    const std::string csv = ResultsCsv(RunExperiment(ExperimentConfig::FromJson(cfg)));
    if (serial.empty()) serial = csv;
    if (csv != serial) ++experiment_mismatch;
  }
  const bool ok = mismatches == 0 && experiment_mismatch == 0;
  return {ok ? Verdict::kPass : Verdict::kFail,
          Fmt("%zu generator specs, %d differ; experiment CSV (%zu bytes) differs in %d of 4 runs",
              specs.size(), mismatches, serial.size(), experiment_mismatch)};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance suite"};
  std::vector<int> only;
  app.add_option("-c,--criterion", only, "Run only these criteria (1-11)");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria = {
      {1, "upper-bound correctness", UpperBound},
      {2, "tau-interval arithmetic", TauArithmetic},
      {3, "first-fit separation", FirstFitSeparation},
      {4, "weighted planar instance", WeightedPlaneBound},
      {5, "general-metric instance", GeneralMetricBound},
      {6, "signal strengthening", Strengthening},
      {7, "oracle agreement", OracleAgreement},
      {8, "approximation diagnostic", ApproximationDiagnostic},
      {9, "randomized baseline separation", RandomizedSeparation},
      {10, "weak-link reduction", WeakLinks},
      {11, "determinism", Determinism},
  };

  int hard_failures = 0;
  for (const Criterion& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {Verdict::kFail, std::string("error: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const char* tag = out.verdict == Verdict::kPass ? "PASS"
                      : out.verdict == Verdict::kFail ? "FAIL"
                                                      : "SOFT-FAIL";
    if (out.verdict == Verdict::kFail) ++hard_failures;
    std::printf("[%s] %2d %s: %s (%.1fs)\n", tag, c.id, c.name, out.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return hard_failures == 0 ? 0 : 1;
}
