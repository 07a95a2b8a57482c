#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "sinrsched/calibration.hpp"
#include "sinrsched/conflict_graph.hpp"
#include "sinrsched/experiment.hpp"
#include "sinrsched/instance_io.hpp"
#include "sinrsched/schedulers.hpp"
#include "sinrsched/sinr.hpp"

namespace {

using namespace sinrsched;
using nlohmann::json;

constexpr int kExitParameter = 2;
constexpr int kExitVerification = 3;

struct Globals {
  double alpha = 0, beta = 0, noise = 0;
  std::uint64_t seed = 1;
  std::string out;
  CLI::Option* alpha_opt = nullptr;
  CLI::Option* beta_opt = nullptr;
  CLI::Option* noise_opt = nullptr;

  SinrParams Apply(SinrParams p) const {
    if (alpha_opt->count()) p.alpha = alpha;
    if (beta_opt->count()) p.beta = beta;
    if (noise_opt->count()) p.noise = noise;
    return p;
  }

  Instance Load(const std::string& path) const {
    Instance inst = LoadInstance(path);
    return inst.WithParams(Apply(inst.params()));
  }

  void Emit(const std::string& text) const {
    if (out.empty() || out == "-") {
      std::cout << text;
      return;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f) throw ParameterError("cannot write '" + out + "'");
    f << text;
  }
};

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string FlagList(const std::vector<std::string>& flags) {
  std::string s = "[";
  for (std::size_t k = 0; k < flags.size(); ++k) {
    if (k) s += ',';
    s += flags[k];
  }
  return s + "]";
}

LinkSet ParseSet(const std::string& text, const Instance& inst) {
  if (text.empty()) return AllLinks(inst);
  LinkSet s;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      s.push_back(std::stoi(tok));
    } catch (const std::exception&) {
      throw ParameterError("bad link id '" + tok + "'");
    }
  }
  return s;
}

struct ConflictFlags {
  std::string gamma = "calibrated";
  double delta = 0.9;
  double tau = 0.8;
  int m = 0;
  std::string cache;
  bool recalibrate = false;
  int trials = 100;
  CLI::Option* tau_opt = nullptr;

  double BaselineTau() const { return tau_opt->count() ? tau : 0.0; }

  void Add(CLI::App* cmd) {
    cmd->add_option("--gamma", gamma, "Conflict constant or 'calibrated'")->capture_default_str();
    cmd->add_option("--delta", delta, "Conflict exponent delta")->capture_default_str();
    tau_opt = cmd->add_option("--tau", tau, "Oblivious power exponent (conflict default 0.8, "
                              "baselines default 0)");
    cmd->add_option("--m", m, "Doubling dimension (default: euclidean dimension)");
    cmd->add_option("--calibration-cache", cache, "Calibration cache file");
    cmd->add_flag("--recalibrate", recalibrate, "Ignore cached calibration values");
    cmd->add_option("--trials", trials, "Calibration trials")->capture_default_str();
  }

  ConflictOptions Resolve(const Instance& inst, std::uint64_t seed) const {
    ConflictOptions opt;
    opt.delta = delta;
    opt.tau = tau;
    if (m > 0) opt.dimension = m;
    if (gamma == "calibrated") {
      CalibrationKey key;
      key.alpha = inst.params().alpha;
      key.beta = inst.params().beta;
      key.m = m > 0 ? m : inst.space().dimension();
      key.delta = delta;
      key.tau = tau;
      CheckConflictOptions(inst, opt);
      CalibrationCache c(cache);
      opt.gamma = c.Get(key, trials, seed, recalibrate);
    } else {
      try {
        opt.gamma = std::stod(gamma);
      } catch (const std::exception&) {
        throw ParameterError("gamma must be a number or 'calibrated'");
      }
    }
    return opt;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SINR link scheduling toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  g.alpha_opt = app.add_option("--alpha", g.alpha, "Path-loss exponent");
  g.beta_opt = app.add_option("--beta", g.beta, "SINR threshold");
  g.noise_opt = app.add_option("--noise", g.noise, "Ambient noise");
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("--out", g.out, "Output file (default: stdout)");

  // generate
  auto* gen = app.add_subcommand("generate", "Generate an instance file");
  std::string family;
  gen->add_option("family", family, "random | firstfit-tree | randomized-tree | "
                                    "weighted-plane | general-metric")
      ->required();
  json gp = json::object();
  struct NumFlag {
    const char* name;
    const char* key;
    double value = 0;
    CLI::Option* opt = nullptr;
  };
  std::vector<NumFlag> numflags = {
      {"--n", "n"},       {"--dim", "dim"},     {"--side", "side"},
      {"--min-length", "min_length"},           {"--max-length", "max_length"},
      {"--min-weight", "min_weight"},           {"--max-weight", "max_weight"},
      {"--k", "k"},       {"--delta", "delta"}, {"--x", "x"},
      {"--levels", "levels"},                   {"--b", "b"},
      {"--M", "M"},       {"--t", "t"},         {"--q", "q"},
      {"--K", "K"},       {"--gamma", "gamma"},
  };
  for (auto& f : numflags) f.opt = gen->add_option(f.name, f.value);
  std::string weights;
  auto* weights_opt = gen->add_option("--weights", weights, "unit | uniform");

  // schedule
  auto* sch = app.add_subcommand("schedule", "Schedule the links of an instance");
  std::string sch_file, algorithm = "conflict", probs = "constant";
  double sch_p = 0.5;
  int cap = 10000;
  ConflictFlags sch_cf;
  sch->add_option("file", sch_file, "Instance file")->required();
  sch->add_option("--algorithm", algorithm, "conflict | first-fit | randomized | length-class")
      ->capture_default_str();
  sch_cf.Add(sch);
  sch->add_option("--probs", probs, "constant | harmonic")->capture_default_str();
  sch->add_option("--p", sch_p, "Probability (constant) or c (harmonic)")->capture_default_str();
  sch->add_option("--cap", cap, "Round cap for the randomized scheduler")->capture_default_str();

  // capacity
  auto* capc = app.add_subcommand("capacity", "Weighted capacity via the conflict graph");
  std::string cap_file;
  ConflictFlags cap_cf;
  capc->add_option("file", cap_file, "Instance file")->required();
  cap_cf.Add(capc);

  // feasible
  auto* fea = app.add_subcommand("feasible", "Check feasibility of a link set");
  std::string fea_file, fea_set, fea_mode = "normalized";
  double fea_tau = 0.0, fea_p = 0.0;
  fea->add_option("file", fea_file, "Instance file")->required();
  fea->add_option("--set", fea_set, "Comma-separated link ids (default: all)");
  fea->add_option("--tau", fea_tau, "Oblivious power exponent")->capture_default_str();
  auto* fea_p_opt = fea->add_option("--p", fea_p, "Threshold parameter p (default: beta)");
  fea->add_option("--mode", fea_mode, "normalized | exact")->capture_default_str();

  // oracle
  auto* ora = app.add_subcommand("oracle", "Exact oracles for small instances");
  std::string ora_file, ora_kind = "min-schedule", ora_power = "optimal", ora_set;
  double ora_tau = 0.0, ora_gamma = 1.0, ora_delta = 0.0;
  ora->add_option("file", ora_file, "Instance file")->required();
  ora->add_option("--kind", ora_kind,
                  "min-schedule | chromatic | mwis | exists-power | edges")
      ->capture_default_str();
  ora->add_option("--power", ora_power, "fixed | optimal")->capture_default_str();
  ora->add_option("--tau", ora_tau, "Power exponent for --power fixed")->capture_default_str();
  ora->add_option("--gamma", ora_gamma, "Conflict constant")->capture_default_str();
  ora->add_option("--delta", ora_delta, "Conflict exponent")->capture_default_str();
  ora->add_option("--set", ora_set, "Link set for exists-power (default: all)");

  // calibrate
  auto* cal = app.add_subcommand("calibrate", "Calibrate gamma for (alpha, m, delta, tau, beta)");
  int cal_m = 2, cal_trials = 100;
  double cal_delta = 0.9, cal_tau = 0.8;
  std::string cal_cache;
  bool cal_re = false;
  cal->add_option("--m", cal_m, "Dimension")->capture_default_str();
  cal->add_option("--delta", cal_delta, "Conflict exponent")->capture_default_str();
  cal->add_option("--tau", cal_tau, "Power exponent")->capture_default_str();
  cal->add_option("--trials", cal_trials, "Random instances per grid point")->capture_default_str();
  cal->add_option("--cache", cal_cache, "Calibration cache file");
  cal->add_flag("--recalibrate", cal_re, "Ignore cached values");

  // experiment
  auto* exp = app.add_subcommand("experiment", "Run an experiment config");
  std::string exp_file;
  int exp_par = 0;
  bool exp_timing = false;
  exp->add_option("config", exp_file, "Experiment JSON config")->required();
  exp->add_option("--parallelism", exp_par, "Override parallelism degree");
  exp->add_flag("--timing", exp_timing, "Record wall time per task");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitParameter;
  }

  try {
    if (*gen) {
      for (const auto& f : numflags) {
        if (f.opt->count()) gp[f.key] = f.value;
      }
      if (weights_opt->count()) gp["weights"] = weights;
      if (family == "random") gp["seed"] = g.seed;
      SinrParams base = g.Apply(SinrParams{});
      if (family == "weighted-plane" || family == "general-metric") {
        if (g.alpha_opt->count()) gp["alpha"] = g.alpha;
      }
      const Instance inst = GenerateFromSpec(family, gp, base);
      g.Emit(DumpInstance(inst));
      std::cerr << "links=" << inst.size() << '\n';
    } else if (*sch) {
      const Instance inst = g.Load(sch_file);
      Schedule s;
      if (algorithm == "conflict") {
        s = ScheduleConflict(inst, sch_cf.Resolve(inst, g.seed));
      } else if (algorithm == "first-fit") {
        s = FirstFit(inst, sch_cf.BaselineTau());
      } else if (algorithm == "length-class") {
        s = LengthClassSchedule(inst, sch_cf.BaselineTau());
      } else if (algorithm == "randomized") {
        ProbSequence seq = probs == "harmonic" ? ProbSequence::Harmonic(sch_p, cap)
                           : probs == "constant"
                               ? ProbSequence::Constant(sch_p, cap)
                               : throw ParameterError("probs must be constant or harmonic");
        const RandomizedResult r = RandomizedSchedule(inst, sch_cf.BaselineTau(), seq, g.seed);
        s = r.schedule;
        std::cerr << "rounds=" << r.rounds << '\n';
      } else {
        throw ParameterError("unknown algorithm '" + algorithm + "'");
      }
      for (const auto& w : s.warnings) std::cerr << "warning: " << w << '\n';
      if (!g.out.empty()) g.Emit(ScheduleToJson(s).dump(1) + "\n");
      std::cout << "slots=" << s.slot_count() << " verified=" << (s.verified ? "true" : "false")
                << " flags=" << FlagList(s.flags) << '\n';
      if (!s.verified) return kExitVerification;
    } else if (*capc) {
      const Instance inst = g.Load(cap_file);
      const ConflictOptions opt = cap_cf.Resolve(inst, g.seed);
      const CapacityResult r = WCapacityConflict(inst, opt);
      if (!g.out.empty()) g.Emit(CapacityToJson(r, opt).dump(1) + "\n");
      std::cout << "weight=" << Num(r.weight) << " size=" << r.set.size()
                << " k_emp=" << r.k_emp << " verified=" << (r.verified ? "true" : "false")
                << " flags=" << FlagList(r.flags) << '\n';
      if (!r.verified) return kExitVerification;
    } else if (*fea) {
      const Instance inst = g.Load(fea_file);
      const LinkSet set = ParseSet(fea_set, inst);
      AffectanceMode mode;
      if (fea_mode == "normalized") {
        mode = AffectanceMode::kNormalized;
      } else if (fea_mode == "exact") {
        mode = AffectanceMode::kExact;
      } else {
        throw ParameterError("mode must be normalized or exact");
      }
      const double p = fea_p_opt->count() ? fea_p : inst.params().beta;
      const FeasibilityReport r =
          CheckFeasible(inst, set, ObliviousPowers({fea_tau, 1.0}, inst), p, mode);
      g.Emit(ReportToJson(r).dump(1) + "\n");
      if (!g.out.empty()) {
        std::cout << "feasible=" << (r.feasible ? "true" : "false") << " margin=" << Num(r.margin)
                  << '\n';
      }
    } else if (*ora) {
      const Instance inst = g.Load(ora_file);
      if (ora_kind == "min-schedule") {
        const PowerMode pm = ora_power == "fixed" ? PowerMode::kFixed : PowerMode::kOptimal;
        if (ora_power != "fixed" && ora_power != "optimal") {
          throw ParameterError("power must be fixed or optimal");
        }
        const int k = ExactMinSchedule(inst, pm, ora_tau);
        std::cout << "min_slots=" << k << '\n';
      } else if (ora_kind == "chromatic") {
        const int chi = ExactChromatic(BuildGraph(inst, {ora_gamma, ora_delta}));
        std::cout << "chromatic=" << chi << '\n';
      } else if (ora_kind == "mwis") {
        std::vector<double> w;
        for (const Link& l : inst.links()) w.push_back(l.weight);
        const LinkSet s = ExactMwis(BuildGraph(inst, {ora_gamma, ora_delta}), w);
        std::cout << "mwis_weight=" << Num(TotalWeight(inst, s)) << " set=" << json(s).dump()
                  << '\n';
      } else if (ora_kind == "exists-power") {
        const PowerSolution sol = ExistsPower(inst, ParseSet(ora_set, inst));
        std::cout << "exists_power=" << (sol.feasible ? "true" : "false") << '\n';
      } else if (ora_kind == "edges") {
        g.Emit(EdgeListText(BuildGraph(inst, {ora_gamma, ora_delta})));
      } else {
        throw ParameterError("unknown oracle kind '" + ora_kind + "'");
      }
    } else if (*cal) {
      CalibrationKey key;
      key.alpha = g.alpha_opt->count() ? g.alpha : 3.0;
      key.beta = g.beta_opt->count() ? g.beta : 1.0;
      key.m = cal_m;
      key.delta = cal_delta;
      key.tau = cal_tau;
      CalibrationCache cache(cal_cache);
      std::cout << "gamma=" << Num(cache.Get(key, cal_trials, g.seed, cal_re)) << '\n';
    } else if (*exp) {
      std::ifstream in(exp_file);
      if (!in) throw ParameterError("cannot open experiment config '" + exp_file + "'");
      json j;
      try {
        in >> j;
      } catch (const json::exception& e) {
        throw ParameterError(std::string("experiment config is not valid JSON: ") + e.what());
      }
      const auto dir = std::filesystem::path(exp_file).parent_path().string();
      ExperimentConfig cfg = ExperimentConfig::FromJson(j, dir);
      if (exp_par > 0) cfg.parallelism = exp_par;
      if (exp_timing) cfg.timing = true;
      if (!g.out.empty()) cfg.output = g.out;
      const auto rows = RunExperimentToFile(cfg);
      std::cout << "rows=" << rows.size() << " output=" << cfg.output << '\n';
    }
  } catch (const VerificationError& e) {
    std::cerr << "verification failure: " << e.what() << '\n';
    return kExitVerification;
  } catch (const ParameterError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitParameter;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
