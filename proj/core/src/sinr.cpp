#include "sinrsched/sinr.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>

namespace sinrsched {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMaxPowerIterations = 10000;

void CheckPower(const Instance& inst, const PowerAssignment& power) {
  if (power.size() != inst.size()) {
    throw ParameterError("power assignment size " + std::to_string(power.size()) +
                         " does not match instance size " + std::to_string(inst.size()));
  }
}

double NoiseFactor(const Instance& inst, const PowerAssignment& power, LinkId i,
                   AffectanceMode mode) {
  if (mode == AffectanceMode::kNormalized) return 1.0;
  const auto& prm = inst.params();
  const double need = prm.beta * prm.noise * std::pow(LinkLength(inst, i), prm.alpha);
  if (power[static_cast<std::size_t>(i)] <= need) {
    throw ParameterError("weak link under assignment: link " + std::to_string(i));
  }
  return 1.0 / (1.0 - need / power[static_cast<std::size_t>(i)]);
}

double RawAffectance(const Instance& inst, const PowerAssignment& power, LinkId j, LinkId i) {
  const double d = SenderReceiverDistance(inst, j, i);
  if (d == 0.0) return kInf;
  const double ratio = LinkLength(inst, i) / d;
  return power[static_cast<std::size_t>(j)] / power[static_cast<std::size_t>(i)] *
         std::pow(ratio, inst.params().alpha);
}

LinkSet SortedUnique(const Instance& inst, std::span<const LinkId> set) {
  LinkSet s(set.begin(), set.end());
  for (LinkId id : s) inst.CheckId(id);
  std::sort(s.begin(), s.end());
  if (std::adjacent_find(s.begin(), s.end()) != s.end()) {
    throw ParameterError("link set contains duplicate ids");
  }
  return s;
}

double Round12(double v) {
  if (!std::isfinite(v)) return v;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::strtod(buf, nullptr);
}

nlohmann::json Number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return Round12(v);
}

}  // namespace

double ObliviousPower(const PowerScheme& scheme, const Instance& inst, LinkId i) {
  return scheme.scale * std::pow(LinkLength(inst, i), scheme.tau * inst.params().alpha);
}

PowerAssignment ObliviousPowers(const PowerScheme& scheme, const Instance& inst) {
  if (!(scheme.tau >= 0.0 && scheme.tau <= 1.0)) throw ParameterError("tau must lie in [0,1]");
  if (!(scheme.scale > 0.0)) throw ParameterError("power scale must be positive");
  PowerAssignment p(inst.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = ObliviousPower(scheme, inst, static_cast<LinkId>(i));
  }
  return p;
}

double Affectance(const Instance& inst, const PowerAssignment& power, LinkId j, LinkId i,
                  AffectanceMode mode) {
  inst.CheckId(i);
  inst.CheckId(j);
  CheckPower(inst, power);
  const double c = NoiseFactor(inst, power, i, mode);
  if (i == j) return 0.0;
  return c * RawAffectance(inst, power, j, i);
}

double SetAffectance(const Instance& inst, const PowerAssignment& power,
                     std::span<const LinkId> set, LinkId i, AffectanceMode mode) {
  inst.CheckId(i);
  CheckPower(inst, power);
  const double c = NoiseFactor(inst, power, i, mode);
  LinkSet s = SortedUnique(inst, set);
  double sum = 0.0;
  for (LinkId j : s) {
    if (j != i) sum += RawAffectance(inst, power, j, i);
  }
  return c * sum;
}

double FTau(const Instance& inst, double tau, LinkId i, LinkId j) {
  if (i == j) throw ParameterError("f_tau needs two distinct links");
  const double d = LinkGap(inst, i, j);
  if (d == 0.0) {
    throw Error("f_tau is infinite: links " + std::to_string(i) + " and " + std::to_string(j) +
                " touch");
  }
  const double li = LinkLength(inst, i);
  const double lj = LinkLength(inst, j);
  const double base = std::pow(li, tau) * std::pow(lj, 1.0 - tau) / d;
  return std::pow(base, inst.params().alpha);
}

FeasibilityReport CheckFeasible(const Instance& inst, std::span<const LinkId> set,
                                const PowerAssignment& power, double p, AffectanceMode mode) {
  if (set.empty()) throw ParameterError("feasibility check on an empty set");
  if (!(p > 0.0)) throw ParameterError("p must be positive");
  CheckPower(inst, power);
  LinkSet s = SortedUnique(inst, set);
  for (LinkId id : s) {
    const double pw = power[static_cast<std::size_t>(id)];
    if (!(pw > 0.0) || !std::isfinite(pw)) {
      throw ParameterError("non-positive power for link " + std::to_string(id));
    }
  }
  FeasibilityReport r;
  r.p = p;
  r.per_link.reserve(s.size());
  double worst = -1.0;
  for (LinkId i : s) {
    const double c = NoiseFactor(inst, power, i, mode);
    double sum = 0.0;
    for (LinkId j : s) {
      if (j != i) sum += RawAffectance(inst, power, j, i);
    }
    sum *= c;
    r.per_link.push_back({i, sum});
    if (sum > worst) {
      worst = sum;
      r.worst_link = i;
    }
  }
  r.margin = 1.0 / p - worst;
  r.feasible = r.margin >= 0.0;
  return r;
}

bool IsFeasible(const Instance& inst, std::span<const LinkId> set, const PowerAssignment& power,
                double p, AffectanceMode mode) {
  return CheckFeasible(inst, set, power, p, mode).feasible;
}

nlohmann::json ReportToJson(const FeasibilityReport& report) {
  nlohmann::json per = nlohmann::json::array();
  for (const auto& la : report.per_link) {
    per.push_back({{"link", la.link}, {"affectance", Number(la.affectance)}});
  }
  return {{"feasible", report.feasible},
          {"p", Number(report.p)},
          {"worst_link", report.worst_link},
          {"margin", Number(report.margin)},
          {"per_link", std::move(per)}};
}

int StrengthenBound(double p, double p_target) {
  return static_cast<int>(std::ceil(2.0 * p_target / p - 1e-12));
}

std::vector<LinkSet> StrengthenPartition(const Instance& inst, std::span<const LinkId> set,
                                         const PowerAssignment& power, double p,
                                         double p_target) {
  if (!(p > 0.0) || !(p_target > 0.0)) throw ParameterError("p and p_target must be positive");
  if (set.empty()) return {};
  if (!IsFeasible(inst, set, power, p)) {
    throw ParameterError("input set is not p-feasible");
  }
  LinkSet order = SortedUnique(inst, set);
  std::stable_sort(order.begin(), order.end(), [&](LinkId a, LinkId b) {
    return LinkLength(inst, a) > LinkLength(inst, b);
  });
  const double budget = 1.0 / p_target;
  std::vector<LinkSet> parts;
  std::vector<std::vector<double>> incoming;  // running a(part, u) per member
  for (LinkId v : order) {
    bool placed = false;
    for (std::size_t k = 0; k < parts.size() && !placed; ++k) {
      double in_v = 0.0;
      bool ok = true;
      for (std::size_t m = 0; m < parts[k].size() && ok; ++m) {
        const LinkId u = parts[k][m];
        in_v += RawAffectance(inst, power, u, v);
        ok = in_v <= budget && incoming[k][m] + RawAffectance(inst, power, v, u) <= budget;
      }
      if (!ok) continue;
      for (std::size_t m = 0; m < parts[k].size(); ++m) {
        incoming[k][m] += RawAffectance(inst, power, v, parts[k][m]);
      }
      parts[k].push_back(v);
      incoming[k].push_back(in_v);
      placed = true;
    }
    if (!placed) {
      parts.push_back({v});
      incoming.push_back({0.0});
    }
  }
  for (auto& part : parts) {
    std::sort(part.begin(), part.end());
    if (!IsFeasible(inst, part, power, p_target)) {
      throw VerificationError("strengthened part failed re-verification");
    }
  }
  const int bound = StrengthenBound(p, p_target);
  if (static_cast<int>(parts.size()) > bound) {
    throw VerificationError("signal strengthening needed " + std::to_string(parts.size()) +
                            " parts, bound is " + std::to_string(bound));
  }
  return parts;
}

double DeltaZero(double alpha, int m) {
  if (m < 1 || !(alpha > m)) throw ParameterError("need alpha > m >= 1");
  const double am = alpha - m;
  return (am + 1.0) / (2.0 * am + 1.0);
}

TauInterval ValidTauInterval(double alpha, int m, double delta) {
  if (m < 1 || !(alpha > m)) {
    throw ParameterError("tau interval needs alpha > m >= 1 (alpha=" + std::to_string(alpha) +
                         ", m=" + std::to_string(m) + ")");
  }
  if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("delta must lie in (0,1)");
  const double am = alpha - m;
  TauInterval t;
  t.lo = 1.0 - delta * am / alpha;
  t.hi = 1.0 - (1.0 - delta) * (am + 1.0) / alpha;
  t.nonempty = delta > DeltaZero(alpha, m) && t.lo < t.hi;
  return t;
}

PowerSolution ExistsPower(const Instance& inst, std::span<const LinkId> set, AffectanceMode mode) {
  if (set.empty()) throw ParameterError("exists_power on an empty set");
  const LinkSet s = SortedUnique(inst, set);
  const auto& prm = inst.params();
  const std::size_t k = s.size();
  const bool with_noise = mode == AffectanceMode::kExact && prm.noise > 0.0;

  PowerSolution out;
  out.power.assign(inst.size(), 1.0);

  std::vector<double> b(k);
  for (std::size_t a = 0; a < k; ++a) {
    b[a] = with_noise ? prm.beta * prm.noise * std::pow(LinkLength(inst, s[a]), prm.alpha) : 0.0;
  }
  if (k == 1) {
    out.feasible = true;
    out.power[static_cast<std::size_t>(s[0])] = with_noise ? 2.0 * b[0] : 1.0;
    return out;
  }

  // A = beta * G, zero diagonal, strictly positive elsewhere (irreducible).
  std::vector<double> A(k * k, 0.0);
  for (std::size_t a = 0; a < k; ++a) {
    const double la = LinkLength(inst, s[a]);
    for (std::size_t c = 0; c < k; ++c) {
      if (a == c) continue;
      const double d = SenderReceiverDistance(inst, s[c], s[a]);
      if (d == 0.0) return out;
      A[a * k + c] = prm.beta * std::pow(la / d, prm.alpha);
    }
  }
  auto apply = [&](const std::vector<double>& x, std::vector<double>& y) {
    for (std::size_t a = 0; a < k; ++a) {
      double acc = 0.0;
      for (std::size_t c = 0; c < k; ++c) acc += A[a * k + c] * x[c];
      y[a] = acc;
    }
  };
  auto install = [&](const std::vector<double>& x) {
    for (std::size_t a = 0; a < k; ++a) out.power[static_cast<std::size_t>(s[a])] = x[a];
  };

  // Lazy power iteration on (A + I)/2; Collatz-Wielandt bounds on A bracket
  // the spectral radius.
  std::vector<double> x(k, 1.0), y(k);
  bool radius_below_one = false;
  for (int it = 1; it <= kMaxPowerIterations; ++it) {
    out.iterations = it;
    apply(x, y);
    double lo = kInf, hi = 0.0;
    for (std::size_t a = 0; a < k; ++a) {
      const double r = y[a] / x[a];
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    if (with_noise) {
      if (lo >= 1.0) return out;
      if (hi < 1.0) {
        radius_below_one = true;
        break;
      }
    } else {
      if (lo > 1.0) return out;
      if (hi <= 1.0) {
        install(x);
        if (IsFeasible(inst, s, out.power, prm.beta, mode)) {
          out.feasible = true;
          return out;
        }
      }
    }
    double mx = 0.0;
    for (std::size_t a = 0; a < k; ++a) {
      x[a] = 0.5 * (x[a] + y[a]);
      mx = std::max(mx, x[a]);
    }
    for (double& v : x) v /= mx;
  }
  if (!radius_below_one) {
    out.power.assign(inst.size(), 1.0);
    return out;
  }

  // Noise-limited: iterate P <- A P + 2b, which converges because rho(A) < 1.
  std::vector<double> p(k), next(k);
  for (std::size_t a = 0; a < k; ++a) p[a] = 2.0 * b[a];
  const double start = *std::max_element(p.begin(), p.end());
  for (int it = 1; it <= kMaxPowerIterations; ++it) {
    out.iterations += 1;
    apply(p, next);
    double change = 0.0;
    for (std::size_t a = 0; a < k; ++a) {
      next[a] += 2.0 * b[a];
      change = std::max(change, std::fabs(next[a] - p[a]) / next[a]);
    }
    p.swap(next);
    if (*std::max_element(p.begin(), p.end()) > 1e12 * start) break;
    if (change < 1e-10) break;
  }
  install(p);
  if (IsFeasible(inst, s, out.power, prm.beta, mode)) {
    out.feasible = true;
  } else {
    out.power.assign(inst.size(), 1.0);
  }
  return out;
}

double GainSpectralRadius(const Instance& inst, std::span<const LinkId> set) {
  const LinkSet s = SortedUnique(inst, set);
  const auto k = static_cast<Eigen::Index>(s.size());
  if (k <= 1) return 0.0;
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(k, k);
  const double alpha = inst.params().alpha;
  for (Eigen::Index a = 0; a < k; ++a) {
    const double la = LinkLength(inst, s[static_cast<std::size_t>(a)]);
    for (Eigen::Index c = 0; c < k; ++c) {
      if (a == c) continue;
      const double d =
          SenderReceiverDistance(inst, s[static_cast<std::size_t>(c)], s[static_cast<std::size_t>(a)]);
      if (d == 0.0) return kInf;
      G(a, c) = std::pow(la / d, alpha);
    }
  }
  Eigen::EigenSolver<Eigen::MatrixXd> es(G, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace sinrsched
