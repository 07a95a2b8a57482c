#include "sinrsched/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sinrsched {

MetricSpace MetricSpace::Euclidean(int dim, std::vector<double> coords) {
  if (dim < 1) throw ParameterError("euclidean dimension must be >= 1");
  if (coords.size() % static_cast<std::size_t>(dim) != 0) {
    throw ParameterError("coordinate count is not a multiple of the dimension");
  }
  for (double c : coords) {
    if (!std::isfinite(c)) throw ParameterError("non-finite coordinate");
  }
  return MetricSpace(EuclideanPoints{dim, std::move(coords)});
}

MetricSpace MetricSpace::Matrix(int n, std::vector<double> full) {
  if (n < 0) throw ParameterError("negative point count");
  const auto un = static_cast<std::size_t>(n);
  if (full.size() != un * un) throw ParameterError("distance matrix has wrong size");
  for (std::size_t i = 0; i < un; ++i) {
    if (full[i * un + i] != 0.0) throw ParameterError("distance matrix diagonal must be zero");
    for (std::size_t j = 0; j < un; ++j) {
      const double d = full[i * un + j];
      if (!std::isfinite(d) || d < 0.0) throw ParameterError("distances must be finite and nonnegative");
      if (d != full[j * un + i]) throw ParameterError("distance matrix is not symmetric");
    }
  }
  for (std::size_t k = 0; k < un; ++k) {
    for (std::size_t i = 0; i < un; ++i) {
      const double dik = full[i * un + k];
      for (std::size_t j = i + 1; j < un; ++j) {
        if (full[i * un + j] > dik + full[k * un + j] + kTriangleTolerance) {
          throw ParameterError("distance matrix violates the triangle inequality at (" +
                               std::to_string(i) + "," + std::to_string(j) + ") via " +
                               std::to_string(k));
        }
      }
    }
  }
  return MetricSpace(DistanceMatrix{n, std::move(full)});
}

MetricSpace MetricSpace::MatrixFromUpper(int n, std::span<const double> upper) {
  if (n < 0) throw ParameterError("negative point count");
  const auto un = static_cast<std::size_t>(n);
  if (upper.size() != un * (un > 0 ? un - 1 : 0) / 2) {
    throw ParameterError("upper-triangle distance list has wrong length");
  }
  std::vector<double> full(un * un, 0.0);
  std::size_t k = 0;
  for (std::size_t i = 0; i < un; ++i) {
    for (std::size_t j = i + 1; j < un; ++j) {
      full[i * un + j] = full[j * un + i] = upper[k++];
    }
  }
  return Matrix(n, std::move(full));
}

int MetricSpace::dimension() const {
  if (const auto* e = std::get_if<EuclideanPoints>(&rep_)) return e->dim;
  return 0;
}

std::size_t MetricSpace::point_count() const {
  if (const auto* e = std::get_if<EuclideanPoints>(&rep_)) {
    return e->coords.size() / static_cast<std::size_t>(e->dim);
  }
  return static_cast<std::size_t>(std::get<DistanceMatrix>(rep_).n);
}

double MetricSpace::distance(std::size_t p, std::size_t q) const {
  if (const auto* e = std::get_if<EuclideanPoints>(&rep_)) {
    const auto dim = static_cast<std::size_t>(e->dim);
    const double* a = e->coords.data() + p * dim;
    const double* b = e->coords.data() + q * dim;
    if (dim == 1) return std::fabs(a[0] - b[0]);
    double s = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
      const double t = a[k] - b[k];
      s += t * t;
    }
    return std::sqrt(s);
  }
  const auto& m = std::get<DistanceMatrix>(rep_);
  return m.dist[p * static_cast<std::size_t>(m.n) + q];
}

std::span<const double> MetricSpace::point(std::size_t p) const {
  const auto& e = euclidean();
  const auto dim = static_cast<std::size_t>(e.dim);
  return std::span<const double>(e.coords).subspan(p * dim, dim);
}

const EuclideanPoints& MetricSpace::euclidean() const {
  const auto* e = std::get_if<EuclideanPoints>(&rep_);
  if (e == nullptr) throw ParameterError("metric space is not euclidean");
  return *e;
}

const DistanceMatrix& MetricSpace::matrix() const {
  const auto* m = std::get_if<DistanceMatrix>(&rep_);
  if (m == nullptr) throw ParameterError("metric space is not an explicit matrix");
  return *m;
}

void ValidateParams(const SinrParams& params) {
  if (!(params.alpha > 0.0) || !std::isfinite(params.alpha)) {
    throw ParameterError("alpha must be positive");
  }
  if (!(params.beta >= 1.0) || !std::isfinite(params.beta)) {
    throw ParameterError("beta must be >= 1");
  }
  if (!(params.noise >= 0.0) || !std::isfinite(params.noise)) {
    throw ParameterError("noise must be nonnegative");
  }
}

Instance::Instance(MetricSpace space, std::vector<Link> links, SinrParams params)
    : space_(std::move(space)), links_(std::move(links)), params_(params) {
  ValidateParams(params_);
  const auto points = static_cast<long long>(space_.point_count());
  for (std::size_t i = 0; i < links_.size(); ++i) {
    const Link& l = links_[i];
    if (l.id != static_cast<LinkId>(i)) {
      throw ParameterError("link ids must be unique and contiguous from 0");
    }
    if (l.sender < 0 || l.sender >= points || l.receiver < 0 || l.receiver >= points) {
      throw ParameterError("link " + std::to_string(i) + " references an unknown point");
    }
    if (!(l.weight > 0.0) || !std::isfinite(l.weight)) {
      throw ParameterError("link " + std::to_string(i) + " has a non-positive weight");
    }
    if (!(space_.distance(static_cast<std::size_t>(l.sender),
                          static_cast<std::size_t>(l.receiver)) > 0.0)) {
      throw ParameterError("zero-length link " + std::to_string(i));
    }
  }
}

void Instance::CheckId(LinkId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= links_.size()) {
    throw ParameterError("unknown link id " + std::to_string(id));
  }
}

const Link& Instance::link(LinkId id) const {
  CheckId(id);
  return links_[static_cast<std::size_t>(id)];
}

Instance Instance::WithParams(SinrParams params) const {
  return Instance(space_, links_, params);
}

Instance Instance::Restrict(std::span<const LinkId> ids) const {
  std::vector<Link> out;
  out.reserve(ids.size());
  for (LinkId id : ids) {
    Link l = link(id);
    l.id = static_cast<LinkId>(out.size());
    out.push_back(l);
  }
  return Instance(space_, std::move(out), params_);
}

double LinkLength(const Instance& inst, LinkId i) {
  const Link& l = inst.link(i);
  return inst.space().distance(static_cast<std::size_t>(l.sender),
                               static_cast<std::size_t>(l.receiver));
}

double SenderReceiverDistance(const Instance& inst, LinkId i, LinkId j) {
  const Link& a = inst.link(i);
  const Link& b = inst.link(j);
  return inst.space().distance(static_cast<std::size_t>(a.sender),
                               static_cast<std::size_t>(b.receiver));
}

double LinkGap(const Instance& inst, LinkId i, LinkId j) {
  if (i == j) throw ParameterError("link_gap requires two distinct links");
  const Link& a = inst.link(i);
  const Link& b = inst.link(j);
  const auto& sp = inst.space();
  const auto as = static_cast<std::size_t>(a.sender), ar = static_cast<std::size_t>(a.receiver);
  const auto bs = static_cast<std::size_t>(b.sender), br = static_cast<std::size_t>(b.receiver);
  return std::min({sp.distance(as, bs), sp.distance(as, br), sp.distance(ar, bs),
                   sp.distance(ar, br)});
}

std::vector<double> AllLengths(const Instance& inst) {
  std::vector<double> out(inst.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = LinkLength(inst, static_cast<LinkId>(i));
  return out;
}

LinkSet AllLinks(const Instance& inst) {
  LinkSet out(inst.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<LinkId>(i);
  return out;
}

double TotalWeight(const Instance& inst, std::span<const LinkId> set) {
  double w = 0.0;
  for (LinkId id : set) w += inst.link(id).weight;
  return w;
}

double LengthRatio(const Instance& inst) {
  if (inst.empty()) throw ParameterError("length ratio of an empty instance");
  const auto lengths = AllLengths(inst);
  const auto [lo, hi] = std::minmax_element(lengths.begin(), lengths.end());
  return *hi / *lo;
}

std::vector<LinkSet> LengthClasses(const Instance& inst) {
  if (inst.empty()) throw ParameterError("length classes of an empty instance");
  const auto lengths = AllLengths(inst);
  const double lmin = *std::min_element(lengths.begin(), lengths.end());
  std::vector<LinkSet> classes;
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    // Exact class index: the largest t with lmin * 2^t <= l.
    const double ratio = lengths[i] / lmin;
    int t = std::max(0, static_cast<int>(std::floor(std::log2(ratio))));
    while (t > 0 && std::ldexp(lmin, t) > lengths[i]) --t;
    while (std::ldexp(lmin, t + 1) <= lengths[i]) ++t;
    if (classes.size() <= static_cast<std::size_t>(t)) classes.resize(static_cast<std::size_t>(t) + 1);
    classes[static_cast<std::size_t>(t)].push_back(static_cast<LinkId>(i));
  }
  std::erase_if(classes, [](const LinkSet& c) { return c.empty(); });
  return classes;
}

}  // namespace sinrsched
