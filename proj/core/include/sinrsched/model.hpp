#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "sinrsched/errors.hpp"

namespace sinrsched {

using LinkId = int;
using LinkSet = std::vector<LinkId>;

// Points of an m-dimensional Euclidean space, stored row-major.
struct EuclideanPoints {
  int dim = 2;
  std::vector<double> coords;
};

// A finite metric given by its full symmetric distance matrix.
struct DistanceMatrix {
  int n = 0;
  std::vector<double> dist;  // n * n, row-major
};

// Tolerance used when validating the triangle inequality of explicit metrics.
inline constexpr double kTriangleTolerance = 1e-9;

class MetricSpace {
 public:
  MetricSpace() : rep_(EuclideanPoints{}) {}

  static MetricSpace Euclidean(int dim, std::vector<double> coords);
  // Validates symmetry, zero diagonal, nonnegativity and the triangle
  // inequality (tolerance kTriangleTolerance).
  static MetricSpace Matrix(int n, std::vector<double> full);
  // `upper` holds the strict upper triangle (i < j) row by row.
  static MetricSpace MatrixFromUpper(int n, std::span<const double> upper);

  bool is_euclidean() const { return std::holds_alternative<EuclideanPoints>(rep_); }
  // Euclidean dimension; 0 for explicit metrics.
  int dimension() const;
  std::size_t point_count() const;
  double distance(std::size_t p, std::size_t q) const;

  // Euclidean only.
  std::span<const double> point(std::size_t p) const;
  const EuclideanPoints& euclidean() const;
  // Explicit only.
  const DistanceMatrix& matrix() const;

 private:
  explicit MetricSpace(std::variant<EuclideanPoints, DistanceMatrix> rep)
      : rep_(std::move(rep)) {}

  std::variant<EuclideanPoints, DistanceMatrix> rep_;
};

struct Link {
  int sender = 0;
  int receiver = 0;
  double weight = 1.0;
  LinkId id = 0;
};

struct SinrParams {
  double alpha = 3.0;  // path-loss exponent
  double beta = 1.0;   // SINR threshold
  double noise = 0.0;  // ambient noise N
};

void ValidateParams(const SinrParams& params);

// Links in a metric space together with the SINR parameters. Immutable after
// construction; link ids equal their positions 0..n-1.
class Instance {
 public:
  Instance() = default;
  Instance(MetricSpace space, std::vector<Link> links, SinrParams params);

  const MetricSpace& space() const { return space_; }
  std::span<const Link> links() const { return links_; }
  const SinrParams& params() const { return params_; }
  std::size_t size() const { return links_.size(); }
  bool empty() const { return links_.empty(); }

  const Link& link(LinkId id) const;
  void CheckId(LinkId id) const;

  Instance WithParams(SinrParams params) const;
  // Keeps only the given links (renumbered 0..k-1 in the given order); the
  // metric space is shared unchanged.
  Instance Restrict(std::span<const LinkId> ids) const;

 private:
  MetricSpace space_;
  std::vector<Link> links_;
  SinrParams params_;
};

// l_i = d(s_i, r_i).
double LinkLength(const Instance& inst, LinkId i);
// d_ij = d(s_i, r_j).
double SenderReceiverDistance(const Instance& inst, LinkId i, LinkId j);
// d(i,j): minimum distance between an endpoint of i and an endpoint of j.
double LinkGap(const Instance& inst, LinkId i, LinkId j);
// Ratio of the longest to the shortest link length (Delta).
double LengthRatio(const Instance& inst);
// Dyadic length classes: class t holds links with
// l in [l_min * 2^t, l_min * 2^(t+1)). Empty classes are omitted.
std::vector<LinkSet> LengthClasses(const Instance& inst);

std::vector<double> AllLengths(const Instance& inst);
LinkSet AllLinks(const Instance& inst);
double TotalWeight(const Instance& inst, std::span<const LinkId> set);

}  // namespace sinrsched
