#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fillrad/errors.hpp"

namespace fillrad {

inline constexpr double kTriangleSlack = 1e-9;

/// A raw square matrix of distances, as read from disk or built by a sampler,
/// before any invariant has been checked.
struct RawMatrix {
  int n = 0;
  std::vector<double> d;  // row-major, n*n

  double& at(int i, int j) { return d[static_cast<size_t>(i) * n + j]; }
  double at(int i, int j) const { return d[static_cast<size_t>(i) * n + j]; }
};

/// A validated finite metric space: symmetric, zero diagonal, positive
/// off-diagonal, triangle inequality within an additive slack.
/// Immutable after construction.
class FiniteMetricSpace {
 public:
  FiniteMetricSpace() = default;

  int size() const { return n_; }
  double operator()(int i, int j) const { return d_[static_cast<size_t>(i) * n_ + j]; }
  std::span<const double> row(int i) const {
    return {d_.data() + static_cast<size_t>(i) * n_, static_cast<size_t>(n_)};
  }
  const std::vector<double>& data() const { return d_; }
  double max_distance() const { return max_d_; }

  RawMatrix raw() const { return RawMatrix{n_, d_}; }

  /// Construction path that skips the O(n^3) validation. Only for matrices
  /// valid by construction (scaling of a valid space, shortest-path metrics).
  static FiniteMetricSpace trusted(RawMatrix raw);

 private:
  friend FiniteMetricSpace validate_metric(const RawMatrix&, double);
  int n_ = 0;
  std::vector<double> d_;
  double max_d_ = 0;
};

/// Checks symmetry, zero diagonal, off-diagonal positivity and the full
/// triangle inequality (worst triple reported on failure).
FiniteMetricSpace validate_metric(const RawMatrix& raw, double slack = kTriangleSlack);

/// Multiplies every distance by c > 0. Valid by homogeneity of the metric axioms.
FiniteMetricSpace scale_metric(const FiniteMetricSpace& space, double c);

/// An element of the finite sup-norm space over the sample: one real value
/// per sample point.
using AmbientFunction = std::vector<double>;

/// max_i |f_i - g_i|
double sup_distance(const AmbientFunction& f, const AmbientFunction& g);

/// The canonical isometric embedding p -> dist(p, .): vector i is row i of
/// the distance matrix, and pairwise sup-norm distances reproduce d exactly.
class KuratowskiFrame {
 public:
  explicit KuratowskiFrame(FiniteMetricSpace space) : space_(std::move(space)) {}

  const FiniteMetricSpace& space() const { return space_; }
  int size() const { return space_.size(); }
  std::span<const double> vector(int i) const { return space_.row(i); }
  AmbientFunction vector_copy(int i) const {
    auto r = space_.row(i);
    return AmbientFunction(r.begin(), r.end());
  }

 private:
  FiniteMetricSpace space_;
};

KuratowskiFrame kuratowski_embed(const FiniteMetricSpace& space);

/// Sample points whose Kuratowski row is within sup-distance R of f.
/// May be empty; callers decide whether that is an error.
struct VicinitySet {
  AmbientFunction f;
  double R = 0;
  std::vector<int> members;  // ascending indices
};

VicinitySet vicinity_set(const KuratowskiFrame& frame, const AmbientFunction& f, double R);

}  // namespace fillrad
