#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fillrad/metric_space.hpp"

namespace fillrad {

inline constexpr std::uint64_t kDefaultSimplexBudget = 50'000'000;

/// Bits of a packed simplex key taken by the lexicographic rank; the value id
/// occupies the bits above. Caps usable instances at C(n, maxdim+1) < 2^42.
inline constexpr int kRankBits = 42;
inline constexpr std::uint64_t kRankMask = (std::uint64_t{1} << kRankBits) - 1;

class BinomialTable {
 public:
  BinomialTable() = default;
  BinomialTable(int n, int kmax);

  /// C(m, j), with 0 for m < j or m < 0. j must be <= kmax.
  std::uint64_t operator()(int m, int j) const {
    if (m < 0 || m < j) return 0;
    return c_[static_cast<size_t>(m) * (kmax_ + 1) + j];
  }
  int kmax() const { return kmax_; }

 private:
  int n_ = 0, kmax_ = 0;
  std::vector<std::uint64_t> c_;
};

/// Rank of an ascending vertex tuple among all C(n, k) such tuples in
/// lexicographic order.
std::uint64_t lex_rank(const BinomialTable& binom, int n, std::span<const std::uint16_t> verts);

/// Inverse of lex_rank; writes verts.size() coordinates.
void lex_unrank(const BinomialTable& binom, int n, std::uint64_t rank,
                std::span<std::uint16_t> verts);

/// Flag (Vietoris-Rips) filtration up to maxdim, diameter convention.
/// Simplices are kept per dimension, sorted by packed key = (value id, lex
/// rank), which realizes the (value, dimension, lexicographic vertices) order
/// of the global filtration. Every simplex value is an entry of `values`;
/// comparisons on ids are exact even when distances collide.
struct Filtration {
  int n = 0;
  int maxdim = 1;
  double threshold = 0;
  std::vector<double> values;                     // values[0] == 0, then unique edge lengths
  std::vector<std::uint32_t> pair_value_id;       // n*n lookup, 0 on the diagonal
  std::vector<std::vector<std::uint64_t>> keys;   // keys[d], ascending, d = 0..maxdim
  std::vector<std::vector<std::uint16_t>> verts;  // verts[d], (d+1) per simplex, same order
  BinomialTable binom;

  static std::uint64_t pack(std::uint32_t value_id, std::uint64_t rank) {
    return (static_cast<std::uint64_t>(value_id) << kRankBits) | rank;
  }
  static std::uint32_t value_id_of(std::uint64_t key) {
    return static_cast<std::uint32_t>(key >> kRankBits);
  }
  static std::uint64_t rank_of(std::uint64_t key) { return key & kRankMask; }

  double value_of(std::uint64_t key) const { return values[value_id_of(key)]; }
  std::uint64_t size() const;
  std::span<const std::uint16_t> simplex_vertices(int dim, std::uint64_t pos) const {
    return {verts[dim].data() + pos * (dim + 1), static_cast<size_t>(dim + 1)};
  }
  std::uint32_t edge_value_id(int i, int j) const {
    return pair_value_id[static_cast<size_t>(i) * n + j];
  }
};

/// Exact simplex count (all dimensions, vertices included) without building
/// anything; used to enforce the budget and to gate threshold selection.
std::uint64_t count_vr_simplices(const FiniteMetricSpace& space, int maxdim, double threshold);

Filtration build_vr_filtration(const FiniteMetricSpace& space, int maxdim, double threshold,
                               std::uint64_t budget = kDefaultSimplexBudget);

/// Reference builder: plain combination loops plus a comparison sort, no
/// bitsets, no counting sort, no OpenMP. Output must be identical to
/// build_vr_filtration; kept for equivalence tests and the kernel benchmark.
Filtration build_vr_filtration_naive(const FiniteMetricSpace& space, int maxdim, double threshold,
                                     std::uint64_t budget = kDefaultSimplexBudget);

}  // namespace fillrad
