#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fillrad/filtration.hpp"
#include "fillrad/samples.hpp"

namespace fillrad {

struct PersistencePair {
  int dim = 0;
  double birth = 0, death = 0;
  bool operator==(const PersistencePair&) const = default;
};

struct EssentialClass {
  int dim = 0;
  double birth = 0;
  bool operator==(const EssentialClass&) const = default;
};

/// Z/2 persistence of a flag filtration. Homology is reported for degrees
/// 0..maxdim-1 only; positive top-dimensional simplices are counted, not
/// reported. Zero-length bars are dropped but counted, so
///   2*(pairs + dropped_zero_bars) + essentials + top_dim_unpaired == simplex_count.
struct Barcode {
  int maxdim_homology = 0;
  double threshold = 0;
  std::vector<PersistencePair> pairs;      // sorted by (dim, birth, death)
  std::vector<EssentialClass> essentials;  // sorted by (dim, birth)
  std::uint64_t simplex_count = 0;
  std::uint64_t dropped_zero_bars = 0;
  std::uint64_t top_dim_unpaired = 0;

  bool operator==(const Barcode&) const = default;
};

/// Column reduction over Z/2 with the clearing optimization (dimensions
/// processed top-down, birth columns of lower dimensions skipped).
Barcode reduce(const Filtration& filtration);

/// Textbook left-to-right reduction of the full boundary matrix, no
/// optimizations; ground truth for equivalence tests.
Barcode reduce_naive(const Filtration& filtration);

struct FillRadEstimate {
  int k = 0;
  double estimate = 0;
  double birth = 0, death = 0;
  std::string convention = "half-death, diameter-VR";
  double confidence = 0;  // length ratio of the selected bar to the next-longest
  double threshold = 0;   // threshold the filtration was built at
  std::uint64_t simplices = 0;
  int n = 0;
};

struct EstimateConfig {
  std::optional<double> r_max;        // explicit threshold; bypasses the ladder
  double min_gap = 2.0;               // dominant-bar guard
  std::uint64_t simplex_budget = kDefaultSimplexBudget;
  std::optional<double> upper_bound;  // best known fillrad upper bound (e.g. submersion)
};

/// Filling-radius estimate in degree k: half the death of the dominant
/// degree-k bar of the Vietoris-Rips filtration at maxdim = k+1.
/// The default threshold is 1.1 * 2 * best-known upper bound (Katz diam/3,
/// improved by config.upper_bound when given), lowered along a 0.9-ladder
/// until the exact simplex count fits the budget.
FillRadEstimate estimate_fillrad(const ManifoldSample& sample, int k,
                                 const EstimateConfig& config = {});

struct ScalingReport {
  double c = 1;
  double estimate = 0, scaled_estimate = 0;
  double relative_error = 0;
  bool pass = false;
};

/// Asserts estimate(scale_metric(sample, c), k) == c * estimate(sample, k)
/// to 1e-9 relative.
ScalingReport scaling_check(const ManifoldSample& sample, double c, int k,
                            const EstimateConfig& config = {});

}  // namespace fillrad
