#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fillrad/persistence.hpp"
#include "fillrad/samples.hpp"

namespace fillrad {

/// (1/4) min(inj, pi/sqrt(delta)); delta = 0 reads the second term as +inf.
double lower_bound(double inj, double delta);

/// diam / 3
double katz_bound(double diam);

/// Half the largest extrinsic fiber diameter. Throws DimensionNotExceeded
/// when every fiber is a single point and the declared dimensions agree.
double submersion_bound(const SubmersionSample& sub);

/// min(fillrad_base, (1/2) max_warp * diam_fiber)
double warped_product_bound(double fillrad_base, double max_warp, double diam_fiber);

/// min(fr1, fr2)
double product_fillrad(double fr1, double fr2);

/// sup over p != p' of d_Y(map p, map p') / d_X(p, p'); 0 for constant maps.
double dilation(const std::vector<int>& map, const FiniteMetricSpace& X,
                const FiniteMetricSpace& Y);

struct LipschitzReport {
  bool applicable = false;  // surjectivity on H_k is the caller's assertion
  double dilation = 0;
  double estimate_domain = 0;
  double estimate_codomain = 0;
  double bound = 0;  // dilation^{-1} * estimate_codomain
  double tolerance = 0;
  bool pass = false;
};

/// Checks estimate(X) >= C^{-1} estimate(Y) - tolerance with C = dil(map).
/// Refuses (applicable = false, nothing computed) unless the caller asserts
/// the induced map on H_k is onto.
LipschitzReport lipschitz_comparison(const ManifoldSample& X, const ManifoldSample& Y,
                                     const std::vector<int>& map, int k, bool surjective_on_hk,
                                     const EstimateConfig& config = {}, double tolerance = 1e-9);

struct BoundVerdict {
  std::string bound;
  double value = 0;
  double residual = 0;  // signed slack of the inequality before tolerance
  double tolerance = 0;
  bool passed = false;
};

struct BoundReport {
  std::string label;
  FillRadEstimate estimate;
  std::optional<double> lower;
  std::optional<double> katz;
  std::optional<double> submersion;
  std::optional<double> warped;
  std::optional<double> product;
  std::optional<double> known;
  double tolerance = 0;
  std::vector<BoundVerdict> verdicts;

  bool all_passed() const;
};

/// Optional values only the caller can know (product structure, warped data),
/// plus extra estimator slack folded into the verdict tolerance.
struct BoundInputs {
  std::optional<double> product;
  std::optional<double> warped;
  double extra_tolerance = 0;
};

/// Evaluates every applicable bound against the estimate. Verdict tolerance
/// is sample epsilon + estimator half-gap + extra; failures are verdicts,
/// never exceptions.
BoundReport check_bounds(const ManifoldSample& sample, const FillRadEstimate& estimate,
                         const BoundInputs& inputs = {});

/// Submersion variant: adds the fiber bound on the total space and the
/// combined corollary (1/2) min(inj, pi/sqrt(delta)) <= max fiber diameter.
BoundReport check_bounds(const SubmersionSample& sub, const FillRadEstimate& estimate,
                         const BoundInputs& inputs = {});

}  // namespace fillrad
