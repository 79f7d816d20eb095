#include "fillrad/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace fillrad {

double lower_bound(double inj, double delta) {
  if (!(inj > 0))
    throw Error(Errc::NonpositiveInjectivityRadius,
                "injectivity radius must be positive, got " + std::to_string(inj));
  if (delta < 0) throw Error(Errc::BadArguments, "curvature bound delta must be >= 0");
  const double conj =
      delta == 0 ? std::numeric_limits<double>::infinity() : std::numbers::pi / std::sqrt(delta);
  return 0.25 * std::min(inj, conj);
}

double katz_bound(double diam) {
  if (!(diam > 0)) throw Error(Errc::BadArguments, "diameter must be positive");
  return diam / 3.0;
}

double submersion_bound(const SubmersionSample& sub) {
  bool any_fat = false;
  double max_diam = 0.0;
  for (const auto& fiber : sub.fibers) {
    if (fiber.size() > 1) any_fat = true;
    for (size_t x = 0; x < fiber.size(); ++x)
      for (size_t y = x + 1; y < fiber.size(); ++y)
        max_diam = std::max(max_diam, sub.total.space(fiber[x], fiber[y]));
  }
  if (!any_fat && sub.total.dim <= sub.base.dim)
    throw Error(Errc::DimensionNotExceeded,
                "all fibers are single points and dim total <= dim base; the submersion "
                "hypothesis dim M > dim B fails");
  return 0.5 * max_diam;
}

double warped_product_bound(double fillrad_base, double max_warp, double diam_fiber) {
  if (!(fillrad_base > 0 && max_warp > 0 && diam_fiber > 0))
    throw Error(Errc::BadArguments, "warped product bound needs positive inputs");
  return std::min(fillrad_base, 0.5 * max_warp * diam_fiber);
}

double product_fillrad(double fr1, double fr2) {
  if (!(fr1 > 0 && fr2 > 0))
    throw Error(Errc::BadArguments, "product formula needs positive inputs");
  return std::min(fr1, fr2);
}

double dilation(const std::vector<int>& map, const FiniteMetricSpace& X,
                const FiniteMetricSpace& Y) {
  const int n = X.size();
  if (map.size() != static_cast<size_t>(n))
    throw Error(Errc::LengthMismatch, "map must cover every domain index");
  for (const int v : map)
    if (v < 0 || v >= Y.size())
      throw Error(Errc::BadArguments, "map image out of codomain range");
  double dil = 0.0;
  for (int p = 0; p < n; ++p)
    for (int q = p + 1; q < n; ++q) {
      if (map[p] == map[q]) continue;
      dil = std::max(dil, Y(map[p], map[q]) / X(p, q));
    }
  return dil;
}

LipschitzReport lipschitz_comparison(const ManifoldSample& X, const ManifoldSample& Y,
                                     const std::vector<int>& map, int k, bool surjective_on_hk,
                                     const EstimateConfig& config, double tolerance) {
  LipschitzReport rep;
  rep.tolerance = tolerance;
  if (!surjective_on_hk) return rep;  // hypothesis gate: nothing to assert
  rep.applicable = true;
  rep.dilation = dilation(map, X.space, Y.space);
  rep.estimate_domain = estimate_fillrad(X, k, config).estimate;
  rep.estimate_codomain = estimate_fillrad(Y, k, config).estimate;
  rep.bound = rep.estimate_codomain / rep.dilation;
  rep.pass = rep.estimate_domain >= rep.bound - tolerance;
  return rep;
}

bool BoundReport::all_passed() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const auto& v) { return v.passed; });
}

namespace {

void add_verdict(BoundReport& rep, const std::string& name, double value, double residual) {
  rep.verdicts.push_back({name, value, residual, rep.tolerance, residual >= -rep.tolerance});
}

BoundReport check_bounds_impl(const ManifoldSample& sample, const FillRadEstimate& estimate,
                              const BoundInputs& inputs, const SubmersionSample* sub) {
  BoundReport rep;
  rep.label = sample.label;
  rep.estimate = estimate;

  const double half_gap = std::isfinite(estimate.confidence) && estimate.confidence > 0
                              ? (estimate.death - estimate.birth) / (2.0 * estimate.confidence)
                              : 0.0;
  rep.tolerance = sample.epsilon + half_gap + inputs.extra_tolerance;

  const double est = estimate.estimate;

  if (sample.inj && sample.delta) {
    rep.lower = lower_bound(*sample.inj, *sample.delta);
    add_verdict(rep, "lower<=estimate", *rep.lower, est - *rep.lower);
  }

  const double diam = sample.diam_true.value_or(sample.space.max_distance());
  rep.katz = katz_bound(diam);
  add_verdict(rep, "estimate<=katz", *rep.katz, *rep.katz - est);

  if (sub != nullptr) {
    rep.submersion = submersion_bound(*sub);
    add_verdict(rep, "estimate<=submersion", *rep.submersion, *rep.submersion - est);
    if (sample.inj && sample.delta) {
      // Combined corollary: (1/2) min(inj, pi/sqrt(delta)) <= max fiber diameter.
      const double lhs = 2.0 * lower_bound(*sample.inj, *sample.delta);
      const double fiber_diam = 2.0 * *rep.submersion;
      add_verdict(rep, "half-min-inj<=max-fiber-diam", lhs, fiber_diam - lhs);
    }
  }

  if (inputs.warped) {
    rep.warped = *inputs.warped;
    add_verdict(rep, "estimate<=warped", *rep.warped, *rep.warped - est);
  }
  if (inputs.product) {
    rep.product = *inputs.product;
    add_verdict(rep, "estimate==product", *rep.product, -std::abs(est - *rep.product));
  }
  if (sample.fillrad_true) {
    rep.known = *sample.fillrad_true;
    add_verdict(rep, "estimate==known", *rep.known, -std::abs(est - *rep.known));
    // Analytic sandwich, no estimator and no tolerance.
    if (rep.lower) {
      rep.verdicts.push_back(
          {"lower<=known", *rep.lower, *rep.known - *rep.lower, 0.0, *rep.lower <= *rep.known});
      rep.verdicts.push_back(
          {"known<=katz", *rep.katz, *rep.katz - *rep.known, 0.0, *rep.known <= *rep.katz});
    }
  }
  return rep;
}

}  // namespace

BoundReport check_bounds(const ManifoldSample& sample, const FillRadEstimate& estimate,
                         const BoundInputs& inputs) {
  return check_bounds_impl(sample, estimate, inputs, nullptr);
}

BoundReport check_bounds(const SubmersionSample& sub, const FillRadEstimate& estimate,
                         const BoundInputs& inputs) {
  BoundInputs with_eps = inputs;
  with_eps.extra_tolerance += sub.epsilon;
  return check_bounds_impl(sub.total, estimate, with_eps, &sub);
}

}  // namespace fillrad
