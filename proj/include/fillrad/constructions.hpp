#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "fillrad/metric_space.hpp"
#include "fillrad/samples.hpp"

namespace fillrad {

/// Weighted point set for the discrete center-of-mass problem: the vicinity
/// set of f at radius R with uniform weights.
struct FrechetProblem {
  AmbientFunction f;
  double R = 0;
  std::vector<int> members;
  double weight = 0;  // uniform, 1/|members|
};

FrechetProblem make_frechet_problem(const KuratowskiFrame& frame, const AmbientFunction& f,
                                    double R);

/// Mean squared distance to the member set: F2(q) = (1/(2|A|)) sum d(p,q)^2,
/// summed in member order.
double frechet_energy(const FiniteMetricSpace& space, const std::vector<int>& members, int q);

/// Discrete center-of-mass retraction: argmin of F2 over all sample points,
/// ties broken by smallest index. Throws EmptyVicinity.
int frechet_retract(const KuratowskiFrame& frame, const AmbientFunction& f, double R);

struct ContinuityProbe {
  double input_distance = 0;    // sup distance between the two perturbed functions
  double retract_distance = 0;  // distance between the two retracted points
};

struct RetractionAudit {
  double R = 0;
  int sampled = 0;
  int fixed = 0;
  double fixed_fraction = 0;
  double eta = 0;
  std::vector<ContinuityProbe> continuity;
  double max_retract_displacement = 0;
};

/// Fixed-point audit (does retracting dist_p return p?) over the given points
/// plus a numerical continuity probe on random nearby function pairs.
RetractionAudit retraction_audit(const KuratowskiFrame& frame, double R,
                                 const std::vector<int>& points, int continuity_trials = 32,
                                 double eta = 0.0, std::uint64_t seed = 7);

/// f_b(z) = dist_base(b, proj(z)) + rho0
AmbientFunction shifted_base_function(const SubmersionSample& sub, int b);

/// The mapping-cylinder interpolant between dist_p (t = 0) and the shifted
/// base function f_b (t = rho0). Computed as dist_p + clamp(f_b - dist_p, -t, t),
/// which agrees with the two-case min/max formula pointwise and keeps the
/// increments bounded by t exactly in floating point.
struct CylinderFunction {
  int p = 0;
  double t = 0;
  AmbientFunction values;
  AmbientFunction increments;  // values - dist_p, each in [-t, t]
  double max_shift = 0;        // max |increment|, <= t
};

CylinderFunction cylinder_function(const SubmersionSample& sub, int p, double t);

struct CylinderViolation {
  int p = 0;
  double t = 0;
  int z = -1;  // -1 for per-(p,t) checks without a single witness point
  double residual = 0;
  std::string kind;
};

struct CylinderAudit {
  int t_grid = 0;
  double rho0 = 0;
  double epsilon = 0;
  std::uint64_t checks = 0;
  std::vector<CylinderViolation> violations;
  double max_shift_excess = 0;  // max over (p,t) of max(max_shift - t, 0); 0 when clean
  double max_sup_at_rho0 = 0;   // max over p of ||d_p^rho0 - f_b||_inf
};

/// For every p and every t on a uniform grid in [0, rho0]: the shift bound
/// ||d_p^t - d_p||_inf <= t, the endpoint identity ||d_p^rho0 - f_b||_inf <=
/// epsilon, and monotone approach of ||d_p^t - f_b||_inf in t.
CylinderAudit cylinder_audit(const SubmersionSample& sub, int t_grid = 16);

/// The midpoint function between two Kuratowski rows, equidistant from both
/// at delta/2 and no closer to any other sample point.
struct ReachWitness {
  int p = 0, q = 0;
  double delta = 0;
  double half_delta = 0;
  AmbientFunction f;
  double dist_to_p = 0, dist_to_q = 0;  // both delta/2
  double min_over_sample = 0;           // min over r of ||dist_r - f||, >= delta/2
  double min_value = 0;                 // min_z f(z) = delta/2 > 0: f is not a row
};

ReachWitness reach_probe(const KuratowskiFrame& frame, int p, int q);

/// The shifted row f_delta = dist_p + delta, whose unique nearest sample
/// point is p with positive margin.
struct ProjectionWitness {
  int p = 0;
  double delta = 0;
  AmbientFunction f;
  double dist_to_p = 0;  // == delta
  double margin = 0;     // min over q != p of ||f - dist_q|| - delta
  int runner_up = -1;
};

ProjectionWitness unique_projection_witness(const KuratowskiFrame& frame, int p, double delta);

}  // namespace fillrad
