#include "fillrad/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace fillrad {

namespace {

double uniform_pm(std::mt19937_64& rng, double bound) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return (2.0 * u - 1.0) * bound;
}

}  // namespace

FrechetProblem make_frechet_problem(const KuratowskiFrame& frame, const AmbientFunction& f,
                                    double R) {
  VicinitySet v = vicinity_set(frame, f, R);
  if (v.members.empty())
    throw Error(Errc::EmptyVicinity, "no sample point within sup-distance " + std::to_string(R));
  FrechetProblem prob;
  prob.f = f;
  prob.R = R;
  prob.weight = 1.0 / static_cast<double>(v.members.size());
  prob.members = std::move(v.members);
  return prob;
}

double frechet_energy(const FiniteMetricSpace& space, const std::vector<int>& members, int q) {
  double s = 0.0;
  for (const int p : members) {
    const double d = space(p, q);
    s += d * d;
  }
  return s / (2.0 * static_cast<double>(members.size()));
}

int frechet_retract(const KuratowskiFrame& frame, const AmbientFunction& f, double R) {
  const FrechetProblem prob = make_frechet_problem(frame, f, R);
  const FiniteMetricSpace& space = frame.space();
  int best = 0;
  double best_energy = std::numeric_limits<double>::infinity();
  for (int q = 0; q < space.size(); ++q) {
    const double e = frechet_energy(space, prob.members, q);
    if (e < best_energy) {  // strict: ties keep the smallest index
      best_energy = e;
      best = q;
    }
  }
  return best;
}

RetractionAudit retraction_audit(const KuratowskiFrame& frame, double R,
                                 const std::vector<int>& points, int continuity_trials, double eta,
                                 std::uint64_t seed) {
  RetractionAudit audit;
  audit.R = R;
  audit.sampled = static_cast<int>(points.size());
  audit.eta = eta > 0 ? eta : R / 10.0;

  std::vector<char> fixed(points.size(), 0);
#pragma omp parallel for schedule(dynamic)
  for (size_t t = 0; t < points.size(); ++t) {
    const int p = points[t];
    fixed[t] = frechet_retract(frame, frame.vector_copy(p), R) == p;
  }
  for (const char fl : fixed) audit.fixed += fl;
  audit.fixed_fraction =
      points.empty() ? 0.0 : static_cast<double>(audit.fixed) / static_cast<double>(points.size());

  const int n = frame.size();
  std::mt19937_64 rng(seed);
  for (int trial = 0; trial < continuity_trials; ++trial) {
    const int p = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
    AmbientFunction f = frame.vector_copy(p);
    for (double& v : f) v += uniform_pm(rng, R / 2.0);
    AmbientFunction g = f;
    for (double& v : g) v += uniform_pm(rng, audit.eta);
    const int a = frechet_retract(frame, f, R);
    const int b = frechet_retract(frame, g, R);
    ContinuityProbe probe;
    probe.input_distance = sup_distance(f, g);
    probe.retract_distance = a == b ? 0.0 : frame.space()(a, b);
    audit.max_retract_displacement = std::max(audit.max_retract_displacement, probe.retract_distance);
    audit.continuity.push_back(probe);
  }
  return audit;
}

AmbientFunction shifted_base_function(const SubmersionSample& sub, int b) {
  const int n = sub.total.space.size();
  AmbientFunction f(n);
  for (int z = 0; z < n; ++z) {
    const int bz = sub.proj[z];
    f[z] = (b == bz ? 0.0 : sub.base.space(b, bz)) + sub.rho0;
  }
  return f;
}

CylinderFunction cylinder_function(const SubmersionSample& sub, int p, double t) {
  if (!(t >= 0)) throw Error(Errc::BadArguments, "cylinder parameter t must be nonnegative");
  const int n = sub.total.space.size();
  const AmbientFunction fb = shifted_base_function(sub, sub.proj[p]);
  CylinderFunction cf;
  cf.p = p;
  cf.t = t;
  cf.values.resize(n);
  cf.increments.resize(n);
  for (int z = 0; z < n; ++z) {
    const double dp = z == p ? 0.0 : sub.total.space(p, z);
    const double incr = std::clamp(fb[z] - dp, -t, t);
    cf.increments[z] = incr;
    cf.values[z] = dp + incr;
    cf.max_shift = std::max(cf.max_shift, std::abs(incr));
  }
  return cf;
}

CylinderAudit cylinder_audit(const SubmersionSample& sub, int t_grid) {
  if (t_grid < 2) throw Error(Errc::BadArguments, "t grid needs at least 2 points");
  CylinderAudit audit;
  audit.t_grid = t_grid;
  audit.rho0 = sub.rho0;
  audit.epsilon = sub.epsilon;

  const int n = sub.total.space.size();
  std::vector<double> ts(t_grid);
  for (int j = 0; j < t_grid; ++j) ts[j] = sub.rho0 * (static_cast<double>(j) / (t_grid - 1));
  // representation slack for comparing two independently rounded sums
  const double fp_guard = 8.0 * std::numeric_limits<double>::epsilon() *
                          (sub.total.space.max_distance() + sub.rho0);

  std::vector<std::vector<CylinderViolation>> local(n);
  std::vector<double> shift_excess(n, 0.0);
  std::vector<double> sup_rho0(n, 0.0);
  std::vector<std::uint64_t> checks(n, 0);

#pragma omp parallel for schedule(dynamic, 8)
  for (int p = 0; p < n; ++p) {
    const AmbientFunction fb = shifted_base_function(sub, sub.proj[p]);
    // ||d_p^t - f_b||_inf = max(max_z |f_b - dist_p| - t, 0): one sup per p.
    double base_sup = 0.0;
    for (int z = 0; z < n; ++z)
      base_sup = std::max(base_sup, std::abs(fb[z] - (z == p ? 0.0 : sub.total.space(p, z))));

    double prev_sup = std::numeric_limits<double>::infinity();
    for (int j = 0; j < t_grid; ++j) {
      const double t = ts[j];
      const CylinderFunction cf = cylinder_function(sub, p, t);
      ++checks[p];
      shift_excess[p] = std::max(shift_excess[p], cf.max_shift - t);
      if (cf.max_shift > t) {
        int witness = -1;
        for (int z = 0; z < n; ++z)
          if (std::abs(cf.increments[z]) > t) witness = z;
        local[p].push_back({p, t, witness, cf.max_shift - t, "shift-bound"});
      }
      const double sup_fb = std::max(base_sup - t, 0.0);
      if (sup_fb > prev_sup) local[p].push_back({p, t, -1, sup_fb - prev_sup, "monotone-approach"});
      prev_sup = sup_fb;

      if (j == t_grid - 1) {
        double sup = 0.0;
        for (int z = 0; z < n; ++z) sup = std::max(sup, std::abs(cf.values[z] - fb[z]));
        sup_rho0[p] = sup;
        if (sup > sub.epsilon + fp_guard)
          local[p].push_back({p, t, -1, sup - sub.epsilon, "endpoint-identity"});
      }
    }
  }

  for (int p = 0; p < n; ++p) {
    audit.checks += checks[p];
    audit.max_shift_excess = std::max(audit.max_shift_excess, shift_excess[p]);
    audit.max_sup_at_rho0 = std::max(audit.max_sup_at_rho0, sup_rho0[p]);
    audit.violations.insert(audit.violations.end(), local[p].begin(), local[p].end());
  }
  return audit;
}

ReachWitness reach_probe(const KuratowskiFrame& frame, int p, int q) {
  if (p == q) throw Error(Errc::BadArguments, "reach probe needs two distinct points");
  const FiniteMetricSpace& space = frame.space();
  const int n = space.size();

  ReachWitness w;
  w.p = p;
  w.q = q;
  w.delta = space(p, q);
  w.half_delta = w.delta / 2.0;
  w.f.resize(n);
  const auto rp = frame.vector(p), rq = frame.vector(q);
  for (int z = 0; z < n; ++z) w.f[z] = 0.5 * (rp[z] + rq[z]);

  w.dist_to_p = sup_distance(w.f, frame.vector_copy(p));
  w.dist_to_q = sup_distance(w.f, frame.vector_copy(q));
  w.min_value = *std::min_element(w.f.begin(), w.f.end());

  w.min_over_sample = std::numeric_limits<double>::infinity();
  constexpr double kGuard = 1e-12;
  for (int r = 0; r < n; ++r) {
    const double s = sup_distance(frame.vector_copy(r), w.f);
    w.min_over_sample = std::min(w.min_over_sample, s);
    if (s < w.half_delta - kGuard)
      throw Error(Errc::StrictlyCloserPoint,
                  "point " + std::to_string(r) + " is strictly closer to the witness than " +
                      std::to_string(w.half_delta) + " (got " + std::to_string(s) +
                      "); the metric violates the triangle inequality",
                  {{"r", std::to_string(r)}, {"sup", std::to_string(s)}});
  }
  return w;
}

ProjectionWitness unique_projection_witness(const KuratowskiFrame& frame, int p, double delta) {
  if (!(delta > 0)) throw Error(Errc::BadArguments, "shift delta must be positive");
  const int n = frame.size();
  ProjectionWitness w;
  w.p = p;
  w.delta = delta;
  w.f = frame.vector_copy(p);
  for (double& v : w.f) v += delta;
  w.dist_to_p = sup_distance(w.f, frame.vector_copy(p));

  w.margin = std::numeric_limits<double>::infinity();
  for (int q = 0; q < n; ++q) {
    if (q == p) continue;
    const double s = sup_distance(w.f, frame.vector_copy(q));
    if (s - delta < w.margin) {
      w.margin = s - delta;
      w.runner_up = q;
    }
  }
  return w;
}

}  // namespace fillrad
