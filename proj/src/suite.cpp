#include "fillrad/suite.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "fillrad/bounds.hpp"
#include "fillrad/constructions.hpp"
#include "fillrad/io.hpp"
#include "fillrad/persistence.hpp"
#include "fillrad/samples.hpp"

namespace fillrad::suite {

namespace {

constexpr double kPi = std::numbers::pi;

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

std::string fmt(double v) { return io::format_double(v); }

bool verdict_passed(const BoundReport& rep, const std::string& name) {
  for (const auto& v : rep.verdicts)
    if (v.bound == name) return v.passed;
  return false;
}

/// Random 8-point metric: perturbed Euclidean with a constant bump that keeps
/// the triangle inequality strict.
FiniteMetricSpace random_small_metric(std::mt19937_64& rng) {
  const auto u01 = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  const int n = 8;
  std::vector<std::array<double, 3>> pts(n);
  for (auto& p : pts) p = {u01(), u01(), u01()};
  RawMatrix m;
  m.n = n;
  m.d.assign(static_cast<size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double dx = pts[i][0] - pts[j][0], dy = pts[i][1] - pts[j][1],
                   dz = pts[i][2] - pts[j][2];
      const double v = std::sqrt(dx * dx + dy * dy + dz * dz) + 0.1 + 0.02 * u01();
      m.at(i, j) = v;
      m.at(j, i) = v;
    }
  return validate_metric(m);
}

std::vector<int> draw_distinct(std::mt19937_64& rng, int n, int count) {
  std::vector<int> all(n);
  for (int i = 0; i < n; ++i) all[i] = i;
  for (int i = 0; i < count; ++i) {
    const int j = i + static_cast<int>(rng() % static_cast<std::uint64_t>(n - i));
    std::swap(all[i], all[j]);
  }
  all.resize(count);
  return all;
}

void write_artifacts(const std::filesystem::path& dir, const std::string& name,
                     const ManifoldSample& sample, const FillRadEstimate& est,
                     const BoundReport& rep, const std::vector<std::vector<int>>* fibers) {
  io::write_csv(dir / (name + ".csv"), sample.space);
  io::write_json(dir / (name + ".json"), io::sidecar_json(sample, fibers));
  io::write_json(dir / (name + ".est.json"), io::estimate_json(est));
  io::write_json(dir / (name + ".report.json"), io::report_json(rep));
}

}  // namespace

bool SuiteResult::all_passed() const {
  return std::all_of(criteria.begin(), criteria.end(),
                     [](const CriterionResult& c) { return c.passed; });
}

SuiteResult run_acceptance(const std::filesystem::path& out_dir) {
  const bool artifacts = !out_dir.empty();
  if (artifacts) std::filesystem::create_directories(out_dir);

  SuiteResult result;
  const auto add = [&result](int id, const std::string& name, bool pass,
                             const std::string& detail, double secs) {
    result.criteria.push_back({id, name, pass, detail, secs});
  };

  // --- 1: circle estimate hits the exact value -------------------------
  Timer t1;
  const ManifoldSample circle = sample_circle(2 * kPi, 128);
  const FillRadEstimate circle_est = estimate_fillrad(circle, 1);
  {
    const double target = kPi / 3;
    const double err = std::abs(circle_est.estimate - target);
    const double secs = t1.seconds();
    add(1, "circle estimate = pi/3 within 0.05, under 10 s", err <= 0.05 && secs < 10.0,
        "estimate " + fmt(circle_est.estimate) + ", target " + fmt(target) + ", error " +
            fmt(err),
        secs);
  }

  // --- 2: sphere estimate within 10% of the closed form ----------------
  Timer t2;
  const ManifoldSample sphere = sample_sphere(2, 150, 0);
  const FillRadEstimate sphere_est = estimate_fillrad(sphere, 2);
  {
    const double target = 0.5 * std::acos(-1.0 / 3.0);
    const double rel = std::abs(sphere_est.estimate - target) / target;
    const double secs = t2.seconds();
    add(2, "sphere2 estimate within 10% of (1/2) arccos(-1/3), under 120 s",
        rel <= 0.10 && secs < 120.0 && sphere_est.simplices <= kDefaultSimplexBudget,
        "estimate " + fmt(sphere_est.estimate) + ", target " + fmt(target) + ", rel error " +
            fmt(rel) + ", simplices " + std::to_string(sphere_est.simplices),
        secs);
  }

  // --- 3: curvature lower bound sandwich + negative control ------------
  {
    Timer t;
    const BoundReport circle_rep = check_bounds(circle, circle_est);
    const BoundReport sphere_rep = check_bounds(sphere, sphere_est);
    ManifoldSample corrupted = circle;
    corrupted.inj = 10.0;  // overstated injectivity radius must fail loudly
    corrupted.fillrad_true.reset();
    const BoundReport bad_rep = check_bounds(corrupted, circle_est);
    const bool pass = verdict_passed(circle_rep, "lower<=estimate") &&
                      verdict_passed(sphere_rep, "lower<=estimate") &&
                      !verdict_passed(bad_rep, "lower<=estimate");
    add(3, "lower bound (1/4) min(inj, pi/sqrt(delta)) <= estimate; corrupted inj fails", pass,
        "circle lower " + fmt(circle_rep.lower.value_or(-1)) + ", sphere lower " +
            fmt(sphere_rep.lower.value_or(-1)) + ", corrupted lower " +
            fmt(bad_rep.lower.value_or(-1)),
        t.seconds());
  }

  // --- 4: Katz diameter bound, tight on the circle ---------------------
  {
    Timer t;
    const double circle_katz = katz_bound(*circle.diam_true);
    const double sphere_katz = katz_bound(*sphere.diam_true);
    const double circle_rel = std::abs(circle_est.estimate - circle_katz) / circle_katz;
    const BoundReport sphere_rep = check_bounds(sphere, sphere_est);
    const bool pass = circle_rel <= 0.05 && verdict_passed(sphere_rep, "estimate<=katz");
    add(4, "estimate within 5% of diam/3 on the circle; sphere estimate <= diam/3", pass,
        "circle katz " + fmt(circle_katz) + " vs estimate " + fmt(circle_est.estimate) +
            " (rel " + fmt(circle_rel) + "), sphere katz " + fmt(sphere_katz) +
            " vs estimate " + fmt(sphere_est.estimate),
        t.seconds());
  }

  // --- 5: torus submersion + product bounds ----------------------------
  Timer t5;
  const SubmersionSample torus = sample_flat_torus(2 * kPi, 1.2 * kPi, 32, 20);
  EstimateConfig torus_cfg;
  torus_cfg.upper_bound = submersion_bound(torus);
  const FillRadEstimate torus_est = estimate_fillrad(torus.total, 2, torus_cfg);
  const BoundReport torus_rep = check_bounds(
      torus, torus_est, {product_fillrad(2 * kPi / 6, 1.2 * kPi / 6), std::nullopt, 0.0});
  {
    const double target = 0.2 * kPi;
    const double rel = std::abs(torus_est.estimate - target) / target;
    const double secs = t5.seconds();
    const bool pass = rel <= 0.10 && verdict_passed(torus_rep, "estimate<=submersion") &&
                      verdict_passed(torus_rep, "estimate==product") && secs < 300.0;
    add(5, "torus estimate within 10% of 0.2 pi; submersion 0.3 pi and product bounds hold",
        pass,
        "estimate " + fmt(torus_est.estimate) + ", target " + fmt(target) + ", submersion " +
            fmt(torus_rep.submersion.value_or(-1)) + ", product " +
            fmt(torus_rep.product.value_or(-1)),
        secs);
  }

  // --- 6: center-of-mass retraction fixes every Kuratowski row ---------
  {
    Timer t;
    const double R = 0.9 * kPi / 4;
    std::mt19937_64 rng(2026);
    const KuratowskiFrame circle_frame = kuratowski_embed(circle.space);
    const KuratowskiFrame sphere_frame = kuratowski_embed(sphere.space);
    const RetractionAudit ra_circle =
        retraction_audit(circle_frame, R, draw_distinct(rng, circle.space.size(), 50), 8, 0, 11);
    const RetractionAudit ra_sphere =
        retraction_audit(sphere_frame, R, draw_distinct(rng, sphere.space.size(), 50), 8, 0, 12);
    const bool pass = ra_circle.fixed_fraction == 1.0 && ra_sphere.fixed_fraction == 1.0;
    add(6, "frechet_retract(dist_p) = p for 50 sampled p on circle and sphere2 at R=0.9 pi/4",
        pass,
        "circle fixed fraction " + fmt(ra_circle.fixed_fraction) + ", sphere fixed fraction " +
            fmt(ra_sphere.fixed_fraction),
        t.seconds());
  }

  // --- 7: mapping cylinder homotopy ------------------------------------
  {
    Timer t;
    const CylinderAudit audit = cylinder_audit(torus, 16);
    const bool pass = audit.violations.empty() && audit.max_shift_excess <= 0.0 &&
                      audit.max_sup_at_rho0 <= torus.epsilon + 1e-12;
    add(7, "cylinder functions: shift bound exact, endpoint matches f_b, zero violations", pass,
        std::to_string(audit.checks) + " checks, max shift excess " +
            fmt(audit.max_shift_excess) + ", sup at rho0 " + fmt(audit.max_sup_at_rho0) +
            ", epsilon " + fmt(audit.epsilon),
        t.seconds());
  }

  // --- 8: reach witnesses down to the mesh scale ------------------------
  {
    Timer t;
    const KuratowskiFrame frame = kuratowski_embed(sphere.space);
    const int n = sphere.space.size();
    std::mt19937_64 rng(77);
    bool pass = true;
    std::ostringstream detail;
    double min_delta = std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < 20 && pass; ++trial) {
      const int p = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
      int q;
      if (trial % 2 == 0) {  // nearest neighbor: delta at the sample mesh
        q = p == 0 ? 1 : 0;
        for (int r = 0; r < n; ++r)
          if (r != p && sphere.space(p, r) < sphere.space(p, q)) q = r;
      } else {
        do {
          q = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
        } while (q == p);
      }
      try {
        const ReachWitness w = reach_probe(frame, p, q);
        min_delta = std::min(min_delta, w.delta);
        pass = pass && std::abs(w.dist_to_p - w.half_delta) <= 1e-12 &&
               std::abs(w.dist_to_q - w.half_delta) <= 1e-12 &&
               w.min_over_sample >= w.half_delta - 1e-12 && w.min_value > 0;
        if (!pass) detail << "witness (" << p << "," << q << ") failed; ";
      } catch (const Error& e) {
        pass = false;
        detail << e.what();
      }
    }
    for (int trial = 0; trial < 20 && pass; ++trial) {
      const int p = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
      const double delta =
          1e-3 + (kPi - 1e-3) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
      const ProjectionWitness w = unique_projection_witness(frame, p, delta);
      pass = pass && std::abs(w.dist_to_p - delta) <= 1e-12 && w.margin > 0;
      if (!pass) detail << "projection witness (" << p << "," << fmt(delta) << ") failed; ";
    }
    detail << "smallest delta " << fmt(min_delta) << " (mesh " << fmt(sphere.epsilon) << ")";
    add(8, "reach witnesses equidistant to 1e-12, no closer point; shifted rows project to p",
        pass, detail.str(), t.seconds());
  }

  // --- 9: reduction matches the textbook oracle ------------------------
  {
    Timer t;
    std::mt19937_64 rng(99);
    int agree = 0;
    const int trials = 100;
    for (int trial = 0; trial < trials; ++trial) {
      const FiniteMetricSpace space = random_small_metric(rng);
      const Filtration f =
          build_vr_filtration(space, 2, space.max_distance() * 1.01, kDefaultSimplexBudget);
      if (reduce(f) == reduce_naive(f)) ++agree;
    }
    add(9, "reduce == reduce_naive on 100 random 8-point spaces, maxdim 2", agree == trials,
        std::to_string(agree) + "/" + std::to_string(trials) + " identical barcodes",
        t.seconds());
  }

  // --- 10: scaling homogeneity + Lipschitz comparison tight case -------
  {
    Timer t;
    const ManifoldSample small_circle = sample_circle(2 * kPi, 96);
    const ScalingReport sc = scaling_check(small_circle, 2.0, 1);
    ManifoldSample doubled = small_circle;
    doubled.space = scale_metric(small_circle.space, 2.0);
    doubled.inj = *small_circle.inj * 2;
    doubled.diam_true = *small_circle.diam_true * 2;
    doubled.fillrad_true = *small_circle.fillrad_true * 2;
    doubled.label = "circle-doubled";
    std::vector<int> identity(small_circle.space.size());
    for (size_t i = 0; i < identity.size(); ++i) identity[i] = static_cast<int>(i);
    const LipschitzReport lip =
        lipschitz_comparison(small_circle, doubled, identity, 1, true);
    const bool tight = std::abs(lip.estimate_domain - lip.bound) <= 1e-12;
    const bool pass = sc.pass && lip.applicable && lip.dilation == 2.0 && lip.pass && tight;
    add(10, "scaling by 2 doubles the estimate to 1e-9; Lipschitz comparison is tight at C=2",
        pass,
        "scaling rel error " + fmt(sc.relative_error) + ", dilation " + fmt(lip.dilation) +
            ", domain estimate " + fmt(lip.estimate_domain) + ", bound " + fmt(lip.bound),
        t.seconds());
  }

  // --- artifact reports for the sampled manifolds ----------------------
  {
    Timer t;
    const BoundReport circle_rep = check_bounds(circle, circle_est);
    const BoundReport sphere_rep = check_bounds(sphere, sphere_est);

    const SubmersionSample rp2 = sample_projective_plane(90, 0);
    const FillRadEstimate rp2_est = estimate_fillrad(rp2.base, 2);
    const BoundReport rp2_rep = check_bounds(rp2.base, rp2_est);

    const SubmersionSample quot = sample_circle_quotient(2 * kPi, 120, 4);
    const FillRadEstimate quot_est = estimate_fillrad(quot.total, 1);
    const BoundReport quot_rep = check_bounds(quot, quot_est);

    if (artifacts) {
      write_artifacts(out_dir, "circle", circle, circle_est, circle_rep, nullptr);
      write_artifacts(out_dir, "sphere2", sphere, sphere_est, sphere_rep, nullptr);
      write_artifacts(out_dir, "torus", torus.total, torus_est, torus_rep, &torus.fibers);
      write_artifacts(out_dir, "rp2", rp2.base, rp2_est, rp2_rep, nullptr);
      write_artifacts(out_dir, "quotient", quot.total, quot_est, quot_rep, &quot.fibers);
    }
    const bool pass = circle_rep.all_passed() && sphere_rep.all_passed() &&
                      torus_rep.all_passed() && rp2_rep.all_passed() && quot_rep.all_passed();
    std::ostringstream detail;
    detail << "rp2 estimate " << fmt(rp2_est.estimate) << " in [" << fmt(kPi / 8) << ", "
           << fmt(kPi / 6) << " + tol], quotient estimate " << fmt(quot_est.estimate)
           << " vs known " << fmt(quot_rep.known.value_or(-1));
    add(11, "bound reports pass for circle, sphere2, torus, rp2, quotient", pass, detail.str(),
        t.seconds());
  }

  return result;
}

}  // namespace fillrad::suite
