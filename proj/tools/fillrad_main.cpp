#include <cmath>
#include <cstdlib>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fillrad/bounds.hpp"
#include "fillrad/constructions.hpp"
#include "fillrad/io.hpp"
#include "fillrad/persistence.hpp"
#include "fillrad/samples.hpp"
#include "fillrad/suite.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using namespace fillrad;
using fillrad::io::json;

constexpr double kPi = std::numbers::pi;

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::BadArguments:
      return 2;
    case Errc::SimplexBudgetExceeded:
      return 3;
    default:
      return 1;
  }
}

void apply_thread_override() {
#ifdef _OPENMP
  if (const char* env = std::getenv("FILLRAD_THREADS")) {
    const int t = std::atoi(env);
    if (t > 0) omp_set_num_threads(t);
  }
#endif
}

struct SampleArgs {
  std::string manifold;
  std::string out;
  std::string sidecar;
  double circumference = 2 * kPi;
  int n = 128;
  std::uint64_t seed = 0;
  double big = 2 * kPi, small = 1.2 * kPi;
  int n_big = 32, n_small = 20;
  int pairs = 90;
  int order = 4;
  int k = 2;
  double radius = 1.0;
};

void run_sample(const SampleArgs& a) {
  const std::string sidecar = a.sidecar.empty()
                                  ? std::filesystem::path(a.out).replace_extension(".json").string()
                                  : a.sidecar;
  ManifoldSample sample;
  const std::vector<std::vector<int>>* fibers = nullptr;
  SubmersionSample sub;

  if (a.manifold == "circle") {
    sample = sample_circle(a.circumference, a.n);
  } else if (a.manifold == "sphere2") {
    sample = sample_sphere(2, a.n, a.seed);
  } else if (a.manifold == "sphere3") {
    sample = sample_sphere(3, a.n, a.seed);
  } else if (a.manifold == "torus") {
    sub = sample_flat_torus(a.big, a.small, a.n_big, a.n_small);
    sample = sub.total;
    fibers = &sub.fibers;
  } else if (a.manifold == "rp2") {
    sub = sample_projective_plane(a.pairs, a.seed);
    sample = sub.base;
  } else if (a.manifold == "quotient") {
    sub = sample_circle_quotient(a.circumference, a.n, a.order);
    sample = sub.total;
    fibers = &sub.fibers;
  } else if (a.manifold == "graph") {
    // circle in the plane, chord lengths as the local metric
    std::vector<std::vector<double>> pts(a.n);
    for (int i = 0; i < a.n; ++i) {
      const double th = 2 * kPi * i / a.n;
      pts[i] = {a.radius * std::cos(th), a.radius * std::sin(th)};
    }
    const LocalMetric chord = [](std::span<const double> x, std::span<const double> y) {
      return std::hypot(x[0] - y[0], x[1] - y[1]);
    };
    sample.space = graph_geodesics(pts, chord, a.k);
    sample.dim = 1;
    sample.label = "graph";
    sample.seed = a.seed;
    sample.epsilon = mesh_of(sample.space);
  } else {
    throw Error(Errc::BadArguments, "unknown manifold '" + a.manifold + "'");
  }

  io::write_csv(a.out, sample.space);
  io::write_json(sidecar, io::sidecar_json(sample, fibers));
  std::cout << "wrote " << a.out << " (" << sample.space.size() << " points) and " << sidecar
            << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  apply_thread_override();

  CLI::App app{"filling-radius estimation via Vietoris-Rips persistence on the Kuratowski "
               "embedding, with bound certificates and constructive probes"};
  app.require_subcommand(1);

  SampleArgs sa;
  auto* sample_cmd = app.add_subcommand("sample", "emit a distance CSV + JSON sidecar");
  sample_cmd->add_option("--manifold", sa.manifold,
                         "circle|sphere2|sphere3|torus|rp2|quotient|graph")
      ->required();
  sample_cmd->add_option("--out", sa.out, "distance CSV path")->required();
  sample_cmd->add_option("--sidecar", sa.sidecar, "sidecar path (default: out with .json)");
  sample_cmd->add_option("--circumference", sa.circumference, "circle/quotient circumference");
  sample_cmd->add_option("--n", sa.n, "point count");
  sample_cmd->add_option("--seed", sa.seed, "lattice offset seed");
  sample_cmd->add_option("--big", sa.big, "torus: big circumference");
  sample_cmd->add_option("--small", sa.small, "torus: small circumference");
  sample_cmd->add_option("--n-big", sa.n_big, "torus: big grid count");
  sample_cmd->add_option("--n-small", sa.n_small, "torus: small grid count");
  sample_cmd->add_option("--pairs", sa.pairs, "rp2: antipodal pair count");
  sample_cmd->add_option("--order", sa.order, "quotient: cyclic group order");
  sample_cmd->add_option("--k", sa.k, "graph: neighbor count");
  sample_cmd->add_option("--radius", sa.radius, "graph: circle radius");

  struct {
    std::string in, out;
    int maxdim = 2;
    double threshold = 0;
    std::uint64_t budget = kDefaultSimplexBudget;
  } pa;
  auto* persist_cmd = app.add_subcommand("persist", "Vietoris-Rips barcode of a distance CSV");
  persist_cmd->add_option("--in", pa.in, "distance CSV")->required();
  persist_cmd->add_option("--maxdim", pa.maxdim, "top simplex dimension")->required();
  persist_cmd->add_option("--threshold", pa.threshold, "diameter cap")->required();
  persist_cmd->add_option("--budget", pa.budget, "simplex budget");
  persist_cmd->add_option("--out", pa.out, "barcode JSON path")->required();

  struct {
    std::string in, meta, out;
    int dim = 1;
    std::optional<double> r_max;
    double min_gap = 2.0;
    std::uint64_t budget = kDefaultSimplexBudget;
  } fa;
  auto* fillrad_cmd = app.add_subcommand("fillrad", "filling-radius estimate in one degree");
  fillrad_cmd->add_option("--in", fa.in, "distance CSV")->required();
  fillrad_cmd->add_option("--dim", fa.dim, "homology degree k")->required();
  fillrad_cmd->add_option("--meta", fa.meta, "sidecar JSON with metadata");
  fillrad_cmd->add_option("--r-max", fa.r_max, "explicit threshold");
  fillrad_cmd->add_option("--min-gap", fa.min_gap, "dominant-bar gap guard");
  fillrad_cmd->add_option("--budget", fa.budget, "simplex budget");
  fillrad_cmd->add_option("--out", fa.out, "estimate JSON path")->required();

  struct {
    std::string in, meta, est, out;
    std::optional<double> product, warped;
    double extra_tol = 0;
  } ba;
  auto* bounds_cmd = app.add_subcommand("bounds", "evaluate every applicable bound certificate");
  bounds_cmd->add_option("--in", ba.in, "distance CSV")->required();
  bounds_cmd->add_option("--meta", ba.meta, "sidecar JSON")->required();
  bounds_cmd->add_option("--est", ba.est, "estimate JSON")->required();
  bounds_cmd->add_option("--product", ba.product, "Gromov product value, when known");
  bounds_cmd->add_option("--warped", ba.warped, "warped-product value, when known");
  bounds_cmd->add_option("--extra-tol", ba.extra_tol, "extra verdict tolerance");
  bounds_cmd->add_option("--out", ba.out, "report JSON path")->required();

  struct {
    std::string kind, in, meta, out;
    int p = 0, q = 1;
    double delta = 1.0, R = 0.7;
    int samples = 50, tgrid = 16;
    std::uint64_t seed = 7;
  } pr;
  auto* probe_cmd = app.add_subcommand("probe", "constructive proof probes (audit JSON)");
  probe_cmd->add_option("kind", pr.kind, "reach|project|retract|cylinder")->required();
  probe_cmd->add_option("--in", pr.in, "distance CSV")->required();
  probe_cmd->add_option("--meta", pr.meta, "sidecar JSON (cylinder: needs fibers)");
  probe_cmd->add_option("--p", pr.p, "first point index");
  probe_cmd->add_option("--q", pr.q, "second point index");
  probe_cmd->add_option("--delta", pr.delta, "shift for the projection witness");
  probe_cmd->add_option("--R", pr.R, "retraction radius");
  probe_cmd->add_option("--samples", pr.samples, "retraction: sampled points");
  probe_cmd->add_option("--tgrid", pr.tgrid, "cylinder: t-grid size");
  probe_cmd->add_option("--seed", pr.seed, "probe RNG seed");
  probe_cmd->add_option("--out", pr.out, "audit JSON path")->required();

  struct {
    std::string out_dir = "suite-out";
  } su;
  auto* suite_cmd = app.add_subcommand("suite", "run every acceptance scenario");
  suite_cmd->add_option("--out-dir", su.out_dir, "artifact directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;  // usage errors exit 2; --help exits 0
  }

  try {
    if (*sample_cmd) {
      run_sample(sa);
    } else if (*persist_cmd) {
      const FiniteMetricSpace space = validate_metric(io::read_csv(pa.in));
      const Filtration f = build_vr_filtration(space, pa.maxdim, pa.threshold, pa.budget);
      io::write_json(pa.out, io::barcode_json(reduce(f)));
      std::cout << "wrote " << pa.out << "\n";
    } else if (*fillrad_cmd) {
      const io::LoadedSample loaded = io::read_sample(
          fa.in, fa.meta.empty() ? std::nullopt
                                 : std::optional<std::filesystem::path>(fa.meta));
      EstimateConfig cfg;
      cfg.r_max = fa.r_max;
      cfg.min_gap = fa.min_gap;
      cfg.simplex_budget = fa.budget;
      if (loaded.fibers) cfg.upper_bound = submersion_bound(loaded.submersion());
      const FillRadEstimate est = estimate_fillrad(loaded.sample, fa.dim, cfg);
      io::write_json(fa.out, io::estimate_json(est));
      std::cout << "estimate " << io::format_double(est.estimate) << " (degree " << est.k
                << "), wrote " << fa.out << "\n";
    } else if (*bounds_cmd) {
      const io::LoadedSample loaded =
          io::read_sample(ba.in, std::optional<std::filesystem::path>(ba.meta));
      const FillRadEstimate est = io::estimate_from_json(io::read_json(ba.est));
      BoundInputs inputs;
      inputs.product = ba.product;
      inputs.warped = ba.warped;
      inputs.extra_tolerance = ba.extra_tol;
      const BoundReport rep = loaded.fibers
                                  ? check_bounds(loaded.submersion(), est, inputs)
                                  : check_bounds(loaded.sample, est, inputs);
      io::write_json(ba.out, io::report_json(rep));
      std::cout << io::report_table(rep);
      if (!rep.all_passed()) return 1;
    } else if (*probe_cmd) {
      const io::LoadedSample loaded = io::read_sample(
          pr.in, pr.meta.empty() ? std::nullopt
                                 : std::optional<std::filesystem::path>(pr.meta));
      const KuratowskiFrame frame = kuratowski_embed(loaded.sample.space);
      json out;
      bool clean = true;
      if (pr.kind == "reach") {
        out = io::reach_audit_json(reach_probe(frame, pr.p, pr.q));
      } else if (pr.kind == "project") {
        const ProjectionWitness w = unique_projection_witness(frame, pr.p, pr.delta);
        out = io::projection_audit_json(w);
        clean = w.margin > 0;
      } else if (pr.kind == "retract") {
        std::vector<int> pts;
        for (int i = 0; i < loaded.sample.space.size() && static_cast<int>(pts.size()) < pr.samples;
             ++i)
          pts.push_back(i);
        out = io::retraction_audit_json(retraction_audit(frame, pr.R, pts, 16, 0, pr.seed));
      } else if (pr.kind == "cylinder") {
        const CylinderAudit audit = cylinder_audit(loaded.submersion(), pr.tgrid);
        out = io::cylinder_audit_json(audit);
        clean = audit.violations.empty();
      } else {
        throw Error(Errc::BadArguments, "unknown probe '" + pr.kind + "'");
      }
      io::write_json(pr.out, out);
      std::cout << "wrote " << pr.out << "\n";
      if (!clean) return 1;
    } else if (*suite_cmd) {
      const suite::SuiteResult res = suite::run_acceptance(su.out_dir);
      for (const auto& c : res.criteria)
        std::cout << "[" << (c.passed ? "PASS" : "FAIL") << "] " << c.id << ". " << c.name
                  << ": " << c.detail << " (" << io::format_double(c.seconds) << " s)\n";
      std::cout << (res.all_passed() ? "suite: all criteria passed\n"
                                     : "suite: FAILURES present\n");
      if (!res.all_passed()) return 1;
    }
  } catch (const Error& e) {
    json err;
    err["error"] = errc_name(e.code());
    err["context"] = json::object();
    for (const auto& [k, v] : e.context()) err["context"][k] = v;
    err["message"] = e.what();
    std::cerr << err.dump() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    json err;
    err["error"] = "Unexpected";
    err["context"] = json::object();
    err["message"] = e.what();
    std::cerr << err.dump() << "\n";
    return 1;
  }
  return 0;
}
