#include "fillrad/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace fillrad::io {

namespace {

double json_or(const json& j, const char* key, double fallback) {
  if (!j.contains(key) || j[key].is_null()) return fallback;
  return j[key].get<double>();
}

std::optional<double> opt_of(const json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return j[key].get<double>();
}

json opt_json(const std::optional<double>& v) {
  if (!v) return nullptr;
  return *v;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

RawMatrix read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open " + path.string());
  RawMatrix m;
  std::string line;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    const char* p = line.data();
    const char* end = line.data() + line.size();
    while (p < end) {
      double v = 0;
      const auto res = std::from_chars(p, end, v);
      if (res.ec != std::errc{})
        throw Error(Errc::IoError, "bad number in " + path.string() + ": '" + line + "'");
      row.push_back(v);
      p = res.ptr;
      if (p < end) {
        if (*p != ',') throw Error(Errc::IoError, "expected ',' in " + path.string());
        ++p;
      }
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(Errc::IoError, "empty distance file " + path.string());
  m.n = static_cast<int>(rows.size());
  for (const auto& row : rows)
    if (row.size() != rows.size())
      throw Error(Errc::NotSquare, path.string() + " is not a square matrix");
  m.d.reserve(static_cast<size_t>(m.n) * m.n);
  for (const auto& row : rows) m.d.insert(m.d.end(), row.begin(), row.end());
  return m;
}

void write_csv(const std::filesystem::path& path, const FiniteMetricSpace& space) {
  std::string out;
  const int n = space.size();
  out.reserve(static_cast<size_t>(n) * n * 8);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (j) out.push_back(',');
      out += format_double(space(i, j));
    }
    out.push_back('\n');
  }
  write_text(path, out);
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::IoError, "cannot write " + tmp.string());
    out << content;
    if (!out) throw Error(Errc::IoError, "short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void write_json(const std::filesystem::path& path, const json& j) {
  write_text(path, j.dump(2) + "\n");
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw Error(Errc::IoError, "bad JSON in " + path.string() + ": " + e.what());
  }
  return j;
}

json sidecar_json(const ManifoldSample& sample, const std::vector<std::vector<int>>* fibers) {
  json j;
  j["label"] = sample.label;
  j["dim"] = sample.dim;
  j["inj"] = opt_json(sample.inj);
  j["delta"] = opt_json(sample.delta);
  j["diam_true"] = opt_json(sample.diam_true);
  j["fillrad_true"] = opt_json(sample.fillrad_true);
  j["orientable"] = sample.orientable;
  j["seed"] = sample.seed;
  j["epsilon"] = sample.epsilon;
  if (fibers != nullptr) j["fibers"] = *fibers;
  return j;
}

SubmersionSample LoadedSample::submersion() const {
  if (!fibers)
    throw Error(Errc::BadArguments, "sample '" + sample.label + "' carries no fiber partition");
  return quotient_metric(sample, *fibers);
}

LoadedSample read_sample(const std::filesystem::path& csv,
                         const std::optional<std::filesystem::path>& sidecar) {
  LoadedSample out;
  out.sample.space = validate_metric(read_csv(csv));
  out.sample.label = csv.stem().string();
  out.sample.epsilon = mesh_of(out.sample.space);
  if (!sidecar) return out;

  const json j = read_json(*sidecar);
  out.sample.label = j.value("label", out.sample.label);
  out.sample.dim = j.value("dim", 0);
  out.sample.inj = opt_of(j, "inj");
  out.sample.delta = opt_of(j, "delta");
  out.sample.diam_true = opt_of(j, "diam_true");
  out.sample.fillrad_true = opt_of(j, "fillrad_true");
  out.sample.orientable = j.value("orientable", true);
  out.sample.seed = j.value("seed", std::uint64_t{0});
  out.sample.epsilon = json_or(j, "epsilon", out.sample.epsilon);
  if (j.contains("fibers") && !j["fibers"].is_null())
    out.fibers = j["fibers"].get<std::vector<std::vector<int>>>();
  return out;
}

json barcode_json(const Barcode& bc) {
  json j;
  j["maxdim"] = bc.maxdim_homology;
  j["threshold"] = bc.threshold;
  j["pairs"] = json::array();
  for (const auto& p : bc.pairs)
    j["pairs"].push_back({{"dim", p.dim}, {"birth", p.birth}, {"death", p.death}});
  j["essentials"] = json::array();
  for (const auto& e : bc.essentials)
    j["essentials"].push_back({{"dim", e.dim}, {"birth", e.birth}});
  return j;
}

json estimate_json(const FillRadEstimate& est) {
  json j;
  j["k"] = est.k;
  j["estimate"] = est.estimate;
  j["bar"] = {{"birth", est.birth}, {"death", est.death}};
  j["convention"] = est.convention;
  // non-finite confidence (no second bar) serializes as null
  j["confidence"] = est.confidence;
  j["threshold"] = est.threshold;
  j["simplices"] = est.simplices;
  j["n"] = est.n;
  return j;
}

FillRadEstimate estimate_from_json(const json& j) {
  FillRadEstimate est;
  est.k = j.at("k").get<int>();
  est.estimate = j.at("estimate").get<double>();
  est.birth = j.at("bar").at("birth").get<double>();
  est.death = j.at("bar").at("death").get<double>();
  est.convention = j.at("convention").get<std::string>();
  est.confidence = json_or(j, "confidence", std::numeric_limits<double>::infinity());
  est.threshold = j.value("threshold", 0.0);
  est.simplices = j.value("simplices", std::uint64_t{0});
  est.n = j.value("n", 0);
  return est;
}

json report_json(const BoundReport& rep) {
  json j;
  j["label"] = rep.label;
  j["estimate"] = estimate_json(rep.estimate);
  j["lower"] = opt_json(rep.lower);
  j["katz"] = opt_json(rep.katz);
  j["submersion"] = opt_json(rep.submersion);
  j["warped"] = opt_json(rep.warped);
  j["product"] = opt_json(rep.product);
  j["known"] = opt_json(rep.known);
  j["tolerance"] = rep.tolerance;
  j["verdicts"] = json::array();
  for (const auto& v : rep.verdicts)
    j["verdicts"].push_back({{"bound", v.bound},
                             {"value", v.value},
                             {"residual", v.residual},
                             {"tolerance", v.tolerance},
                             {"passed", v.passed}});
  return j;
}

std::string report_table(const BoundReport& rep) {
  std::ostringstream os;
  os << rep.label << ": estimate = " << format_double(rep.estimate.estimate) << " (degree "
     << rep.estimate.k << ", bar [" << format_double(rep.estimate.birth) << ", "
     << format_double(rep.estimate.death) << "))\n";
  size_t w = 12;
  for (const auto& v : rep.verdicts) w = std::max(w, v.bound.size());
  for (const auto& v : rep.verdicts) {
    os << "  " << v.bound << std::string(w - v.bound.size() + 2, ' ')
       << format_double(v.value) << "  residual " << format_double(v.residual) << "  "
       << (v.passed ? "pass" : "FAIL") << "\n";
  }
  return os.str();
}

json reach_audit_json(const ReachWitness& w) {
  json j;
  j["construct"] = "reach-witness";
  j["parameters"] = {{"p", w.p}, {"q", w.q}, {"delta", w.delta}};
  j["violations"] = json::array();
  const double eq_residual =
      std::max(std::abs(w.dist_to_p - w.half_delta), std::abs(w.dist_to_q - w.half_delta));
  j["max_residual"] = std::max(eq_residual, std::max(0.0, w.half_delta - w.min_over_sample));
  j["epsilon_used"] = 1e-12;
  j["half_delta"] = w.half_delta;
  j["dist_to_p"] = w.dist_to_p;
  j["dist_to_q"] = w.dist_to_q;
  j["min_over_sample"] = w.min_over_sample;
  j["min_value"] = w.min_value;
  return j;
}

json projection_audit_json(const ProjectionWitness& w) {
  json j;
  j["construct"] = "unique-projection";
  j["parameters"] = {{"p", w.p}, {"delta", w.delta}};
  j["violations"] = json::array();
  if (!(w.margin > 0))
    j["violations"].push_back({{"runner_up", w.runner_up}, {"margin", w.margin}});
  j["max_residual"] = std::abs(w.dist_to_p - w.delta);
  j["epsilon_used"] = 1e-12;
  j["margin"] = w.margin;
  j["runner_up"] = w.runner_up;
  return j;
}

json retraction_audit_json(const RetractionAudit& a) {
  json j;
  j["construct"] = "frechet-retraction";
  j["parameters"] = {{"R", a.R}, {"sampled", a.sampled}, {"eta", a.eta}};
  j["violations"] = json::array();
  j["fixed_fraction"] = a.fixed_fraction;
  j["fixed"] = a.fixed;
  j["max_residual"] = a.max_retract_displacement;
  j["epsilon_used"] = 0.0;
  j["continuity"] = json::array();
  for (const auto& c : a.continuity)
    j["continuity"].push_back({{"input_distance", c.input_distance},
                               {"retract_distance", c.retract_distance}});
  return j;
}

json cylinder_audit_json(const CylinderAudit& a) {
  json j;
  j["construct"] = "mapping-cylinder";
  j["parameters"] = {{"t_grid", a.t_grid}, {"rho0", a.rho0}};
  j["violations"] = json::array();
  for (const auto& v : a.violations)
    j["violations"].push_back(
        {{"p", v.p}, {"t", v.t}, {"z", v.z}, {"residual", v.residual}, {"kind", v.kind}});
  j["max_residual"] = std::max(a.max_shift_excess, a.max_sup_at_rho0);
  j["epsilon_used"] = a.epsilon;
  j["checks"] = a.checks;
  j["max_sup_at_rho0"] = a.max_sup_at_rho0;
  return j;
}

}  // namespace fillrad::io
