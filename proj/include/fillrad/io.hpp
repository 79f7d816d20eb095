#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "fillrad/bounds.hpp"
#include "fillrad/constructions.hpp"
#include "fillrad/persistence.hpp"
#include "fillrad/samples.hpp"

namespace fillrad::io {

using json = nlohmann::json;

/// Shortest decimal that round-trips to the same double.
std::string format_double(double v);

RawMatrix read_csv(const std::filesystem::path& path);
void write_csv(const std::filesystem::path& path, const FiniteMetricSpace& space);

/// Atomic writes: temp file in the same directory, then rename.
void write_text(const std::filesystem::path& path, const std::string& content);
void write_json(const std::filesystem::path& path, const json& j);
json read_json(const std::filesystem::path& path);

json sidecar_json(const ManifoldSample& sample,
                  const std::vector<std::vector<int>>* fibers = nullptr);

struct LoadedSample {
  ManifoldSample sample;
  std::optional<std::vector<std::vector<int>>> fibers;

  /// Rebuilds the SubmersionSample from the fiber partition.
  SubmersionSample submersion() const;
};

/// Distance CSV (validated) plus optional metadata sidecar.
LoadedSample read_sample(const std::filesystem::path& csv,
                         const std::optional<std::filesystem::path>& sidecar);

json barcode_json(const Barcode& bc);
json estimate_json(const FillRadEstimate& est);
FillRadEstimate estimate_from_json(const json& j);
json report_json(const BoundReport& rep);
std::string report_table(const BoundReport& rep);

json reach_audit_json(const ReachWitness& w);
json projection_audit_json(const ProjectionWitness& w);
json retraction_audit_json(const RetractionAudit& a);
json cylinder_audit_json(const CylinderAudit& a);

}  // namespace fillrad::io
