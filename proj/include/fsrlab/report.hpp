#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fsrlab/analyze.hpp"
#include "fsrlab/complex.hpp"
#include "fsrlab/graphs.hpp"

namespace fsrlab {

using Json = nlohmann::ordered_json;

// complex.v1. With cells = false only the census part is written.
Json complex_report(const Rule& rule, const LevelComplex& complex, bool cells = true);

struct AnalysisInputs {
  std::vector<PropertyVerdict> verdicts;
  std::optional<BoundedValenceReport> valence;
  std::vector<SeparationGraph> graphs;
  std::vector<CrosscheckReport> crosschecks;
  std::optional<GrowthConstants> growth;
  std::optional<BoundaryPairReport> boundary_pairs;
  DisjointMode mode = DisjointMode::ModelDisk;
};

// verdict.v1
Json verdict_report(const Rule& rule, const AnalysisInputs& in);
Json verdict_json(const PropertyVerdict& v);

// probe.v1
Json probe_report(const Rule& rule, const ProbeReport& report);

// graph.v1: level sizes and horizontal adjacency of a subdivision graph.
Json graph_report(const Rule& rule, const SubdivisionGraph& graph);

// The schema document for a name such as "verdict.v1"; throws on unknown names.
const Json& report_schema(const std::string& name);
std::vector<std::string> schema_names();

// Structural validation against the schema named by the document's "schema"
// key. Returns human-readable problems; empty means valid.
std::vector<std::string> schema_errors(const Json& document);

}  // namespace fsrlab
