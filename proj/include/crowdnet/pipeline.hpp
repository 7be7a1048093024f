#pragma once

// Analysis stages. Each stage produces one JSON document that records the
// hash of what it was computed from, so stage outputs can be written out,
// inspected and fed back in.
//
//   dataset --network--> graph.json --cluster--> partition.json
//   graph + partition --------------------------> network_summary.json
//   dataset + partition --metrics--> metrics.json --stats--> anova.json

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "crowdnet/centrality.hpp"
#include "crowdnet/community.hpp"
#include "crowdnet/dataset.hpp"
#include "crowdnet/graph.hpp"
#include "crowdnet/json_format.hpp"
#include "crowdnet/worker_metrics.hpp"

namespace crowdnet {

inline constexpr const char* kToolVersion = "0.1.0";

enum class AnovaUnit { Worker, Cell };

struct AnalysisOptions {
  EdgeWeighting weighting = EdgeWeighting::Unweighted;
  std::uint32_t min_weight = 1;
  NeighborScope cn_scope = NeighborScope::Cluster;
  AnovaUnit anova_unit = AnovaUnit::Worker;
  /// Activity window; defaults to the months spanned by task postings.
  std::optional<MonthWindow> window;
};

std::string_view to_string(EdgeWeighting w);
std::string_view to_string(NeighborScope s);
std::string_view to_string(AnovaUnit u);

/// Hash of a document's serialized text.
std::string document_hash(const json& doc);

/// Active-worker co-registration network, isolated workers dropped.
json network_stage(const Dataset& data, const AnalysisOptions& opts);
WorkerGraph graph_from_json(const json& graph_doc);

/// Throws GraphError when the network has no edges.
json cluster_stage(const json& graph_doc, const AnalysisOptions& opts);
/// Node-indexed assignment aligned with graph_from_json(graph_doc).
std::vector<std::uint32_t> assignment_from_json(const json& partition_doc, const WorkerGraph& g);

json network_summary_stage(const json& graph_doc, const json& partition_doc, const AnalysisOptions& opts);

json metrics_stage(const Dataset& data, const json& partition_doc);
/// The in-memory table behind metrics_stage.
MetricTable metric_table_for(const Dataset& data, const json& partition_doc);

json stats_stage(const json& metrics_doc, const AnalysisOptions& opts);

struct StageTiming {
  std::string stage;
  double seconds = 0.0;
};

struct PipelineRun {
  std::string dataset_checksum;
  AnalysisOptions options;
  json graph, partition, network_summary, metrics, anova;
  /// Provenance: tool version, seed, options and the stage hash chain.
  json run;
  /// Wall-clock per stage. Never serialized, so reruns stay byte-identical.
  std::vector<StageTiming> timings;
};

PipelineRun run_pipeline(const Dataset& data, const AnalysisOptions& opts);

/// Writes the JSON documents, report.md and charts/*.svg.
void write_run(const PipelineRun& run, const std::filesystem::path& dir);

void write_json(const json& doc, const std::filesystem::path& path);
json read_json(const std::filesystem::path& path);

}  // namespace crowdnet
