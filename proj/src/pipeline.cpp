#include "crowdnet/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "crowdnet/data_io.hpp"
#include "crowdnet/error.hpp"
#include "crowdnet/report.hpp"
#include "crowdnet/stats.hpp"

namespace crowdnet {
namespace {

json summary_json(const MetricSummary& s) { return {{"mean", number(s.mean)}, {"std", number(s.std)}}; }

json optional_grid(const MetricTable::Grid& grid) {
  json rows = json::array();
  for (const auto& row : grid) {
    json cells = json::array();
    for (const auto& v : row) cells.push_back(number(v));
    rows.push_back(cells);
  }
  return rows;
}

json belt_names() {
  json out = json::array();
  for (auto b : kTableBelts) out.push_back(belt_name(b));
  return out;
}

std::vector<double> non_null(const json& values) {
  std::vector<double> out;
  for (const auto& v : values) {
    if (!v.is_null()) out.push_back(v.get<double>());
  }
  return out;
}

json anova_entry(const std::vector<std::vector<double>>& by_cluster, const std::string& observation) {
  std::vector<std::vector<double>> groups;
  json clusters = json::array();
  for (std::size_t c = 0; c < by_cluster.size(); ++c) {
    if (by_cluster[c].empty()) continue;
    groups.push_back(by_cluster[c]);
    clusters.push_back(c);
  }
  json entry = {{"observation", observation}, {"clusters", clusters}};
  auto absent = [&](const std::string& reason) {
    entry["available"] = false;
    entry["reason"] = reason;
    for (const char* key : {"f", "p_value", "df_between", "df_within", "ss_between", "ss_within",
                            "grand_mean"}) {
      entry[key] = nullptr;
    }
    entry["group_means"] = json::array();
    entry["group_sizes"] = json::array();
    entry["degenerate"] = false;
    return entry;
  };
  if (groups.size() < 2) return absent("fewer than two clusters have observations");
  AnovaResult r;
  try {
    r = one_way_anova(groups);
  } catch (const std::invalid_argument& e) {
    return absent(e.what());
  }
  entry["available"] = true;
  entry["reason"] = nullptr;
  entry["f"] = number(r.f);  // null when degenerate (infinite)
  entry["p_value"] = number(r.p_value);
  entry["df_between"] = r.df_between;
  entry["df_within"] = r.df_within;
  entry["ss_between"] = number(r.ss_between);
  entry["ss_within"] = number(r.ss_within);
  entry["grand_mean"] = number(r.grand_mean);
  json means = json::array(), sizes = json::array();
  for (double m : r.group_means) means.push_back(number(m));
  for (double s : r.group_sizes) sizes.push_back(static_cast<std::size_t>(s));
  entry["group_means"] = means;
  entry["group_sizes"] = sizes;
  entry["degenerate"] = r.degenerate;
  return entry;
}

template <class F>
json timed(std::vector<StageTiming>& timings, const char* name, F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  json out = f();
  const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
  timings.push_back({name, dt.count()});
  return out;
}

}  // namespace

std::string_view to_string(EdgeWeighting w) {
  return w == EdgeWeighting::Weighted ? "weighted" : "unweighted";
}
std::string_view to_string(NeighborScope s) { return s == NeighborScope::Global ? "global" : "cluster"; }
std::string_view to_string(AnovaUnit u) { return u == AnovaUnit::Cell ? "cell" : "worker"; }

std::string document_hash(const json& doc) { return hash_hex(dump_stable(doc)); }

json network_stage(const Dataset& data, const AnalysisOptions& opts) {
  if (opts.min_weight == 0) throw ConfigError("minimum co-registration weight must be at least 1");
  const MonthWindow window = opts.window ? *opts.window : posting_window(data);
  const auto active = active_workers(data.events, window);

  std::vector<RegistrationEvent> events;
  for (const auto& e : data.events) {
    if (active.count(e.worker_id)) events.push_back(e);
  }
  const auto bip = build_bipartite(events);
  const auto full = project_workers(bip, opts.min_weight);
  const auto g = full.without_isolated();

  json edges = json::array();
  for (const auto& e : g.edges()) {
    edges.push_back({{"source", g.node(e.u)}, {"target", g.node(e.v)}, {"weight", e.weight}});
  }
  json degrees = json::object();
  for (const auto& [id, deg] : degree_sequence(g)) degrees[id] = deg;

  const auto total = data.workers.size();
  return {
      {"stage", "network"},
      {"input_hash", dataset_checksum(data)},
      {"min_weight", opts.min_weight},
      {"active_window", data.tasks.empty() && !opts.window ? json(nullptr) : json(window.str())},
      {"workers_total", total},
      {"workers_active", active.size()},
      {"active_ratio", total ? number(static_cast<double>(active.size()) / static_cast<double>(total))
                             : json(nullptr)},
      {"duplicates_dropped", bip.duplicates_dropped},
      {"isolated_dropped", full.node_count() - g.node_count()},
      {"node_count", g.node_count()},
      {"edge_count", g.edge_count()},
      {"total_weight", g.total_weight()},
      {"nodes", g.nodes()},
      {"edges", edges},
      {"degrees", degrees},
  };
}

WorkerGraph graph_from_json(const json& doc) {
  auto nodes = doc.at("nodes").get<std::vector<std::string>>();
  if (!std::is_sorted(nodes.begin(), nodes.end())) throw DataError("graph document: nodes are not sorted");
  auto index = [&](const std::string& id) {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), id);
    if (it == nodes.end() || *it != id) throw DataError("graph document: unknown node '" + id + "'");
    return static_cast<NodeId>(it - nodes.begin());
  };
  std::vector<WorkerGraph::Edge> edges;
  for (const auto& e : doc.at("edges")) {
    edges.push_back({index(e.at("source").get<std::string>()), index(e.at("target").get<std::string>()),
                     e.at("weight").get<std::uint32_t>()});
  }
  return WorkerGraph::from_edges(std::move(nodes), std::move(edges));
}

json cluster_stage(const json& graph_doc, const AnalysisOptions& opts) {
  const auto g = graph_from_json(graph_doc);
  if (g.edge_count() == 0) {
    throw GraphError(
        "edgeless network: no two active workers registered for a common task, so there is nothing to "
        "cluster");
  }
  const auto p = greedy_cluster(g, opts.weighting);

  json assignment = json::object();
  for (NodeId u = 0; u < g.node_count(); ++u) assignment[g.node(u)] = p.assignment[u];
  std::vector<std::size_t> sizes(p.cluster_count, 0);
  for (auto c : p.assignment) ++sizes[c];
  json trace = json::array();
  for (const auto& s : p.merge_trace) {
    trace.push_back({{"kept", g.node(s.kept)}, {"absorbed", g.node(s.absorbed)}, {"delta_q", number(s.delta_q)}});
  }
  return {
      {"stage", "cluster"},
      {"input_hash", document_hash(graph_doc)},
      {"weighting", to_string(opts.weighting)},
      {"modularity", number(p.modularity)},
      {"cluster_count", p.cluster_count},
      {"sizes", sizes},
      {"sizes_descending", cluster_sizes(p)},
      {"assignment", assignment},
      {"merges_applied", p.merges_applied},
      {"merge_trace", trace},
  };
}

std::vector<std::uint32_t> assignment_from_json(const json& doc, const WorkerGraph& g) {
  const auto& a = doc.at("assignment");
  std::vector<std::uint32_t> out;
  out.reserve(g.node_count());
  for (const auto& id : g.nodes()) {
    auto it = a.find(id);
    if (it == a.end()) throw DataError("partition document does not assign worker '" + id + "'");
    out.push_back(it->get<std::uint32_t>());
  }
  return out;
}

json network_summary_stage(const json& graph_doc, const json& partition_doc, const AnalysisOptions& opts) {
  const auto g = graph_from_json(graph_doc);
  const auto assignment = assignment_from_json(partition_doc, g);
  const auto scores = compute_centrality(g, assignment, opts.cn_scope);
  const auto summary = summarize_clusters(scores, assignment);

  json clusters = json::array();
  for (std::size_t c = 0; c < summary.clusters.size(); ++c) {
    const auto& row = summary.clusters[c];
    clusters.push_back({{"cluster", c},
                        {"size", row.size},
                        {"common_neighbors", summary_json(row.common_neighbors)},
                        {"worker_rank", summary_json(row.worker_rank)},
                        {"closeness", summary_json(row.closeness)},
                        {"betweenness", summary_json(row.betweenness)}});
  }
  json workers = json::array();
  for (NodeId u = 0; u < g.node_count(); ++u) {
    workers.push_back({{"id", g.node(u)},
                       {"cluster", assignment[u]},
                       {"common_neighbors", number(scores.common_neighbors[u])},
                       {"worker_rank", number(scores.worker_rank[u])},
                       {"closeness", number(scores.closeness[u])},
                       {"betweenness", number(scores.betweenness[u])}});
  }
  return {
      {"stage", "network_summary"},
      {"input_hash", hash_hex(document_hash(graph_doc) + ":" + document_hash(partition_doc))},
      {"cn_scope", to_string(opts.cn_scope)},
      {"worker_rank_method", kWorkerRankMethod},
      {"distances", "unweighted hop counts; closeness scaled by reachable fraction"},
      {"clusters", clusters},
      {"workers", workers},
  };
}

MetricTable metric_table_for(const Dataset& data, const json& partition_doc) {
  std::map<std::string, std::uint32_t> cluster_of;
  for (const auto& [id, c] : partition_doc.at("assignment").items()) cluster_of[id] = c.get<std::uint32_t>();
  const MetricContext ctx(data, cluster_of);
  return build_metric_table(ctx);
}

json metrics_stage(const Dataset& data, const json& partition_doc) {
  const auto table = metric_table_for(data, partition_doc);
  const auto k = table.cluster_count;

  json cells = json::object();
  for (auto m : kAllMetrics) cells[std::string(metric_name(m))] = optional_grid(table.cells.at(m));

  json belts = json::array();
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t size = 0;
    for (auto n : table.belt_counts[c]) size += n;
    json counts = json::object(), shares = json::object();
    for (std::size_t b = 0; b < kAllBelts.size(); ++b) {
      const std::string name(belt_name(kAllBelts[b]));
      counts[name] = table.belt_counts[c][b];
      shares[name] = size ? number(static_cast<double>(table.belt_counts[c][b]) / static_cast<double>(size))
                          : json(nullptr);
    }
    belts.push_back({{"cluster", c}, {"workers", size}, {"counts", counts}, {"shares", shares}});
  }

  json elasticity = json::array(), by_project = json::array(), strategy = json::array();
  for (std::size_t c = 0; c < k; ++c) {
    elasticity.push_back(number(table.elasticity[c]));
    json ratios = json::array();
    for (double r : table.elasticity_by_project[c]) ratios.push_back(number(r));
    by_project.push_back(ratios);
    const auto& s = table.strategy[c];
    strategy.push_back({{"cluster", c},
                        {"workers", s.workers},
                        {"R", number(s.registrations)},
                        {"CL", number(s.confidence)},
                        {"CT", number(s.contest)},
                        {"DL", number(s.deceitfulness)}});
  }

  json workers = json::array();
  for (const auto& w : table.workers) {
    json pl = json::object();
    for (const auto& [tech, v] : w.proficiency) pl[tech] = number(v);
    workers.push_back({{"id", w.id},
                       {"cluster", w.cluster},
                       {"belt", belt_name(w.belt)},
                       {"R", w.registrations},
                       {"RL", number(w.reliability)},
                       {"TL", number(w.trustworthiness)},
                       {"SL", number(w.success)},
                       {"EF", number(w.efficiency)},
                       {"CT", number(w.contest)},
                       {"CL", w.confidence},
                       {"DL", number(w.deceitfulness)},
                       {"PL", pl}});
  }

  return {
      {"stage", "metrics"},
      {"input_hash", hash_hex(dataset_checksum(data) + ":" + document_hash(partition_doc))},
      {"cluster_count", k},
      {"belts", belt_names()},
      {"cells", cells},
      {"belt_composition", belts},
      {"elasticity", elasticity},
      {"elasticity_by_project", by_project},
      {"strategy_belts", {"Blue", "Yellow"}},
      {"strategy", strategy},
      {"workers", workers},
  };
}

json stats_stage(const json& metrics_doc, const AnalysisOptions& opts) {
  const auto k = metrics_doc.at("cluster_count").get<std::size_t>();
  json metrics = json::object();
  for (const char* name : {"RL", "TL", "SL", "EF", "EL"}) {
    std::vector<std::vector<double>> groups(k);
    std::string observation;
    const std::string metric(name);
    if (opts.anova_unit == AnovaUnit::Cell) {
      observation = "per-belt cell mean";
      const auto& grid = metrics_doc.at("cells").at(metric);
      for (std::size_t c = 0; c < k; ++c) groups[c] = non_null(grid.at(c));
    } else if (metric == "EL") {
      observation = "per-project elasticity ratio";
      const auto& ratios = metrics_doc.at("elasticity_by_project");
      for (std::size_t c = 0; c < k; ++c) groups[c] = non_null(ratios.at(c));
    } else {
      observation = "per-worker value (Red belt excluded)";
      for (const auto& w : metrics_doc.at("workers")) {
        if (w.at("belt") == "Red" || w.at(metric).is_null()) continue;
        groups.at(w.at("cluster").get<std::size_t>()).push_back(w.at(metric).get<double>());
      }
    }
    metrics[metric] = anova_entry(groups, observation);
  }
  return {
      {"stage", "stats"},
      {"input_hash", document_hash(metrics_doc)},
      {"unit", to_string(opts.anova_unit)},
      {"design",
       "one-way between-groups ANOVA; clusters are disjoint groups of workers, so no repeated-measure "
       "structure applies"},
      {"metrics", metrics},
  };
}

PipelineRun run_pipeline(const Dataset& data, const AnalysisOptions& opts) {
  PipelineRun run;
  run.options = opts;
  run.dataset_checksum = dataset_checksum(data);
  run.graph = timed(run.timings, "network", [&] { return network_stage(data, opts); });
  run.partition = timed(run.timings, "cluster", [&] { return cluster_stage(run.graph, opts); });
  run.network_summary = timed(run.timings, "centrality",
                              [&] { return network_summary_stage(run.graph, run.partition, opts); });
  run.metrics = timed(run.timings, "metrics", [&] { return metrics_stage(data, run.partition); });
  run.anova = timed(run.timings, "stats", [&] { return stats_stage(run.metrics, opts); });

  json stages = json::array();
  auto stage = [&](const char* file, const json& doc) {
    stages.push_back({{"file", file}, {"stage", doc.at("stage")}, {"input_hash", doc.at("input_hash")},
                      {"hash", document_hash(doc)}});
  };
  stage("graph.json", run.graph);
  stage("partition.json", run.partition);
  stage("network_summary.json", run.network_summary);
  stage("metrics.json", run.metrics);
  stage("anova.json", run.anova);

  run.run = {
      {"tool", "crowdnet"},
      {"tool_version", kToolVersion},
      {"dataset_checksum", run.dataset_checksum},
      {"seed", data.metadata.seed ? json(*data.metadata.seed) : json(nullptr)},
      {"generator", data.metadata.generator.empty() ? json(nullptr) : json(data.metadata.generator)},
      {"rng", data.metadata.rng.empty() ? json(nullptr) : json(data.metadata.rng)},
      {"options",
       {{"weighting", to_string(opts.weighting)},
        {"min_weight", opts.min_weight},
        {"cn_scope", to_string(opts.cn_scope)},
        {"anova_unit", to_string(opts.anova_unit)},
        {"window", opts.window ? json(opts.window->str()) : json(nullptr)}}},
      {"stages", stages},
  };
  return run;
}

void write_json(const json& doc, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << dump_stable(doc);
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void write_run(const PipelineRun& run, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_json(run.graph, dir / "graph.json");
  write_json(run.partition, dir / "partition.json");
  write_json(run.network_summary, dir / "network_summary.json");
  write_json(run.metrics, dir / "metrics.json");
  write_json(run.anova, dir / "anova.json");
  write_json(run.run, dir / "run.json");
  write_report(dir);
}

}  // namespace crowdnet
