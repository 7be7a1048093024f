// crowdnet: worker co-registration network analysis.
//
// Exit status: 0 success, 1 analysis failure (bad data, edgeless network),
// 2 usage or configuration error.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "crowdnet/data_io.hpp"
#include "crowdnet/error.hpp"
#include "crowdnet/pipeline.hpp"
#include "crowdnet/report.hpp"
#include "crowdnet/synth.hpp"

namespace fs = std::filesystem;
using namespace crowdnet;

namespace {

struct Flags {
  std::string input;
  std::string out;
  bool weighted = false;
  std::uint32_t min_weight = 1;
  std::string cn_scope = "cluster";
  std::string anova_unit = "worker";
  std::string window;
};

AnalysisOptions options_from(const Flags& f) {
  AnalysisOptions o;
  o.weighting = f.weighted ? EdgeWeighting::Weighted : EdgeWeighting::Unweighted;
  o.min_weight = f.min_weight;
  o.cn_scope = f.cn_scope == "global" ? NeighborScope::Global : NeighborScope::Cluster;
  o.anova_unit = f.anova_unit == "cell" ? AnovaUnit::Cell : AnovaUnit::Worker;
  if (!f.window.empty()) {
    try {
      o.window = MonthWindow::parse(f.window);
    } catch (const DataError& e) {
      throw ConfigError(std::string("--window: ") + e.what());
    }
  }
  return o;
}

Dataset load_input(const std::string& input) {
  std::vector<RejectedRow> rejected;
  auto d = load_any(input, &rejected);
  for (const auto& r : rejected) {
    std::cerr << "warning: " << r.file << " line " << r.row << ": " << r.reason << " (row skipped)\n";
  }
  return d;
}

void print_timings(const std::vector<StageTiming>& timings) {
  for (const auto& t : timings) std::fprintf(stderr, "stage %-10s %8.3f s\n", t.stage.c_str(), t.seconds);
}

void add_input(CLI::App* cmd, Flags& f) {
  cmd->add_option("--input,-i", f.input, "Dataset: directory of CSV files or a canonical .json document")
      ->required();
}
void add_out(CLI::App* cmd, Flags& f, const char* what) { cmd->add_option("--out,-o", f.out, what)->required(); }
void add_window(CLI::App* cmd, Flags& f) {
  cmd->add_option("--window", f.window, "Activity window YYYY-MM:YYYY-MM (default: task posting months)");
}
void add_min_weight(CLI::App* cmd, Flags& f) {
  cmd->add_option("--min-weight", f.min_weight, "Minimum shared tasks for an edge")
      ->check(CLI::PositiveNumber);
}
void add_weighted(CLI::App* cmd, Flags& f) {
  cmd->add_flag("--weighted", f.weighted, "Cluster on edge weights instead of plain adjacency");
}
void add_cn_scope(CLI::App* cmd, Flags& f) {
  cmd->add_option("--cn-scope", f.cn_scope, "Common-neighbor peers: cluster or global")
      ->check(CLI::IsMember({"cluster", "global"}));
}
void add_anova_unit(CLI::App* cmd, Flags& f) {
  cmd->add_option("--anova-unit", f.anova_unit, "ANOVA observations: worker or cell")
      ->check(CLI::IsMember({"worker", "cell"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Worker co-registration network analysis"};
  app.require_subcommand(1);
  Flags f;

  SynthConfig cfg;
  auto* synth = app.add_subcommand("synth", "Generate a seeded synthetic dataset with planted clusters");
  synth->add_option("--workers", cfg.worker_count, "Worker count");
  synth->add_option("--clusters", cfg.cluster_count, "Planted cluster count (even split)");
  synth->add_option("--cluster-sizes", cfg.cluster_sizes, "Explicit planted cluster sizes");
  synth->add_option("--tasks", cfg.task_count, "Task count");
  synth->add_option("--projects", cfg.project_count, "Project count");
  synth->add_option("--p-in", cfg.p_in, "Registration probability on home-cluster tasks");
  synth->add_option("--p-out", cfg.p_out, "Registration probability on other tasks");
  synth->add_option("--valid-prob", cfg.valid_probability, "Probability a submission is valid");
  synth->add_option("--submit-offset", cfg.cluster_submit_offset,
                    "Per-cluster additive offset to submission probability");
  synth->add_option("--months", cfg.months, "Length of the posting window in months");
  synth->add_option("--seed", cfg.seed, "RNG seed");
  add_out(synth, f, "Output directory");

  auto* ingest = app.add_subcommand("ingest", "Validate CSV files and write the canonical dataset.json");
  add_input(ingest, f);
  add_out(ingest, f, "Output directory");

  auto* network = app.add_subcommand("network", "Build the active-worker network (graph.json)");
  add_input(network, f);
  add_min_weight(network, f);
  add_window(network, f);
  add_out(network, f, "Run directory");

  auto* cluster = app.add_subcommand(
      "cluster", "Cluster graph.json (partition.json) and summarize the clusters (network_summary.json)");
  add_weighted(cluster, f);
  add_cn_scope(cluster, f);
  add_out(cluster, f, "Run directory containing graph.json");

  auto* metrics = app.add_subcommand("metrics", "Worker metrics per cluster and belt (metrics.json)");
  add_input(metrics, f);
  add_out(metrics, f, "Run directory containing partition.json");

  auto* stats = app.add_subcommand("stats", "ANOVA across clusters (anova.json)");
  add_anova_unit(stats, f);
  add_out(stats, f, "Run directory containing metrics.json");

  auto* analyze = app.add_subcommand("analyze", "Run every stage and write the report");
  add_input(analyze, f);
  add_weighted(analyze, f);
  add_min_weight(analyze, f);
  add_cn_scope(analyze, f);
  add_anova_unit(analyze, f);
  add_window(analyze, f);
  add_out(analyze, f, "Run directory");

  auto* report = app.add_subcommand("report", "Re-render report.md and charts from a run directory");
  add_out(report, f, "Run directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const fs::path out = f.out;
    if (*synth) {
      const auto d = generate_synthetic(cfg);
      write_dataset_csv(d, out);
      save_dataset_file(d, out / "dataset.json");
      std::cout << "wrote " << d.workers.size() << " workers, " << d.tasks.size() << " tasks, "
                << d.events.size() << " registrations to " << out.string() << "\nchecksum "
                << dataset_checksum(d) << "\n";
    } else if (*ingest) {
      if (!fs::is_directory(f.input)) throw ConfigError("--input must be a directory of CSV files");
      auto r = parse_dataset_dir(f.input);
      for (const auto& row : r.rejected) {
        std::cerr << "warning: " << row.file << " line " << row.row << ": " << row.reason << " (row skipped)\n";
      }
      if (r.duplicate_events) std::cerr << "warning: " << r.duplicate_events << " duplicate registrations dropped\n";
      save_dataset_file(r.dataset, out / "dataset.json");
      std::cout << "ingested " << r.dataset.workers.size() << " workers, " << r.dataset.tasks.size() << " tasks, "
                << r.dataset.events.size() << " registrations (" << r.rejected.size()
                << " rejected)\nchecksum " << dataset_checksum(r.dataset) << "\n";
    } else if (*network) {
      const auto opts = options_from(f);
      write_json(network_stage(load_input(f.input), opts), out / "graph.json");
    } else if (*cluster) {
      const auto opts = options_from(f);
      const auto graph = read_json(out / "graph.json");
      const auto partition = cluster_stage(graph, opts);
      write_json(partition, out / "partition.json");
      write_json(network_summary_stage(graph, partition, opts), out / "network_summary.json");
    } else if (*metrics) {
      write_json(metrics_stage(load_input(f.input), read_json(out / "partition.json")), out / "metrics.json");
    } else if (*stats) {
      write_json(stats_stage(read_json(out / "metrics.json"), options_from(f)), out / "anova.json");
    } else if (*analyze) {
      const auto opts = options_from(f);
      const auto run = run_pipeline(load_input(f.input), opts);
      write_run(run, out);
      print_timings(run.timings);
      std::cout << "clusters " << run.partition.at("cluster_count").get<std::size_t>() << ", modularity "
                << run.partition.at("modularity").dump() << "\nwrote " << out.string() << "\n";
    } else if (*report) {
      write_report(out);
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
