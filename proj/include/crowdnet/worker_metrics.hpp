#pragma once

// Rating belts, the active-worker filter and the nine per-worker / per-cluster
// behaviour metrics, aggregated per cluster and belt.

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "crowdnet/dataset.hpp"

namespace crowdnet {

enum class Belt : std::uint8_t { Gray, Green, Blue, Yellow, Red };

inline constexpr std::array<Belt, 5> kAllBelts = {Belt::Gray, Belt::Green, Belt::Blue, Belt::Yellow,
                                                  Belt::Red};
/// Belts shown in per-belt tables; Red is too rare and is left out.
inline constexpr std::array<Belt, 4> kTableBelts = {Belt::Gray, Belt::Green, Belt::Blue, Belt::Yellow};

std::string_view belt_name(Belt b);

/// Gray [0,900), Green [900,1200), Blue [1200,1500), Yellow [1500,2200),
/// Red [2200,inf). Throws DataError for negative or NaN ratings.
Belt assign_belt(double rating);

/// Workers with at least one registration dated inside the window.
std::set<std::string> active_workers(std::span<const RegistrationEvent> events,
                                     const MonthWindow& window);

struct WorkerProfile {
  std::string id;
  double rating = 0.0;
  Belt belt = Belt::Gray;
  std::size_t registrations = 0;
  std::size_t submissions = 0;
  std::size_t valid_submissions = 0;
  std::size_t wins = 0;
  std::set<std::string> technologies;  // WTech
};

struct TaskContext {
  std::string id;
  std::string project_id;
  TaskStatus status = TaskStatus::Failed;
  std::size_t competition_level = 0;  // TC: registrant count
  bool starved = false;               // no submissions at all
  std::vector<std::string> technologies;
  std::vector<std::string> platforms;
};

enum class Metric { RL, TL, SL, EF, EL, CT, CL, DL, R };

inline constexpr std::array<Metric, 9> kAllMetrics = {Metric::RL, Metric::TL, Metric::SL,
                                                      Metric::EF, Metric::EL, Metric::CT,
                                                      Metric::CL, Metric::DL, Metric::R};

std::string_view metric_name(Metric m);

/// Per-worker values; std::nullopt marks an empty denominator.
struct WorkerMetrics {
  std::string id;
  std::uint32_t cluster = 0;
  Belt belt = Belt::Gray;
  std::size_t registrations = 0;
  std::optional<double> reliability;
  std::optional<double> trustworthiness;
  std::optional<double> success;
  std::optional<double> efficiency;
  std::optional<double> contest;
  std::size_t confidence = 0;
  std::optional<double> deceitfulness;
  std::map<std::string, double> proficiency;
};

/// Read-only index over a dataset and a worker -> cluster assignment.
/// Task-level quantities (TC, starvation, lower-belt registrants) use every
/// event; cluster-relative quantities only count clustered workers.
class MetricContext {
 public:
  MetricContext(const Dataset& data, const std::map<std::string, std::uint32_t>& cluster_of);

  std::size_t cluster_count() const { return cluster_count_; }
  const WorkerProfile& profile(std::string_view worker) const;
  const TaskContext& task(std::string_view task_id) const;
  std::optional<std::uint32_t> cluster_of(std::string_view worker) const;
  /// Clustered workers, sorted by id.
  std::vector<std::string> clustered_workers() const;

  /// RL: submissions / registrations over tasks shared with a same-cluster peer.
  std::optional<double> reliability(std::string_view worker) const;
  /// TL: valid submissions over the same tasks.
  std::optional<double> trustworthiness(std::string_view worker) const;
  /// SL: wins over the same tasks.
  std::optional<double> success(std::string_view worker) const;
  /// PL: worker's registrations on tasks needing `tech` over the cluster's.
  std::optional<double> proficiency(std::string_view worker, std::string_view tech) const;
  /// EF: mean PL over the technologies of the worker's registered tasks.
  std::optional<double> efficiency(std::string_view worker) const;
  /// EL: sum_k RC_{k,l} / sum_k TC_k; `belt` restricts RC to one belt.
  std::optional<double> elasticity(std::uint32_t cluster, std::optional<Belt> belt = std::nullopt) const;
  /// RC_{k,l} / TC_k for every project k with TC_k > 0, in project order.
  std::vector<double> elasticity_by_project(std::uint32_t cluster) const;
  /// CT: lower-belt registrants / registrants over the worker's tasks.
  std::optional<double> contest(std::string_view worker) const;
  /// CL: largest TC among tasks the worker submitted to; 0 if none.
  std::size_t confidence(std::string_view worker) const;
  /// DL: starved registered tasks / registered tasks.
  std::optional<double> deceitfulness(std::string_view worker) const;

  WorkerMetrics evaluate(std::string_view worker) const;

 private:
  struct Registration {
    std::uint32_t task;
    bool submitted, valid, won;
  };
  struct Counts {
    std::size_t registrations = 0, submissions = 0, valid = 0, wins = 0;
  };

  std::uint32_t worker_index(std::string_view worker) const;
  std::optional<std::uint32_t> cluster_at(std::uint32_t w) const;
  Counts same_cluster_counts(std::uint32_t w) const;

  std::vector<WorkerProfile> workers_;
  std::vector<TaskContext> tasks_;
  std::unordered_map<std::string, std::uint32_t> worker_ids_;
  std::unordered_map<std::string, std::uint32_t> task_ids_;
  std::vector<std::int64_t> cluster_;  // -1 when unclustered
  std::size_t cluster_count_ = 0;
  std::vector<std::vector<Registration>> by_worker_;
  std::vector<std::vector<std::uint32_t>> registrants_;  // per task, worker indices
  std::vector<std::vector<std::uint32_t>> projects_;     // task indices per project, sorted by id
  // cluster -> tech -> registrations by members on tasks requiring tech
  std::vector<std::map<std::string, std::size_t, std::less<>>> cluster_tech_;
};

struct MetricTable {
  using Grid = std::vector<std::array<std::optional<double>, kTableBelts.size()>>;

  std::size_t cluster_count = 0;
  /// Per-belt means per cluster for every metric (EL restricted to the belt).
  std::map<Metric, Grid> cells;
  /// Worker counts per cluster per belt, Red included.
  std::vector<std::array<std::size_t, kAllBelts.size()>> belt_counts;
  /// Cluster-level EL over all members.
  std::vector<std::optional<double>> elasticity;
  /// Per-project EL ratios per cluster.
  std::vector<std::vector<double>> elasticity_by_project;

  struct StrategyRow {
    std::size_t workers = 0;
    std::optional<double> registrations, confidence, contest, deceitfulness;
  };
  /// Blue and Yellow workers only.
  std::vector<StrategyRow> strategy;

  std::vector<WorkerMetrics> workers;  // sorted by id
};

MetricTable build_metric_table(const MetricContext& ctx);

}  // namespace crowdnet
