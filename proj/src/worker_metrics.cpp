#include "crowdnet/worker_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "crowdnet/error.hpp"

namespace crowdnet {
namespace {

std::optional<double> ratio(std::size_t num, std::size_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

std::optional<double> mean_of(const std::vector<double>& v) {
  if (v.empty()) return std::nullopt;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

std::size_t belt_slot(Belt b) { return static_cast<std::size_t>(b); }

}  // namespace

std::string_view belt_name(Belt b) {
  switch (b) {
    case Belt::Gray:
      return "Gray";
    case Belt::Green:
      return "Green";
    case Belt::Blue:
      return "Blue";
    case Belt::Yellow:
      return "Yellow";
    case Belt::Red:
      return "Red";
  }
  return "?";
}

Belt assign_belt(double rating) {
  if (std::isnan(rating) || rating < 0.0) {
    throw DataError("rating must be non-negative, got " + std::to_string(rating));
  }
  if (rating < 900.0) return Belt::Gray;
  if (rating < 1200.0) return Belt::Green;
  if (rating < 1500.0) return Belt::Blue;
  if (rating < 2200.0) return Belt::Yellow;
  return Belt::Red;
}

std::set<std::string> active_workers(std::span<const RegistrationEvent> events,
                                     const MonthWindow& window) {
  std::set<std::string> out;
  for (const auto& e : events) {
    if (window.contains(e.registration_date)) out.insert(e.worker_id);
  }
  return out;
}

std::string_view metric_name(Metric m) {
  switch (m) {
    case Metric::RL:
      return "RL";
    case Metric::TL:
      return "TL";
    case Metric::SL:
      return "SL";
    case Metric::EF:
      return "EF";
    case Metric::EL:
      return "EL";
    case Metric::CT:
      return "CT";
    case Metric::CL:
      return "CL";
    case Metric::DL:
      return "DL";
    case Metric::R:
      return "R";
  }
  return "?";
}

MetricContext::MetricContext(const Dataset& data,
                             const std::map<std::string, std::uint32_t>& cluster_of) {
  std::vector<const WorkerRecord*> workers;
  for (const auto& w : data.workers) workers.push_back(&w);
  std::sort(workers.begin(), workers.end(), [](auto* a, auto* b) { return a->id < b->id; });
  for (const auto* w : workers) {
    worker_ids_.emplace(w->id, static_cast<std::uint32_t>(workers_.size()));
    WorkerProfile p;
    p.id = w->id;
    p.rating = w->rating;
    p.belt = assign_belt(w->rating);
    workers_.push_back(std::move(p));
  }

  std::vector<const TaskRecord*> tasks;
  for (const auto& t : data.tasks) tasks.push_back(&t);
  std::sort(tasks.begin(), tasks.end(), [](auto* a, auto* b) { return a->id < b->id; });
  std::map<std::string, std::vector<std::uint32_t>> projects;
  for (const auto* t : tasks) {
    const auto idx = static_cast<std::uint32_t>(tasks_.size());
    task_ids_.emplace(t->id, idx);
    projects[t->project_id].push_back(idx);
    tasks_.push_back({t->id, t->project_id, t->status, 0, false, t->technologies, t->platforms});
  }
  for (auto& [id, members] : projects) projects_.push_back(std::move(members));

  cluster_.assign(workers_.size(), -1);
  for (const auto& [id, c] : cluster_of) {
    auto it = worker_ids_.find(id);
    if (it == worker_ids_.end()) throw DataError("cluster assignment names unknown worker " + id);
    cluster_[it->second] = c;
    cluster_count_ = std::max<std::size_t>(cluster_count_, c + 1);
  }

  by_worker_.resize(workers_.size());
  registrants_.resize(tasks_.size());
  std::vector<bool> has_submission(tasks_.size(), false);
  for (const auto& e : data.events) {
    auto wi = worker_ids_.find(e.worker_id);
    auto ti = task_ids_.find(e.task_id);
    if (wi == worker_ids_.end() || ti == task_ids_.end()) {
      throw DataError("event references unknown worker or task: " + e.worker_id + "/" + e.task_id);
    }
    const auto w = wi->second, t = ti->second;
    if (e.won > e.valid || e.valid > e.submitted) {
      throw DataError("flag chain violated for " + e.worker_id + " on " + e.task_id);
    }
    by_worker_[w].push_back({t, e.submitted, e.valid, e.won});
    registrants_[t].push_back(w);
    ++tasks_[t].competition_level;
    if (e.submitted) has_submission[t] = true;
  }
  for (std::size_t t = 0; t < tasks_.size(); ++t) {
    tasks_[t].starved = tasks_[t].competition_level > 0 && !has_submission[t];
  }

  for (std::uint32_t w = 0; w < workers_.size(); ++w) {
    auto& p = workers_[w];
    auto& regs = by_worker_[w];
    std::sort(regs.begin(), regs.end(), [](const auto& a, const auto& b) { return a.task < b.task; });
    p.registrations = regs.size();
    for (const auto& r : regs) {
      p.submissions += r.submitted;
      p.valid_submissions += r.valid;
      p.wins += r.won;
      const auto& techs = tasks_[r.task].technologies;
      p.technologies.insert(techs.begin(), techs.end());
    }
  }
  for (auto& regs : registrants_) std::sort(regs.begin(), regs.end());

  cluster_tech_.resize(cluster_count_);
  for (std::uint32_t w = 0; w < workers_.size(); ++w) {
    const auto c = cluster_at(w);
    if (!c) continue;
    for (const auto& r : by_worker_[w]) {
      for (const auto& tech : tasks_[r.task].technologies) ++cluster_tech_[*c][tech];
    }
  }
}

std::uint32_t MetricContext::worker_index(std::string_view worker) const {
  auto it = worker_ids_.find(std::string(worker));
  if (it == worker_ids_.end()) throw DataError("unknown worker " + std::string(worker));
  return it->second;
}

std::optional<std::uint32_t> MetricContext::cluster_at(std::uint32_t w) const {
  if (cluster_[w] < 0) return std::nullopt;
  return static_cast<std::uint32_t>(cluster_[w]);
}

const WorkerProfile& MetricContext::profile(std::string_view worker) const {
  return workers_[worker_index(worker)];
}

const TaskContext& MetricContext::task(std::string_view task_id) const {
  auto it = task_ids_.find(std::string(task_id));
  if (it == task_ids_.end()) throw DataError("unknown task " + std::string(task_id));
  return tasks_[it->second];
}

std::optional<std::uint32_t> MetricContext::cluster_of(std::string_view worker) const {
  return cluster_at(worker_index(worker));
}

std::vector<std::string> MetricContext::clustered_workers() const {
  std::vector<std::string> out;
  for (std::uint32_t w = 0; w < workers_.size(); ++w) {
    if (cluster_[w] >= 0) out.push_back(workers_[w].id);
  }
  return out;
}

MetricContext::Counts MetricContext::same_cluster_counts(std::uint32_t w) const {
  Counts c;
  const auto own = cluster_[w];
  for (const auto& r : by_worker_[w]) {
    const auto& regs = registrants_[r.task];
    const bool shared = std::any_of(regs.begin(), regs.end(),
                                    [&](std::uint32_t o) { return o != w && cluster_[o] == own; });
    if (!shared) continue;
    ++c.registrations;
    c.submissions += r.submitted;
    c.valid += r.valid;
    c.wins += r.won;
  }
  return c;
}

std::optional<double> MetricContext::reliability(std::string_view worker) const {
  const auto w = worker_index(worker);
  if (!cluster_at(w)) return std::nullopt;
  const auto c = same_cluster_counts(w);
  return ratio(c.submissions, c.registrations);
}

std::optional<double> MetricContext::trustworthiness(std::string_view worker) const {
  const auto w = worker_index(worker);
  if (!cluster_at(w)) return std::nullopt;
  const auto c = same_cluster_counts(w);
  return ratio(c.valid, c.registrations);
}

std::optional<double> MetricContext::success(std::string_view worker) const {
  const auto w = worker_index(worker);
  if (!cluster_at(w)) return std::nullopt;
  const auto c = same_cluster_counts(w);
  return ratio(c.wins, c.registrations);
}

std::optional<double> MetricContext::proficiency(std::string_view worker,
                                                 std::string_view tech) const {
  const auto w = worker_index(worker);
  const auto c = cluster_at(w);
  if (!c) return std::nullopt;
  const auto& totals = cluster_tech_[*c];
  auto it = totals.find(tech);
  if (it == totals.end() || it->second == 0) return std::nullopt;
  std::size_t own = 0;
  for (const auto& r : by_worker_[w]) {
    const auto& techs = tasks_[r.task].technologies;
    own += std::binary_search(techs.begin(), techs.end(), tech);
  }
  return ratio(own, it->second);
}

std::optional<double> MetricContext::efficiency(std::string_view worker) const {
  const auto w = worker_index(worker);
  if (!cluster_at(w)) return std::nullopt;
  std::vector<double> values;
  for (const auto& tech : workers_[w].technologies) {
    if (auto pl = proficiency(worker, tech)) values.push_back(*pl);
  }
  return mean_of(values);
}

std::optional<double> MetricContext::elasticity(std::uint32_t cluster, std::optional<Belt> belt) const {
  std::size_t rc_total = 0, tc_total = 0;
  for (const auto& project : projects_) {
    std::size_t rc = 0, tc = 0;
    for (auto t : project) {
      tc = std::max(tc, tasks_[t].competition_level);
      std::size_t in_cluster = 0;
      for (auto w : registrants_[t]) {
        if (cluster_[w] == static_cast<std::int64_t>(cluster) && (!belt || workers_[w].belt == *belt)) {
          ++in_cluster;
        }
      }
      rc = std::max(rc, in_cluster);
    }
    rc_total += rc;
    tc_total += tc;
  }
  return ratio(rc_total, tc_total);
}

std::vector<double> MetricContext::elasticity_by_project(std::uint32_t cluster) const {
  std::vector<double> out;
  for (const auto& project : projects_) {
    std::size_t rc = 0, tc = 0;
    for (auto t : project) {
      tc = std::max(tc, tasks_[t].competition_level);
      std::size_t in_cluster = 0;
      for (auto w : registrants_[t]) in_cluster += cluster_[w] == static_cast<std::int64_t>(cluster);
      rc = std::max(rc, in_cluster);
    }
    if (tc > 0) out.push_back(static_cast<double>(rc) / static_cast<double>(tc));
  }
  return out;
}

std::optional<double> MetricContext::contest(std::string_view worker) const {
  const auto w = worker_index(worker);
  const auto own = workers_[w].belt;
  std::size_t lower = 0, total = 0;
  for (const auto& r : by_worker_[w]) {
    for (auto o : registrants_[r.task]) lower += workers_[o].belt < own;
    total += tasks_[r.task].competition_level;
  }
  return ratio(lower, total);
}

std::size_t MetricContext::confidence(std::string_view worker) const {
  const auto w = worker_index(worker);
  std::size_t best = 0;
  for (const auto& r : by_worker_[w]) {
    if (r.submitted) best = std::max(best, tasks_[r.task].competition_level);
  }
  return best;
}

std::optional<double> MetricContext::deceitfulness(std::string_view worker) const {
  const auto w = worker_index(worker);
  std::size_t starved = 0;
  for (const auto& r : by_worker_[w]) starved += tasks_[r.task].starved;
  return ratio(starved, by_worker_[w].size());
}

WorkerMetrics MetricContext::evaluate(std::string_view worker) const {
  const auto w = worker_index(worker);
  const auto& p = workers_[w];
  WorkerMetrics m;
  m.id = p.id;
  m.cluster = cluster_at(w).value_or(0);
  m.belt = p.belt;
  m.registrations = p.registrations;
  m.reliability = reliability(worker);
  m.trustworthiness = trustworthiness(worker);
  m.success = success(worker);
  m.efficiency = efficiency(worker);
  m.contest = contest(worker);
  m.confidence = confidence(worker);
  m.deceitfulness = deceitfulness(worker);
  for (const auto& tech : p.technologies) {
    if (auto pl = proficiency(worker, tech)) m.proficiency.emplace(tech, *pl);
  }
  return m;
}

MetricTable build_metric_table(const MetricContext& ctx) {
  MetricTable table;
  const auto k = ctx.cluster_count();
  table.cluster_count = k;
  table.belt_counts.assign(k, {});
  for (auto m : kAllMetrics) table.cells[m].assign(k, {});

  using Bucket = std::array<std::vector<double>, kTableBelts.size()>;
  std::map<Metric, std::vector<Bucket>> buckets;
  for (auto m : kAllMetrics) buckets[m].assign(k, {});
  std::vector<std::array<std::vector<double>, 4>> strategy(k);  // R, CL, CT, DL

  for (const auto& id : ctx.clustered_workers()) {
    auto wm = ctx.evaluate(id);
    const auto c = wm.cluster;
    ++table.belt_counts[c][belt_slot(wm.belt)];
    if (wm.belt == Belt::Blue || wm.belt == Belt::Yellow) {
      strategy[c][0].push_back(static_cast<double>(wm.registrations));
      strategy[c][1].push_back(static_cast<double>(wm.confidence));
      if (wm.contest) strategy[c][2].push_back(*wm.contest);
      if (wm.deceitfulness) strategy[c][3].push_back(*wm.deceitfulness);
    }
    if (wm.belt != Belt::Red) {
      const auto b = belt_slot(wm.belt);
      auto put = [&](Metric m, const std::optional<double>& v) {
        if (v) buckets[m][c][b].push_back(*v);
      };
      put(Metric::RL, wm.reliability);
      put(Metric::TL, wm.trustworthiness);
      put(Metric::SL, wm.success);
      put(Metric::EF, wm.efficiency);
      put(Metric::CT, wm.contest);
      put(Metric::CL, static_cast<double>(wm.confidence));
      put(Metric::DL, wm.deceitfulness);
      put(Metric::R, static_cast<double>(wm.registrations));
    }
    table.workers.push_back(std::move(wm));
  }

  for (auto m : kAllMetrics) {
    if (m == Metric::EL) continue;
    for (std::size_t c = 0; c < k; ++c) {
      for (std::size_t b = 0; b < kTableBelts.size(); ++b) table.cells[m][c][b] = mean_of(buckets[m][c][b]);
    }
  }
  for (std::uint32_t c = 0; c < k; ++c) {
    table.elasticity.push_back(ctx.elasticity(c));
    table.elasticity_by_project.push_back(ctx.elasticity_by_project(c));
    for (std::size_t b = 0; b < kTableBelts.size(); ++b) {
      // Belt cells of EL stay absent when the cluster has no worker of that belt.
      if (table.belt_counts[c][b] > 0) table.cells[Metric::EL][c][b] = ctx.elasticity(c, kTableBelts[b]);
    }
    MetricTable::StrategyRow row;
    row.workers = strategy[c][0].size();
    row.registrations = mean_of(strategy[c][0]);
    row.confidence = mean_of(strategy[c][1]);
    row.contest = mean_of(strategy[c][2]);
    row.deceitfulness = mean_of(strategy[c][3]);
    table.strategy.push_back(row);
  }
  return table;
}

}  // namespace crowdnet
