#include "crowdnet/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <span>
#include <string>

#include "crowdnet/error.hpp"

namespace crowdnet {
namespace {

constexpr std::array<const char*, 10> kTechnologies = {
    "android", "cpp", "css", "dotnet", "html", "ios", "java", "javascript", "php", "python"};
constexpr std::array<const char*, 5> kPlatforms = {"aws", "linux", "mobile", "web", "windows"};

// Rating range per belt; Red is capped for generation purposes.
constexpr std::array<std::pair<double, double>, 5> kRatingRange = {
    {{0.0, 900.0}, {900.0, 1200.0}, {1200.0, 1500.0}, {1500.0, 2200.0}, {2200.0, 3500.0}}};

std::string padded(char prefix, std::size_t i, std::size_t total) {
  const int width = std::max<int>(4, static_cast<int>(std::to_string(total).size()));
  char buf[32];
  std::snprintf(buf, sizeof buf, "%c%0*zu", prefix, width, i);
  return buf;
}

bool is_probability(double p) { return std::isfinite(p) && p >= 0.0 && p <= 1.0; }

std::vector<std::string> pick_subset(Rng& rng, std::span<const char* const> pool, std::size_t k) {
  std::vector<std::size_t> idx(pool.size());
  std::iota(idx.begin(), idx.end(), 0);
  for (std::size_t i = 0; i < k; ++i) {
    std::swap(idx[i], idx[i + rng.below(idx.size() - i)]);
  }
  std::vector<std::string> out;
  for (std::size_t i = 0; i < k; ++i) out.emplace_back(pool[idx[i]]);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::uint64_t Rng::below(std::uint64_t n) {
  // Rejection sampling keeps the result exactly uniform.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

std::vector<std::size_t> SynthConfig::sizes() const {
  if (!cluster_sizes.empty()) return cluster_sizes;
  std::vector<std::size_t> out(cluster_count, cluster_count ? worker_count / cluster_count : 0);
  for (std::size_t i = 0; cluster_count && i < worker_count % cluster_count; ++i) ++out[i];
  return out;
}

void SynthConfig::validate() const {
  if (worker_count == 0) throw ConfigError("worker count must be positive");
  if (cluster_sizes.empty() && cluster_count == 0) throw ConfigError("cluster count must be positive");
  if (cluster_sizes.empty() && cluster_count > worker_count) {
    throw ConfigError("cluster count exceeds worker count");
  }
  if (!cluster_sizes.empty()) {
    if (std::find(cluster_sizes.begin(), cluster_sizes.end(), 0u) != cluster_sizes.end()) {
      throw ConfigError("cluster sizes must be positive");
    }
    const auto total = std::accumulate(cluster_sizes.begin(), cluster_sizes.end(), std::size_t{0});
    if (total != worker_count) {
      throw ConfigError("cluster sizes sum to " + std::to_string(total) + ", expected " +
                        std::to_string(worker_count));
    }
  }
  if (task_count == 0) throw ConfigError("task count must be positive");
  if (project_count == 0 || project_count > task_count) {
    throw ConfigError("project count must be between 1 and the task count");
  }
  if (!is_probability(p_in) || !is_probability(p_out)) throw ConfigError("p_in and p_out must lie in [0,1]");
  if (!is_probability(valid_probability)) throw ConfigError("valid probability must lie in [0,1]");
  double share_sum = 0.0;
  for (double s : belt_shares) {
    if (!is_probability(s)) throw ConfigError("belt shares must lie in [0,1]");
    share_sum += s;
  }
  // Published shares are rounded (they add up to 0.9999); draws are normalized.
  if (std::abs(share_sum - 1.0) > 0.01) throw ConfigError("belt shares must sum to 1");
  for (double p : submit_probability) {
    if (!is_probability(p)) throw ConfigError("submission probabilities must lie in [0,1]");
  }
  for (double o : cluster_submit_offset) {
    if (!std::isfinite(o) || o < -1.0 || o > 1.0) throw ConfigError("submission offsets must lie in [-1,1]");
  }
  if (cluster_submit_offset.size() > sizes().size()) {
    throw ConfigError("more submission offsets than clusters");
  }
  if (months == 0 || start_month < 1 || start_month > 12) throw ConfigError("invalid time window");
}

Dataset generate_synthetic(const SynthConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  Dataset d;
  d.metadata.seed = cfg.seed;
  d.metadata.generator = kSynthGenerator;
  d.metadata.rng = kSynthRng;

  const auto sizes = cfg.sizes();
  const std::size_t k = sizes.size();

  std::vector<std::uint32_t> cluster_of;
  std::vector<std::size_t> belt_of;
  for (std::size_t c = 0; c < k; ++c) cluster_of.insert(cluster_of.end(), sizes[c], static_cast<std::uint32_t>(c));
  const double share_total =
      std::accumulate(cfg.belt_shares.begin(), cfg.belt_shares.end(), 0.0);
  for (std::size_t w = 0; w < cfg.worker_count; ++w) {
    const double u = rng.uniform() * share_total;
    std::size_t belt = 0;
    double acc = cfg.belt_shares[0];
    while (belt + 1 < cfg.belt_shares.size() && u >= acc) acc += cfg.belt_shares[++belt];
    belt_of.push_back(belt);
    const auto [lo, hi] = kRatingRange[belt];
    const double rating = std::floor(lo + (hi - lo) * rng.uniform());
    const auto id = padded('w', w, cfg.worker_count);
    d.workers.push_back({id, rating});
    d.metadata.planted_clusters[id] = static_cast<int>(cluster_of[w]);
  }

  struct Project {
    std::uint32_t home;
    std::vector<std::string> technologies;
    std::vector<std::string> platforms;
  };
  std::vector<Project> projects;
  for (std::size_t p = 0; p < cfg.project_count; ++p) {
    Project proj;
    proj.home = static_cast<std::uint32_t>(p % k);
    proj.technologies = pick_subset(rng, kTechnologies, 1 + rng.below(3));
    proj.platforms = pick_subset(rng, kPlatforms, 1 + rng.below(2));
    projects.push_back(std::move(proj));
  }

  auto submit_prob = [&](std::size_t w) {
    const auto c = cluster_of[w];
    const double offset = c < cfg.cluster_submit_offset.size() ? cfg.cluster_submit_offset[c] : 0.0;
    return std::clamp(cfg.submit_probability[belt_of[w]] + offset, 0.0, 1.0);
  };

  const Date start = Date::from_ymd(cfg.start_year, cfg.start_month, 1);
  std::vector<std::size_t> valid;
  for (std::size_t t = 0; t < cfg.task_count; ++t) {
    const std::size_t p = t * cfg.project_count / cfg.task_count;
    const auto& proj = projects[p];

    const auto month_offset = static_cast<int>(rng.below(cfg.months));
    const int month_index = start.month_index() + month_offset;
    const int year = month_index / 12;
    const auto month = static_cast<unsigned>(month_index % 12 + 1);
    const auto day = static_cast<unsigned>(1 + rng.below(25));
    const Date posted = Date::from_ymd(year, month, day);
    const Date deadline = Date::from_days(posted.days() + 7 + static_cast<std::int32_t>(rng.below(15)));

    TaskRecord task;
    task.id = padded('t', t, cfg.task_count);
    task.project_id = padded('p', p, cfg.project_count);
    task.posting_date = posted;
    task.submission_deadline = deadline;
    task.prize = 250.0 + 50.0 * static_cast<double>(rng.below(36));
    task.technologies = proj.technologies;
    if (task.technologies.size() > 1 && rng.bernoulli(0.5)) {
      task.technologies.erase(task.technologies.begin() + static_cast<std::ptrdiff_t>(rng.below(task.technologies.size())));
    }
    task.platforms = proj.platforms;

    valid.clear();
    for (std::size_t w = 0; w < cfg.worker_count; ++w) {
      const double p_reg = cluster_of[w] == proj.home ? cfg.p_in : cfg.p_out;
      if (!rng.bernoulli(p_reg)) continue;
      RegistrationEvent e;
      e.worker_id = d.workers[w].id;
      e.task_id = task.id;
      // Registrations stay inside the posting month.
      e.registration_date = Date::from_days(posted.days() + static_cast<std::int32_t>(rng.below(4)));
      e.submitted = rng.bernoulli(submit_prob(w));
      if (e.submitted) {
        e.valid = rng.bernoulli(cfg.valid_probability);
        e.score = e.valid ? std::round(5000.0 + 5000.0 * rng.uniform()) / 100.0
                          : std::round(5000.0 * rng.uniform()) / 100.0;
        if (e.valid) valid.push_back(d.events.size());
      }
      d.events.push_back(std::move(e));
    }
    if (!valid.empty()) {
      d.events[valid[rng.below(valid.size())]].won = true;
      task.status = TaskStatus::Completed;
    } else {
      task.status = TaskStatus::Failed;
    }
    d.tasks.push_back(std::move(task));
  }

  canonicalize(d);
  return d;
}

}  // namespace crowdnet
