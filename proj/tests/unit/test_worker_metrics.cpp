#include <doctest.h>

#include <random>

#include "crowdnet/data_io.hpp"
#include "crowdnet/error.hpp"
#include "crowdnet/synth.hpp"
#include "crowdnet/worker_metrics.hpp"

using namespace crowdnet;

namespace {

Dataset f1() { return parse_dataset_dir(CROWDNET_FIXTURE_DIR "/f1").dataset; }

const std::map<std::string, std::uint32_t> kF1Clusters = {{"w1", 0}, {"w2", 0}, {"w3", 0}};

Date day(int m, int d) { return Date::from_ymd(2015, static_cast<unsigned>(m), static_cast<unsigned>(d)); }

RegistrationEvent reg(std::string w, std::string t, Date when, bool s, bool v = false, bool won = false) {
  RegistrationEvent e;
  e.worker_id = std::move(w);
  e.task_id = std::move(t);
  e.registration_date = when;
  e.submitted = s;
  e.valid = v;
  e.won = won;
  return e;
}

}  // namespace

TEST_CASE("belt thresholds are half-open") {
  CHECK(assign_belt(1250) == Belt::Blue);
  CHECK(assign_belt(0) == Belt::Gray);
  CHECK(assign_belt(899.999) == Belt::Gray);
  CHECK(assign_belt(900) == Belt::Green);
  CHECK(assign_belt(1200) == Belt::Blue);
  CHECK(assign_belt(1500) == Belt::Yellow);
  CHECK(assign_belt(2200) == Belt::Red);
  CHECK_THROWS_AS(assign_belt(-1), DataError);
}

TEST_CASE("active workers by month window") {
  std::vector<RegistrationEvent> ev = {reg("a", "t", day(1, 10), false), reg("b", "t", day(3, 2), false)};
  const MonthWindow jan{Date::from_ymd(2015, 1, 1).month_index(), Date::from_ymd(2015, 1, 1).month_index()};
  CHECK(active_workers(ev, jan) == std::set<std::string>{"a"});
  const auto f = f1();
  CHECK(active_workers(f.events, posting_window(f)) == std::set<std::string>{"w1", "w2", "w3"});
  CHECK(active_workers({}, jan).empty());
}

TEST_CASE("fixture worker metrics") {
  const auto d = f1();
  const MetricContext ctx(d, kF1Clusters);
  CHECK(ctx.reliability("w1") == 0.5);
  CHECK(ctx.trustworthiness("w1") == 0.5);
  CHECK(ctx.trustworthiness("w3") == 0.0);
  CHECK(ctx.success("w1") == 0.5);
  CHECK(ctx.success("w2") == 0.0);
  CHECK(ctx.proficiency("w1", "java") == 0.5);
  CHECK(ctx.efficiency("w1") == 0.5);
  CHECK(ctx.elasticity(0) == 2.0 / 3.0);
  CHECK(ctx.contest("w1") == 0.5);
  CHECK(ctx.confidence("w1") == 2);
  CHECK(ctx.deceitfulness("w1") == 0.5);
  CHECK(ctx.contest("w2") == 0.0);
  CHECK(ctx.cluster_of("w9") == std::nullopt);
  CHECK(ctx.task("t2").starved);
  CHECK(ctx.task("t3").competition_level == 3);
  CHECK_FALSE(ctx.task("t1").starved);
}

TEST_CASE("fixture metric table") {
  const auto table = build_metric_table(MetricContext(f1(), kF1Clusters));
  REQUIRE(table.cluster_count == 1);
  const auto& rl = table.cells.at(Metric::RL)[0];
  CHECK(rl[1] == 0.0);   // Green: w3
  CHECK(rl[2] == 0.5);   // Blue: w1
  CHECK_FALSE(rl[3].has_value());  // no Yellow worker
  CHECK(table.elasticity[0] == 2.0 / 3.0);
  CHECK(table.belt_counts[0][0] == 1);
  CHECK(table.belt_counts[0][1] == 1);
  CHECK(table.belt_counts[0][2] == 1);
  CHECK(table.strategy[0].workers == 1);
  CHECK(table.strategy[0].confidence == 2.0);
  REQUIRE(table.workers.size() == 3);
  CHECK(table.workers[0].id == "w1");
  CHECK(table.workers[0].proficiency.at("java") == 0.5);
}

TEST_CASE("fourteen submissions over fifteen registrations") {
  Dataset d;
  d.workers = {{"a", 1000}, {"b", 1000}};
  for (int i = 0; i < 15; ++i) {
    TaskRecord t;
    t.id = "t" + std::to_string(100 + i);
    t.project_id = "p";
    t.posting_date = day(1, 1);
    t.submission_deadline = day(2, 1);
    t.status = TaskStatus::Failed;
    d.tasks.push_back(t);
    d.events.push_back(reg("a", t.id, day(1, 2), i < 14));
    d.events.push_back(reg("b", t.id, day(1, 2), false));
  }
  canonicalize(d);
  validate(d);
  const MetricContext ctx(d, {{"a", 0}, {"b", 0}});
  CHECK(std::abs(*ctx.reliability("a") - 0.933) < 5e-4);
  CHECK(*ctx.reliability("a") == 14.0 / 15.0);
  CHECK(ctx.reliability("b") == 0.0);
}

TEST_CASE("a worker without same-cluster peers has absent ratios") {
  const MetricContext ctx(f1(), {{"w1", 0}, {"w2", 1}, {"w3", 2}});
  CHECK_FALSE(ctx.reliability("w1").has_value());
  CHECK_FALSE(ctx.trustworthiness("w1").has_value());
  CHECK_FALSE(ctx.success("w1").has_value());
  const auto table = build_metric_table(ctx);
  CHECK_FALSE(table.cells.at(Metric::RL)[0][2].has_value());
}

TEST_CASE("metric invariants on generated data") {
  SynthConfig cfg;
  cfg.worker_count = 120;
  cfg.task_count = 300;
  cfg.project_count = 30;
  cfg.p_in = 0.08;
  cfg.p_out = 0.01;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    cfg.seed = seed;
    const auto d = generate_synthetic(cfg);
    std::map<std::string, std::uint32_t> clusters;
    for (const auto& [w, c] : d.metadata.planted_clusters) clusters[w] = static_cast<std::uint32_t>(c);
    const MetricContext ctx(d, clusters);
    const auto table = build_metric_table(ctx);
    const auto in01 = [](std::optional<double> v) { return !v || (*v >= 0.0 && *v <= 1.0); };
    for (const auto& w : table.workers) {
      if (w.reliability) {
        CHECK(*w.success <= *w.trustworthiness);
        CHECK(*w.trustworthiness <= *w.reliability);
      }
      CHECK(in01(w.reliability));
      CHECK(in01(w.efficiency));
      CHECK(in01(w.contest));
      CHECK(in01(w.deceitfulness));
      for (const auto& [tech, v] : w.proficiency) CHECK(in01(v));
      if (w.belt == Belt::Gray && w.contest) CHECK(*w.contest == 0.0);
    }
    for (const auto& [metric, grid] : table.cells)
      for (const auto& row : grid)
        for (const auto& cell : row)
          if (metric != Metric::CL && metric != Metric::R) CHECK(in01(cell));
    for (const auto& el : table.elasticity) CHECK(in01(el));
  }
}

TEST_CASE("metric table is invariant under worker relabeling") {
  SynthConfig cfg;
  cfg.worker_count = 80;
  cfg.task_count = 150;
  cfg.project_count = 15;
  cfg.seed = 5;
  const auto d = generate_synthetic(cfg);

  std::vector<std::string> ids;
  for (const auto& w : d.workers) ids.push_back(w.id);
  auto shuffled = ids;
  std::mt19937_64 rng(3);
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  std::map<std::string, std::string> rename;
  for (std::size_t i = 0; i < ids.size(); ++i) rename[ids[i]] = "x" + shuffled[i];

  Dataset r = d;
  for (auto& w : r.workers) w.id = rename.at(w.id);
  for (auto& e : r.events) e.worker_id = rename.at(e.worker_id);
  r.metadata.planted_clusters.clear();
  for (const auto& [w, c] : d.metadata.planted_clusters) r.metadata.planted_clusters[rename.at(w)] = c;
  canonicalize(r);

  std::map<std::string, std::uint32_t> c1, c2;
  for (const auto& [w, c] : d.metadata.planted_clusters) c1[w] = static_cast<std::uint32_t>(c);
  for (const auto& [w, c] : r.metadata.planted_clusters) c2[w] = static_cast<std::uint32_t>(c);
  const auto a = build_metric_table(MetricContext(d, c1));
  const auto b = build_metric_table(MetricContext(r, c2));
  CHECK(a.belt_counts == b.belt_counts);
  CHECK(a.elasticity == b.elasticity);
  for (const auto m : kAllMetrics) {
    const auto& ga = a.cells.at(m);
    const auto& gb = b.cells.at(m);
    REQUIRE(ga.size() == gb.size());
    for (std::size_t c = 0; c < ga.size(); ++c)
      for (std::size_t k = 0; k < ga[c].size(); ++k) {
        CHECK(ga[c][k].has_value() == gb[c][k].has_value());
        if (ga[c][k] && gb[c][k]) CHECK(*ga[c][k] == doctest::Approx(*gb[c][k]).epsilon(1e-12));
      }
  }
}
