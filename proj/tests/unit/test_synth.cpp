#include <doctest.h>

#include <map>

#include "crowdnet/community.hpp"
#include "crowdnet/data_io.hpp"
#include "crowdnet/error.hpp"
#include "crowdnet/graph.hpp"
#include "crowdnet/synth.hpp"
#include "crowdnet/worker_metrics.hpp"

using namespace crowdnet;

TEST_CASE("generation is deterministic per seed") {
  SynthConfig cfg;
  cfg.seed = 7;
  const auto a = serialize_dataset(generate_synthetic(cfg));
  const auto b = serialize_dataset(generate_synthetic(cfg));
  CHECK(a == b);
  cfg.seed = 8;
  CHECK(serialize_dataset(generate_synthetic(cfg)) != a);
}

TEST_CASE("portable draws") {
  Rng r(42);
  for (int i = 0; i < 10000; ++i) {
    const double u = r.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(r.below(7) < 7);
  }
  Rng a(5), b(5);
  for (int i = 0; i < 100; ++i) CHECK(a.uniform() == b.uniform());
}

TEST_CASE("belt mix follows the configured shares") {
  SynthConfig cfg;
  cfg.worker_count = 1000;
  cfg.task_count = 50;
  cfg.project_count = 5;
  cfg.seed = 1;
  const auto d = generate_synthetic(cfg);
  std::size_t gray = 0;
  for (const auto& w : d.workers) gray += assign_belt(w.rating) == Belt::Gray;
  CHECK(gray >= 870);
  CHECK(gray <= 930);

  // chi-square over the five belts at n = 10,000; df = 4, 0.999 quantile is 18.47
  cfg.worker_count = 10000;
  cfg.seed = 2;
  const auto big = generate_synthetic(cfg);
  std::array<double, 5> counts{};
  for (const auto& w : big.workers) counts[static_cast<std::size_t>(assign_belt(w.rating))] += 1;
  double total_share = 0;
  for (double s : cfg.belt_shares) total_share += s;
  double chi2 = 0;
  for (std::size_t b = 0; b < 5; ++b) {
    const double expect = 10000.0 * cfg.belt_shares[b] / total_share;
    chi2 += (counts[b] - expect) * (counts[b] - expect) / expect;
  }
  CHECK(chi2 < 18.47);
}

TEST_CASE("generated events respect the flag chain and starvation") {
  SynthConfig cfg;
  cfg.worker_count = 200;
  cfg.task_count = 300;
  cfg.project_count = 30;
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    cfg.seed = seed;
    const auto d = generate_synthetic(cfg);
    CHECK_NOTHROW(validate(d));
    CHECK(d.metadata.generator == kSynthGenerator);
    CHECK(d.metadata.rng == kSynthRng);
    CHECK(d.metadata.seed == seed);
    CHECK(d.metadata.planted_clusters.size() == cfg.worker_count);

    std::map<std::string, std::size_t> submitted, winners;
    for (const auto& e : d.events) {
      if (e.won) CHECK(e.valid);
      if (e.valid) CHECK(e.submitted);
      submitted[e.task_id] += e.submitted;
      winners[e.task_id] += e.won;
    }
    for (const auto& t : d.tasks) {
      if (t.status == TaskStatus::Completed) {
        CHECK(winners[t.id] == 1);
      } else {
        CHECK(winners[t.id] == 0);
      }
      if (submitted[t.id] == 0) CHECK(t.status == TaskStatus::Failed);
    }
    const auto w = posting_window(d);
    CHECK(w.last - w.first + 1 <= static_cast<int>(cfg.months));
  }
}

TEST_CASE("invalid configurations are rejected") {
  SynthConfig cfg;
  SUBCASE("sizes do not add up") {
    cfg.cluster_sizes = {10, 10};
    CHECK_THROWS_AS(generate_synthetic(cfg), ConfigError);
  }
  SUBCASE("more clusters than workers") {
    cfg.worker_count = 3;
    CHECK_THROWS_AS(generate_synthetic(cfg), ConfigError);
  }
  SUBCASE("probability out of range") {
    cfg.p_in = 1.5;
    CHECK_THROWS_AS(generate_synthetic(cfg), ConfigError);
  }
  SUBCASE("shares far from one") {
    cfg.belt_shares = {0.5, 0.1, 0.1, 0.1, 0.1};
    CHECK_THROWS_AS(generate_synthetic(cfg), ConfigError);
  }
  SUBCASE("no clusters") {
    cfg.cluster_count = 0;
    CHECK_THROWS_AS(generate_synthetic(cfg), ConfigError);
  }
}

TEST_CASE("greedy clustering recovers a well-separated planted partition") {
  SynthConfig cfg;
  cfg.worker_count = 160;
  cfg.task_count = 1600;
  cfg.project_count = 160;
  cfg.p_in = 0.05;
  cfg.p_out = 0.00025;
  cfg.seed = 3;
  const auto d = generate_synthetic(cfg);
  const auto g = project_workers(build_bipartite(d.events)).without_isolated();
  const auto p = greedy_cluster(g);
  std::vector<std::uint32_t> planted;
  for (const auto& id : g.nodes()) planted.push_back(static_cast<std::uint32_t>(d.metadata.planted_clusters.at(id)));
  CHECK(p.cluster_count == 4);
  CHECK(normalized_mutual_information(p.assignment, planted) > 0.9);
}
