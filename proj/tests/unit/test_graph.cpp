#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "crowdnet/data_io.hpp"
#include "crowdnet/error.hpp"
#include "crowdnet/graph.hpp"

using namespace crowdnet;

namespace {

RegistrationEvent reg(std::string w, std::string t) {
  RegistrationEvent e;
  e.worker_id = std::move(w);
  e.task_id = std::move(t);
  return e;
}

Dataset f1() { return parse_dataset_dir(CROWDNET_FIXTURE_DIR "/f1").dataset; }

}  // namespace

TEST_CASE("empty event list gives an empty bipartite graph") {
  const auto b = build_bipartite({});
  CHECK(b.workers.empty());
  CHECK(b.tasks.empty());
  CHECK(b.incidence.empty());
}

TEST_CASE("fixture bipartite graph") {
  const auto d = f1();
  const auto b = build_bipartite(d.events);
  CHECK(b.workers == std::vector<std::string>{"w1", "w2", "w3", "w9"});
  CHECK(b.tasks == std::vector<std::string>{"t1", "t2", "t3"});
  REQUIRE(b.incidence.size() == 3);
  CHECK(b.incidence[0].size() == 2);
  CHECK(b.incidence[1].size() == 2);
  CHECK(b.incidence[2].size() == 3);
  CHECK(b.duplicates_dropped == 0);
}

TEST_CASE("single registrant task") {
  const std::vector<RegistrationEvent> ev = {reg("w", "t")};
  const auto b = build_bipartite(ev);
  REQUIRE(b.incidence.size() == 1);
  CHECK(b.incidence[0] == std::vector<NodeId>{0});
  const auto g = project_workers(b);
  CHECK(g.node_count() == 1);
  CHECK(g.edge_count() == 0);
}

TEST_CASE("duplicate registrations are dropped and counted") {
  const std::vector<RegistrationEvent> ev = {reg("a", "t"), reg("b", "t"), reg("a", "t"), reg("a", "t")};
  const auto b = build_bipartite(ev);
  CHECK(b.duplicates_dropped == 2);
  CHECK(b.incidence[0].size() == 2);
}

TEST_CASE("fixture projection and degrees") {
  const auto d = f1();
  const auto g = project_workers(build_bipartite(d.events));
  std::map<std::pair<std::string, std::string>, std::uint32_t> edges;
  for (const auto& e : g.edges()) edges[{g.node(e.u), g.node(e.v)}] = e.weight;
  const std::map<std::pair<std::string, std::string>, std::uint32_t> expect = {
      {{"w1", "w2"}, 1}, {{"w1", "w3"}, 1}, {{"w2", "w3"}, 1}, {{"w2", "w9"}, 1}, {{"w3", "w9"}, 1}};
  CHECK(edges == expect);
  const auto deg = degree_sequence(g);
  CHECK(deg == std::map<std::string, std::size_t>{{"w1", 2}, {"w2", 3}, {"w3", 3}, {"w9", 2}});
}

TEST_CASE("weight counts shared tasks") {
  const std::vector<RegistrationEvent> ev = {reg("a", "t1"), reg("b", "t1"), reg("a", "t2"), reg("b", "t2")};
  const auto g = project_workers(build_bipartite(ev));
  REQUIRE(g.edge_count() == 1);
  CHECK(g.edges()[0].weight == 2);
  CHECK(g.weight(0, 1) == 2);
  CHECK(g.weight(1, 0) == 2);
}

TEST_CASE("single-registrant tasks give nodes without edges") {
  const std::vector<RegistrationEvent> ev = {reg("a", "t1"), reg("b", "t2"), reg("c", "t3")};
  const auto g = project_workers(build_bipartite(ev));
  CHECK(g.node_count() == 3);
  CHECK(g.edge_count() == 0);
  CHECK(g.without_isolated().node_count() == 0);
}

TEST_CASE("small graph degrees") {
  const auto tri = WorkerGraph::from_pairs({{"a", "b"}, {"b", "c"}, {"a", "c"}});
  for (const auto& [id, d] : degree_sequence(tri)) CHECK(d == 2);
  const auto path = WorkerGraph::from_pairs({{"a", "b"}, {"b", "c"}});
  CHECK(degree_sequence(path) == std::map<std::string, std::size_t>{{"a", 1}, {"b", 2}, {"c", 1}});
}

TEST_CASE("projection matches brute-force co-registration counts") {
  std::mt19937_64 rng(42);
  for (int round = 0; round < 200; ++round) {
    const int nw = 1 + static_cast<int>(rng() % 10);
    const int nt = 1 + static_cast<int>(rng() % 10);
    std::vector<RegistrationEvent> ev;
    std::map<std::string, std::set<std::string>> tasks_of;
    std::map<std::string, int> registrants;
    for (int w = 0; w < nw; ++w) {
      for (int t = 0; t < nt; ++t) {
        if (rng() % 3 != 0) continue;
        const auto wid = "w" + std::to_string(w), tid = "t" + std::to_string(t);
        ev.push_back(reg(wid, tid));
        tasks_of[wid].insert(tid);
        ++registrants[tid];
      }
    }
    std::shuffle(ev.begin(), ev.end(), rng);
    const auto g = project_workers(build_bipartite(ev));

    std::uint64_t pair_total = 0;
    for (const auto& [t, r] : registrants) pair_total += static_cast<std::uint64_t>(r) * (r - 1);
    std::uint64_t weight_total = 0;
    for (const auto& e : g.edges()) weight_total += 2ull * e.weight;
    CHECK(weight_total == pair_total);

    for (NodeId u = 0; u < g.node_count(); ++u) {
      for (NodeId v = 0; v < g.node_count(); ++v) {
        if (u == v) continue;
        std::size_t shared = 0;
        for (const auto& t : tasks_of[g.node(u)]) shared += tasks_of[g.node(v)].count(t);
        CHECK(g.weight(u, v) == shared);
      }
    }
    CHECK(std::is_sorted(g.nodes().begin(), g.nodes().end()));
  }
}

TEST_CASE("minimum weight threshold") {
  const std::vector<RegistrationEvent> ev = {reg("a", "t1"), reg("b", "t1"), reg("a", "t2"),
                                             reg("b", "t2"), reg("c", "t2")};
  const auto b = build_bipartite(ev);
  CHECK(project_workers(b, 1).edge_count() == 3);
  const auto g2 = project_workers(b, 2);
  CHECK(g2.edge_count() == 1);
  CHECK(g2.node_count() == 3);
}

TEST_CASE("edge validation") {
  const std::vector<std::string> nodes = {"a", "b", "c"};
  CHECK_THROWS_AS(WorkerGraph::from_edges(nodes, {{0, 0, 1}}), GraphError);
  CHECK_THROWS_AS(WorkerGraph::from_edges(nodes, {{0, 1, 0}}), GraphError);
  CHECK_THROWS_AS(WorkerGraph::from_edges(nodes, {{0, 1, 1}, {1, 0, 1}}), GraphError);
  CHECK_THROWS_AS(WorkerGraph::from_edges(nodes, {{0, 5, 1}}), GraphError);
  const auto g = WorkerGraph::from_edges(nodes, {{2, 0, 3}});
  CHECK(g.edges()[0].u == 0);
  CHECK(g.edges()[0].v == 2);
  CHECK(g.weighted_degree(0) == 3);
  CHECK(g.total_weight() == 3);
  CHECK(g.index_of("b") == NodeId{1});
  CHECK_FALSE(g.index_of("z").has_value());
}
