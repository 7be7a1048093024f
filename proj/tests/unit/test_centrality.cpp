#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "crowdnet/centrality.hpp"
#include "crowdnet/error.hpp"
#include "support/oracles.hpp"

using namespace crowdnet;

namespace {

oracle::SmallGraph path3() {
  oracle::SmallGraph g(3);
  g.add(0, 1), g.add(1, 2);
  return g;
}

oracle::SmallGraph star4() {
  oracle::SmallGraph g(4);
  g.add(0, 1), g.add(0, 2), g.add(0, 3);
  return g;
}

oracle::SmallGraph cycle(int n) {
  oracle::SmallGraph g(n);
  for (int i = 0; i < n; ++i) g.add(i, (i + 1) % n);
  return g;
}

oracle::SmallGraph complete(int n) {
  oracle::SmallGraph g(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) g.add(i, j);
  return g;
}

double total(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

}  // namespace

TEST_CASE("common neighbors of named pairs") {
  const auto tri = WorkerGraph::from_pairs({{"a", "b"}, {"b", "c"}, {"a", "c"}});
  CHECK(common_neighbors(tri, "a", "b") == 1);
  const auto k4 = oracle::to_worker_graph(complete(4));
  CHECK(common_neighbors(k4, "v000", "v003") == 2);
  const auto bridge = WorkerGraph::from_pairs(
      {{"a", "b"}, {"b", "c"}, {"a", "c"}, {"d", "e"}, {"e", "f"}, {"d", "f"}, {"c", "d"}});
  CHECK(common_neighbors(bridge, "c", "d") == 0);
  CHECK_THROWS_AS(common_neighbors(tri, "a", "zz"), GraphError);
  CHECK_THROWS_AS(common_neighbors(tri, "a", "a"), GraphError);
}

TEST_CASE("bitset intersection matches neighbor-set intersection") {
  std::mt19937_64 rng(4);
  for (int round = 0; round < 30; ++round) {
    const int n = 2 + static_cast<int>(rng() % 150);
    const auto sg = oracle::random_graph(rng, n, 0.1);
    const auto g = oracle::to_worker_graph(sg);
    const AdjacencyBitsets bits(g);
    for (int k = 0; k < 40; ++k) {
      const int u = static_cast<int>(rng() % n), v = static_cast<int>(rng() % n);
      if (u == v) continue;
      CHECK(bits.intersection(u, v) == static_cast<std::size_t>(oracle::common_neighbor_count(sg, u, v)));
    }
  }
}

TEST_CASE("mean common neighbors over peers") {
  const auto tri = oracle::to_worker_graph(complete(3));
  for (double v : mean_common_neighbors(tri, std::vector<std::uint32_t>{0, 0, 0})) CHECK(v == 1.0);

  const auto star = oracle::to_worker_graph(star4());
  const auto cn = mean_common_neighbors(star, std::vector<std::uint32_t>{0, 0, 0, 0});
  CHECK(cn[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(cn[0] == 0.0);

  const auto g = WorkerGraph::from_edges({"a", "b", "c"}, {{0, 1, 1}});
  const auto single = mean_common_neighbors(g, std::vector<std::uint32_t>{0, 0, 1});
  CHECK(single[2] == 0.0);

  const auto glob = mean_common_neighbors(star, std::vector<std::uint32_t>{0, 0, 1, 1}, NeighborScope::Global);
  CHECK(glob[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  const auto local = mean_common_neighbors(star, std::vector<std::uint32_t>{0, 0, 1, 1}, NeighborScope::Cluster);
  CHECK(local[2] == 1.0);
  CHECK(local[1] == 0.0);
}

TEST_CASE("worker rank on reference graphs") {
  const auto c4 = worker_rank(oracle::to_worker_graph(cycle(4)));
  for (double v : c4) CHECK(std::abs(v - 0.25) < 1e-9);

  const auto p3 = worker_rank(oracle::to_worker_graph(path3()));
  CHECK(std::abs(p3[0] - 0.256757) < 1e-5);
  CHECK(std::abs(p3[1] - 0.486486) < 1e-5);
  CHECK(std::abs(p3[2] - 0.256757) < 1e-5);
  // closed form: b = (0.15/3 + 0.85 * 2a), a = 0.15/3 + 0.85 * b / 2
  const double a = (0.05 + 0.85 * 0.05 / 2) / (1 - 0.85 * 0.85);
  CHECK(std::abs(p3[0] - a) < 1e-9);

  const auto one = worker_rank(WorkerGraph::from_edges({"solo"}, {}));
  CHECK(one.size() == 1);
  CHECK(one[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("worker rank matches a direct linear solve and sums to one") {
  std::mt19937_64 rng(8);
  for (int round = 0; round < 40; ++round) {
    const int n = 1 + static_cast<int>(rng() % 25);
    auto sg = oracle::random_graph(rng, n, 0.15);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (sg.adjacent(i, j)) sg.w[i][j] = sg.w[j][i] = 1 + static_cast<std::uint32_t>(rng() % 3);
    const auto wr = worker_rank(oracle::to_worker_graph(sg));
    const auto expect = oracle::pagerank_linear_solve(sg, 0.85);
    CHECK(std::abs(total(wr) - 1.0) < 1e-9);
    for (int i = 0; i < n; ++i) CHECK(std::abs(wr[i] - expect[i]) < 1e-8);
  }
}

TEST_CASE("worker rank is equivariant under relabeling") {
  std::mt19937_64 rng(21);
  const int n = 20;
  const auto sg = oracle::random_connected(rng, n, 0.15, 3);
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  oracle::SmallGraph pg(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) pg.w[perm[i]][perm[j]] = sg.w[i][j];
  const auto a = worker_rank(oracle::to_worker_graph(sg));
  const auto b = worker_rank(oracle::to_worker_graph(pg));
  for (int i = 0; i < n; ++i) CHECK(std::abs(a[i] - b[perm[i]]) < 1e-12);
}

TEST_CASE("closeness on reference graphs") {
  const auto p = closeness(oracle::to_worker_graph(path3()));
  CHECK(p[1] == 1.0);
  CHECK(p[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  oracle::SmallGraph two(4);
  two.add(0, 1), two.add(2, 3);
  for (double v : closeness(oracle::to_worker_graph(two))) CHECK(v == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  for (double v : closeness(oracle::to_worker_graph(complete(5)))) CHECK(v == 1.0);
}

TEST_CASE("closeness matches BFS and is 1 exactly for dominating nodes") {
  std::mt19937_64 rng(12);
  for (int round = 0; round < 30; ++round) {
    const int n = 2 + static_cast<int>(rng() % 40);
    const auto sg = oracle::random_graph(rng, n, 0.12);
    const auto cc = closeness(oracle::to_worker_graph(sg));
    const auto expect = oracle::naive_closeness(sg);
    for (int i = 0; i < n; ++i) CHECK(std::abs(cc[i] - expect[i]) < 1e-12);
  }
  for (int round = 0; round < 20; ++round) {
    const int n = 3 + static_cast<int>(rng() % 15);
    const auto sg = oracle::random_connected(rng, n, 0.3);
    const auto cc = closeness(oracle::to_worker_graph(sg));
    for (int i = 0; i < n; ++i) {
      int deg = 0;
      for (int j = 0; j < n; ++j) deg += sg.adjacent(i, j);
      CHECK((cc[i] == 1.0) == (deg == n - 1));
    }
  }
}

TEST_CASE("betweenness on reference graphs") {
  for (double v : betweenness(oracle::to_worker_graph(complete(3)))) CHECK(v == 0.0);
  const auto p = betweenness(oracle::to_worker_graph(path3()));
  CHECK(p == std::vector<double>{0.0, 1.0, 0.0});
  const auto s = betweenness(oracle::to_worker_graph(star4()));
  CHECK(s[0] == 1.0);
  CHECK(s[1] == 0.0);
}

TEST_CASE("betweenness matches shortest-path enumeration") {
  std::mt19937_64 rng(13);
  for (int round = 0; round < 15; ++round) {
    const int n = 3 + static_cast<int>(rng() % 30);
    const auto sg = oracle::random_graph(rng, n, 0.15);
    const auto bc = betweenness(oracle::to_worker_graph(sg));
    const auto expect = oracle::naive_betweenness(sg);
    for (int i = 0; i < n; ++i) CHECK(std::abs(bc[i] - expect[i]) < 1e-9);
  }
}

TEST_CASE("centrality values are in range and reproducible") {
  std::mt19937_64 rng(14);
  const auto sg = oracle::random_connected(rng, 200, 0.03);
  const auto g = oracle::to_worker_graph(sg);
  std::vector<std::uint32_t> labels(200);
  for (int i = 0; i < 200; ++i) labels[i] = static_cast<std::uint32_t>(i % 3);
  const auto a = compute_centrality(g, labels);
  const auto b = compute_centrality(g, labels);
  CHECK(a.betweenness == b.betweenness);
  CHECK(a.closeness == b.closeness);
  CHECK(a.worker_rank == b.worker_rank);
  CHECK(a.common_neighbors == b.common_neighbors);
  for (int i = 0; i < 200; ++i) {
    CHECK(a.betweenness[i] >= 0.0);
    CHECK(a.betweenness[i] <= 1.0);
    CHECK(a.closeness[i] >= 0.0);
    CHECK(a.closeness[i] <= 1.0);
    CHECK(a.worker_rank[i] > 0.0);
    CHECK(a.worker_rank[i] < 1.0);
  }
}

TEST_CASE("cluster summaries use population standard deviation") {
  CentralityScores s;
  s.common_neighbors = {1.0, 0.0, 4.0};
  s.worker_rank = {0.5, 0.5, 1.0};
  s.closeness = {1.0, 1.0, 1.0};
  s.betweenness = {0.0, 0.0, 0.0};
  const auto sum = summarize_clusters(s, std::vector<std::uint32_t>{0, 0, 1});
  REQUIRE(sum.clusters.size() == 2);
  CHECK(sum.clusters[0].size == 2);
  CHECK(sum.clusters[0].common_neighbors.mean == 0.5);
  CHECK(sum.clusters[0].common_neighbors.std == 0.5);
  CHECK(sum.clusters[0].worker_rank.std == 0.0);
  CHECK(sum.clusters[1].common_neighbors.mean == 4.0);
}
