#include "crowdnet/centrality.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <string>
#include <thread>

#include "crowdnet/error.hpp"
#include "crowdnet/simd/kernels.hpp"
#include "crowdnet/stats.hpp"

namespace crowdnet {
namespace {

// Sources are split into fixed-size chunks independent of the thread count;
// per-chunk partial results are combined in chunk order, so output is bitwise
// identical for any degree of parallelism.
constexpr std::size_t kSourceChunk = 64;

void for_each_chunk(std::size_t n, const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
  const std::size_t chunks = (n + kSourceChunk - 1) / kSourceChunk;
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(std::thread::hardware_concurrency(), chunks));
  auto run = [&](std::size_t first_chunk) {
    for (std::size_t c = first_chunk; c < chunks; c += workers) {
      fn(c, c * kSourceChunk, std::min(n, (c + 1) * kSourceChunk));
    }
  };
  if (workers <= 1) {
    run(0);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run, w);
  run(0);
}

NodeId require_node(const WorkerGraph& g, std::string_view id) {
  auto idx = g.index_of(id);
  if (!idx) throw GraphError("unknown node '" + std::string(id) + "'");
  return *idx;
}

}  // namespace

std::size_t common_neighbors(const WorkerGraph& g, std::string_view u, std::string_view v) {
  const NodeId a = require_node(g, u);
  const NodeId b = require_node(g, v);
  if (a == b) throw GraphError("common neighbors need two distinct nodes");
  const auto na = g.neighbors(a), nb = g.neighbors(b);
  std::size_t count = 0;
  for (std::size_t i = 0, j = 0; i < na.size() && j < nb.size();) {
    if (na[i] < nb[j]) {
      ++i;
    } else if (nb[j] < na[i]) {
      ++j;
    } else {
      ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

AdjacencyBitsets::AdjacencyBitsets(const WorkerGraph& g)
    : words_((g.node_count() + 63) / 64), bits_(words_ * g.node_count(), 0) {
  for (NodeId u = 0; u < g.node_count(); ++u) {
    auto* row = bits_.data() + u * words_;
    for (NodeId v : g.neighbors(u)) row[v / 64] |= std::uint64_t{1} << (v % 64);
  }
}

std::size_t AdjacencyBitsets::intersection(NodeId u, NodeId v) const {
  return simd::and_popcount({bits_.data() + u * words_, words_}, {bits_.data() + v * words_, words_});
}

std::vector<double> mean_common_neighbors(const WorkerGraph& g,
                                          std::span<const std::uint32_t> assignment,
                                          NeighborScope scope) {
  const auto n = g.node_count();
  if (scope == NeighborScope::Cluster && assignment.size() != n) {
    throw GraphError("assignment does not cover the graph");
  }
  std::vector<std::vector<NodeId>> groups;
  if (scope == NeighborScope::Global) {
    groups.emplace_back(n);
    for (NodeId u = 0; u < n; ++u) groups[0][u] = u;
  } else {
    for (NodeId u = 0; u < n; ++u) {
      if (assignment[u] >= groups.size()) groups.resize(assignment[u] + 1);
      groups[assignment[u]].push_back(u);
    }
  }

  const AdjacencyBitsets bits(g);
  std::vector<double> totals(n, 0.0);
  for (const auto& members : groups) {
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (std::size_t j = i + 1; j < members.size(); ++j) {
        const auto cn = static_cast<double>(bits.intersection(members[i], members[j]));
        totals[members[i]] += cn;
        totals[members[j]] += cn;
      }
    }
  }
  std::vector<double> mean(n, 0.0);
  for (const auto& members : groups) {
    if (members.size() < 2) continue;
    const auto peers = static_cast<double>(members.size() - 1);
    for (NodeId u : members) mean[u] = totals[u] / peers;
  }
  return mean;
}

std::vector<double> worker_rank(const WorkerGraph& g, const WorkerRankOptions& opts) {
  const auto n = g.node_count();
  if (n == 0) return {};
  const double uniform = 1.0 / static_cast<double>(n);

  std::vector<double> inv_strength(n, 0.0);
  std::vector<NodeId> dangling;
  for (NodeId u = 0; u < n; ++u) {
    const auto s = g.weighted_degree(u);
    if (s == 0) {
      dangling.push_back(u);
    } else {
      inv_strength[u] = 1.0 / static_cast<double>(s);
    }
  }

  std::vector<double> rank(n, uniform), next(n), share(n);
  for (std::size_t it = 0; it < opts.max_iterations; ++it) {
    simd::mul(rank, inv_strength, share);
    double dangling_mass = 0.0;
    for (NodeId u : dangling) dangling_mass += rank[u];
    for (NodeId v = 0; v < n; ++v) {
      const auto nb = g.neighbors(v);
      const auto w = g.neighbor_weights(v);
      double acc = 0.0;
      for (std::size_t k = 0; k < nb.size(); ++k) acc += static_cast<double>(w[k]) * share[nb[k]];
      next[v] = acc;
    }
    const double teleport = ((1.0 - opts.damping) + opts.damping * dangling_mass) * uniform;
    simd::scale_shift(next, opts.damping, teleport);
    const double change = simd::l1_distance(next, rank);
    rank.swap(next);
    if (change < opts.tolerance) break;
  }
  const double total = simd::sum(rank);
  simd::scale_shift(rank, 1.0 / total, 0.0);
  return rank;
}

std::vector<double> closeness(const WorkerGraph& g) {
  const auto n = g.node_count();
  std::vector<double> out(n, 0.0);
  if (n < 2) return out;
  for_each_chunk(n, [&](std::size_t, std::size_t lo, std::size_t hi) {
    std::vector<std::int64_t> dist(n, -1);
    std::vector<NodeId> queue;
    queue.reserve(n);
    for (std::size_t s = lo; s < hi; ++s) {
      std::fill(dist.begin(), dist.end(), -1);
      queue.clear();
      queue.push_back(static_cast<NodeId>(s));
      dist[s] = 0;
      std::int64_t total = 0;
      for (std::size_t head = 0; head < queue.size(); ++head) {
        const NodeId u = queue[head];
        total += dist[u];
        for (NodeId v : g.neighbors(u)) {
          if (dist[v] < 0) {
            dist[v] = dist[u] + 1;
            queue.push_back(v);
          }
        }
      }
      const auto reach = static_cast<double>(queue.size() - 1);
      if (total > 0) {
        out[s] = (reach / static_cast<double>(total)) * (reach / static_cast<double>(n - 1));
      }
    }
  });
  return out;
}

std::vector<double> betweenness(const WorkerGraph& g) {
  const auto n = g.node_count();
  std::vector<double> out(n, 0.0);
  if (n < 3) return out;
  const std::size_t chunks = (n + kSourceChunk - 1) / kSourceChunk;
  std::vector<std::vector<double>> partial(chunks);

  for_each_chunk(n, [&](std::size_t chunk, std::size_t lo, std::size_t hi) {
    std::vector<double> acc(n, 0.0), sigma(n), delta(n);
    std::vector<std::int64_t> dist(n);
    std::vector<NodeId> order;
    order.reserve(n);
    for (std::size_t s = lo; s < hi; ++s) {
      std::fill(sigma.begin(), sigma.end(), 0.0);
      std::fill(delta.begin(), delta.end(), 0.0);
      std::fill(dist.begin(), dist.end(), -1);
      order.clear();
      sigma[s] = 1.0;
      dist[s] = 0;
      order.push_back(static_cast<NodeId>(s));
      for (std::size_t head = 0; head < order.size(); ++head) {
        const NodeId u = order[head];
        for (NodeId v : g.neighbors(u)) {
          if (dist[v] < 0) {
            dist[v] = dist[u] + 1;
            order.push_back(v);
          }
          if (dist[v] == dist[u] + 1) sigma[v] += sigma[u];
        }
      }
      // Dependency accumulation in reverse BFS order; predecessors of w are
      // the neighbors one hop closer to the source.
      for (std::size_t k = order.size(); k-- > 1;) {
        const NodeId w = order[k];
        const double coeff = (1.0 + delta[w]) / sigma[w];
        for (NodeId v : g.neighbors(w)) {
          if (dist[v] == dist[w] - 1) delta[v] += sigma[v] * coeff;
        }
        acc[w] += delta[w];
      }
    }
    partial[chunk] = std::move(acc);
  });

  for (const auto& p : partial) {
    for (std::size_t v = 0; v < n; ++v) out[v] += p[v];
  }
  // Each unordered pair is counted from both ends.
  const double norm = static_cast<double>(n - 1) * static_cast<double>(n - 2);
  for (auto& x : out) x /= norm;
  return out;
}

CentralityScores compute_centrality(const WorkerGraph& g, std::span<const std::uint32_t> assignment,
                                    NeighborScope scope) {
  CentralityScores s;
  s.common_neighbors = mean_common_neighbors(g, assignment, scope);
  s.worker_rank = worker_rank(g);
  s.closeness = closeness(g);
  s.betweenness = betweenness(g);
  return s;
}

ClusterNetworkSummary summarize_clusters(const CentralityScores& scores,
                                         std::span<const std::uint32_t> assignment) {
  std::vector<std::vector<NodeId>> groups;
  for (NodeId u = 0; u < assignment.size(); ++u) {
    if (assignment[u] >= groups.size()) groups.resize(assignment[u] + 1);
    groups[assignment[u]].push_back(u);
  }
  auto summary = [](const std::vector<double>& metric, const std::vector<NodeId>& members) {
    std::vector<double> values;
    values.reserve(members.size());
    for (NodeId u : members) values.push_back(metric[u]);
    const auto d = describe(values);
    return MetricSummary{d.mean, d.std};
  };
  ClusterNetworkSummary out;
  for (const auto& members : groups) {
    ClusterNetworkSummary::Row row;
    row.size = members.size();
    if (!members.empty()) {
      row.common_neighbors = summary(scores.common_neighbors, members);
      row.worker_rank = summary(scores.worker_rank, members);
      row.closeness = summary(scores.closeness, members);
      row.betweenness = summary(scores.betweenness, members);
    }
    out.clusters.push_back(row);
  }
  return out;
}

}  // namespace crowdnet
