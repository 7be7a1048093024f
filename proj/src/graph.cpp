#include "crowdnet/graph.hpp"

#include <algorithm>
#include <tuple>
#include <unordered_map>

#include "crowdnet/error.hpp"

namespace crowdnet {
namespace {

std::optional<std::size_t> find_sorted(const std::vector<std::string>& v, std::string_view id) {
  auto it = std::lower_bound(v.begin(), v.end(), id);
  if (it == v.end() || *it != id) return std::nullopt;
  return static_cast<std::size_t>(it - v.begin());
}

std::vector<std::string> sorted_unique(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

std::optional<std::size_t> BipartiteGraph::worker_index(std::string_view id) const {
  return find_sorted(workers, id);
}

std::optional<std::size_t> BipartiteGraph::task_index(std::string_view id) const {
  return find_sorted(tasks, id);
}

BipartiteGraph build_bipartite(std::span<const RegistrationEvent> events) {
  BipartiteGraph b;
  {
    std::vector<std::string> w, t;
    w.reserve(events.size());
    t.reserve(events.size());
    for (const auto& e : events) {
      w.push_back(e.worker_id);
      t.push_back(e.task_id);
    }
    b.workers = sorted_unique(std::move(w));
    b.tasks = sorted_unique(std::move(t));
  }
  b.incidence.resize(b.tasks.size());
  for (const auto& e : events) {
    const auto wi = *b.worker_index(e.worker_id);
    const auto ti = *b.task_index(e.task_id);
    b.incidence[ti].push_back(static_cast<NodeId>(wi));
  }
  for (auto& reg : b.incidence) {
    std::sort(reg.begin(), reg.end());
    const auto before = reg.size();
    reg.erase(std::unique(reg.begin(), reg.end()), reg.end());
    b.duplicates_dropped += before - reg.size();
  }
  return b;
}

WorkerGraph WorkerGraph::from_edges(std::vector<std::string> nodes, std::vector<Edge> edges) {
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    if (!(nodes[i - 1] < nodes[i])) throw GraphError("node ids must be sorted and unique");
  }
  const auto n = nodes.size();
  for (auto& e : edges) {
    if (e.u == e.v) throw GraphError("self-loop on node " + std::to_string(e.u));
    if (e.weight == 0) throw GraphError("edge weight must be positive");
    if (e.u >= n || e.v >= n) throw GraphError("edge endpoint out of range");
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end(),
            [](const Edge& a, const Edge& b) { return std::tie(a.u, a.v) < std::tie(b.u, b.v); });
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (edges[i - 1].u == edges[i].u && edges[i - 1].v == edges[i].v) {
      throw GraphError("duplicate edge " + nodes[edges[i].u] + " - " + nodes[edges[i].v]);
    }
  }

  WorkerGraph g;
  g.nodes_ = std::move(nodes);
  g.edges_ = std::move(edges);
  std::vector<std::size_t> deg(n, 0);
  for (const auto& e : g.edges_) {
    ++deg[e.u];
    ++deg[e.v];
  }
  g.offsets_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) g.offsets_[i + 1] = g.offsets_[i] + deg[i];
  g.adjacency_.resize(g.offsets_[n]);
  g.weights_.resize(g.offsets_[n]);
  std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  // Edges sorted by (u, v) fill each row in ascending order: first the
  // smaller endpoints (as v), then the larger ones (as u).
  for (const auto& e : g.edges_) {
    g.adjacency_[cursor[e.u]] = e.v;
    g.weights_[cursor[e.u]++] = e.weight;
    g.adjacency_[cursor[e.v]] = e.u;
    g.weights_[cursor[e.v]++] = e.weight;
  }
  return g;
}

WorkerGraph WorkerGraph::from_pairs(const std::vector<std::pair<std::string, std::string>>& pairs,
                                    const std::vector<std::string>& extra_nodes) {
  std::vector<std::string> names = extra_nodes;
  for (const auto& [a, b] : pairs) {
    names.push_back(a);
    names.push_back(b);
  }
  names = sorted_unique(std::move(names));
  std::vector<Edge> edges;
  edges.reserve(pairs.size());
  for (const auto& [a, b] : pairs) {
    edges.push_back({static_cast<NodeId>(*find_sorted(names, a)),
                     static_cast<NodeId>(*find_sorted(names, b)), 1});
  }
  return from_edges(std::move(names), std::move(edges));
}

std::optional<NodeId> WorkerGraph::index_of(std::string_view id) const {
  auto idx = find_sorted(nodes_, id);
  if (!idx) return std::nullopt;
  return static_cast<NodeId>(*idx);
}

std::uint64_t WorkerGraph::weighted_degree(NodeId u) const {
  std::uint64_t s = 0;
  for (auto w : neighbor_weights(u)) s += w;
  return s;
}

std::uint64_t WorkerGraph::total_weight() const {
  std::uint64_t s = 0;
  for (const auto& e : edges_) s += e.weight;
  return s;
}

std::uint32_t WorkerGraph::weight(NodeId u, NodeId v) const {
  const auto nb = neighbors(u);
  auto it = std::lower_bound(nb.begin(), nb.end(), v);
  if (it == nb.end() || *it != v) return 0;
  return neighbor_weights(u)[static_cast<std::size_t>(it - nb.begin())];
}

WorkerGraph WorkerGraph::without_isolated() const {
  std::vector<std::string> kept;
  std::vector<NodeId> remap(nodes_.size(), 0);
  for (NodeId u = 0; u < nodes_.size(); ++u) {
    if (degree(u) == 0) continue;
    remap[u] = static_cast<NodeId>(kept.size());
    kept.push_back(nodes_[u]);
  }
  std::vector<Edge> edges;
  edges.reserve(edges_.size());
  for (const auto& e : edges_) edges.push_back({remap[e.u], remap[e.v], e.weight});
  return from_edges(std::move(kept), std::move(edges));
}

WorkerGraph project_workers(const BipartiteGraph& b, std::uint32_t min_weight) {
  std::unordered_map<std::uint64_t, std::uint32_t> counts;
  for (const auto& reg : b.incidence) {
    for (std::size_t i = 0; i < reg.size(); ++i) {
      for (std::size_t j = i + 1; j < reg.size(); ++j) {
        ++counts[(static_cast<std::uint64_t>(reg[i]) << 32) | reg[j]];
      }
    }
  }
  std::vector<WorkerGraph::Edge> edges;
  edges.reserve(counts.size());
  for (const auto& [key, w] : counts) {
    if (w < std::max<std::uint32_t>(min_weight, 1)) continue;
    edges.push_back({static_cast<NodeId>(key >> 32), static_cast<NodeId>(key & 0xffffffffu), w});
  }
  return WorkerGraph::from_edges(b.workers, std::move(edges));
}

std::map<std::string, std::size_t> degree_sequence(const WorkerGraph& g) {
  std::map<std::string, std::size_t> out;
  for (NodeId u = 0; u < g.node_count(); ++u) out.emplace(g.node(u), g.degree(u));
  return out;
}

}  // namespace crowdnet
