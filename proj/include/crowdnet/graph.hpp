#pragma once

// Worker-task incidence and its weighted one-mode projection onto workers.
// Both are immutable once built; node order is lexicographic by id.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "crowdnet/dataset.hpp"

namespace crowdnet {

using NodeId = std::uint32_t;

struct BipartiteGraph {
  std::vector<std::string> workers;  // sorted, unique
  std::vector<std::string> tasks;    // sorted, unique
  /// incidence[t] = sorted worker indices registered for tasks[t].
  std::vector<std::vector<NodeId>> incidence;
  /// Repeated (worker, task) pairs dropped during construction.
  std::size_t duplicates_dropped = 0;

  std::optional<std::size_t> worker_index(std::string_view id) const;
  std::optional<std::size_t> task_index(std::string_view id) const;
};

BipartiteGraph build_bipartite(std::span<const RegistrationEvent> events);

class WorkerGraph {
 public:
  struct Edge {
    NodeId u;  // u < v
    NodeId v;
    std::uint32_t weight;
    bool operator==(const Edge&) const = default;
  };

  WorkerGraph() = default;

  /// `nodes` must be sorted and unique. Edges may come in any order and
  /// orientation; throws GraphError on self-loops, zero weights, duplicate
  /// pairs or out-of-range endpoints.
  static WorkerGraph from_edges(std::vector<std::string> nodes, std::vector<Edge> edges);

  /// Convenience for named edge lists (weight 1). Node set is the union of
  /// endpoints and `extra_nodes`.
  static WorkerGraph from_pairs(const std::vector<std::pair<std::string, std::string>>& pairs,
                                const std::vector<std::string>& extra_nodes = {});

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<std::string>& nodes() const { return nodes_; }
  const std::string& node(NodeId u) const { return nodes_[u]; }
  std::span<const Edge> edges() const { return edges_; }
  std::optional<NodeId> index_of(std::string_view id) const;

  /// Sorted neighbor indices of u.
  std::span<const NodeId> neighbors(NodeId u) const {
    return {adjacency_.data() + offsets_[u], adjacency_.data() + offsets_[u + 1]};
  }
  /// Edge weights aligned with neighbors(u).
  std::span<const std::uint32_t> neighbor_weights(NodeId u) const {
    return {weights_.data() + offsets_[u], weights_.data() + offsets_[u + 1]};
  }
  std::size_t degree(NodeId u) const { return offsets_[u + 1] - offsets_[u]; }
  std::uint64_t weighted_degree(NodeId u) const;
  std::uint64_t total_weight() const;

  /// 0 when u and v are not adjacent.
  std::uint32_t weight(NodeId u, NodeId v) const;

  /// Copy with zero-degree nodes removed.
  WorkerGraph without_isolated() const;

 private:
  std::vector<std::string> nodes_;
  std::vector<Edge> edges_;  // sorted by (u, v)
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> adjacency_;
  std::vector<std::uint32_t> weights_;
};

/// Edge (u, v) iff u != v share at least `min_weight` tasks; weight is the
/// shared-task count. Every bipartite worker becomes a node.
WorkerGraph project_workers(const BipartiteGraph& b, std::uint32_t min_weight = 1);

/// Unweighted degree per worker id.
std::map<std::string, std::size_t> degree_sequence(const WorkerGraph& g);

}  // namespace crowdnet
