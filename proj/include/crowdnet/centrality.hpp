#pragma once

// Network metrics per worker: common neighbors, worker rank, closeness and
// betweenness, plus per-cluster mean/std summaries.

#include <cstddef>
#include <string_view>
#include <vector>

#include "crowdnet/community.hpp"
#include "crowdnet/graph.hpp"

namespace crowdnet {

enum class NeighborScope { Cluster, Global };

struct WorkerRankOptions {
  double damping = 0.85;
  double tolerance = 1e-10;  // L1 change between iterates
  std::size_t max_iterations = 10000;
};

inline constexpr std::string_view kWorkerRankMethod =
    "damped link analysis (PageRank), damping 0.85, uniform teleport, edge-weighted transitions";

struct CentralityScores {
  std::vector<double> common_neighbors;  // #CN, mean over peers
  std::vector<double> worker_rank;       // WR
  std::vector<double> closeness;         // CC
  std::vector<double> betweenness;       // BC
};

struct MetricSummary {
  double mean = 0.0;
  double std = 0.0;
};

struct ClusterNetworkSummary {
  struct Row {
    std::size_t size = 0;
    MetricSummary common_neighbors, worker_rank, closeness, betweenness;
  };
  std::vector<Row> clusters;  // indexed by cluster label
};

/// |N(u) ∩ N(v)|. Throws GraphError for unknown ids or u == v.
std::size_t common_neighbors(const WorkerGraph& g, std::string_view u, std::string_view v);

/// Bitset adjacency rows for word-parallel neighbor intersection.
class AdjacencyBitsets {
 public:
  explicit AdjacencyBitsets(const WorkerGraph& g);
  std::size_t intersection(NodeId u, NodeId v) const;

 private:
  std::size_t words_;
  std::vector<std::uint64_t> bits_;
};

/// Mean common-neighbor count of each node against the other members of its
/// cluster (or against every other node for Global). 0 when there are none.
std::vector<double> mean_common_neighbors(const WorkerGraph& g,
                                          std::span<const std::uint32_t> assignment,
                                          NeighborScope scope = NeighborScope::Cluster);

/// Damped, edge-weighted link analysis. Isolated nodes spread their mass
/// uniformly. Result sums to 1.
std::vector<double> worker_rank(const WorkerGraph& g, const WorkerRankOptions& opts = {});

/// Hop-distance closeness with component scaling:
/// ((r-1)/sum d) * ((r-1)/(n-1)), r = nodes reachable including self.
std::vector<double> closeness(const WorkerGraph& g);

/// Unweighted shortest-path betweenness, normalized by (n-1)(n-2)/2.
std::vector<double> betweenness(const WorkerGraph& g);

CentralityScores compute_centrality(const WorkerGraph& g, std::span<const std::uint32_t> assignment,
                                    NeighborScope scope = NeighborScope::Cluster);

ClusterNetworkSummary summarize_clusters(const CentralityScores& scores,
                                         std::span<const std::uint32_t> assignment);

}  // namespace crowdnet
