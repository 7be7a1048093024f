#pragma once

// Greedy modularity agglomeration (Clauset-Newman-Moore) and modularity.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "crowdnet/graph.hpp"

namespace crowdnet {

enum class EdgeWeighting { Unweighted, Weighted };

/// One agglomeration step. Community labels are the smallest node index of
/// each community at that point; `absorbed` merges into `kept` (kept < absorbed).
struct MergeStep {
  NodeId kept;
  NodeId absorbed;
  double delta_q;
};

struct Partition {
  /// Cluster per node index, contiguous from 0, numbered by first member.
  std::vector<std::uint32_t> assignment;
  std::size_t cluster_count = 0;
  double modularity = 0.0;
  /// Full dendrogram down to one community per connected component.
  std::vector<MergeStep> merge_trace;
  /// Number of leading merges applied to produce `assignment`.
  std::size_t merges_applied = 0;
};

/// Q = sum over clusters of L_c/m - (D_c/2m)^2. Throws GraphError for an
/// edgeless graph or an assignment that does not cover every node.
double modularity(const WorkerGraph& g, std::span<const std::uint32_t> assignment,
                  EdgeWeighting weighting = EdgeWeighting::Unweighted);

/// Starts from singletons and repeatedly merges the adjacent pair with the
/// largest modularity gain (ties: smallest (kept, absorbed) labels) until no
/// adjacent pair is left; returns the highest-Q partition on that path.
Partition greedy_cluster(const WorkerGraph& g, EdgeWeighting weighting = EdgeWeighting::Unweighted);

/// Applies the first `steps` merges of a trace to singletons; labels are
/// relabelled contiguously.
std::vector<std::uint32_t> replay_merges(std::size_t node_count, std::span<const MergeStep> trace,
                                         std::size_t steps);

/// Cluster sizes, largest first.
std::vector<std::size_t> cluster_sizes(const Partition& p);

/// Relabel arbitrary labels to 0..k-1 in order of first appearance.
std::vector<std::uint32_t> relabel_contiguous(std::span<const std::uint32_t> labels);

/// Arithmetic-mean normalized mutual information; 1 for two single-cluster
/// labelings.
double normalized_mutual_information(std::span<const std::uint32_t> a,
                                     std::span<const std::uint32_t> b);

}  // namespace crowdnet
