#include "crowdnet/community.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <string>

#include "crowdnet/error.hpp"

namespace crowdnet {
namespace {

// All gains are kept as exact integers scaled by 4m^2 (m = total edge
// weight), so equal gains compare equal and tie-breaking is deterministic.
//   Q * 4m^2        = sum_c (4m L_c - D_c^2)
//   dQ(a,b) * 4m^2  = 2 (2m E_ab - D_a D_b)
using Int = std::int64_t;

constexpr Int kMaxTotalWeight = Int{1} << 30;

std::uint64_t edge_weight(const WorkerGraph::Edge& e, EdgeWeighting w) {
  return w == EdgeWeighting::Weighted ? e.weight : 1;
}

Int total_weight(const WorkerGraph& g, EdgeWeighting w) {
  std::uint64_t m = 0;
  for (const auto& e : g.edges()) m += edge_weight(e, w);
  if (m == 0) throw GraphError("modularity undefined for m=0");
  if (m > static_cast<std::uint64_t>(kMaxTotalWeight)) {
    throw GraphError("total edge weight too large for exact modularity arithmetic");
  }
  return static_cast<Int>(m);
}

double scaled_to_q(Int numerator, Int m) {
  return static_cast<double>(numerator) / (4.0 * static_cast<double>(m) * static_cast<double>(m));
}

struct Candidate {
  Int gain;  // 2m E_ab - D_a D_b
  NodeId a;  // a < b
  NodeId b;

  bool operator<(const Candidate& o) const {
    if (gain != o.gain) return gain > o.gain;
    if (a != o.a) return a < o.a;
    return b < o.b;
  }
};

class Agglomerator {
 public:
  Agglomerator(const WorkerGraph& g, EdgeWeighting weighting)
      : m_(total_weight(g, weighting)), degree_(g.node_count(), 0), rows_(g.node_count()) {
    for (const auto& e : g.edges()) {
      const Int w = static_cast<Int>(edge_weight(e, weighting));
      degree_[e.u] += w;
      degree_[e.v] += w;
      rows_[e.u][e.v] += w;
      rows_[e.v][e.u] += w;
    }
    numerator_ = 0;
    for (Int d : degree_) numerator_ -= d * d;
    for (NodeId u = 0; u < rows_.size(); ++u) {
      for (const auto& [v, w] : rows_[u]) {
        if (u < v) queue_.insert(candidate(u, v, w));
      }
    }
  }

  Int numerator() const { return numerator_; }
  Int m() const { return m_; }
  bool done() const { return queue_.empty(); }

  MergeStep merge_best() {
    const Candidate best = *queue_.begin();
    const NodeId a = best.a;
    const NodeId b = best.b;

    for (const auto& [c, w] : rows_[a]) queue_.erase(candidate(a, c, w));
    for (const auto& [c, w] : rows_[b]) {
      if (c != a) queue_.erase(candidate(b, c, w));
    }

    auto absorbed = std::move(rows_[b]);
    rows_[b].clear();
    auto& kept = rows_[a];
    kept.erase(b);
    for (const auto& [c, w] : absorbed) {
      if (c == a) continue;
      kept[c] += w;
      auto& row_c = rows_[c];
      row_c.erase(b);
      row_c[a] += w;
    }
    degree_[a] += degree_[b];
    degree_[b] = 0;
    numerator_ += 2 * best.gain;

    for (const auto& [c, w] : kept) queue_.insert(candidate(a, c, w));

    return {a, b, scaled_to_q(2 * best.gain, m_)};
  }

 private:
  Candidate candidate(NodeId x, NodeId y, Int between) const {
    const NodeId lo = std::min(x, y), hi = std::max(x, y);
    return {2 * m_ * between - degree_[lo] * degree_[hi], lo, hi};
  }

  Int m_;
  Int numerator_ = 0;
  std::vector<Int> degree_;
  std::vector<std::map<NodeId, Int>> rows_;
  std::set<Candidate> queue_;
};

}  // namespace

double modularity(const WorkerGraph& g, std::span<const std::uint32_t> assignment,
                  EdgeWeighting weighting) {
  if (assignment.size() != g.node_count()) {
    throw GraphError("assignment covers " + std::to_string(assignment.size()) + " of " +
                     std::to_string(g.node_count()) + " nodes");
  }
  const Int m = total_weight(g, weighting);
  const std::uint32_t k =
      assignment.empty() ? 0 : *std::max_element(assignment.begin(), assignment.end()) + 1;
  std::vector<Int> inner(k, 0), degree(k, 0);
  for (const auto& e : g.edges()) {
    const Int w = static_cast<Int>(edge_weight(e, weighting));
    degree[assignment[e.u]] += w;
    degree[assignment[e.v]] += w;
    if (assignment[e.u] == assignment[e.v]) inner[assignment[e.u]] += w;
  }
  Int numerator = 0;
  for (std::uint32_t c = 0; c < k; ++c) numerator += 4 * m * inner[c] - degree[c] * degree[c];
  return scaled_to_q(numerator, m);
}

Partition greedy_cluster(const WorkerGraph& g, EdgeWeighting weighting) {
  Agglomerator agg(g, weighting);
  Partition p;
  Int best = agg.numerator();
  std::size_t best_steps = 0;
  while (!agg.done()) {
    p.merge_trace.push_back(agg.merge_best());
    if (agg.numerator() > best) {
      best = agg.numerator();
      best_steps = p.merge_trace.size();
    }
  }
  p.merges_applied = best_steps;
  p.assignment = replay_merges(g.node_count(), p.merge_trace, best_steps);
  p.cluster_count = p.assignment.empty()
                        ? 0
                        : *std::max_element(p.assignment.begin(), p.assignment.end()) + 1;
  p.modularity = scaled_to_q(best, agg.m());
  return p;
}

std::vector<std::uint32_t> replay_merges(std::size_t node_count, std::span<const MergeStep> trace,
                                         std::size_t steps) {
  std::vector<std::uint32_t> parent(node_count);
  std::iota(parent.begin(), parent.end(), 0u);
  auto find = [&](std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t s = 0; s < std::min(steps, trace.size()); ++s) {
    const auto a = find(trace[s].kept), b = find(trace[s].absorbed);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::uint32_t> roots(node_count);
  for (std::uint32_t u = 0; u < node_count; ++u) roots[u] = find(u);
  return relabel_contiguous(roots);
}

std::vector<std::size_t> cluster_sizes(const Partition& p) {
  std::vector<std::size_t> sizes(p.cluster_count, 0);
  for (auto c : p.assignment) {
    if (c >= sizes.size()) sizes.resize(c + 1, 0);
    ++sizes[c];
  }
  std::sort(sizes.begin(), sizes.end(), std::greater<>());
  return sizes;
}

std::vector<std::uint32_t> relabel_contiguous(std::span<const std::uint32_t> labels) {
  std::map<std::uint32_t, std::uint32_t> seen;
  std::vector<std::uint32_t> out;
  out.reserve(labels.size());
  for (auto l : labels) {
    auto [it, inserted] = seen.emplace(l, static_cast<std::uint32_t>(seen.size()));
    out.push_back(it->second);
  }
  return out;
}

double normalized_mutual_information(std::span<const std::uint32_t> a,
                                     std::span<const std::uint32_t> b) {
  if (a.size() != b.size()) throw Error("labelings differ in length");
  const auto n = static_cast<double>(a.size());
  if (a.empty()) return 1.0;
  std::map<std::uint32_t, double> pa, pb;
  std::map<std::pair<std::uint32_t, std::uint32_t>, double> joint;
  for (std::size_t i = 0; i < a.size(); ++i) {
    pa[a[i]] += 1.0;
    pb[b[i]] += 1.0;
    joint[{a[i], b[i]}] += 1.0;
  }
  auto entropy = [n](const std::map<std::uint32_t, double>& counts) {
    double h = 0.0;
    for (const auto& [k, c] : counts) h -= (c / n) * std::log(c / n);
    return h;
  };
  const double ha = entropy(pa), hb = entropy(pb);
  if (ha == 0.0 && hb == 0.0) return 1.0;
  double mi = 0.0;
  for (const auto& [key, c] : joint) {
    mi += (c / n) * std::log(c * n / (pa[key.first] * pb[key.second]));
  }
  return std::clamp(2.0 * mi / (ha + hb), 0.0, 1.0);
}

}  // namespace crowdnet
