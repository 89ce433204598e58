#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "costshare/graph.hpp"

namespace costshare {

inline constexpr std::size_t kDefaultTerminalCap = 12;

struct SteinerTree {
  std::vector<EdgeIndex> edges;  // sorted
  std::vector<Vertex> terminals;
  double total_cost = 0.0;

  // Terminals plus every edge endpoint, sorted.
  std::vector<Vertex> vertices(const Graph& graph) const;
};

// Minimum Steiner tree by the Dreyfus-Wagner subset DP. Throws
// kTooManyTerminals when more than `cap` distinct terminals are given.
SteinerTree exact_steiner(const Graph& graph, std::span<const Vertex> terminals, std::size_t cap = kDefaultTerminalCap);

// OPT(S + anchor) for every subset S of `terminals`, from a single DP run.
// Subsets are bitmasks over the order of `terminals`.
class SubsetSteinerTable {
 public:
  SubsetSteinerTable(const Graph& graph, std::vector<Vertex> terminals, Vertex anchor, std::size_t cap = 16);

  const std::vector<Vertex>& terminals() const { return terminals_; }
  double cost(std::uint64_t mask) const { return cost_[mask]; }

 private:
  std::vector<Vertex> terminals_;
  std::vector<double> cost_;
};

enum class ApproxMethod { kMetricMst };

// Metric-closure MST expanded into shortest paths, re-spanned and pruned;
// cost at most twice the optimum.
SteinerTree approx_steiner(const Graph& graph, std::span<const Vertex> terminals,
                           ApproxMethod method = ApproxMethod::kMetricMst);
SteinerTree approx_steiner(const PathOracle& oracle, std::span<const Vertex> terminals);

struct Attachment {
  double distance;
  Vertex nearest;
};

// Distance from v to the closest member of (anchors + root) other than v; 0
// for the root itself.
Attachment nearest_attachment_distance(const Graph& graph, Vertex v, std::span<const Vertex> anchors);
Attachment nearest_attachment_distance(const PathOracle& oracle, Vertex v, std::span<const Vertex> anchors);

// Minimum spanning tree on the metric closure of subset + root. Links are
// pairs of vertices, not graph edges.
struct MetricTree {
  std::vector<std::pair<Vertex, Vertex>> links;
  std::vector<Vertex> terminals;
  double total_cost = 0.0;
};

MetricTree mst(const Graph& graph, std::span<const Vertex> subset);

}  // namespace costshare
