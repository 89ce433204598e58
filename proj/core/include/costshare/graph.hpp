#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "costshare/numeric.hpp"

namespace costshare {

using VertexId = std::string;
using Vertex = std::uint32_t;
using EdgeIndex = std::uint32_t;

inline constexpr Vertex kNoVertex = static_cast<Vertex>(-1);
inline constexpr EdgeIndex kNoEdge = static_cast<EdgeIndex>(-1);

struct Edge {
  Vertex u;
  Vertex v;
  double cost;

  Vertex other(Vertex w) const { return w == u ? v : u; }
};

struct Incidence {
  Vertex to;
  EdgeIndex edge;
};

struct EdgeSpec {
  VertexId u;
  VertexId v;
  double cost;
};

// Undirected graph with nonnegative (possibly infinite) edge costs and a
// designated root. Immutable once built; transformers return new graphs.
//
// Vertices are addressed internally by dense indices in declaration order.
// All tie-breaking is by the lexicographic order of vertex ids, exposed as
// lex_rank().
class Graph {
 public:
  Graph() = default;
  Graph(std::vector<VertexId> vertices, std::string_view root, const std::vector<EdgeSpec>& edges);

  std::size_t num_vertices() const { return ids_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  Vertex root() const { return root_; }

  const VertexId& id(Vertex v) const { return ids_[v]; }
  const std::vector<VertexId>& ids() const { return ids_; }
  std::optional<Vertex> find(std::string_view id) const;
  // Throws a validation error for unknown ids.
  Vertex at(std::string_view id) const;

  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(EdgeIndex e) const { return edges_[e]; }

  // Incident edges ordered by the lexicographic rank of the neighbor.
  std::span<const Incidence> incident(Vertex v) const {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }
  std::optional<EdgeIndex> edge_between(Vertex a, Vertex b) const;

  std::uint32_t lex_rank(Vertex v) const { return lex_rank_[v]; }
  bool lex_less(Vertex a, Vertex b) const { return lex_rank_[a] < lex_rank_[b]; }

  // Every vertex except the root, in declaration order.
  std::vector<Vertex> non_root_vertices() const;

  // True when the subgraph of finite-cost edges is connected.
  bool finite_connected() const;

  // New graph with extra vertices appended and extra edges added.
  Graph with_additions(const std::vector<VertexId>& new_vertices, const std::vector<EdgeSpec>& new_edges) const;

  std::vector<EdgeSpec> edge_specs() const;

 private:
  static std::uint64_t pair_key(Vertex a, Vertex b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | b;
  }

  std::vector<VertexId> ids_;
  std::unordered_map<std::string, Vertex> index_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_;
  std::vector<Incidence> adjacency_;
  std::unordered_map<std::uint64_t, EdgeIndex> pair_index_;
  std::vector<std::uint32_t> lex_rank_;
  Vertex root_ = kNoVertex;
};

// Distinct non-root player vertices of a game, kept sorted by vertex index.
class ActivationSet {
 public:
  ActivationSet() = default;
  ActivationSet(const Graph& graph, std::vector<Vertex> players);

  const std::vector<Vertex>& players() const { return players_; }
  std::size_t k() const { return players_.size(); }
  bool empty() const { return players_.empty(); }
  bool contains(Vertex v) const;

 private:
  std::vector<Vertex> players_;
};

ActivationSet activation_from_ids(const Graph& graph, const std::vector<VertexId>& ids);

struct Path {
  std::vector<Vertex> vertices;
  double cost = 0.0;
};

// Per-edge cost override indexed by EdgeIndex; empty means the graph's costs.
using CostOverride = std::span<const double>;

// Distances (and hop counts on the cheapest routes) to a target set.
struct DistanceField {
  std::vector<double> dist;
  std::vector<std::uint32_t> hops;
};

// Multi-source Dijkstra from every vertex flagged in `targets`. Among routes
// of equal cost (within tolerance) fewer hops wins.
DistanceField distances_to_set(const Graph& graph, const std::vector<char>& targets, CostOverride costs = {});

std::vector<double> distances_from(const Graph& graph, Vertex source, CostOverride costs = {});

// Cheapest path from `source` to the nearest flagged target; it stops at the
// first target reached. Ties: fewer hops, then lexicographically smallest
// vertex-id sequence. Throws kUnreachable.
Path connector_to_set(const Graph& graph, Vertex source, const std::vector<char>& targets, CostOverride costs = {});

Path shortest_path(const Graph& graph, Vertex from, Vertex to, CostOverride costs = {});

double path_cost(const Graph& graph, std::span<const Vertex> vertices, CostOverride costs = {});

class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t n) : n_(n), data_(n * n, kInf) {}

  std::size_t size() const { return n_; }
  double operator()(std::size_t a, std::size_t b) const { return data_[a * n_ + b]; }
  double& at(std::size_t a, std::size_t b) { return data_[a * n_ + b]; }

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

// Shortest-path distances restricted to `terminals`; row/column i refers to
// terminals[i]. Throws kUnreachable when any pair is disconnected.
DistanceMatrix metric_closure(const Graph& graph, std::span<const Vertex> terminals);

// All-pairs distances with deterministic path reconstruction following the
// same tie rule as shortest_path().
class PathOracle {
 public:
  explicit PathOracle(const Graph& graph);

  const Graph& graph() const { return *graph_; }
  double distance(Vertex a, Vertex b) const { return fields_[b].dist[a]; }
  Path path(Vertex from, Vertex to) const;

 private:
  const Graph* graph_;
  // fields_[t] holds distances to t.
  std::vector<DistanceField> fields_;
};

struct NormalizedGame {
  Graph graph;
  ActivationSet players;
};

// Gives every requested player its own vertex: a vertex hosting m > 1 players
// receives m-1 fresh neighbors joined by zero-cost edges.
NormalizedGame normalize_players(const Graph& graph, const std::vector<VertexId>& requested);

}  // namespace costshare
