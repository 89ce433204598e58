#include "costshare/graph.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>
#include <tuple>

#include "costshare/error.hpp"

namespace costshare {

Graph::Graph(std::vector<VertexId> vertices, std::string_view root, const std::vector<EdgeSpec>& edges)
    : ids_(std::move(vertices)) {
  require(!ids_.empty(), "graph has no vertices");
  index_.reserve(ids_.size());
  for (Vertex v = 0; v < ids_.size(); ++v) {
    require(!ids_[v].empty(), "empty vertex id");
    require(index_.emplace(ids_[v], v).second, "duplicate vertex id '" + ids_[v] + "'");
  }
  auto root_it = index_.find(std::string(root));
  require(root_it != index_.end(), "root '" + std::string(root) + "' is not a vertex");
  root_ = root_it->second;

  edges_.reserve(edges.size());
  for (const EdgeSpec& spec : edges) {
    const Vertex u = at(spec.u);
    const Vertex v = at(spec.v);
    require(u != v, "self-loop at '" + spec.u + "'");
    require(spec.cost >= 0.0 && !std::isnan(spec.cost), "negative or NaN cost on edge '" + spec.u + "'-'" + spec.v + "'");
    const auto e = static_cast<EdgeIndex>(edges_.size());
    require(pair_index_.emplace(pair_key(u, v), e).second, "duplicate edge '" + spec.u + "'-'" + spec.v + "'");
    edges_.push_back({u, v, spec.cost});
  }

  std::vector<Vertex> order(ids_.size());
  std::iota(order.begin(), order.end(), Vertex{0});
  std::sort(order.begin(), order.end(), [&](Vertex a, Vertex b) { return ids_[a] < ids_[b]; });
  lex_rank_.assign(ids_.size(), 0);
  for (std::uint32_t r = 0; r < order.size(); ++r) lex_rank_[order[r]] = r;

  std::vector<std::size_t> degree(ids_.size(), 0);
  for (const Edge& e : edges_) {
    ++degree[e.u];
    ++degree[e.v];
  }
  offsets_.assign(ids_.size() + 1, 0);
  for (std::size_t v = 0; v < ids_.size(); ++v) offsets_[v + 1] = offsets_[v] + degree[v];
  adjacency_.resize(offsets_.back());
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (EdgeIndex e = 0; e < edges_.size(); ++e) {
    adjacency_[fill[edges_[e].u]++] = {edges_[e].v, e};
    adjacency_[fill[edges_[e].v]++] = {edges_[e].u, e};
  }
  for (std::size_t v = 0; v < ids_.size(); ++v) {
    std::sort(adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[v]),
              adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[v + 1]),
              [&](const Incidence& a, const Incidence& b) { return lex_rank_[a.to] < lex_rank_[b.to]; });
  }
}

std::optional<Vertex> Graph::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Vertex Graph::at(std::string_view id) const {
  auto v = find(id);
  require(v.has_value(), "unknown vertex '" + std::string(id) + "'");
  return *v;
}

std::optional<EdgeIndex> Graph::edge_between(Vertex a, Vertex b) const {
  auto it = pair_index_.find(pair_key(a, b));
  if (it == pair_index_.end()) return std::nullopt;
  return it->second;
}

std::vector<Vertex> Graph::non_root_vertices() const {
  std::vector<Vertex> out;
  out.reserve(ids_.size() - 1);
  for (Vertex v = 0; v < ids_.size(); ++v) {
    if (v != root_) out.push_back(v);
  }
  return out;
}

bool Graph::finite_connected() const {
  std::vector<char> seen(ids_.size(), 0);
  std::vector<Vertex> stack{root_};
  seen[root_] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    const Vertex v = stack.back();
    stack.pop_back();
    for (const Incidence& inc : incident(v)) {
      if (std::isinf(edges_[inc.edge].cost) || seen[inc.to]) continue;
      seen[inc.to] = 1;
      ++count;
      stack.push_back(inc.to);
    }
  }
  return count == ids_.size();
}

std::vector<EdgeSpec> Graph::edge_specs() const {
  std::vector<EdgeSpec> out;
  out.reserve(edges_.size());
  for (const Edge& e : edges_) out.push_back({ids_[e.u], ids_[e.v], e.cost});
  return out;
}

Graph Graph::with_additions(const std::vector<VertexId>& new_vertices, const std::vector<EdgeSpec>& new_edges) const {
  std::vector<VertexId> vertices = ids_;
  vertices.insert(vertices.end(), new_vertices.begin(), new_vertices.end());
  std::vector<EdgeSpec> edges = edge_specs();
  edges.insert(edges.end(), new_edges.begin(), new_edges.end());
  return Graph(std::move(vertices), ids_[root_], edges);
}

ActivationSet::ActivationSet(const Graph& graph, std::vector<Vertex> players) : players_(std::move(players)) {
  std::sort(players_.begin(), players_.end());
  for (std::size_t i = 0; i < players_.size(); ++i) {
    require(players_[i] < graph.num_vertices(), "player index out of range");
    if (players_[i] == graph.root()) fail(ErrorKind::kRootIsPlayer, "the root cannot be a player");
    require(i == 0 || players_[i] != players_[i - 1], "duplicate player '" + graph.id(players_[i]) + "'");
  }
}

bool ActivationSet::contains(Vertex v) const { return std::binary_search(players_.begin(), players_.end(), v); }

ActivationSet activation_from_ids(const Graph& graph, const std::vector<VertexId>& ids) {
  std::vector<Vertex> players;
  players.reserve(ids.size());
  for (const VertexId& id : ids) players.push_back(graph.at(id));
  return ActivationSet(graph, std::move(players));
}

namespace {

double cost_of(const Graph& graph, EdgeIndex e, CostOverride costs) {
  return costs.empty() ? graph.edge(e).cost : costs[e];
}

// Walks from `source` down the cheapest-route DAG of `field`, always stepping
// to the lexicographically smallest admissible neighbor.
Path walk_down(const Graph& graph, Vertex source, const DistanceField& field, CostOverride costs) {
  if (std::isinf(field.dist[source])) {
    fail(ErrorKind::kUnreachable, "no finite-cost path from '" + graph.id(source) + "'");
  }
  Path path;
  path.vertices.push_back(source);
  Vertex u = source;
  while (field.hops[u] != 0) {
    Vertex next = kNoVertex;
    EdgeIndex via = kNoEdge;
    for (const Incidence& inc : graph.incident(u)) {
      const double c = cost_of(graph, inc.edge, costs);
      if (std::isinf(c) || field.hops[inc.to] + 1 != field.hops[u]) continue;
      if (!approx_equal(c + field.dist[inc.to], field.dist[u])) continue;
      next = inc.to;
      via = inc.edge;
      break;
    }
    if (next == kNoVertex) fail(ErrorKind::kUnreachable, "inconsistent distance field");
    path.cost += cost_of(graph, via, costs);
    path.vertices.push_back(next);
    u = next;
  }
  return path;
}

}  // namespace

DistanceField distances_to_set(const Graph& graph, const std::vector<char>& targets, CostOverride costs) {
  const std::size_t n = graph.num_vertices();
  DistanceField field{std::vector<double>(n, kInf), std::vector<std::uint32_t>(n, std::numeric_limits<std::uint32_t>::max())};
  using Key = std::tuple<double, std::uint32_t, Vertex>;
  std::priority_queue<Key, std::vector<Key>, std::greater<>> queue;
  for (Vertex v = 0; v < n; ++v) {
    if (targets[v]) {
      field.dist[v] = 0.0;
      field.hops[v] = 0;
      queue.emplace(0.0, 0, v);
    }
  }
  while (!queue.empty()) {
    auto [d, h, u] = queue.top();
    queue.pop();
    if (d != field.dist[u] || h != field.hops[u]) continue;
    for (const Incidence& inc : graph.incident(u)) {
      const double c = cost_of(graph, inc.edge, costs);
      if (std::isinf(c)) continue;
      const double nd = d + c;
      const std::uint32_t nh = h + 1;
      const Vertex w = inc.to;
      const bool better = definitely_less(nd, field.dist[w]) ||
                          (approx_equal(nd, field.dist[w]) && nh < field.hops[w]);
      if (better) {
        field.dist[w] = nd;
        field.hops[w] = nh;
        queue.emplace(nd, nh, w);
      }
    }
  }
  return field;
}

std::vector<double> distances_from(const Graph& graph, Vertex source, CostOverride costs) {
  std::vector<char> targets(graph.num_vertices(), 0);
  targets[source] = 1;
  return distances_to_set(graph, targets, costs).dist;
}

Path connector_to_set(const Graph& graph, Vertex source, const std::vector<char>& targets, CostOverride costs) {
  return walk_down(graph, source, distances_to_set(graph, targets, costs), costs);
}

Path shortest_path(const Graph& graph, Vertex from, Vertex to, CostOverride costs) {
  std::vector<char> targets(graph.num_vertices(), 0);
  targets[to] = 1;
  return connector_to_set(graph, from, targets, costs);
}

double path_cost(const Graph& graph, std::span<const Vertex> vertices, CostOverride costs) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < vertices.size(); ++i) {
    auto e = graph.edge_between(vertices[i], vertices[i + 1]);
    require(e.has_value(), "path uses a missing edge '" + graph.id(vertices[i]) + "'-'" + graph.id(vertices[i + 1]) + "'");
    total += cost_of(graph, *e, costs);
  }
  return total;
}

DistanceMatrix metric_closure(const Graph& graph, std::span<const Vertex> terminals) {
  require(!terminals.empty(), "metric closure needs at least one terminal");
  DistanceMatrix matrix(terminals.size());
  for (std::size_t i = 0; i < terminals.size(); ++i) {
    const std::vector<double> dist = distances_from(graph, terminals[i]);
    for (std::size_t j = 0; j < terminals.size(); ++j) {
      if (std::isinf(dist[terminals[j]])) {
        fail(ErrorKind::kUnreachable,
             "'" + graph.id(terminals[i]) + "' and '" + graph.id(terminals[j]) + "' are disconnected");
      }
      matrix.at(i, j) = dist[terminals[j]];
    }
  }
  // Dijkstra runs from both ends can differ in the last ulp.
  for (std::size_t i = 0; i < terminals.size(); ++i) {
    matrix.at(i, i) = 0.0;
    for (std::size_t j = i + 1; j < terminals.size(); ++j) {
      const double d = std::min(matrix(i, j), matrix(j, i));
      matrix.at(i, j) = d;
      matrix.at(j, i) = d;
    }
  }
  return matrix;
}

PathOracle::PathOracle(const Graph& graph) : graph_(&graph) {
  fields_.reserve(graph.num_vertices());
  std::vector<char> targets(graph.num_vertices(), 0);
  for (Vertex t = 0; t < graph.num_vertices(); ++t) {
    targets[t] = 1;
    fields_.push_back(distances_to_set(graph, targets));
    targets[t] = 0;
  }
}

Path PathOracle::path(Vertex from, Vertex to) const { return walk_down(*graph_, from, fields_[to], {}); }

NormalizedGame normalize_players(const Graph& graph, const std::vector<VertexId>& requested) {
  std::map<Vertex, std::size_t> multiplicity;
  for (const VertexId& id : requested) {
    const Vertex v = graph.at(id);
    if (v == graph.root()) fail(ErrorKind::kRootIsPlayer, "the root cannot host a player");
    ++multiplicity[v];
  }
  std::vector<VertexId> fresh;
  std::vector<EdgeSpec> links;
  std::vector<VertexId> player_ids;
  std::unordered_map<std::string, char> taken;
  for (const VertexId& id : graph.ids()) taken.emplace(id, 1);
  for (const auto& [v, m] : multiplicity) {
    player_ids.push_back(graph.id(v));
    std::string name = graph.id(v);
    for (std::size_t copy = 1; copy < m; ++copy) {
      do {
        name += '\'';
      } while (taken.count(name));
      taken.emplace(name, 1);
      fresh.push_back(name);
      links.push_back({graph.id(v), name, 0.0});
      player_ids.push_back(name);
    }
  }
  NormalizedGame out;
  out.graph = fresh.empty() ? graph : graph.with_additions(fresh, links);
  out.players = activation_from_ids(out.graph, player_ids);
  return out;
}

}  // namespace costshare
