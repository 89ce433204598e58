#pragma once

// Test-only builders and brute-force oracles. Nothing here calls the solver
// under test.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include <map>
#include <set>

#include "costshare/graph.hpp"
#include "costshare/protocols.hpp"
#include "costshare/random.hpp"

namespace costshare::testing {

inline Graph make_graph(std::vector<VertexId> ids, const std::vector<EdgeSpec>& edges, std::string_view root = "t") {
  return Graph(std::move(ids), root, edges);
}

// t-a-b with unit costs.
inline Graph three_path() { return make_graph({"t", "a", "b"}, {{"t", "a", 1}, {"a", "b", 1}}); }

// Cycle t-a-b-c-t with the given costs.
inline Graph four_cycle(double ta = 1, double ab = 1, double bc = 1, double ct = 1) {
  return make_graph({"t", "a", "b", "c"}, {{"t", "a", ta}, {"a", "b", ab}, {"b", "c", bc}, {"c", "t", ct}});
}

inline std::vector<Vertex> ids_to_vertices(const Graph& g, const std::vector<VertexId>& ids) {
  std::vector<Vertex> out;
  for (const auto& id : ids) out.push_back(g.at(id));
  return out;
}

// Floyd-Warshall over finite edges.
inline std::vector<std::vector<double>> floyd_warshall(const Graph& g) {
  const std::size_t n = g.num_vertices();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, kInf));
  for (std::size_t v = 0; v < n; ++v) d[v][v] = 0.0;
  for (const Edge& e : g.edges()) {
    d[e.u][e.v] = std::min(d[e.u][e.v], e.cost);
    d[e.v][e.u] = std::min(d[e.v][e.u], e.cost);
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
  return d;
}

// Minimum cost of a connected finite-edge subgraph spanning the terminals, by
// enumerating every edge subset. Only for graphs with at most ~16 edges.
inline double brute_force_steiner(const Graph& g, const std::vector<Vertex>& terminals) {
  const std::size_t m = g.num_edges();
  double best = kInf;
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    double cost = 0.0;
    std::vector<std::size_t> parent(g.num_vertices());
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
      return parent[x] == x ? x : parent[x] = find(parent[x]);
    };
    for (std::size_t e = 0; e < m; ++e) {
      if (!(mask >> e & 1)) continue;
      cost += g.edge(static_cast<EdgeIndex>(e)).cost;
      parent[find(g.edge(static_cast<EdgeIndex>(e)).u)] = find(g.edge(static_cast<EdgeIndex>(e)).v);
    }
    if (cost >= best) continue;
    bool connected = true;
    for (Vertex t : terminals) connected = connected && find(t) == find(terminals[0]);
    if (connected) best = cost;
  }
  return best;
}

// Random connected graph with integer-free costs in (0, 10].
inline Graph random_small_graph(std::size_t n, std::size_t extra_edges, Rng& rng) {
  std::vector<VertexId> ids{"t"};
  for (std::size_t i = 1; i < n; ++i) ids.push_back("x" + std::to_string(i));
  std::vector<EdgeSpec> edges;
  std::vector<std::pair<std::size_t, std::size_t>> used;
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t j = static_cast<std::size_t>(rng.below(i));
    used.emplace_back(j, i);
    edges.push_back({ids[j], ids[i], rng.uniform_open_closed(0.0, 10.0)});
  }
  for (std::size_t tries = 0; tries < 4 * extra_edges && edges.size() < n - 1 + extra_edges; ++tries) {
    std::size_t a = static_cast<std::size_t>(rng.below(n)), b = static_cast<std::size_t>(rng.below(n));
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    if (std::find(used.begin(), used.end(), std::make_pair(a, b)) != used.end()) continue;
    used.emplace_back(a, b);
    edges.push_back({ids[a], ids[b], rng.uniform_open_closed(0.0, 10.0)});
  }
  return Graph(ids, "t", edges);
}

// Every simple path from `from` to the root over finite edges.
inline std::vector<std::vector<Vertex>> simple_paths(const Graph& g, Vertex from) {
  std::vector<std::vector<Vertex>> out;
  std::vector<Vertex> stack{from};
  std::vector<char> seen(g.num_vertices(), 0);
  seen[from] = 1;
  std::function<void()> dfs = [&] {
    const Vertex v = stack.back();
    if (v == g.root()) {
      out.push_back(stack);
      return;
    }
    for (const Edge& e : g.edges()) {
      if (std::isinf(e.cost) || (e.u != v && e.v != v)) continue;
      const Vertex w = e.u == v ? e.v : e.u;
      if (seen[w]) continue;
      seen[w] = 1;
      stack.push_back(w);
      dfs();
      stack.pop_back();
      seen[w] = 0;
    }
  };
  dfs();
  return out;
}

// Shares recomputed from scratch: per edge, the users in the earliest part
// split proportionally to weight.
inline double oracle_player_cost(const Graph& g, const GwspProtocol& p, const std::map<Vertex, std::vector<Vertex>>& paths,
                          Vertex i) {
  double total = 0.0;
  const auto& mine = paths.at(i);
  for (std::size_t s = 0; s + 1 < mine.size(); ++s) {
    const Edge& e = g.edge(*g.edge_between(mine[s], mine[s + 1]));
    std::vector<Vertex> users;
    for (const auto& [j, path] : paths) {
      for (std::size_t q = 0; q + 1 < path.size(); ++q) {
        if (std::minmax(path[q], path[q + 1]) == std::minmax(e.u, e.v)) users.push_back(j);
      }
    }
    std::size_t earliest = p.parts().size();
    for (Vertex u : users) earliest = std::min(earliest, p.part_of(u));
    if (p.part_of(i) != earliest) continue;
    double weight = 0.0;
    for (Vertex u : users) weight += p.part_of(u) == earliest ? p.weight(u) : 0.0;
    total += e.cost * p.weight(i) / weight;
  }
  return total;
}

inline double union_cost(const Graph& g, const std::map<Vertex, std::vector<Vertex>>& paths) {
  std::set<EdgeIndex> used;
  for (const auto& [i, path] : paths) {
    for (std::size_t s = 0; s + 1 < path.size(); ++s) used.insert(*g.edge_between(path[s], path[s + 1]));
  }
  double total = 0.0;
  for (EdgeIndex e : used) total += g.edge(e).cost;
  return total;
}

// Social costs of every pure NE, by exhaustive search over path profiles.
inline std::vector<double> oracle_equilibrium_costs(const Graph& g, const GwspProtocol& p, const std::vector<Vertex>& players) {
  std::vector<std::vector<std::vector<Vertex>>> options;
  for (Vertex v : players) options.push_back(simple_paths(g, v));
  std::vector<double> costs;
  std::map<Vertex, std::vector<Vertex>> profile;
  std::function<void(std::size_t)> rec = [&](std::size_t idx) {
    if (idx == players.size()) {
      for (std::size_t q = 0; q < players.size(); ++q) {
        const double current = oracle_player_cost(g, p, profile, players[q]);
        auto deviated = profile;
        for (const auto& alt : options[q]) {
          deviated[players[q]] = alt;
          if (oracle_player_cost(g, p, deviated, players[q]) < current - 1e-9) return;
        }
      }
      costs.push_back(union_cost(g, profile));
      return;
    }
    for (const auto& path : options[idx]) {
      profile[players[idx]] = path;
      rec(idx + 1);
    }
  };
  rec(0);
  std::sort(costs.begin(), costs.end());
  return costs;
}

inline bool close(double a, double b, double tol = 1e-9) {
  if (std::isinf(a) || std::isinf(b)) return a == b;
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace costshare::testing
