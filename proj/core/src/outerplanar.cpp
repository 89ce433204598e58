#include "costshare/outerplanar.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "costshare/error.hpp"

namespace costshare {

namespace {

struct Blocks {
  std::vector<std::vector<Vertex>> vertices;  // per block
  std::vector<std::vector<VertexPair>> edges;  // per block
};

// Biconnected components of the finite-cost subgraph (bridges are blocks of
// two vertices).
Blocks biconnected_blocks(const Graph& graph) {
  const std::size_t n = graph.num_vertices();
  std::vector<std::size_t> disc(n, 0), low(n, 0);
  std::size_t timer = 0;
  Blocks blocks;
  std::vector<EdgeIndex> edge_stack;

  struct Frame {
    Vertex v;
    EdgeIndex parent_edge;
    std::size_t next;
  };
  for (Vertex start = 0; start < n; ++start) {
    if (disc[start]) continue;
    std::vector<Frame> stack{{start, kNoEdge, 0}};
    disc[start] = low[start] = ++timer;
    while (!stack.empty()) {
      Frame& frame = stack.back();
      const auto incident = graph.incident(frame.v);
      if (frame.next < incident.size()) {
        const Incidence inc = incident[frame.next++];
        if (inc.edge == frame.parent_edge || std::isinf(graph.edge(inc.edge).cost)) continue;
        if (!disc[inc.to]) {
          edge_stack.push_back(inc.edge);
          disc[inc.to] = low[inc.to] = ++timer;
          stack.push_back({inc.to, inc.edge, 0});
        } else if (disc[inc.to] < disc[frame.v]) {
          edge_stack.push_back(inc.edge);
          low[frame.v] = std::min(low[frame.v], disc[inc.to]);
        }
        continue;
      }
      const Vertex v = frame.v;
      const EdgeIndex parent_edge = frame.parent_edge;
      stack.pop_back();
      if (stack.empty()) break;
      const Vertex u = stack.back().v;
      low[u] = std::min(low[u], low[v]);
      if (low[v] >= disc[u]) {
        std::set<Vertex> members;
        std::vector<VertexPair> block_edges;
        while (true) {
          const EdgeIndex e = edge_stack.back();
          edge_stack.pop_back();
          members.insert(graph.edge(e).u);
          members.insert(graph.edge(e).v);
          block_edges.emplace_back(graph.edge(e).u, graph.edge(e).v);
          if (e == parent_edge) break;
        }
        blocks.vertices.emplace_back(members.begin(), members.end());
        blocks.edges.push_back(std::move(block_edges));
      }
    }
  }
  return blocks;
}

[[noreturn]] void not_outerplanar(const std::string& why) { fail(ErrorKind::kNotOuterplanar, "graph is not outerplanar: " + why); }

// Hamiltonian cycle of a biconnected outerplanar block by repeatedly removing
// a degree-2 vertex and joining its neighbors.
std::vector<Vertex> block_cycle(const Graph& graph, const std::vector<Vertex>& vertices,
                                const std::vector<VertexPair>& edges) {
  if (vertices.size() <= 2) return vertices;
  std::map<Vertex, std::set<Vertex>> adj;
  for (Vertex v : vertices) adj[v];
  for (auto [a, b] : edges) {
    adj[a].insert(b);
    adj[b].insert(a);
  }
  struct Removal {
    Vertex v, u, w;
  };
  std::vector<Removal> removed;
  while (adj.size() > 3) {
    Vertex pick = kNoVertex;
    for (const auto& [v, nbrs] : adj) {
      if (nbrs.size() == 2 && (pick == kNoVertex || graph.lex_less(v, pick))) pick = v;
    }
    if (pick == kNoVertex) not_outerplanar("a block has no vertex of degree two");
    const Vertex u = *adj[pick].begin();
    const Vertex w = *std::next(adj[pick].begin());
    adj[u].erase(pick);
    adj[w].erase(pick);
    adj.erase(pick);
    adj[u].insert(w);
    adj[w].insert(u);
    removed.push_back({pick, u, w});
  }
  std::vector<Vertex> cycle;
  for (const auto& [v, nbrs] : adj) {
    if (nbrs.size() != 2) not_outerplanar("reduction did not end in a triangle");
    cycle.push_back(v);
  }
  for (auto it = removed.rbegin(); it != removed.rend(); ++it) {
    const auto pu = static_cast<std::size_t>(std::find(cycle.begin(), cycle.end(), it->u) - cycle.begin());
    const auto pw = static_cast<std::size_t>(std::find(cycle.begin(), cycle.end(), it->w) - cycle.begin());
    const std::size_t m = cycle.size();
    if ((pu + 1) % m == pw) {
      cycle.insert(cycle.begin() + static_cast<std::ptrdiff_t>(pu + 1), it->v);
    } else if ((pw + 1) % m == pu) {
      cycle.insert(cycle.begin() + static_cast<std::ptrdiff_t>(pw + 1), it->v);
    } else {
      not_outerplanar("a removed vertex cannot be reinserted on the outer cycle");
    }
  }
  return cycle;
}

}  // namespace

bool chords_cross(const std::vector<std::size_t>& position, VertexPair a, VertexPair b) {
  std::size_t a1 = position[a.first], a2 = position[a.second];
  std::size_t b1 = position[b.first], b2 = position[b.second];
  if (a1 > a2) std::swap(a1, a2);
  if (b1 > b2) std::swap(b1, b2);
  if (a1 == b1 || a1 == b2 || a2 == b1 || a2 == b2) return false;
  const bool b1_inside = a1 < b1 && b1 < a2;
  const bool b2_inside = a1 < b2 && b2 < a2;
  return b1_inside != b2_inside;
}

std::size_t count_hamiltonian_cycles(std::size_t num_vertices, const std::vector<VertexPair>& edges, std::size_t limit) {
  if (num_vertices < 3) return num_vertices == 0 ? 0 : 1;
  std::vector<std::vector<Vertex>> adj(num_vertices);
  for (auto [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<char> used(num_vertices, 0);
  std::size_t directed = 0;
  const std::size_t directed_limit = 2 * limit;
  std::function<void(Vertex, std::size_t)> dfs = [&](Vertex u, std::size_t depth) {
    if (directed >= directed_limit) return;
    if (depth == num_vertices) {
      if (std::find(adj[u].begin(), adj[u].end(), Vertex{0}) != adj[u].end()) ++directed;
      return;
    }
    for (Vertex w : adj[u]) {
      if (used[w]) continue;
      used[w] = 1;
      dfs(w, depth + 1);
      used[w] = 0;
    }
  };
  used[0] = 1;
  dfs(0, 1);
  return directed / 2;
}

OuterplanarEmbedding recognize_and_embed(const Graph& graph, std::size_t uniqueness_check_limit) {
  const std::size_t n = graph.num_vertices();
  const Blocks blocks = biconnected_blocks(graph);
  std::vector<std::vector<Vertex>> cycles;
  for (std::size_t b = 0; b < blocks.vertices.size(); ++b) {
    cycles.push_back(block_cycle(graph, blocks.vertices[b], blocks.edges[b]));
  }
  std::vector<std::vector<std::size_t>> blocks_of(n);
  for (std::size_t b = 0; b < cycles.size(); ++b) {
    for (Vertex v : cycles[b]) blocks_of[v].push_back(b);
  }

  // Boundary walk: every block's cycle is entered at its attachment vertex and
  // the blocks hanging off each vertex are spliced in right after it.
  std::vector<Vertex> order;
  std::vector<char> placed(n, 0), block_done(cycles.size(), 0);
  std::function<void(Vertex)> place = [&](Vertex v) {
    order.push_back(v);
    placed[v] = 1;
    for (std::size_t b : blocks_of[v]) {
      if (block_done[b]) continue;
      block_done[b] = 1;
      const std::vector<Vertex>& cycle = cycles[b];
      const std::size_t start = static_cast<std::size_t>(std::find(cycle.begin(), cycle.end(), v) - cycle.begin());
      for (std::size_t step = 1; step < cycle.size(); ++step) {
        const Vertex w = cycle[(start + step) % cycle.size()];
        if (!placed[w]) place(w);
      }
    }
  };
  place(graph.root());
  std::vector<Vertex> rest(n);
  for (Vertex v = 0; v < n; ++v) rest[v] = v;
  std::sort(rest.begin(), rest.end(), [&](Vertex a, Vertex b) { return graph.lex_less(a, b); });
  for (Vertex v : rest) {
    if (!placed[v]) place(v);
  }
  if (order.size() != n) not_outerplanar("boundary walk missed vertices");

  OuterplanarEmbedding embedding;
  embedding.outer_cycle = order;
  std::vector<std::size_t> position(n);
  for (std::size_t i = 0; i < n; ++i) position[order[i]] = i;

  auto consecutive = [&](Vertex a, Vertex b) {
    const std::size_t pa = position[a], pb = position[b];
    return (pa + 1) % n == pb || (pb + 1) % n == pa;
  };
  std::vector<VertexPair> structural;
  for (const Edge& e : graph.edges()) {
    if (std::isinf(e.cost)) continue;
    structural.emplace_back(e.u, e.v);
    if (!consecutive(e.u, e.v)) embedding.chords.emplace_back(e.u, e.v);
  }
  for (std::size_t i = 0; i < embedding.chords.size(); ++i) {
    for (std::size_t j = i + 1; j < embedding.chords.size(); ++j) {
      if (chords_cross(position, embedding.chords[i], embedding.chords[j])) {
        not_outerplanar("chords '" + graph.id(embedding.chords[i].first) + "'-'" + graph.id(embedding.chords[i].second) +
                        "' and '" + graph.id(embedding.chords[j].first) + "'-'" + graph.id(embedding.chords[j].second) +
                        "' cross");
      }
    }
  }
  std::vector<EdgeSpec> additions;
  if (n >= 2) {
    for (std::size_t i = 0; i < (n == 2 ? 1 : n); ++i) {
      const Vertex a = order[i];
      const Vertex b = order[(i + 1) % n];
      auto existing = graph.edge_between(a, b);
      if (existing && std::isfinite(graph.edge(*existing).cost)) continue;
      if (existing) {
        structural.emplace_back(a, b);
        continue;
      }
      embedding.augmented_edges.emplace_back(a, b);
      structural.emplace_back(a, b);
      additions.push_back({graph.id(a), graph.id(b), kInf});
    }
  }
  embedding.augmented = additions.empty() ? graph : graph.with_additions({}, additions);

  if (n >= 3 && n <= uniqueness_check_limit) {
    const std::size_t count = count_hamiltonian_cycles(n, structural, 2);
    if (count != 1) not_outerplanar("the completion has " + std::to_string(count) + " Hamiltonian cycles");
  }
  return embedding;
}

std::vector<Vertex> tour_order(const Graph& graph, const OuterplanarEmbedding& embedding) {
  std::vector<Vertex> tour(embedding.outer_cycle.begin() + 1, embedding.outer_cycle.end());
  if (tour.size() >= 2 && graph.lex_less(tour.back(), tour.front())) std::reverse(tour.begin(), tour.end());
  return tour;
}

GwspProtocol tour_protocol(const Graph& graph) {
  return GwspProtocol::ordered(graph, tour_order(graph, recognize_and_embed(graph)));
}

}  // namespace costshare
