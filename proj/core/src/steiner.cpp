#include "costshare/steiner.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <queue>
#include <tuple>

#include "costshare/error.hpp"

namespace costshare {

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[std::max(a, b)] = std::min(a, b);
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

std::vector<Vertex> distinct_sorted(std::span<const Vertex> vertices) {
  std::vector<Vertex> out(vertices.begin(), vertices.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::tuple<double, std::uint32_t, std::uint32_t> link_key(const Graph& graph, Vertex a, Vertex b, double cost) {
  std::uint32_t ra = graph.lex_rank(a);
  std::uint32_t rb = graph.lex_rank(b);
  if (ra > rb) std::swap(ra, rb);
  return {cost, ra, rb};
}

// Spanning forest of the candidate edges, then repeated removal of
// non-terminal leaves.
SteinerTree finalize_tree(const Graph& graph, std::vector<EdgeIndex> candidates, std::vector<Vertex> terminals) {
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  std::sort(candidates.begin(), candidates.end(), [&](EdgeIndex x, EdgeIndex y) {
    const Edge& a = graph.edge(x);
    const Edge& b = graph.edge(y);
    return link_key(graph, a.u, a.v, a.cost) < link_key(graph, b.u, b.v, b.cost);
  });
  DisjointSets sets(graph.num_vertices());
  std::vector<EdgeIndex> kept;
  for (EdgeIndex e : candidates) {
    if (sets.unite(graph.edge(e).u, graph.edge(e).v)) kept.push_back(e);
  }

  std::vector<char> is_terminal(graph.num_vertices(), 0);
  for (Vertex v : terminals) is_terminal[v] = 1;
  std::vector<std::size_t> degree(graph.num_vertices(), 0);
  for (EdgeIndex e : kept) {
    ++degree[graph.edge(e).u];
    ++degree[graph.edge(e).v];
  }
  std::vector<char> alive(kept.size(), 1);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < kept.size(); ++i) {
      if (!alive[i]) continue;
      const Edge& e = graph.edge(kept[i]);
      const bool u_leaf = degree[e.u] == 1 && !is_terminal[e.u];
      const bool v_leaf = degree[e.v] == 1 && !is_terminal[e.v];
      if (u_leaf || v_leaf) {
        alive[i] = 0;
        --degree[e.u];
        --degree[e.v];
        changed = true;
      }
    }
  }

  SteinerTree tree;
  tree.terminals = std::move(terminals);
  for (std::size_t i = 0; i < kept.size(); ++i) {
    if (alive[i]) tree.edges.push_back(kept[i]);
  }
  std::sort(tree.edges.begin(), tree.edges.end());
  for (EdgeIndex e : tree.edges) tree.total_cost += graph.edge(e).cost;
  return tree;
}

// Dreyfus-Wagner table: dp[mask * n + v] = cheapest tree spanning the
// terminals in `mask` plus v.
struct DreyfusWagner {
  std::size_t n = 0;
  std::vector<double> dp;
  std::vector<std::uint32_t> split;   // merge submask, 0 when none
  std::vector<EdgeIndex> pred;        // last relaxed edge, kNoEdge when none

  DreyfusWagner(const Graph& graph, const std::vector<Vertex>& terms, bool keep_parents) : n(graph.num_vertices()) {
    const std::size_t k = terms.size();
    const std::size_t full = std::size_t{1} << k;
    dp.assign(full * n, kInf);
    if (keep_parents) {
      split.assign(full * n, 0);
      pred.assign(full * n, kNoEdge);
    }
    using Key = std::pair<double, Vertex>;
    std::vector<Key> heap;
    for (std::size_t mask = 1; mask < full; ++mask) {
      double* row = dp.data() + mask * n;
      if ((mask & (mask - 1)) == 0) {
        row[terms[static_cast<std::size_t>(std::countr_zero(mask))]] = 0.0;
      } else {
        const std::size_t low = mask & (~mask + 1);
        for (std::size_t v = 0; v < n; ++v) {
          double best = kInf;
          std::size_t best_sub = 0;
          for (std::size_t sub = (mask - 1) & mask; sub > 0; sub = (sub - 1) & mask) {
            if (!(sub & low)) continue;
            const double value = dp[sub * n + v] + dp[(mask ^ sub) * n + v];
            if (value < best) {
              best = value;
              best_sub = sub;
            }
          }
          row[v] = best;
          if (keep_parents) split[mask * n + v] = static_cast<std::uint32_t>(best_sub);
        }
      }
      heap.clear();
      for (Vertex v = 0; v < n; ++v) {
        if (!std::isinf(row[v])) heap.emplace_back(row[v], v);
      }
      std::make_heap(heap.begin(), heap.end(), std::greater<>());
      while (!heap.empty()) {
        std::pop_heap(heap.begin(), heap.end(), std::greater<>());
        auto [d, u] = heap.back();
        heap.pop_back();
        if (d != row[u]) continue;
        for (const Incidence& inc : graph.incident(u)) {
          const double nd = d + graph.edge(inc.edge).cost;
          if (nd < row[inc.to]) {
            row[inc.to] = nd;
            if (keep_parents) pred[mask * n + inc.to] = inc.edge;
            heap.emplace_back(nd, inc.to);
            std::push_heap(heap.begin(), heap.end(), std::greater<>());
          }
        }
      }
    }
  }

  void collect(const Graph& graph, std::size_t mask, Vertex v, std::vector<EdgeIndex>& out) const {
    std::vector<std::pair<std::size_t, Vertex>> stack{{mask, v}};
    while (!stack.empty()) {
      auto [m, u] = stack.back();
      stack.pop_back();
      const std::size_t state = m * n + u;
      if (pred[state] != kNoEdge) {
        out.push_back(pred[state]);
        stack.emplace_back(m, graph.edge(pred[state]).other(u));
      } else if (split[state] != 0) {
        stack.emplace_back(split[state], u);
        stack.emplace_back(m ^ split[state], u);
      }
    }
  }
};

template <typename DistanceFn, typename PathFn>
SteinerTree metric_mst_tree(const Graph& graph, std::vector<Vertex> terminals, DistanceFn distance, PathFn path) {
  if (terminals.size() <= 1) return finalize_tree(graph, {}, std::move(terminals));
  struct Link {
    std::tuple<double, std::uint32_t, std::uint32_t> key;
    std::size_t a, b;
  };
  std::vector<Link> links;
  for (std::size_t i = 0; i < terminals.size(); ++i) {
    for (std::size_t j = i + 1; j < terminals.size(); ++j) {
      const double d = std::min(distance(terminals[i], terminals[j]), distance(terminals[j], terminals[i]));
      if (std::isinf(d)) {
        fail(ErrorKind::kUnreachable,
             "'" + graph.id(terminals[i]) + "' and '" + graph.id(terminals[j]) + "' are disconnected");
      }
      links.push_back({link_key(graph, terminals[i], terminals[j], d), i, j});
    }
  }
  std::sort(links.begin(), links.end(), [](const Link& x, const Link& y) { return x.key < y.key; });
  DisjointSets sets(terminals.size());
  std::vector<EdgeIndex> candidates;
  for (const Link& link : links) {
    if (!sets.unite(link.a, link.b)) continue;
    const Path p = path(terminals[link.a], terminals[link.b]);
    for (std::size_t i = 0; i + 1 < p.vertices.size(); ++i) {
      candidates.push_back(*graph.edge_between(p.vertices[i], p.vertices[i + 1]));
    }
  }
  return finalize_tree(graph, std::move(candidates), std::move(terminals));
}

}  // namespace

std::vector<Vertex> SteinerTree::vertices(const Graph& graph) const {
  std::vector<Vertex> out = terminals;
  for (EdgeIndex e : edges) {
    out.push_back(graph.edge(e).u);
    out.push_back(graph.edge(e).v);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

SteinerTree exact_steiner(const Graph& graph, std::span<const Vertex> terminals, std::size_t cap) {
  std::vector<Vertex> terms = distinct_sorted(terminals);
  if (terms.size() == graph.num_vertices() && terms.size() > 1) {
    // Spanning every vertex: the optimum is a minimum spanning tree.
    std::vector<EdgeIndex> finite;
    for (EdgeIndex e = 0; e < graph.num_edges(); ++e) {
      if (std::isfinite(graph.edge(e).cost)) finite.push_back(e);
    }
    SteinerTree tree = finalize_tree(graph, std::move(finite), std::move(terms));
    if (tree.edges.size() + 1 != graph.num_vertices()) fail(ErrorKind::kUnreachable, "terminals are disconnected");
    return tree;
  }
  if (terms.size() > cap) {
    fail(ErrorKind::kTooManyTerminals,
         std::to_string(terms.size()) + " terminals exceed the exact solver cap of " + std::to_string(cap));
  }
  if (terms.size() <= 1) return finalize_tree(graph, {}, std::move(terms));

  auto anchor_it = std::find(terms.begin(), terms.end(), graph.root());
  if (anchor_it == terms.end()) anchor_it = terms.begin();
  const Vertex anchor = *anchor_it;
  std::vector<Vertex> others;
  for (Vertex v : terms) {
    if (v != anchor) others.push_back(v);
  }
  const DreyfusWagner dw(graph, others, true);
  const std::size_t full = (std::size_t{1} << others.size()) - 1;
  if (std::isinf(dw.dp[full * dw.n + anchor])) fail(ErrorKind::kUnreachable, "terminals are disconnected");
  std::vector<EdgeIndex> edges;
  dw.collect(graph, full, anchor, edges);
  return finalize_tree(graph, std::move(edges), std::move(terms));
}

SubsetSteinerTable::SubsetSteinerTable(const Graph& graph, std::vector<Vertex> terminals, Vertex anchor, std::size_t cap)
    : terminals_(std::move(terminals)) {
  if (terminals_.size() > cap) {
    fail(ErrorKind::kInstanceTooLarge,
         std::to_string(terminals_.size()) + " terminals exceed the subset table cap of " + std::to_string(cap));
  }
  for (Vertex v : terminals_) require(v != anchor, "the anchor cannot be a subset terminal");
  const DreyfusWagner dw(graph, terminals_, false);
  const std::size_t full = std::size_t{1} << terminals_.size();
  cost_.assign(full, 0.0);
  for (std::size_t mask = 1; mask < full; ++mask) cost_[mask] = dw.dp[mask * dw.n + anchor];
}

SteinerTree approx_steiner(const Graph& graph, std::span<const Vertex> terminals, ApproxMethod) {
  std::vector<Vertex> terms = distinct_sorted(terminals);
  std::vector<DistanceField> fields(terms.size());
  std::vector<char> targets(graph.num_vertices(), 0);
  for (std::size_t i = 0; i < terms.size(); ++i) {
    targets[terms[i]] = 1;
    fields[i] = distances_to_set(graph, targets);
    targets[terms[i]] = 0;
  }
  auto slot = [&](Vertex v) {
    return static_cast<std::size_t>(std::lower_bound(terms.begin(), terms.end(), v) - terms.begin());
  };
  auto distance = [&](Vertex a, Vertex b) { return fields[slot(b)].dist[a]; };
  auto path = [&](Vertex a, Vertex b) {
    std::vector<char> one(graph.num_vertices(), 0);
    one[b] = 1;
    return connector_to_set(graph, a, one);
  };
  return metric_mst_tree(graph, terms, distance, path);
}

SteinerTree approx_steiner(const PathOracle& oracle, std::span<const Vertex> terminals) {
  return metric_mst_tree(
      oracle.graph(), distinct_sorted(terminals), [&](Vertex a, Vertex b) { return oracle.distance(a, b); },
      [&](Vertex a, Vertex b) { return oracle.path(a, b); });
}

namespace {

template <typename DistanceFn>
Attachment nearest_attachment_impl(const Graph& graph, Vertex v, std::span<const Vertex> anchors, DistanceFn distance) {
  if (v == graph.root()) return {0.0, v};
  Attachment best{kInf, kNoVertex};
  auto consider = [&](Vertex u) {
    if (u == v) return;
    const double d = distance(v, u);
    if (definitely_less(d, best.distance) ||
        (approx_equal(d, best.distance) && best.nearest != kNoVertex && graph.lex_less(u, best.nearest))) {
      best = {d, u};
    }
  };
  consider(graph.root());
  for (Vertex u : anchors) consider(u);
  if (best.nearest == kNoVertex || std::isinf(best.distance)) {
    fail(ErrorKind::kUnreachable, "'" + graph.id(v) + "' cannot reach any anchor");
  }
  return best;
}

}  // namespace

Attachment nearest_attachment_distance(const Graph& graph, Vertex v, std::span<const Vertex> anchors) {
  const std::vector<double> dist = distances_from(graph, v);
  return nearest_attachment_impl(graph, v, anchors, [&](Vertex, Vertex u) { return dist[u]; });
}

Attachment nearest_attachment_distance(const PathOracle& oracle, Vertex v, std::span<const Vertex> anchors) {
  return nearest_attachment_impl(oracle.graph(), v, anchors,
                                 [&](Vertex a, Vertex b) { return oracle.distance(a, b); });
}

MetricTree mst(const Graph& graph, std::span<const Vertex> subset) {
  std::vector<Vertex> terms(subset.begin(), subset.end());
  terms.push_back(graph.root());
  terms = distinct_sorted(terms);
  MetricTree tree;
  tree.terminals = terms;
  if (terms.size() <= 1) return tree;
  const DistanceMatrix closure = metric_closure(graph, terms);
  struct Link {
    std::tuple<double, std::uint32_t, std::uint32_t> key;
    std::size_t a, b;
  };
  std::vector<Link> links;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    for (std::size_t j = i + 1; j < terms.size(); ++j) {
      links.push_back({link_key(graph, terms[i], terms[j], closure(i, j)), i, j});
    }
  }
  std::sort(links.begin(), links.end(), [](const Link& x, const Link& y) { return x.key < y.key; });
  DisjointSets sets(terms.size());
  for (const Link& link : links) {
    if (!sets.unite(link.a, link.b)) continue;
    tree.links.emplace_back(terms[link.a], terms[link.b]);
    tree.total_cost += closure(link.a, link.b);
  }
  return tree;
}

}  // namespace costshare
