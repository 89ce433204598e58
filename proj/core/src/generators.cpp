#include "costshare/generators.hpp"

#include <functional>
#include <set>
#include <string>

#include "costshare/error.hpp"
#include "costshare/hypercube.hpp"

namespace costshare {

namespace {

std::vector<VertexId> shuffled_names(std::size_t n, Rng& rng) {
  std::vector<VertexId> names{"t"};
  for (std::size_t i = 1; i < n; ++i) names.push_back("v" + std::to_string(i));
  rng.shuffle(names);
  return names;
}

double draw(Rng& rng, CostRange costs) { return rng.uniform_open_closed(costs.lo, costs.hi); }

}  // namespace

Graph random_cycle(std::size_t n, Rng& rng, CostRange costs) {
  require(n >= 3, "a cycle needs at least 3 vertices");
  const std::vector<VertexId> names = shuffled_names(n, rng);
  std::vector<EdgeSpec> edges;
  for (std::size_t i = 0; i < n; ++i) edges.push_back({names[i], names[(i + 1) % n], draw(rng, costs)});
  return Graph(names, "t", edges);
}

Graph random_maximal_outerplanar(std::size_t n, Rng& rng, CostRange costs) {
  require(n >= 3, "a maximal outerplanar graph needs at least 3 vertices");
  const std::vector<VertexId> names = shuffled_names(n, rng);
  std::vector<EdgeSpec> edges;
  for (std::size_t i = 0; i < n; ++i) edges.push_back({names[i], names[(i + 1) % n], draw(rng, costs)});
  // Triangulate the polygon chain i..j (whose side i-j already exists).
  std::function<void(std::size_t, std::size_t)> triangulate = [&](std::size_t i, std::size_t j) {
    if (j - i < 2) return;
    const std::size_t k = i + 1 + static_cast<std::size_t>(rng.below(j - i - 1));
    if (k - i >= 2) edges.push_back({names[i], names[k], draw(rng, costs)});
    if (j - k >= 2) edges.push_back({names[k], names[j], draw(rng, costs)});
    triangulate(i, k);
    triangulate(k, j);
  };
  triangulate(0, n - 1);
  return Graph(names, "t", edges);
}

Graph random_connected_graph(std::size_t n, double edge_prob, Rng& rng, CostRange costs) {
  require(n >= 1, "a graph needs at least one vertex");
  require(edge_prob >= 0.0 && edge_prob <= 1.0, "edge probability must lie in [0,1]");
  const std::vector<VertexId> names = shuffled_names(n, rng);
  std::vector<EdgeSpec> edges;
  std::set<std::pair<std::size_t, std::size_t>> present;
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t j = static_cast<std::size_t>(rng.below(i));
    present.emplace(j, i);
    edges.push_back({names[j], names[i], draw(rng, costs)});
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!present.count({i, j}) && rng.bernoulli(edge_prob)) edges.push_back({names[i], names[j], draw(rng, costs)});
    }
  }
  return Graph(names, "t", edges);
}

ActivationModel random_activation_model(const Graph& graph, Rng& rng) {
  std::vector<double> probs(graph.num_vertices(), 0.0);
  for (Vertex v : graph.non_root_vertices()) probs[v] = rng.uniform();
  return ActivationModel(graph, std::move(probs));
}

QOrderInstance qorder_outerplanar(std::size_t r) {
  require(r >= 1 && r <= 10, "q-order depth r must lie in [1, 10]");
  const std::size_t length = std::size_t{1} << r;
  auto name = [](std::size_t i) { return "v" + std::to_string(i); };
  std::vector<VertexId> ids{"t"};
  for (std::size_t i = 0; i <= length; ++i) ids.push_back(name(i));
  std::vector<EdgeSpec> edges{{"t", name(0), 1.0}};
  // Small index-dependent perturbation keeps path arcs free of exact ties.
  for (std::size_t i = 0; i < length; ++i) edges.push_back({name(i), name(i + 1), 1.01 + 1e-4 * static_cast<double>(i)});
  const PathClasses pc = classes_of_path(r);
  std::set<std::pair<std::size_t, std::size_t>> chords{{0, length}};
  for (std::size_t i = 1; i < length; ++i) {
    if (pc.right_parent[i] - i < 2) continue;
    chords.emplace(pc.left_parent[i], i);
    chords.emplace(i, pc.right_parent[i]);
  }
  for (auto [a, b] : chords) edges.push_back({name(a), name(b), static_cast<double>(b - a) + 0.01});

  QOrderInstance inst;
  inst.graph = Graph(std::move(ids), "t", edges);
  for (std::size_t i = 0; i <= length; ++i) inst.path.push_back(inst.graph.at(name(i)));
  for (const auto& cls : pc.classes) {
    for (std::size_t i : cls) inst.q_order.push_back(inst.path[i]);
  }
  return inst;
}

}  // namespace costshare
