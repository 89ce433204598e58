#include "costshare/stochastic.hpp"

#include <algorithm>
#include <map>

#include "costshare/equilibrium.hpp"
#include "costshare/error.hpp"
#include "costshare/steiner.hpp"

namespace costshare {

std::vector<Vertex> sample_activation(const Graph& graph, const ActivationModel& model, Rng& rng) {
  require(model.probs.size() == graph.num_vertices(), "activation model does not match the graph");
  std::vector<Vertex> drawn;
  for (Vertex v = 0; v < graph.num_vertices(); ++v) {
    if (v != graph.root() && rng.bernoulli(model.probs[v])) drawn.push_back(v);
  }
  return drawn;
}

std::vector<Vertex> order_from_sample(const PathOracle& oracle, const std::vector<Vertex>& sample) {
  const Graph& graph = oracle.graph();
  const std::size_t n = graph.num_vertices();
  std::vector<Vertex> terminals = sample;
  terminals.push_back(graph.root());
  const SteinerTree tree = approx_steiner(oracle, terminals);
  const std::vector<Vertex> tree_vertices = tree.vertices(graph);

  std::vector<std::vector<Vertex>> adjacent(n);
  for (EdgeIndex e : tree.edges) {
    adjacent[graph.edge(e).u].push_back(graph.edge(e).v);
    adjacent[graph.edge(e).v].push_back(graph.edge(e).u);
  }
  std::vector<char> in_tree(n, 0);
  for (Vertex v : tree_vertices) in_tree[v] = 1;
  for (Vertex v = 0; v < n; ++v) {
    if (in_tree[v]) continue;
    const Attachment a = nearest_attachment_distance(oracle, v, tree_vertices);
    adjacent[a.nearest].push_back(v);
    adjacent[v].push_back(a.nearest);
  }
  for (auto& list : adjacent) {
    std::sort(list.begin(), list.end(), [&](Vertex a, Vertex b) { return graph.lex_less(a, b); });
  }

  // First appearances on the Euler tour of the doubled tree are the preorder.
  std::vector<Vertex> order;
  std::vector<char> visited(n, 0);
  std::vector<std::pair<Vertex, std::size_t>> stack{{graph.root(), 0}};
  visited[graph.root()] = 1;
  while (!stack.empty()) {
    auto& [v, next] = stack.back();
    if (next == adjacent[v].size()) {
      stack.pop_back();
      continue;
    }
    const Vertex w = adjacent[v][next++];
    if (visited[w]) continue;
    visited[w] = 1;
    order.push_back(w);
    stack.emplace_back(w, 0);
  }
  require(order.size() + 1 == n, "sample tree does not reach every vertex");
  return order;
}

UniversalOrder xi_rand(const Graph& graph, const ActivationModel& model, std::uint64_t seed) {
  return xi_rand(graph, [&](Rng& rng) { return sample_activation(graph, model, rng); }, seed);
}

UniversalOrder xi_rand(const Graph& graph, const ActivationSampler& sampler, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Vertex> sample = sampler(rng);
  std::sort(sample.begin(), sample.end());
  sample.erase(std::unique(sample.begin(), sample.end()), sample.end());
  for (Vertex v : sample) {
    require(v < graph.num_vertices() && v != graph.root(), "sampler returned an invalid vertex");
  }
  const PathOracle oracle(graph);
  UniversalOrder out;
  out.order = order_from_sample(oracle, sample);
  out.provenance = OrderProvenance::kRandomized;
  out.seed = seed;
  out.sample = std::move(sample);
  return out;
}

double sample_tree_expectation(const PathOracle& oracle, const ActivationModel& model, const std::vector<Vertex>& sample) {
  const Graph& graph = oracle.graph();
  std::vector<Vertex> terminals = sample;
  terminals.push_back(graph.root());
  const SteinerTree tree = approx_steiner(oracle, terminals);
  const std::vector<Vertex> tree_vertices = tree.vertices(graph);
  double total = tree.total_cost;
  for (Vertex v : graph.non_root_vertices()) {
    if (std::binary_search(tree_vertices.begin(), tree_vertices.end(), v) || model.probs[v] == 0.0) continue;
    total += model.probs[v] * nearest_attachment_distance(oracle, v, tree_vertices).distance;
  }
  return total;
}

ConditionalExpectation::ConditionalExpectation(const Graph& graph, const ActivationModel& model, EstimatorMode mode)
    : graph_(&graph), model_(&model), mode_(mode), oracle_(graph), vertices_(graph.non_root_vertices()),
      slot_(graph.num_vertices(), 0) {
  require(model.probs.size() == graph.num_vertices(), "activation model does not match the graph");
  require(vertices_.size() <= 63, "conditional expectations support at most 63 non-root vertices");
  for (std::size_t i = 0; i < vertices_.size(); ++i) slot_[vertices_[i]] = i;
  if (mode_.monte_carlo) {
    require(mode_.monte_carlo->samples > 0, "Monte-Carlo mode needs at least one sample");
    const Rng base(mode_.monte_carlo->seed);
    for (std::size_t s = 0; s < mode_.monte_carlo->samples; ++s) {
      Rng rng = base.split(s);
      std::vector<double> draws(vertices_.size());
      for (double& u : draws) u = rng.uniform();
      uniforms_.push_back(std::move(draws));
    }
  }
}

double ConditionalExpectation::inner(std::uint64_t mask) {
  auto it = cache_.find(mask);
  if (it != cache_.end()) return it->second;
  std::vector<Vertex> sample;
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (mask >> i & 1) sample.push_back(vertices_[i]);
  }
  const double value = sample_tree_expectation(oracle_, *model_, sample);
  cache_.emplace(mask, value);
  return value;
}

double ConditionalExpectation::operator()(const std::vector<Vertex>& in_set, const std::vector<Vertex>& out_set) {
  std::uint64_t forced_in = 0, forced_out = 0;
  for (Vertex v : in_set) {
    require(v < graph_->num_vertices() && v != graph_->root(), "conditioning set holds an invalid vertex");
    forced_in |= std::uint64_t{1} << slot_[v];
  }
  for (Vertex v : out_set) {
    require(v < graph_->num_vertices() && v != graph_->root(), "conditioning set holds an invalid vertex");
    forced_out |= std::uint64_t{1} << slot_[v];
  }
  require((forced_in & forced_out) == 0, "a vertex cannot be both inside and outside R");
  std::vector<std::size_t> undecided;
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (!((forced_in | forced_out) >> i & 1)) undecided.push_back(i);
  }

  if (mode_.monte_carlo) {
    double sum = 0.0;
    for (const auto& draws : uniforms_) {
      std::uint64_t mask = forced_in;
      for (std::size_t i : undecided) {
        if (draws[i] < model_->probs[vertices_[i]]) mask |= std::uint64_t{1} << i;
      }
      sum += inner(mask);
    }
    return sum / static_cast<double>(uniforms_.size());
  }

  if (undecided.size() > mode_.exact.max_undecided) {
    fail(ErrorKind::kInstanceTooLarge, std::to_string(undecided.size()) +
                                           " undecided vertices exceed the exact limit of " +
                                           std::to_string(mode_.exact.max_undecided) + "; use Monte-Carlo mode");
  }
  double total = 0.0;
  for (std::uint64_t sub = 0; sub < (std::uint64_t{1} << undecided.size()); ++sub) {
    double p = 1.0;
    std::uint64_t mask = forced_in;
    for (std::size_t b = 0; b < undecided.size(); ++b) {
      const double pv = model_->probs[vertices_[undecided[b]]];
      if (sub >> b & 1) {
        p *= pv;
        mask |= std::uint64_t{1} << undecided[b];
      } else {
        p *= 1.0 - pv;
      }
    }
    if (p == 0.0) continue;
    total += p * inner(mask);
  }
  return total;
}

double conditional_expected_tree_cost(const Graph& graph, const ActivationModel& model,
                                      const std::vector<Vertex>& in_set, const std::vector<Vertex>& out_set,
                                      EstimatorMode mode) {
  ConditionalExpectation ce(graph, model, mode);
  return ce(in_set, out_set);
}

Derandomized derandomize(const Graph& graph, const ActivationModel& model, EstimatorMode mode) {
  ConditionalExpectation ce(graph, model, mode);
  Derandomized out;
  out.processed = graph.non_root_vertices();
  std::sort(out.processed.begin(), out.processed.end(), [&](Vertex a, Vertex b) { return graph.lex_less(a, b); });
  std::vector<Vertex> in_set, out_set;
  out.trace.push_back(ce(in_set, out_set));
  for (Vertex v : out.processed) {
    in_set.push_back(v);
    const double with = ce(in_set, out_set);
    in_set.pop_back();
    out_set.push_back(v);
    const double without = ce(in_set, out_set);
    out_set.pop_back();
    if (with <= without) {
      in_set.push_back(v);
      out.trace.push_back(with);
    } else {
      out_set.push_back(v);
      out.trace.push_back(without);
    }
  }
  std::sort(in_set.begin(), in_set.end());
  const PathOracle oracle(graph);
  out.order.order = order_from_sample(oracle, in_set);
  out.order.provenance = OrderProvenance::kDerandomized;
  out.order.sample = std::move(in_set);
  return out;
}

namespace {

void require_small(const Graph& graph, std::size_t cap) {
  if (graph.num_vertices() - 1 > cap) {
    fail(ErrorKind::kInstanceTooLarge, std::to_string(graph.num_vertices() - 1) +
                                           " non-root vertices exceed the enumeration cap of " + std::to_string(cap));
  }
}

std::vector<Vertex> members(const std::vector<Vertex>& vertices, std::uint64_t mask) {
  std::vector<Vertex> out;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (mask >> i & 1) out.push_back(vertices[i]);
  }
  return out;
}

}  // namespace

double expected_greedy_cost(const Graph& graph, const std::vector<Vertex>& order, const ActivationModel& model) {
  require_small(graph, 20);
  const OrderedEquilibria equilibria(graph, GwspProtocol::ordered(graph, order));
  const std::vector<Vertex> vertices = graph.non_root_vertices();
  double total = 0.0;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << vertices.size()); ++mask) {
    const double p = model.probability(vertices, mask);
    if (p == 0.0) continue;
    total += p * equilibria.greedy_cost(members(vertices, mask));
  }
  return total;
}

ExpectedRatio xi_rand_expected_ratio(const Graph& graph, const ActivationModel& model, std::size_t subset_cap) {
  require_small(graph, subset_cap);
  require(model.probs.size() == graph.num_vertices(), "activation model does not match the graph");
  const std::vector<Vertex> vertices = graph.non_root_vertices();
  const SubsetSteinerTable table(graph, vertices, graph.root(), subset_cap);
  const PathOracle oracle(graph);
  ExpectedRatio out;
  std::map<std::vector<Vertex>, double> by_order;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << vertices.size()); ++mask) {
    const double p = model.probability(vertices, mask);
    if (p == 0.0) continue;
    out.expected_opt += mask ? p * table.cost(mask) : 0.0;
    const std::vector<Vertex> order = order_from_sample(oracle, members(vertices, mask));
    auto it = by_order.find(order);
    if (it == by_order.end()) it = by_order.emplace(order, expected_greedy_cost(graph, order, model)).first;
    out.expected_ne += p * it->second;
  }
  out.ratio = poa_ratio(out.expected_ne, out.expected_opt);
  return out;
}

}  // namespace costshare
