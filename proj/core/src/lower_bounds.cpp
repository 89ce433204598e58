#include "costshare/lower_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "costshare/combinatorics.hpp"
#include "costshare/error.hpp"

namespace costshare {

namespace {

std::string path_id(std::size_t i) { return "v" + std::to_string(i); }

std::vector<std::size_t> zigzag_indices(std::size_t r) {
  const PathClasses pc = classes_of_path(r);
  std::vector<std::size_t> order;
  for (const auto& cls : pc.classes) order.insert(order.end(), cls.begin(), cls.end());
  return order;
}

}  // namespace

QtildeInstance build_qtilde(const QtildeParams& params) {
  require(params.r >= 1 && params.r <= 10, "qtilde depth r must lie in [1, 10]");
  QtildeInstance inst;
  inst.r = params.r;
  const std::size_t length = std::size_t{1} << params.r;
  inst.k = params.k ? params.k : length + 1;
  require(params.root_cost == RootCostPolicy::kTwoK || inst.k <= 60, "2^k root cost needs k <= 60");
  inst.root_cost = params.root_cost == RootCostPolicy::kTwoK ? 2.0 * static_cast<double>(inst.k)
                                                             : std::ldexp(1.0, static_cast<int>(inst.k));

  std::vector<VertexId> ids{"t"};
  std::vector<EdgeSpec> edges;
  std::vector<VertexId> path_ids;
  if (params.host == QtildeHost::kPath) {
    inst.n = 0;
    for (std::size_t i = 0; i <= length; ++i) ids.push_back(path_id(i));
    for (std::size_t i = 0; i <= length; ++i) {
      edges.push_back({"t", path_id(i), inst.root_cost});
      for (std::size_t j = i + 1; j <= length; ++j) edges.push_back({path_id(i), path_id(j), static_cast<double>(j - i)});
    }
    for (std::size_t i = 0; i <= length; ++i) path_ids.push_back(path_id(i));
  } else {
    inst.n = params.n ? params.n : length;
    require(inst.n >= length, "hypercube host needs n >= 2^r to contain a geodesic of length 2^r");
    require(inst.n <= 8, "hypercube host is limited to n <= 8");
    const Hypercube cube(inst.n);
    for (Bits x = 0; x < cube.size(); ++x) ids.push_back(cube.id(x));
    for (Bits x = 0; x < cube.size(); ++x) {
      edges.push_back({"t", cube.id(x), inst.root_cost});
      for (Bits y = x + 1; y < cube.size(); ++y) {
        edges.push_back({cube.id(x), cube.id(y), static_cast<double>(Hypercube::distance(x, y))});
      }
    }
    for (std::size_t i = 0; i <= length; ++i) path_ids.push_back(std::string(i, '1') + std::string(inst.n - i, '0'));
  }
  inst.graph = Graph(std::move(ids), "t", edges);
  for (const VertexId& id : path_ids) inst.path.push_back(inst.graph.at(id));
  for (std::size_t i : zigzag_indices(params.r)) inst.zigzag_order.push_back(inst.path[i]);
  return inst;
}

GwspProtocol qtilde_protocol(const QtildeInstance& instance) {
  std::vector<Vertex> order = instance.zigzag_order;
  std::vector<Vertex> rest;
  for (Vertex v : instance.graph.non_root_vertices()) {
    if (std::find(order.begin(), order.end(), v) == order.end()) rest.push_back(v);
  }
  std::sort(rest.begin(), rest.end(), [&](Vertex a, Vertex b) { return instance.graph.lex_less(a, b); });
  order.insert(order.end(), rest.begin(), rest.end());
  return GwspProtocol::ordered(instance.graph, std::move(order));
}

double qtilde_closed_form_ratio(std::size_t r, double root_cost) {
  const double length = std::ldexp(1.0, static_cast<int>(r));
  double detours = 0.0;
  for (std::size_t j = 1; j <= r; ++j) {
    detours += std::ldexp(1.0, static_cast<int>(j - 1)) * std::ldexp(1.0, static_cast<int>(r - j));
  }
  return (root_cost + length + detours) / (root_cost + length);
}

double qstar_shortcut_cost(std::size_t j, std::size_t k) {
  const double kk = static_cast<double>(k);
  return std::ldexp(1.0, static_cast<int>(j)) * std::pow((kk - 1.0) / kk, static_cast<double>(j));
}

QstarInstance build_qstar(const QstarParams& params) {
  require(params.n >= 1 && params.n <= 12, "qstar dimension n must lie in [1, 12]");
  require(params.copies >= 1, "qstar needs at least one player per vertex");
  require(params.r >= 1, "qstar depth r must be positive");
  QstarInstance inst;
  inst.r = params.r;
  inst.n = params.n;
  inst.copies = params.copies;
  inst.k = params.k ? params.k : (std::size_t{1} << (params.r - 1)) + 1;
  require(inst.k >= 2, "qstar needs k >= 2");
  const double k = static_cast<double>(inst.k);
  inst.direct_root_cost = 2.0 * k;
  inst.hub_root_cost = 2.0 * k * k / 6.0;

  const Hypercube cube(params.n);
  std::vector<VertexId> ids{"t"};
  std::vector<EdgeSpec> edges;
  for (Bits x = 0; x < cube.size(); ++x) {
    const std::string id = cube.id(x);
    ids.push_back(id);
    for (std::size_t c = 1; c < params.copies; ++c) {
      ids.push_back(id + "#" + std::to_string(c));
      edges.push_back({id, ids.back(), 0.0});
    }
    ids.push_back(id + "^");
    edges.push_back({"t", id, inst.direct_root_cost});
    edges.push_back({id, id + "^", inst.hub_root_cost});
    edges.push_back({id + "^", "t", 0.0});
  }
  for (std::size_t j = 0; j <= params.r && (std::size_t{1} << j) <= params.n; ++j) {
    const unsigned distance = 1u << j;
    const double cost = qstar_shortcut_cost(j, inst.k);
    for (Bits x = 0; x < cube.size(); ++x) {
      for (Bits y = x + 1; y < cube.size(); ++y) {
        if (Hypercube::distance(x, y) == distance) edges.push_back({cube.id(x), cube.id(y), cost});
      }
    }
  }
  inst.graph = Graph(std::move(ids), "t", edges);
  for (Bits x = 0; x < cube.size(); ++x) {
    std::vector<Vertex> hosted{inst.graph.at(cube.id(x))};
    for (std::size_t c = 1; c < params.copies; ++c) hosted.push_back(inst.graph.at(cube.id(x) + "#" + std::to_string(c)));
    inst.hosted.push_back(std::move(hosted));
    inst.hubs.push_back(inst.graph.at(cube.id(x) + "^"));
  }
  return inst;
}

AdversaryResult qstar_adversary(const QstarInstance& instance, const GwspProtocol& protocol,
                                const AdversaryOptions& options) {
  const Graph& graph = instance.graph;
  require(protocol.num_vertices() == graph.num_vertices(), "protocol does not match the instance");
  const std::size_t k = instance.k;
  const double kk = static_cast<double>(k);
  const double alpha = std::pow(1.0 + 1.0 / (kk * kk * kk), 1.0 / (2.0 * kk));

  // Subgroup key: (part index, weight scale). Within a part weights are
  // scaled so that the lightest player has weight 1.
  std::vector<double> part_min(protocol.parts().size(), kInf);
  for (std::size_t p = 0; p < protocol.parts().size(); ++p) {
    for (Vertex v : protocol.parts()[p]) part_min[p] = std::min(part_min[p], protocol.weight(v));
  }
  using GroupKey = std::pair<std::size_t, std::int64_t>;
  auto key_of = [&](Vertex v) {
    const std::size_t p = protocol.part_of(v);
    const double f = protocol.weight(v) / part_min[p];
    // Heavier players pay first inside a part, so larger scales sort first.
    return GroupKey{p, -static_cast<std::int64_t>(std::floor(std::log(f) / std::log(alpha) + 1e-9))};
  };
  std::map<GroupKey, std::vector<std::vector<Vertex>>> groups;  // key -> members per hypercube vertex
  for (std::size_t q = 0; q < instance.hosted.size(); ++q) {
    for (Vertex v : instance.hosted[q]) {
      auto& per_q = groups[key_of(v)];
      per_q.resize(instance.hosted.size());
      per_q[q].push_back(v);
    }
  }

  AdversaryResult result;
  for (const auto& [key, per_q] : groups) {
    for (const auto& members : per_q) {
      if (members.size() >= k) {
        result.kind = AdversaryCase::kShapleyLike;
        result.activation = ActivationSet(graph, std::vector<Vertex>(members.begin(), members.begin() + k));
        return result;
      }
    }
  }

  result.kind = AdversaryCase::kOrderedLike;
  require(k >= 2 && std::has_single_bit(k - 1), "the ordered-like case needs k - 1 to be a power of two");
  const std::size_t depth = static_cast<std::size_t>(std::countr_zero(k - 1)) + 1;
  const std::size_t span = options.block_span
                               ? options.block_span
                               : static_cast<std::size_t>(4.0 * std::pow(kk, 5.0));
  std::map<Vertex, std::uint64_t> block_of;
  std::size_t index = 0;
  for (const auto& [key, per_q] : groups) {
    const std::uint64_t block = index++ / span;
    for (const auto& members : per_q) {
      for (Vertex v : members) block_of[v] = block;
    }
  }

  const std::size_t cube_size = instance.hosted.size();
  const auto rb = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(instance.copies) /
                                                                static_cast<double>(cube_size))));
  if (rb == 0) fail(ErrorKind::kNoRainbow, "M is smaller than the number of hypercube vertices");
  std::vector<std::vector<ColoredElement>> parts(cube_size);
  for (std::size_t q = 0; q < cube_size; ++q) {
    for (std::size_t i = 0; i < cube_size * rb * rb; ++i) {
      const Vertex v = instance.hosted[q][i];
      parts[q].push_back({static_cast<std::int64_t>(v), block_of.at(v)});
    }
  }
  const auto rainbow = rainbow_transversal(parts, cube_size, rb);

  // Rank the chosen players by block; colors are distinct, so ranks are too.
  std::vector<ColoredElement> all;
  for (const auto& chosen : rainbow) all.insert(all.end(), chosen.begin(), chosen.end());
  std::sort(all.begin(), all.end(), [](const ColoredElement& a, const ColoredElement& b) { return a.color < b.color; });
  std::map<std::int64_t, std::int64_t> rank;
  for (std::size_t i = 0; i < all.size(); ++i) rank[all[i].element] = static_cast<std::int64_t>(i + 1);
  std::vector<std::vector<std::int64_t>> rank_parts(cube_size);
  for (std::size_t q = 0; q < cube_size; ++q) {
    for (const ColoredElement& x : rainbow[q]) rank_parts[q].push_back(rank.at(x.element));
  }
  const std::vector<std::int64_t> picked = nonconsecutive_transversal(rank_parts);

  std::vector<std::size_t> by_rank(cube_size);
  for (std::size_t q = 0; q < cube_size; ++q) by_rank[q] = q;
  std::sort(by_rank.begin(), by_rank.end(), [&](std::size_t a, std::size_t b) { return picked[a] < picked[b]; });
  std::vector<std::uint32_t> labels(cube_size);
  for (std::size_t pos = 0; pos < cube_size; ++pos) labels[by_rank[pos]] = static_cast<std::uint32_t>(pos + 1);
  for (std::size_t q = 0; q < cube_size; ++q) {
    for (const ColoredElement& x : rainbow[q]) {
      if (rank.at(x.element) == picked[q]) result.representatives.push_back(static_cast<Vertex>(x.element));
    }
  }

  const Hypercube cube(instance.n);
  ZigZagSearch search = search_zigzag(cube, Labeling(labels), depth, options.zigzag_budget);
  if (!search.certificate) {
    fail(ErrorKind::kZigZagNotFound, "no zig-zag path of depth " + std::to_string(depth) + " within " +
                                         std::to_string(search.expansions) + " expansions");
  }
  const PathClasses pc = classes_of_path(depth);
  std::vector<Vertex> players;
  for (std::size_t i = 0; i < search.certificate->path.size(); ++i) {
    if (pc.class_of[i] < depth) players.push_back(result.representatives[search.certificate->path[i]]);
  }
  result.activation = ActivationSet(graph, std::move(players));
  result.certificate = std::move(search.certificate);
  return result;
}

}  // namespace costshare
