#include "costshare/equilibrium.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "costshare/error.hpp"
#include "costshare/random.hpp"

namespace costshare {

std::vector<Vertex> StrategyProfile::players() const {
  std::vector<Vertex> out;
  out.reserve(paths.size());
  for (const auto& [player, path] : paths) out.push_back(player);
  return out;
}

std::vector<std::vector<Vertex>> edge_users(const Graph& graph, const StrategyProfile& profile) {
  std::vector<std::vector<Vertex>> users(graph.num_edges());
  for (const auto& [player, path] : profile.paths) {
    for (std::size_t j = 0; j + 1 < path.size(); ++j) {
      auto e = graph.edge_between(path[j], path[j + 1]);
      require(e.has_value(), "profile path uses a missing edge");
      users[*e].push_back(player);
    }
  }
  for (auto& list : users) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  return users;
}

void validate_profile(const Graph& graph, const StrategyProfile& profile) {
  for (const auto& [player, path] : profile.paths) {
    const std::string who = "path of '" + graph.id(player) + "'";
    require(!path.empty() && path.front() == player, who + " must start at the player");
    require(path.back() == graph.root(), who + " must end at the root");
    std::vector<Vertex> sorted = path;
    std::sort(sorted.begin(), sorted.end());
    require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(), who + " is not simple");
    for (std::size_t j = 0; j + 1 < path.size(); ++j) {
      auto e = graph.edge_between(path[j], path[j + 1]);
      require(e.has_value(), who + " uses a missing edge");
      require(std::isfinite(graph.edge(*e).cost), who + " uses an infinite-cost edge");
    }
  }
}

double player_cost(const Graph& graph, const GwspProtocol& protocol, const StrategyProfile& profile, Vertex i) {
  const auto users = edge_users(graph, profile);
  const auto& path = profile.paths.at(i);
  double total = 0.0;
  for (std::size_t j = 0; j + 1 < path.size(); ++j) {
    const EdgeIndex e = *graph.edge_between(path[j], path[j + 1]);
    total += protocol.share(graph.edge(e).cost, users[e], i);
  }
  return total;
}

double social_cost(const Graph& graph, const StrategyProfile& profile) {
  std::vector<char> used(graph.num_edges(), 0);
  double total = 0.0;
  for (const auto& [player, path] : profile.paths) {
    for (std::size_t j = 0; j + 1 < path.size(); ++j) {
      const EdgeIndex e = *graph.edge_between(path[j], path[j + 1]);
      if (!used[e]) {
        used[e] = 1;
        total += graph.edge(e).cost;
      }
    }
  }
  return total;
}

namespace {

std::vector<double> deviation_costs(const Graph& graph, const GwspProtocol& protocol,
                                    const std::vector<std::vector<Vertex>>& users, Vertex i) {
  std::vector<double> costs(graph.num_edges());
  std::vector<Vertex> with_i;
  for (EdgeIndex e = 0; e < graph.num_edges(); ++e) {
    const double c = graph.edge(e).cost;
    if (std::isinf(c)) {
      costs[e] = kInf;
      continue;
    }
    with_i.clear();
    for (Vertex u : users[e]) {
      if (u != i) with_i.push_back(u);
    }
    with_i.push_back(i);
    costs[e] = protocol.share(c, with_i, i);
  }
  return costs;
}

std::vector<Vertex> schedule_order(const Graph& graph, const GwspProtocol& protocol, const std::vector<Vertex>& players,
                                   Schedule schedule) {
  std::vector<Vertex> order = players;
  if (schedule == Schedule::kPiOrder) {
    std::stable_sort(order.begin(), order.end(), [&](Vertex a, Vertex b) {
      if (protocol.part_of(a) != protocol.part_of(b)) return protocol.part_of(a) < protocol.part_of(b);
      return graph.lex_less(a, b);
    });
  }
  return order;
}

}  // namespace

Path best_response(const Graph& graph, const GwspProtocol& protocol, const StrategyProfile& profile, Vertex i) {
  const auto users = edge_users(graph, profile);
  const std::vector<double> costs = deviation_costs(graph, protocol, users, i);
  return shortest_path(graph, i, graph.root(), costs);
}

StrategyProfile run_brd(const Graph& graph, const GwspProtocol& protocol, const ActivationSet& activation,
                        StrategyProfile initial, Schedule schedule, std::size_t max_rounds) {
  for (Vertex p : activation.players()) require(initial.paths.count(p) == 1, "initial profile misses a player");
  require(initial.paths.size() == activation.k(), "initial profile has players outside the activation set");
  validate_profile(graph, initial);
  if (max_rounds == 0) max_rounds = 10 * std::max<std::size_t>(1, activation.k()) * std::max<std::size_t>(1, graph.num_edges());
  const std::vector<Vertex> order = schedule_order(graph, protocol, activation.players(), schedule);
  StrategyProfile profile = std::move(initial);
  for (std::size_t round = 0; round < max_rounds; ++round) {
    bool changed = false;
    for (Vertex i : order) {
      const auto users = edge_users(graph, profile);
      const std::vector<double> costs = deviation_costs(graph, protocol, users, i);
      const double current = path_cost(graph, profile.paths.at(i), costs);
      const Path response = shortest_path(graph, i, graph.root(), costs);
      if (definitely_less(response.cost, current)) {
        profile.paths[i] = response.vertices;
        changed = true;
      }
    }
    if (!changed) return profile;
  }
  fail(ErrorKind::kNonConvergence, "best-response dynamics did not converge within " + std::to_string(max_rounds) + " rounds");
}

StrategyProfile greedy_ordered_outcome(const Graph& graph, const GwspProtocol& protocol, const ActivationSet& activation) {
  const std::vector<Vertex> order = schedule_order(graph, protocol, activation.players(), Schedule::kPiOrder);
  std::vector<char> in_tree(graph.num_vertices(), 0);
  std::vector<Vertex> next(graph.num_vertices(), kNoVertex);
  in_tree[graph.root()] = 1;
  StrategyProfile profile;
  for (Vertex p : order) {
    std::vector<Vertex> path;
    Vertex hit = p;
    if (!in_tree[p]) {
      const Path connector = connector_to_set(graph, p, in_tree);
      for (std::size_t j = 0; j + 1 < connector.vertices.size(); ++j) {
        next[connector.vertices[j]] = connector.vertices[j + 1];
        in_tree[connector.vertices[j]] = 1;
      }
      path.assign(connector.vertices.begin(), connector.vertices.end() - 1);
      hit = connector.vertices.back();
    }
    for (Vertex v = hit; v != kNoVertex; v = next[v]) path.push_back(v);
    profile.paths[p] = std::move(path);
  }
  return profile;
}

StrategyProfile shortest_paths_profile(const Graph& graph, const ActivationSet& activation) {
  StrategyProfile profile;
  for (Vertex p : activation.players()) profile.paths[p] = shortest_path(graph, p, graph.root()).vertices;
  return profile;
}

NashReport is_nash(const Graph& graph, const GwspProtocol& protocol, const StrategyProfile& profile, double tol) {
  NashReport report;
  const auto users = edge_users(graph, profile);
  for (const auto& [i, path] : profile.paths) {
    const std::vector<double> costs = deviation_costs(graph, protocol, users, i);
    const double current = path_cost(graph, path, costs);
    const Path response = shortest_path(graph, i, graph.root(), costs);
    const double gain = current - response.cost;
    if (response.cost < current - tol * std::max(1.0, current)) report.is_nash = false;
    if (report.worst_player == kNoVertex || gain > report.worst_gain) {
      report.worst_player = i;
      report.worst_gain = gain;
      report.current_cost = current;
      report.best_response_cost = response.cost;
    }
  }
  return report;
}

namespace {

void simple_paths_to_root(const Graph& graph, Vertex u, std::vector<char>& on_path, std::vector<Vertex>& current,
                          std::vector<std::vector<Vertex>>& out, std::size_t limit) {
  if (out.size() > limit) return;
  if (u == graph.root()) {
    out.push_back(current);
    return;
  }
  for (const Incidence& inc : graph.incident(u)) {
    if (on_path[inc.to] || std::isinf(graph.edge(inc.edge).cost)) continue;
    on_path[inc.to] = 1;
    current.push_back(inc.to);
    simple_paths_to_root(graph, inc.to, on_path, current, out, limit);
    current.pop_back();
    on_path[inc.to] = 0;
  }
}

}  // namespace

std::vector<StrategyProfile> enumerate_equilibria(const Graph& graph, const GwspProtocol& protocol,
                                                  const ActivationSet& activation, const EnumerationCaps& caps) {
  if (graph.num_vertices() > caps.max_vertices || activation.k() > caps.max_players) {
    fail(ErrorKind::kInstanceTooLarge, "equilibrium enumeration is limited to " + std::to_string(caps.max_vertices) +
                                           " vertices and " + std::to_string(caps.max_players) + " players");
  }
  const auto& players = activation.players();
  std::vector<std::vector<std::vector<Vertex>>> options(players.size());
  std::size_t product = 1;
  for (std::size_t idx = 0; idx < players.size(); ++idx) {
    std::vector<char> on_path(graph.num_vertices(), 0);
    on_path[players[idx]] = 1;
    std::vector<Vertex> current{players[idx]};
    simple_paths_to_root(graph, players[idx], on_path, current, options[idx], caps.max_profiles);
    if (options[idx].empty()) fail(ErrorKind::kUnreachable, "'" + graph.id(players[idx]) + "' cannot reach the root");
    product *= options[idx].size();
    if (product > caps.max_profiles) fail(ErrorKind::kInstanceTooLarge, "too many strategy profiles to enumerate");
  }
  std::vector<std::pair<double, StrategyProfile>> found;
  std::vector<std::size_t> digit(players.size(), 0);
  for (std::size_t count = 0; count < product; ++count) {
    StrategyProfile profile;
    for (std::size_t idx = 0; idx < players.size(); ++idx) profile.paths[players[idx]] = options[idx][digit[idx]];
    if (is_nash(graph, protocol, profile).is_nash) found.emplace_back(social_cost(graph, profile), std::move(profile));
    for (std::size_t idx = 0; idx < players.size(); ++idx) {
      if (++digit[idx] < options[idx].size()) break;
      digit[idx] = 0;
    }
  }
  std::stable_sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<StrategyProfile> out;
  out.reserve(found.size());
  for (auto& entry : found) out.push_back(std::move(entry.second));
  return out;
}

OrderedEquilibria::OrderedEquilibria(const Graph& graph, const GwspProtocol& protocol)
    : graph_(&graph), rank_(graph.num_vertices(), static_cast<std::size_t>(-1)) {
  const std::vector<Vertex> order = protocol.flattened_order(graph);
  for (std::size_t r = 0; r < order.size(); ++r) rank_[order[r]] = r;
}

std::vector<Vertex> OrderedEquilibria::ranked(const std::vector<Vertex>& players) const {
  std::vector<Vertex> out = players;
  std::sort(out.begin(), out.end(), [&](Vertex a, Vertex b) { return rank_[a] < rank_[b]; });
  return out;
}

double OrderedEquilibria::greedy_cost(const std::vector<Vertex>& players) const {
  const Graph& graph = *graph_;
  std::vector<char> in_tree(graph.num_vertices(), 0);
  in_tree[graph.root()] = 1;
  double total = 0.0;
  for (Vertex p : ranked(players)) {
    if (in_tree[p]) continue;
    const Path connector = connector_to_set(graph, p, in_tree);
    total += connector.cost;
    for (Vertex v : connector.vertices) in_tree[v] = 1;
  }
  return total;
}

namespace {

// Tie-variant explorer over (step, tree vertex mask) states.
class VariantSearch {
 public:
  VariantSearch(const Graph& graph, std::vector<Vertex> players, std::size_t state_cap)
      : graph_(graph), players_(std::move(players)), state_cap_(state_cap), memo_(players_.size()) {}

  bool exact() const { return exact_; }

  double worst(std::size_t step, std::uint64_t mask) {
    if (step == players_.size()) return 0.0;
    auto it = memo_[step].find(mask);
    if (it != memo_[step].end()) return it->second;
    double value;
    const Vertex p = players_[step];
    if (mask & bit(p)) {
      value = worst(step + 1, mask);
    } else {
      double step_cost;
      const std::vector<std::uint64_t> successors = expand(mask, p, step_cost);
      double tail = -kInf;
      for (std::uint64_t next : successors) tail = std::max(tail, worst(step + 1, next));
      value = step_cost + tail;
    }
    memo_[step].emplace(mask, value);
    ++states_;
    return value;
  }

  std::vector<double> totals(std::size_t step, std::uint64_t mask) {
    if (step == players_.size()) return {0.0};
    auto it = totals_memo_.find({step, mask});
    if (it != totals_memo_.end()) return it->second;
    std::vector<double> out;
    const Vertex p = players_[step];
    if (mask & bit(p)) {
      out = totals(step + 1, mask);
    } else {
      double step_cost;
      for (std::uint64_t next : expand(mask, p, step_cost)) {
        for (double t : totals(step + 1, next)) out.push_back(step_cost + t);
      }
      std::sort(out.begin(), out.end());
      std::vector<double> merged;
      for (double v : out) {
        if (merged.empty() || !approx_equal(merged.back(), v)) merged.push_back(v);
      }
      out = std::move(merged);
    }
    totals_memo_.emplace(std::make_pair(step, mask), out);
    ++states_;
    return out;
  }

 private:
  static std::uint64_t bit(Vertex v) { return std::uint64_t{1} << v; }

  // Tree masks reachable by adding one cheapest connector from p.
  std::vector<std::uint64_t> expand(std::uint64_t mask, Vertex p, double& step_cost) {
    const std::size_t n = graph_.num_vertices();
    std::vector<char> targets(n, 0);
    for (Vertex v = 0; v < n; ++v) targets[v] = (mask & bit(v)) ? 1 : 0;
    const DistanceField field = distances_to_set(graph_, targets);
    step_cost = field.dist[p];
    if (std::isinf(step_cost)) fail(ErrorKind::kUnreachable, "'" + graph_.id(p) + "' cannot reach the tree");
    std::set<std::uint64_t> found;
    const bool saturated = states_ >= state_cap_;
    std::size_t budget = saturated ? 1 : 50'000;
    std::uint64_t on_path = bit(p);
    mask_ = mask;
    walk(p, field, targets, on_path, found, budget, saturated);
    if (budget == 0 || saturated) exact_ = false;
    if (found.empty()) fail(ErrorKind::kUnreachable, "no cheapest connector found");
    return {found.begin(), found.end()};
  }

  void walk(Vertex u, const DistanceField& field, const std::vector<char>& targets, std::uint64_t& on_path,
            std::set<std::uint64_t>& found, std::size_t& budget, bool first_only) {
    for (const Incidence& inc : graph_.incident(u)) {
      if (budget == 0 || (first_only && !found.empty())) return;
      const double c = graph_.edge(inc.edge).cost;
      const Vertex w = inc.to;
      if (std::isinf(c) || (on_path & bit(w))) continue;
      if (!approx_equal(c + field.dist[w], field.dist[u])) continue;
      --budget;
      if (targets[w]) {
        found.insert(on_path | mask_);
        continue;
      }
      on_path |= bit(w);
      walk(w, field, targets, on_path, found, budget, first_only);
      on_path &= ~bit(w);
    }
  }

  const Graph& graph_;
  std::vector<Vertex> players_;
  std::size_t state_cap_;
  std::vector<std::unordered_map<std::uint64_t, double>> memo_;
  std::map<std::pair<std::size_t, std::uint64_t>, std::vector<double>> totals_memo_;
  std::uint64_t mask_ = 0;
  std::size_t states_ = 0;
  bool exact_ = true;
};

}  // namespace

OrderedEquilibria::Worst OrderedEquilibria::worst_cost(const std::vector<Vertex>& players, std::size_t state_cap) const {
  if (graph_->num_vertices() > 64) return {greedy_cost(players), false};
  VariantSearch search(*graph_, ranked(players), state_cap);
  const double cost = search.worst(0, std::uint64_t{1} << graph_->root());
  return {cost, search.exact()};
}

std::vector<double> OrderedEquilibria::variant_costs(const std::vector<Vertex>& players, std::size_t state_cap) const {
  require(graph_->num_vertices() <= 64, "tie-variant enumeration is limited to 64 vertices");
  VariantSearch search(*graph_, ranked(players), state_cap);
  return search.totals(0, std::uint64_t{1} << graph_->root());
}

namespace {

StrategyProfile random_profile(const Graph& graph, const ActivationSet& activation, Rng& rng) {
  StrategyProfile profile;
  std::vector<double> costs(graph.num_edges());
  for (Vertex p : activation.players()) {
    for (EdgeIndex e = 0; e < graph.num_edges(); ++e) {
      const double c = graph.edge(e).cost;
      costs[e] = std::isinf(c) ? kInf : rng.uniform_open_closed(0.0, 1.0) * (1.0 + c);
    }
    profile.paths[p] = shortest_path(graph, p, graph.root(), costs).vertices;
  }
  return profile;
}

std::size_t profile_count(const Graph& graph, const ActivationSet& activation, std::size_t limit) {
  std::size_t product = 1;
  for (Vertex p : activation.players()) {
    std::vector<char> on_path(graph.num_vertices(), 0);
    on_path[p] = 1;
    std::vector<Vertex> current{p};
    std::vector<std::vector<Vertex>> paths;
    simple_paths_to_root(graph, p, on_path, current, paths, limit);
    product *= std::max<std::size_t>(1, paths.size());
    if (product > limit) return product;
  }
  return product;
}

}  // namespace

WorstNe worst_ne_cost(const Graph& graph, const GwspProtocol& protocol, const ActivationSet& activation,
                      const WorstNeOptions& options) {
  if (activation.empty()) return {0.0, true};
  if (protocol.is_ordered()) {
    const auto worst = OrderedEquilibria(graph, protocol).worst_cost(activation.players(), options.state_cap);
    return {worst.cost, worst.exact};
  }
  if (graph.num_vertices() <= options.caps.max_vertices && activation.k() <= options.caps.max_players &&
      profile_count(graph, activation, options.caps.max_profiles) <= options.caps.max_profiles) {
    const auto equilibria = enumerate_equilibria(graph, protocol, activation, options.caps);
    if (!equilibria.empty()) return {social_cost(graph, equilibria.back()), true};
  }
  std::vector<StrategyProfile> starts;
  starts.push_back(greedy_ordered_outcome(graph, protocol, activation));
  starts.push_back(shortest_paths_profile(graph, activation));
  Rng rng(options.seed);
  for (std::size_t s = 0; s < options.random_starts; ++s) starts.push_back(random_profile(graph, activation, rng));
  double worst = -kInf;
  for (auto& start : starts) {
    try {
      const StrategyProfile end = run_brd(graph, protocol, activation, std::move(start), Schedule::kRoundRobin);
      worst = std::max(worst, social_cost(graph, end));
    } catch (const Error& error) {
      if (error.kind() != ErrorKind::kNonConvergence) throw;
    }
  }
  if (std::isinf(worst)) fail(ErrorKind::kNonConvergence, "no best-response run converged");
  return {worst, false};
}

}  // namespace costshare
