#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "costshare/graph.hpp"
#include "costshare/protocols.hpp"

namespace costshare {

// One simple player-to-root path per activated player.
struct StrategyProfile {
  std::map<Vertex, std::vector<Vertex>> paths;

  std::vector<Vertex> players() const;
};

// R_e for every edge: the players whose path uses e, sorted.
std::vector<std::vector<Vertex>> edge_users(const Graph& graph, const StrategyProfile& profile);

// Throws a validation error unless every path is simple, ends at the root and
// uses only finite-cost edges.
void validate_profile(const Graph& graph, const StrategyProfile& profile);

double player_cost(const Graph& graph, const GwspProtocol& protocol, const StrategyProfile& profile, Vertex i);
double social_cost(const Graph& graph, const StrategyProfile& profile);

// Cheapest simple path for i with everybody else fixed; i's own current path
// does not count towards the user sets.
Path best_response(const Graph& graph, const GwspProtocol& protocol, const StrategyProfile& profile, Vertex i);

enum class Schedule { kPiOrder, kRoundRobin };

// Best-response dynamics. max_rounds = 0 means 10 * k * |E|.
StrategyProfile run_brd(const Graph& graph, const GwspProtocol& protocol, const ActivationSet& activation,
                        StrategyProfile initial, Schedule schedule, std::size_t max_rounds = 0);

// Players processed by increasing rank; each takes the cheapest connector to
// the tree built so far and follows the tree to the root.
StrategyProfile greedy_ordered_outcome(const Graph& graph, const GwspProtocol& protocol, const ActivationSet& activation);

// Profile in which every player uses its own shortest path to the root.
StrategyProfile shortest_paths_profile(const Graph& graph, const ActivationSet& activation);

struct NashReport {
  bool is_nash = true;
  Vertex worst_player = kNoVertex;
  double worst_gain = 0.0;
  double current_cost = 0.0;
  double best_response_cost = 0.0;
};

NashReport is_nash(const Graph& graph, const GwspProtocol& protocol, const StrategyProfile& profile,
                   double tol = kTolerance);

struct EnumerationCaps {
  std::size_t max_vertices = 8;
  std::size_t max_players = 4;
  std::size_t max_profiles = 2'000'000;
};

// Every pure NE over simple-path strategies, sorted by social cost.
std::vector<StrategyProfile> enumerate_equilibria(const Graph& graph, const GwspProtocol& protocol,
                                                  const ActivationSet& activation, const EnumerationCaps& caps = {});

// Equilibrium costs of an ordered protocol. Under an ordered protocol the
// equilibria are the greedy outcomes over all tie choices: player i pays
// d(s_i, H_{<i} + t) and adds a cheapest connector that stops at its first
// hit of the current tree. Tie variants are explored over vertex-set states.
class OrderedEquilibria {
 public:
  OrderedEquilibria(const Graph& graph, const GwspProtocol& protocol);

  struct Worst {
    double cost = 0.0;
    bool exact = true;
  };

  // Players are reordered by protocol rank internally.
  double greedy_cost(const std::vector<Vertex>& players) const;
  Worst worst_cost(const std::vector<Vertex>& players, std::size_t state_cap = 200'000) const;
  // Distinct total costs over all tie variants, ascending.
  std::vector<double> variant_costs(const std::vector<Vertex>& players, std::size_t state_cap = 200'000) const;

 private:
  std::vector<Vertex> ranked(const std::vector<Vertex>& players) const;

  const Graph* graph_;
  std::vector<std::size_t> rank_;
};

// Worst-NE cost under the library's policy: tie-variant search for ordered
// protocols, enumeration when small enough, otherwise the maximum over BRD
// runs from a greedy start, the shortest-paths profile and seeded random
// starts (a lower bound, flagged as inexact).
struct WorstNe {
  double cost = 0.0;
  bool exact = true;
};

struct WorstNeOptions {
  EnumerationCaps caps{};
  std::size_t random_starts = 20;
  std::uint64_t seed = 1;
  std::size_t state_cap = 200'000;
};

WorstNe worst_ne_cost(const Graph& graph, const GwspProtocol& protocol, const ActivationSet& activation,
                      const WorstNeOptions& options = {});

}  // namespace costshare
