#pragma once

#include <vector>

#include "costshare/graph.hpp"
#include "costshare/poa.hpp"
#include "costshare/random.hpp"

namespace costshare {

struct CostRange {
  double lo = 0.0;  // exclusive
  double hi = 10.0;
};

// Cycle through t and n-1 other vertices in random position order, with costs
// uniform in (lo, hi].
Graph random_cycle(std::size_t n, Rng& rng, CostRange costs = {});

// Random triangulation of an n-gon with shuffled vertex names; one vertex is
// the root t.
Graph random_maximal_outerplanar(std::size_t n, Rng& rng, CostRange costs = {});

// Random spanning tree plus each remaining pair with probability edge_prob.
Graph random_connected_graph(std::size_t n, double edge_prob, Rng& rng, CostRange costs = {});

// Independent probabilities uniform in [0, 1) per non-root vertex.
ActivationModel random_activation_model(const Graph& graph, Rng& rng);

// Outerplanar host for the q-order: a path v_0..v_{2^r} hanging off t at
// v_0, with laminar chords from each interior vertex to its parents that are
// slightly cheaper than the path between them.
struct QOrderInstance {
  Graph graph;
  std::vector<Vertex> path;
  std::vector<Vertex> q_order;  // class by class, by index inside a class
};

QOrderInstance qorder_outerplanar(std::size_t r);

}  // namespace costshare
