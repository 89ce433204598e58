#pragma once

#include <utility>
#include <vector>

#include "costshare/graph.hpp"
#include "costshare/protocols.hpp"

namespace costshare {

using VertexPair = std::pair<Vertex, Vertex>;

// Outer cycle of the biconnected completion of an outerplanar graph.
// Infinite-cost input edges are never used by any game, so recognition works
// on the finite-cost subgraph; such edges are carried along unchanged.
struct OuterplanarEmbedding {
  std::vector<Vertex> outer_cycle;        // starts at the root
  std::vector<VertexPair> chords;         // finite edges off the cycle
  std::vector<VertexPair> augmented_edges;  // added at +inf
  Graph augmented;
};

// Throws kNotOuterplanar. On graphs with at most `uniqueness_check_limit`
// vertices, brute force confirms the outer cycle is the only Hamiltonian
// cycle of the completion.
OuterplanarEmbedding recognize_and_embed(const Graph& graph, std::size_t uniqueness_check_limit = 10);

// Non-root vertices in cycle order, walking from the root towards its
// lexicographically smaller cycle neighbor.
std::vector<Vertex> tour_order(const Graph& graph, const OuterplanarEmbedding& embedding);

// Ordered protocol ranking vertices by tour position.
GwspProtocol tour_protocol(const Graph& graph);

// Brute-force count of Hamiltonian cycles on the given undirected edges,
// stopping once `limit` is reached.
std::size_t count_hamiltonian_cycles(std::size_t num_vertices, const std::vector<VertexPair>& edges,
                                     std::size_t limit = 2);

// True when two chords cross with respect to cycle positions.
bool chords_cross(const std::vector<std::size_t>& position, VertexPair a, VertexPair b);

}  // namespace costshare
