#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <unordered_map>
#include <vector>

#include "costshare/graph.hpp"
#include "costshare/poa.hpp"
#include "costshare/protocols.hpp"
#include "costshare/random.hpp"

namespace costshare {

enum class OrderProvenance { kRandomized, kDerandomized };

// Total order over V \ {t} with the sample it was built from (R for the
// randomized protocol, Q1 for the derandomized one).
struct UniversalOrder {
  std::vector<Vertex> order;
  OrderProvenance provenance = OrderProvenance::kRandomized;
  std::uint64_t seed = 0;
  std::vector<Vertex> sample;

  GwspProtocol protocol(const Graph& graph) const { return GwspProtocol::ordered(graph, order); }
};

// Black-box access to the activation distribution: one call, one draw.
using ActivationSampler = std::function<std::vector<Vertex>(Rng&)>;

// Draws each non-root vertex independently, in vertex-index order.
std::vector<Vertex> sample_activation(const Graph& graph, const ActivationModel& model, Rng& rng);

// Tree built from a sample R: approximate Steiner tree over R + t, every
// other vertex hung off its nearest tree vertex, vertices ordered by first
// appearance on the doubled tree's Euler tour from t (children in
// lexicographic order).
std::vector<Vertex> order_from_sample(const PathOracle& oracle, const std::vector<Vertex>& sample);

UniversalOrder xi_rand(const Graph& graph, const ActivationModel& model, std::uint64_t seed);
UniversalOrder xi_rand(const Graph& graph, const ActivationSampler& sampler, std::uint64_t seed);

// E_S[c(T_{R,S})] for a fixed R: the tree over R + t plus the expected
// attachment cost of every non-tree vertex to its nearest tree vertex.
double sample_tree_expectation(const PathOracle& oracle, const ActivationModel& model, const std::vector<Vertex>& sample);

struct ExactEnumeration {
  std::size_t max_undecided = 18;
};

// Common random numbers: sample i depends only on (seed, i).
struct CommonSamples {
  std::size_t samples = 1000;
  std::uint64_t seed = 1;
};

struct EstimatorMode {
  std::optional<CommonSamples> monte_carlo;  // unset selects exact enumeration
  ExactEnumeration exact{};
};

// E_R[E_S[c(T_{R,S})] | Q1 within R, Q2 outside R], caching the inner value
// per distinct R.
class ConditionalExpectation {
 public:
  ConditionalExpectation(const Graph& graph, const ActivationModel& model, EstimatorMode mode = {});

  double operator()(const std::vector<Vertex>& in_set, const std::vector<Vertex>& out_set);

 private:
  double inner(std::uint64_t mask);

  const Graph* graph_;
  const ActivationModel* model_;
  EstimatorMode mode_;
  PathOracle oracle_;
  std::vector<Vertex> vertices_;
  std::vector<std::size_t> slot_;
  std::unordered_map<std::uint64_t, double> cache_;
  std::vector<std::vector<double>> uniforms_;  // Monte-Carlo draws per sample
};

double conditional_expected_tree_cost(const Graph& graph, const ActivationModel& model,
                                      const std::vector<Vertex>& in_set, const std::vector<Vertex>& out_set,
                                      EstimatorMode mode = {});

struct Derandomized {
  UniversalOrder order;
  std::vector<Vertex> processed;  // lexicographic order of placement
  std::vector<double> trace;      // trace[0] unconditional, trace[i] after i placements
};

Derandomized derandomize(const Graph& graph, const ActivationModel& model, EstimatorMode mode = {});

struct ExpectedRatio {
  double expected_ne = 0.0;
  double expected_opt = 0.0;
  double ratio = 1.0;
};

// Exact E_S[greedy NE cost] under a fixed order.
double expected_greedy_cost(const Graph& graph, const std::vector<Vertex>& order, const ActivationModel& model);

// Exact E_R[E_S[greedy NE cost under the order built from R]] / E_S[OPT], with
// R and S independent draws from the model.
ExpectedRatio xi_rand_expected_ratio(const Graph& graph, const ActivationModel& model, std::size_t subset_cap = 12);

}  // namespace costshare
