#include <gtest/gtest.h>

#include <algorithm>

#include "costshare/equilibrium.hpp"
#include "costshare/error.hpp"
#include "costshare/generators.hpp"
#include "costshare/stochastic.hpp"
#include "support.hpp"

namespace costshare {
namespace {

using testing::close;

std::vector<Vertex> members(const std::vector<Vertex>& vertices, std::uint64_t mask) {
  std::vector<Vertex> out;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (mask >> i & 1) out.push_back(vertices[i]);
  }
  return out;
}

double mask_probability(const Graph& g, const ActivationModel& model, std::uint64_t mask) {
  double p = 1.0;
  const auto vertices = g.non_root_vertices();
  for (std::size_t i = 0; i < vertices.size(); ++i) p *= (mask >> i & 1) ? model.probs[vertices[i]] : 1.0 - model.probs[vertices[i]];
  return p;
}

Graph star(std::size_t leaves) {
  std::vector<VertexId> ids{"t"};
  std::vector<EdgeSpec> edges;
  for (std::size_t i = 0; i < leaves; ++i) {
    ids.push_back("p" + std::to_string(i));
    edges.push_back({"t", ids.back(), 1.0 + static_cast<double>(i)});
  }
  return Graph(ids, "t", edges);
}

TEST(OrderFromSample, EmptySampleHangsEverythingOffTheRoot) {
  // t-a-b path: a attaches to t, b attaches to t through a's shortest path.
  const Graph g = testing::three_path();
  const PathOracle oracle(g);
  EXPECT_EQ(order_from_sample(oracle, {}), (std::vector<Vertex>{g.at("a"), g.at("b")}));
}

TEST(OrderFromSample, TreeVerticesComeInPreorder) {
  // Cycle t-a-b-c-t with a cheap arc through c: the tree over {b} runs t-c-b,
  // and a hangs off t.
  const Graph g = testing::four_cycle(1, 5, 1, 1);
  const PathOracle oracle(g);
  const std::vector<Vertex> order = order_from_sample(oracle, {g.at("b")});
  EXPECT_EQ(order, (std::vector<Vertex>{g.at("a"), g.at("c"), g.at("b")}));
}

TEST(XiRand, PermutationAndReproducibility) {
  Rng rng(127);
  for (int trial = 0; trial < 20; ++trial) {
    const Graph g = random_connected_graph(8, 0.3, rng);
    const ActivationModel model = random_activation_model(g, rng);
    const UniversalOrder a = xi_rand(g, model, 1000 + trial);
    const UniversalOrder b = xi_rand(g, model, 1000 + trial);
    EXPECT_EQ(a.order, b.order);
    EXPECT_EQ(a.sample, b.sample);
    EXPECT_EQ(a.provenance, OrderProvenance::kRandomized);
    std::vector<Vertex> sorted = a.order;
    std::sort(sorted.begin(), sorted.end());
    EXPECT_EQ(sorted, g.non_root_vertices());
    EXPECT_TRUE(a.protocol(g).is_ordered());
  }
}

TEST(XiRand, BlackBoxSamplerIsCalledOnce) {
  const Graph g = testing::four_cycle();
  std::size_t calls = 0;
  const UniversalOrder o = xi_rand(
      g,
      [&](Rng&) {
        ++calls;
        return std::vector<Vertex>{g.at("c")};
      },
      5);
  EXPECT_EQ(calls, 1u);
  EXPECT_EQ(o.sample, std::vector<Vertex>{g.at("c")});
}

TEST(SampleActivation, ExtremeProbabilities) {
  const Graph g = testing::four_cycle();
  Rng rng(1);
  EXPECT_TRUE(sample_activation(g, ActivationModel(g, {0, 0, 0, 0}), rng).empty());
  EXPECT_EQ(sample_activation(g, ActivationModel(g, {0, 1, 1, 1}), rng), g.non_root_vertices());
}

TEST(SampleTreeExpectation, HandComputed) {
  // Tree over {b} is t-a-b; c is not on it and attaches at distance 1.
  const Graph g = testing::four_cycle(1, 1, 1, 1);
  const ActivationModel model(g, {0, 0.5, 0.5, 0.25});
  const PathOracle oracle(g);
  EXPECT_DOUBLE_EQ(sample_tree_expectation(oracle, model, {g.at("b")}), 2.0 + 0.25);
  EXPECT_DOUBLE_EQ(sample_tree_expectation(oracle, model, {}), 0.5 + 0.5 * 2 + 0.25);
}

TEST(ConditionalExpectation, IdentitiesOnRandomInstances) {
  Rng rng(131);
  for (int trial = 0; trial < 10; ++trial) {
    const Graph g = random_connected_graph(7, 0.3, rng);
    const ActivationModel model = random_activation_model(g, rng);
    const PathOracle oracle(g);
    const auto vertices = g.non_root_vertices();
    ConditionalExpectation ce(g, model);
    // Unconditional value by explicit enumeration over R.
    double expected = 0.0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << vertices.size()); ++mask) {
      expected += mask_probability(g, model, mask) * sample_tree_expectation(oracle, model, members(vertices, mask));
    }
    EXPECT_TRUE(close(ce({}, {}), expected));
    // Fully decided R.
    const std::uint64_t mask = rng.below(std::uint64_t{1} << vertices.size());
    const auto in = members(vertices, mask);
    const auto out = members(vertices, ~mask & ((std::uint64_t{1} << vertices.size()) - 1));
    EXPECT_TRUE(close(ce(in, out), sample_tree_expectation(oracle, model, in)));
    // Averaging over one more decision.
    const Vertex v = vertices[0];
    const double p = model.probs[v];
    EXPECT_TRUE(close(ce({}, {}), p * ce({v}, {}) + (1 - p) * ce({}, {v})));
    EXPECT_TRUE(close(conditional_expected_tree_cost(g, model, {v}, {}), ce({v}, {})));
  }
}

TEST(ConditionalExpectation, RejectsContradictions) {
  const Graph g = testing::four_cycle();
  const ActivationModel model(g, {0, 0.5, 0.5, 0.5});
  ConditionalExpectation ce(g, model);
  EXPECT_THROW(ce({g.at("a")}, {g.at("a")}), Error);
  EXPECT_THROW(ce({g.root()}, {}), Error);
}

TEST(ConditionalExpectation, ExactModeLimit) {
  Rng rng(137);
  const Graph g = random_connected_graph(12, 0.2, rng);
  const ActivationModel model = random_activation_model(g, rng);
  EstimatorMode mode;
  mode.exact.max_undecided = 5;
  ConditionalExpectation ce(g, model, mode);
  try {
    ce({}, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInstanceTooLarge);
  }
}

TEST(ConditionalExpectation, MonteCarloTracksExact) {
  Rng rng(139);
  const Graph g = random_connected_graph(7, 0.3, rng);
  const ActivationModel model = random_activation_model(g, rng);
  EstimatorMode mc;
  mc.monte_carlo = CommonSamples{20000, 3};
  ConditionalExpectation exact(g, model), approx(g, model, mc), again(g, model, mc);
  const double e = exact({}, {});
  EXPECT_NEAR(approx({}, {}), e, 0.05 * e);
  EXPECT_EQ(approx({}, {}), again({}, {}));
}

TEST(Derandomize, TraceIsMonotoneAndConsistent) {
  Rng rng(149);
  for (int trial = 0; trial < 10; ++trial) {
    const Graph g = random_connected_graph(6 + trial % 4, 0.3, rng);
    const ActivationModel model = random_activation_model(g, rng);
    const Derandomized d = derandomize(g, model);
    ASSERT_EQ(d.trace.size(), g.num_vertices());
    for (std::size_t i = 1; i < d.trace.size(); ++i) EXPECT_LE(d.trace[i], d.trace[i - 1] + 1e-9);
    EXPECT_EQ(d.order.provenance, OrderProvenance::kDerandomized);
    EXPECT_TRUE(close(d.trace.back(), sample_tree_expectation(PathOracle(g), model, d.order.sample)));
    EXPECT_EQ(d.order.order, order_from_sample(PathOracle(g), d.order.sample));
    EXPECT_TRUE(std::is_sorted(d.processed.begin(), d.processed.end(),
                               [&](Vertex a, Vertex b) { return g.id(a) < g.id(b); }));
  }
}

TEST(ExpectedGreedyCost, MatchesEnumeration) {
  Rng rng(151);
  for (int trial = 0; trial < 10; ++trial) {
    const Graph g = random_connected_graph(6, 0.4, rng);
    const ActivationModel model = random_activation_model(g, rng);
    std::vector<Vertex> order = g.non_root_vertices();
    rng.shuffle(order);
    const OrderedEquilibria eq(g, GwspProtocol::ordered(g, order));
    double expected = 0.0;
    const auto vertices = g.non_root_vertices();
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << vertices.size()); ++mask) {
      expected += mask_probability(g, model, mask) * eq.greedy_cost(members(vertices, mask));
    }
    EXPECT_TRUE(close(expected_greedy_cost(g, order, model), expected));
  }
}

TEST(ExpectedRatio, StarIsOptimal) {
  const Graph g = star(5);
  Rng rng(157);
  const ActivationModel model = random_activation_model(g, rng);
  const ExpectedRatio r = xi_rand_expected_ratio(g, model);
  EXPECT_TRUE(close(r.ratio, 1.0));
  EXPECT_TRUE(close(r.expected_ne, r.expected_opt));
}

TEST(ExpectedRatio, MatchesTwoLevelEnumeration) {
  Rng rng(163);
  for (int trial = 0; trial < 5; ++trial) {
    const Graph g = random_connected_graph(6, 0.4, rng);
    const ActivationModel model = random_activation_model(g, rng);
    const PathOracle oracle(g);
    const auto vertices = g.non_root_vertices();
    double ne = 0.0, opt = 0.0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << vertices.size()); ++mask) {
      const double p = mask_probability(g, model, mask);
      ne += p * expected_greedy_cost(g, order_from_sample(oracle, members(vertices, mask)), model);
      if (mask == 0) continue;
      std::vector<Vertex> terms = members(vertices, mask);
      terms.push_back(g.root());
      opt += p * testing::brute_force_steiner(g, terms);
    }
    const ExpectedRatio r = xi_rand_expected_ratio(g, model);
    EXPECT_TRUE(close(r.expected_ne, ne));
    EXPECT_TRUE(close(r.expected_opt, opt));
    EXPECT_LE(r.ratio, 8.0);
  }
}

}  // namespace
}  // namespace costshare
