#include <gtest/gtest.h>

#include "costshare/error.hpp"
#include "costshare/graph.hpp"
#include "costshare/steiner.hpp"
#include "support.hpp"

namespace costshare {
namespace {

using testing::close;
using testing::four_cycle;
using testing::make_graph;
using testing::three_path;

std::vector<VertexId> path_ids(const Graph& g, const Path& p) {
  std::vector<VertexId> out;
  for (Vertex v : p.vertices) out.push_back(g.id(v));
  return out;
}

TEST(Graph, RejectsMalformedInput) {
  EXPECT_THROW(make_graph({"t", "a"}, {{"t", "a", -1}}), Error);
  EXPECT_THROW(make_graph({"t", "a"}, {{"t", "a", 1}, {"a", "t", 2}}), Error);
  EXPECT_THROW(make_graph({"t", "a"}, {{"a", "a", 1}}), Error);
  EXPECT_THROW(make_graph({"t", "a"}, {{"t", "a", 1}}, "z"), Error);
  EXPECT_THROW(make_graph({"t", "t"}, {}), Error);
  EXPECT_NO_THROW(make_graph({"t", "a"}, {{"t", "a", kInf}}));
}

TEST(ShortestPath, ForcedPathOnThreePath) {
  const Graph g = three_path();
  const Path p = shortest_path(g, g.at("t"), g.at("b"));
  EXPECT_EQ(path_ids(g, p), (std::vector<VertexId>{"t", "a", "b"}));
  EXPECT_DOUBLE_EQ(p.cost, 2.0);
}

TEST(ShortestPath, IdentityQuery) {
  const Graph g = four_cycle();
  const Path p = shortest_path(g, g.at("b"), g.at("b"));
  EXPECT_EQ(path_ids(g, p), (std::vector<VertexId>{"b"}));
  EXPECT_DOUBLE_EQ(p.cost, 0.0);
}

TEST(ShortestPath, PicksCheaperArcOfCycle) {
  const Graph g = four_cycle(1, 1, 1, 3);
  const Path p = shortest_path(g, g.at("t"), g.at("b"));
  EXPECT_EQ(path_ids(g, p), (std::vector<VertexId>{"t", "a", "b"}));
  EXPECT_DOUBLE_EQ(p.cost, 2.0);
}

TEST(ShortestPath, EqualArcsBreakLexicographically) {
  // Both arcs cost 2 with two hops; t-a-b precedes t-c-b.
  const Graph g = four_cycle();
  EXPECT_EQ(path_ids(g, shortest_path(g, g.at("t"), g.at("b"))), (std::vector<VertexId>{"t", "a", "b"}));
  EXPECT_EQ(path_ids(g, shortest_path(g, g.at("b"), g.at("t"))), (std::vector<VertexId>{"b", "a", "t"}));
}

TEST(ShortestPath, UnreachableAcrossInfiniteEdge) {
  const Graph g = make_graph({"t", "a"}, {{"t", "a", kInf}});
  try {
    shortest_path(g, g.at("t"), g.at("a"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kUnreachable);
  }
}

TEST(ShortestPath, CostOverride) {
  const Graph g = four_cycle(1, 1, 1, 3);
  std::vector<double> costs{5, 5, 1, 1};  // edge order as constructed
  const Path p = shortest_path(g, g.at("t"), g.at("b"), costs);
  EXPECT_EQ(path_ids(g, p), (std::vector<VertexId>{"t", "c", "b"}));
  EXPECT_DOUBLE_EQ(p.cost, 2.0);
}

TEST(MetricClosure, Examples) {
  const Graph g = four_cycle();
  const std::vector<Vertex> single{g.at("t")};
  const DistanceMatrix one = metric_closure(g, single);
  EXPECT_EQ(one.size(), 1u);
  EXPECT_DOUBLE_EQ(one(0, 0), 0.0);

  const std::vector<Vertex> opposite{g.at("t"), g.at("b")};
  EXPECT_DOUBLE_EQ(metric_closure(g, opposite)(0, 1), 2.0);

  const Graph p = three_path();
  const std::vector<Vertex> all{p.at("t"), p.at("a"), p.at("b")};
  const DistanceMatrix d = metric_closure(p, all);
  EXPECT_DOUBLE_EQ(d(0, 2), 2.0);
  EXPECT_DOUBLE_EQ(d(0, 1), 1.0);
  EXPECT_DOUBLE_EQ(d(1, 2), 1.0);
}

TEST(MetricClosure, MatchesFloydWarshallAndIsMetric) {
  Rng rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const Graph g = testing::random_small_graph(3 + trial % 8, 4, rng);
    const auto fw = testing::floyd_warshall(g);
    std::vector<Vertex> all(g.num_vertices());
    std::iota(all.begin(), all.end(), Vertex{0});
    const DistanceMatrix d = metric_closure(g, all);
    for (std::size_t i = 0; i < all.size(); ++i) {
      EXPECT_DOUBLE_EQ(d(i, i), 0.0);
      for (std::size_t j = 0; j < all.size(); ++j) {
        EXPECT_TRUE(close(d(i, j), fw[i][j]));
        EXPECT_DOUBLE_EQ(d(i, j), d(j, i));
        for (std::size_t k = 0; k < all.size(); ++k) EXPECT_LE(d(i, j), d(i, k) + d(k, j) + 1e-9);
      }
    }
  }
}

TEST(ShortestPath, DeterministicAndConsistentWithOracle) {
  Rng rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const Graph g = testing::random_small_graph(8, 6, rng);
    const PathOracle oracle(g);
    for (Vertex a = 0; a < g.num_vertices(); ++a) {
      for (Vertex b = 0; b < g.num_vertices(); ++b) {
        const Path p1 = shortest_path(g, a, b);
        const Path p2 = shortest_path(g, a, b);
        EXPECT_EQ(p1.vertices, p2.vertices);
        EXPECT_EQ(oracle.path(a, b).vertices, p1.vertices);
        EXPECT_TRUE(close(path_cost(g, p1.vertices), p1.cost));
      }
    }
  }
}

TEST(NormalizePlayers, DuplicateGetsZeroCostCopy) {
  const Graph g = three_path();
  const NormalizedGame game = normalize_players(g, {"a", "a"});
  EXPECT_EQ(game.graph.num_vertices(), 4u);
  const Vertex copy = game.graph.at("a'");
  const auto e = game.graph.edge_between(game.graph.at("a"), copy);
  ASSERT_TRUE(e.has_value());
  EXPECT_DOUBLE_EQ(game.graph.edge(*e).cost, 0.0);
  EXPECT_EQ(game.players.k(), 2u);
  EXPECT_TRUE(game.players.contains(game.graph.at("a")));
  EXPECT_TRUE(game.players.contains(copy));
}

TEST(NormalizePlayers, SinglePlayerLeavesGraphUnchanged) {
  const Graph g = three_path();
  const NormalizedGame game = normalize_players(g, {"a"});
  EXPECT_EQ(game.graph.num_vertices(), 3u);
  EXPECT_EQ(game.graph.num_edges(), 2u);
  EXPECT_EQ(game.players.players(), std::vector<Vertex>{g.at("a")});
}

TEST(NormalizePlayers, RootIsRejected) {
  try {
    normalize_players(three_path(), {"t"});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kRootIsPlayer);
  }
}

TEST(NormalizePlayers, PreservesSteinerOptimum) {
  const Graph g = three_path();
  const NormalizedGame game = normalize_players(g, {"a", "a", "b"});
  EXPECT_EQ(game.graph.num_vertices(), 4u);
  EXPECT_EQ(game.players.k(), 3u);
  std::vector<Vertex> before{g.at("a"), g.at("b"), g.root()};
  std::vector<Vertex> after = game.players.players();
  after.push_back(game.graph.root());
  EXPECT_DOUBLE_EQ(exact_steiner(g, before).total_cost, exact_steiner(game.graph, after).total_cost);
}

TEST(NormalizePlayers, PreservesSteinerOptimumOnRandomGraphs) {
  Rng rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    const Graph g = testing::random_small_graph(4 + trial % 6, 3, rng);
    std::vector<VertexId> requested;
    for (int i = 0; i < 4; ++i) requested.push_back(g.id(static_cast<Vertex>(1 + rng.below(g.num_vertices() - 1))));
    const NormalizedGame game = normalize_players(g, requested);
    std::vector<Vertex> before;
    for (const auto& id : requested) before.push_back(g.at(id));
    before.push_back(g.root());
    std::vector<Vertex> after = game.players.players();
    after.push_back(game.graph.root());
    EXPECT_TRUE(close(exact_steiner(g, before).total_cost, exact_steiner(game.graph, after).total_cost));
  }
}

TEST(ActivationSet, Validation) {
  const Graph g = three_path();
  EXPECT_THROW(ActivationSet(g, {g.at("a"), g.at("a")}), Error);
  EXPECT_THROW(ActivationSet(g, {g.root()}), Error);
  const ActivationSet s(g, {g.at("b"), g.at("a")});
  EXPECT_EQ(s.k(), 2u);
}

}  // namespace
}  // namespace costshare
