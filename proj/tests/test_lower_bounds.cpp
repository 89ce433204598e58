#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "costshare/equilibrium.hpp"
#include "costshare/error.hpp"
#include "costshare/lower_bounds.hpp"
#include "costshare/steiner.hpp"
#include "support.hpp"

namespace costshare {
namespace {

using testing::close;

double greedy_ratio(const QtildeInstance& inst) {
  const GwspProtocol p = qtilde_protocol(inst);
  const std::vector<Vertex> players(inst.path.begin(), inst.path.end());
  const double ne = OrderedEquilibria(inst.graph, p).greedy_cost(players);
  std::vector<Vertex> terms = players;
  terms.push_back(inst.graph.root());
  return ne / exact_steiner(inst.graph, terms).total_cost;
}

TEST(Qtilde, DepthOneOnPath) {
  QtildeParams params;
  params.r = 1;
  const QtildeInstance inst = build_qtilde(params);
  EXPECT_EQ(inst.k, 3u);
  EXPECT_DOUBLE_EQ(inst.root_cost, 6.0);
  const std::vector<Vertex> players(inst.path.begin(), inst.path.end());
  const GwspProtocol p = qtilde_protocol(inst);
  const ActivationSet s(inst.graph, players);
  const StrategyProfile out = greedy_ordered_outcome(inst.graph, p, s);
  EXPECT_DOUBLE_EQ(social_cost(inst.graph, out), 9.0);
  EXPECT_TRUE(is_nash(inst.graph, p, out).is_nash);
  std::vector<Vertex> terms = players;
  terms.push_back(inst.graph.root());
  EXPECT_DOUBLE_EQ(exact_steiner(inst.graph, terms).total_cost, 8.0);
  EXPECT_TRUE(close(greedy_ratio(inst), 9.0 / 8.0));
}

TEST(Qtilde, DepthTwoOnPath) {
  QtildeParams params;
  params.r = 2;
  const QtildeInstance inst = build_qtilde(params);
  EXPECT_EQ(inst.k, 5u);
  EXPECT_TRUE(close(greedy_ratio(inst), 18.0 / 14.0));
  EXPECT_TRUE(close(qtilde_closed_form_ratio(2, 10.0), 18.0 / 14.0));
}

TEST(Qtilde, ZigzagOrderIsClassByClass) {
  QtildeParams params;
  params.r = 3;
  const QtildeInstance inst = build_qtilde(params);
  std::vector<std::size_t> positions;
  for (Vertex v : inst.zigzag_order) {
    positions.push_back(static_cast<std::size_t>(std::find(inst.path.begin(), inst.path.end(), v) - inst.path.begin()));
  }
  EXPECT_EQ(positions, (std::vector<std::size_t>{0, 8, 4, 2, 6, 1, 3, 5, 7}));
  // Ranks along the path therefore form a zig-zag labeling.
  std::vector<std::int64_t> labels(inst.path.size());
  for (std::size_t rank = 0; rank < positions.size(); ++rank) labels[positions[rank]] = static_cast<std::int64_t>(rank);
  EXPECT_TRUE(is_zigzag(labels, 3));
}

TEST(Qtilde, ClosedFormMatchesGreedyAndGrows) {
  double previous = 1.0;
  for (std::size_t r = 1; r <= 4; ++r) {
    QtildeParams params;
    params.r = r;
    const QtildeInstance inst = build_qtilde(params);
    // Direct evaluation of the greedy sum: root, the far endpoint, then each
    // class pays the gap to its nearer parent.
    double ne = inst.root_cost + std::pow(2.0, static_cast<double>(r));
    for (std::size_t j = 1; j <= r; ++j) ne += std::pow(2.0, static_cast<double>(j - 1)) * std::pow(2.0, static_cast<double>(r - j));
    const double formula = ne / (inst.root_cost + std::pow(2.0, static_cast<double>(r)));
    EXPECT_TRUE(close(qtilde_closed_form_ratio(r, inst.root_cost), formula));
    EXPECT_TRUE(close(greedy_ratio(inst), formula)) << "r=" << r;
    EXPECT_GT(formula, previous);
    previous = formula;
  }
}

TEST(Qtilde, HypercubeHost) {
  for (std::size_t r = 1; r <= 2; ++r) {
    QtildeParams params;
    params.r = r;
    params.host = QtildeHost::kHypercube;
    const QtildeInstance inst = build_qtilde(params);
    EXPECT_EQ(inst.n, std::size_t{1} << r);
    EXPECT_EQ(inst.graph.num_vertices(), (std::size_t{1} << inst.n) + 1);
    // The path is a geodesic, so the path-host ratio carries over.
    for (std::size_t i = 0; i < inst.path.size(); ++i) {
      EXPECT_EQ(inst.graph.id(inst.path[i]), std::string(i, '1') + std::string(inst.n - i, '0'));
    }
    EXPECT_TRUE(close(greedy_ratio(inst), qtilde_closed_form_ratio(r, inst.root_cost)));
  }
  QtildeParams bad;
  bad.host = QtildeHost::kHypercube;
  bad.r = 2;
  bad.n = 3;
  EXPECT_THROW(build_qtilde(bad), Error);
}

TEST(Qtilde, PowerRootCostPolicy) {
  QtildeParams params;
  params.r = 1;
  params.root_cost = RootCostPolicy::kTwoPowK;
  const QtildeInstance inst = build_qtilde(params);
  EXPECT_DOUBLE_EQ(inst.root_cost, 8.0);
  EXPECT_TRUE(close(greedy_ratio(inst), 11.0 / 10.0));
}

TEST(Qstar, CostsFollowTheFormulas) {
  EXPECT_TRUE(close(qstar_shortcut_cost(0, 9), 1.0));
  EXPECT_TRUE(close(qstar_shortcut_cost(1, 9), 16.0 / 9.0));
  EXPECT_TRUE(close(qstar_shortcut_cost(2, 9), 4.0 * 64.0 / 81.0));
  QstarParams params;
  params.r = 4;
  params.n = 2;
  const QstarInstance inst = build_qstar(params);
  EXPECT_EQ(inst.k, 9u);
  EXPECT_DOUBLE_EQ(inst.direct_root_cost, 18.0);
  EXPECT_DOUBLE_EQ(inst.hub_root_cost, 27.0);
}

TEST(Qstar, SingleCopyHasNoExtraPlayers) {
  QstarParams params;
  params.r = 2;
  params.n = 3;
  const QstarInstance inst = build_qstar(params);
  // Root, one vertex per string, and one hub per string.
  EXPECT_EQ(inst.graph.num_vertices(), 1 + 8 + 8u);
  for (const auto& hosted : inst.hosted) EXPECT_EQ(hosted.size(), 1u);
  // Shortcuts exist for distances 1 and 2 only (2^j <= n with j <= r).
  const Graph& g = inst.graph;
  EXPECT_TRUE(g.edge_between(g.at("000"), g.at("011")).has_value());
  EXPECT_FALSE(g.edge_between(g.at("000"), g.at("111")).has_value());
}

TEST(Qstar, CopiesAreFree) {
  QstarParams params;
  params.n = 2;
  params.copies = 3;
  const QstarInstance inst = build_qstar(params);
  const Graph& g = inst.graph;
  EXPECT_EQ(g.num_vertices(), 1 + 4 * 3 + 4u);
  for (const auto& hosted : inst.hosted) {
    ASSERT_EQ(hosted.size(), 3u);
    for (std::size_t i = 1; i < hosted.size(); ++i) {
      EXPECT_DOUBLE_EQ(g.edge(*g.edge_between(hosted[0], hosted[i])).cost, 0.0);
    }
  }
}

TEST(QstarAdversary, ShapleyLikeCase) {
  QstarParams params;
  params.r = 2;
  params.n = 2;
  params.k = 9;
  params.copies = 9;
  const QstarInstance inst = build_qstar(params);
  const Graph& g = inst.graph;
  const GwspProtocol shapley = GwspProtocol::shapley(g);
  const AdversaryResult res = qstar_adversary(inst, shapley);
  EXPECT_EQ(res.kind, AdversaryCase::kShapleyLike);
  ASSERT_EQ(res.activation.k(), 9u);
  // Co-located: every player is hosted at one hypercube vertex.
  std::size_t host = inst.hosted.size();
  for (std::size_t q = 0; q < inst.hosted.size(); ++q) {
    if (std::find(inst.hosted[q].begin(), inst.hosted[q].end(), res.activation.players()[0]) != inst.hosted[q].end()) host = q;
  }
  ASSERT_LT(host, inst.hosted.size());
  const Vertex x = inst.hosted[host][0], hub = inst.hubs[host];
  StrategyProfile profile;
  for (Vertex v : res.activation.players()) {
    EXPECT_NE(std::find(inst.hosted[host].begin(), inst.hosted[host].end(), v), inst.hosted[host].end());
    profile.paths[v] = v == x ? std::vector<Vertex>{x, hub, g.root()} : std::vector<Vertex>{v, x, hub, g.root()};
  }
  EXPECT_TRUE(is_nash(g, shapley, profile).is_nash);
  std::vector<Vertex> terms = res.activation.players();
  terms.push_back(g.root());
  const double opt = exact_steiner(g, terms).total_cost;
  EXPECT_TRUE(close(social_cost(g, profile) / opt, 9.0 / 6.0));
}

TEST(QstarAdversary, ShapleyLikeRatioGrowsWithK) {
  for (std::size_t k : {9u, 12u}) {
    QstarParams params;
    params.r = 2;
    params.n = 2;
    params.k = k;
    params.copies = k;
    const QstarInstance inst = build_qstar(params);
    const AdversaryResult res = qstar_adversary(inst, GwspProtocol::shapley(inst.graph));
    ASSERT_EQ(res.kind, AdversaryCase::kShapleyLike);
    ASSERT_EQ(res.activation.k(), k);
    // Sharing the hub link costs 2k*k/6 against the direct link's 2k.
    EXPECT_TRUE(close(inst.hub_root_cost / inst.direct_root_cost, static_cast<double>(k) / 6.0));
  }
}

TEST(QstarAdversary, OrderedLikeCase) {
  QstarParams params;
  params.r = 2;
  params.n = 4;
  params.k = 3;
  params.copies = 16;
  const QstarInstance inst = build_qstar(params);
  const Graph& g = inst.graph;
  Rng rng(113);
  std::vector<Vertex> order = g.non_root_vertices();
  rng.shuffle(order);
  const GwspProtocol ordered = GwspProtocol::ordered(g, order);
  AdversaryOptions options;
  options.block_span = 1;
  const AdversaryResult res = qstar_adversary(inst, ordered, options);
  EXPECT_EQ(res.kind, AdversaryCase::kOrderedLike);
  ASSERT_TRUE(res.certificate.has_value());
  EXPECT_TRUE(verify_certificate(*res.certificate).ok());
  ASSERT_EQ(res.representatives.size(), 16u);
  for (std::size_t q = 0; q < 16; ++q) {
    EXPECT_NE(std::find(inst.hosted[q].begin(), inst.hosted[q].end(), res.representatives[q]), inst.hosted[q].end());
  }
  // Labels are the protocol ranks of the representatives, renumbered 1..16.
  std::vector<Vertex> by_rank = res.representatives;
  std::sort(by_rank.begin(), by_rank.end(), [&](Vertex a, Vertex b) { return ordered.part_of(a) < ordered.part_of(b); });
  for (std::size_t i = 0; i < res.certificate->path.size(); ++i) {
    const Vertex rep = res.representatives[res.certificate->path[i]];
    const auto rank = std::find(by_rank.begin(), by_rank.end(), rep) - by_rank.begin() + 1;
    EXPECT_EQ(res.certificate->labels[i], static_cast<std::uint32_t>(rank));
  }
  // The chosen players are the path vertices outside the deepest class.
  EXPECT_EQ(res.activation.k(), 3u);
  std::set<Vertex> expected;
  const PathClasses pc = classes_of_path(2);
  for (std::size_t i = 0; i < res.certificate->path.size(); ++i) {
    if (pc.class_of[i] < 2) expected.insert(res.representatives[res.certificate->path[i]]);
  }
  const std::vector<Vertex> got = res.activation.players();
  EXPECT_EQ(std::set<Vertex>(got.begin(), got.end()), expected);
}

TEST(QstarAdversary, RejectsForeignProtocol) {
  QstarParams params;
  params.n = 2;
  const QstarInstance inst = build_qstar(params);
  const Graph other = testing::three_path();
  EXPECT_THROW(qstar_adversary(inst, GwspProtocol::shapley(other)), Error);
}

}  // namespace
}  // namespace costshare
