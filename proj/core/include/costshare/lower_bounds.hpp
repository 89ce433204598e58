#pragma once

#include <optional>
#include <vector>

#include "costshare/graph.hpp"
#include "costshare/hypercube.hpp"
#include "costshare/protocols.hpp"

namespace costshare {

enum class RootCostPolicy { kTwoK, kTwoPowK };
enum class QtildeHost { kPath, kHypercube };

struct QtildeParams {
  std::size_t r = 1;
  std::size_t k = 0;  // 0 selects 2^r + 1
  RootCostPolicy root_cost = RootCostPolicy::kTwoK;
  QtildeHost host = QtildeHost::kPath;
  std::size_t n = 0;  // hypercube host dimension; 0 selects 2^r
};

// Complete graph on the host vertices with pair cost equal to host distance,
// plus a direct root edge per vertex. The path host is v0..v_{2^r} with
// distance |i-j|; the hypercube host is Q_n under Hamming distance, with the
// zig-zag path running through the strings 1^i 0^{n-i}.
struct QtildeInstance {
  Graph graph;
  std::size_t r = 0;
  std::size_t k = 0;
  std::size_t n = 0;
  double root_cost = 0.0;
  std::vector<Vertex> path;             // v_0..v_{2^r}
  std::vector<Vertex> zigzag_order;     // D_0, D_1, ..., D_r, by index within a class
};

QtildeInstance build_qtilde(const QtildeParams& params);

// Ordered protocol ranking the zig-zag path first (in zigzag_order) and every
// other vertex after it in lexicographic order.
GwspProtocol qtilde_protocol(const QtildeInstance& instance);

// (root + 2^r + sum_j 2^{j-1} 2^{r-j}) / (root + 2^r).
double qtilde_closed_form_ratio(std::size_t r, double root_cost);

struct QstarParams {
  std::size_t r = 2;
  std::size_t n = 2;
  std::size_t copies = 1;  // M: players hosted per hypercube vertex
  std::size_t k = 0;       // 0 selects 2^{r-1} + 1
};

// Q_n with shortcut edges of cost 2^j ((k-1)/k)^j between vertices at
// distance 2^j (j = 0..r, 2^j <= n), M-1 zero-cost copies per vertex ("x#i"),
// a direct root link of cost 2k per vertex and a second root link of cost
// 2k*k/6 routed through a hub vertex "x^" whose edge to the root is free.
struct QstarInstance {
  Graph graph;
  std::size_t r = 0;
  std::size_t n = 0;
  std::size_t copies = 0;
  std::size_t k = 0;
  std::vector<std::vector<Vertex>> hosted;  // per hypercube vertex: x then its copies
  std::vector<Vertex> hubs;
  double direct_root_cost = 0.0;
  double hub_root_cost = 0.0;
};

QstarInstance build_qstar(const QstarParams& params);

double qstar_shortcut_cost(std::size_t j, std::size_t k);

enum class AdversaryCase { kShapleyLike, kOrderedLike };

struct AdversaryOptions {
  std::size_t block_span = 0;  // nonempty subgroups per color block; 0 selects 4k^5
  std::size_t zigzag_budget = kDefaultZigZagBudget;
};

struct AdversaryResult {
  AdversaryCase kind = AdversaryCase::kShapleyLike;
  ActivationSet activation;
  std::vector<Vertex> representatives;  // ordered-like case: one per hypercube vertex
  std::optional<ZigZagCertificate> certificate;
};

// Activation set against a GWSP on a Q* instance. Throws kNoRainbow when the
// rainbow preconditions fail at the given M and kZigZagNotFound when the
// zig-zag search gives up.
AdversaryResult qstar_adversary(const QstarInstance& instance, const GwspProtocol& protocol,
                                const AdversaryOptions& options = {});

}  // namespace costshare
