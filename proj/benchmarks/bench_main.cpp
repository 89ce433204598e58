#include <benchmark/benchmark.h>

#include "costshare/generators.hpp"
#include "costshare/hypercube.hpp"
#include "costshare/outerplanar.hpp"
#include "costshare/poa.hpp"
#include "costshare/steiner.hpp"
#include "costshare/stochastic.hpp"

namespace costshare {
namespace {

// The root plus the first count - 1 non-root vertices.
std::vector<Vertex> leading_terminals(const Graph& g, std::size_t count) {
  std::vector<Vertex> terms{g.root()};
  for (Vertex v : g.non_root_vertices()) {
    if (terms.size() == count) break;
    terms.push_back(v);
  }
  return terms;
}

void BM_ExactSteiner(benchmark::State& state) {
  Rng rng(1);
  const Graph g = random_connected_graph(30, 0.15, rng);
  const auto terms = leading_terminals(g, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(exact_steiner(g, terms).total_cost);
}
BENCHMARK(BM_ExactSteiner)->DenseRange(4, 12, 4);

void BM_ApproxSteiner(benchmark::State& state) {
  Rng rng(2);
  const Graph g = random_connected_graph(static_cast<std::size_t>(state.range(0)), 0.1, rng);
  const PathOracle oracle(g);
  const auto terms = leading_terminals(g, g.num_vertices() / 2);
  for (auto _ : state) benchmark::DoNotOptimize(approx_steiner(oracle, terms).total_cost);
}
BENCHMARK(BM_ApproxSteiner)->RangeMultiplier(2)->Range(16, 128);

void BM_AdversarialPoaCycle(benchmark::State& state) {
  Rng rng(3);
  const Graph g = random_cycle(static_cast<std::size_t>(state.range(0)), rng);
  const GwspProtocol tour = tour_protocol(g);
  for (auto _ : state) benchmark::DoNotOptimize(adversarial_poa(g, tour).ratio);
}
BENCHMARK(BM_AdversarialPoaCycle)->DenseRange(6, 12, 2)->Unit(benchmark::kMillisecond);

void BM_SearchZigzag(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const Hypercube cube(n);
  Rng rng(4);
  std::vector<Labeling> labelings;
  for (int i = 0; i < 16; ++i) labelings.push_back(Labeling::random(n, rng));
  std::size_t next = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(search_zigzag(cube, labelings[next++ % labelings.size()], 2).expansions);
  }
}
BENCHMARK(BM_SearchZigzag)->DenseRange(4, 7);

void BM_Derandomize(benchmark::State& state) {
  Rng rng(5);
  const Graph g = random_connected_graph(static_cast<std::size_t>(state.range(0)), 0.25, rng);
  const ActivationModel model = random_activation_model(g, rng);
  for (auto _ : state) benchmark::DoNotOptimize(derandomize(g, model).trace.back());
}
BENCHMARK(BM_Derandomize)->DenseRange(8, 14, 3)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace costshare

BENCHMARK_MAIN();
