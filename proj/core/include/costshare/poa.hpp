#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "costshare/equilibrium.hpp"
#include "costshare/graph.hpp"
#include "costshare/protocols.hpp"
#include "costshare/steiner.hpp"

namespace costshare {

// ratio = ne_cost / opt_cost, with 0/0 taken as 1.
struct PoaReport {
  double ratio = 1.0;
  double ne_cost = 0.0;
  double opt_cost = 0.0;
  bool exact_opt = true;
  bool exact_ne = true;
  std::vector<Vertex> witness;  // adversarial mode

  // Stochastic mode.
  std::size_t samples = 0;  // 0 for exact enumeration
  double ne_stderr = 0.0;
  double opt_stderr = 0.0;
  double ratio_stderr = 0.0;
};

struct PoaOptions {
  std::size_t subset_cap = 16;
  std::size_t terminal_cap = kDefaultTerminalCap;
  WorstNeOptions worst_ne{};
};

double poa_ratio(double ne_cost, double opt_cost);

// Maximum over every nonempty activation set S of worstNE(S) / OPT(S + t).
PoaReport adversarial_poa(const Graph& graph, const GwspProtocol& protocol, const PoaOptions& options = {});

// Same maximum over an explicit family of activation sets. OPT falls back to
// the 2-approximation above the terminal cap; such reports set exact_opt to
// false, and the true ratio is then at least ratio / 2.
PoaReport adversarial_poa(const Graph& graph, const GwspProtocol& protocol, const std::vector<ActivationSet>& family,
                          const PoaOptions& options = {});

// Independent activation probabilities, indexed by vertex (root ignored).
struct ActivationModel {
  std::vector<double> probs;

  ActivationModel() = default;
  ActivationModel(const Graph& graph, std::vector<double> probs);

  // Probability of activating exactly `mask` over `vertices`.
  double probability(const std::vector<Vertex>& vertices, std::uint64_t mask) const;
};

struct MonteCarlo {
  std::size_t samples = 1000;
  std::uint64_t seed = 1;
};

// E[worst NE] / E[OPT]. Exact mode requires at most subset_cap non-root
// vertices; Monte-Carlo mode uses the same samples for both expectations.
PoaReport stochastic_poa(const Graph& graph, const GwspProtocol& protocol, const ActivationModel& model,
                         const PoaOptions& options = {});
PoaReport stochastic_poa(const Graph& graph, const GwspProtocol& protocol, const ActivationModel& model,
                         const MonteCarlo& mc, const PoaOptions& options = {});

struct GeneratedInstance {
  std::string name;
  Graph graph;
};

struct ProtocolFactory {
  std::string name;
  std::function<GwspProtocol(const Graph&)> make;
};

struct PoaRow {
  std::string instance;
  std::size_t k = 0;
  std::string protocol;
  double ne_cost = 0.0;
  double opt_cost = 0.0;
  double ratio = 1.0;
  bool exact_opt = true;
  bool exact_ne = true;
  std::uint64_t seed = 0;
};

struct PoaTable {
  std::vector<PoaRow> rows;
  // Per instance, the best (smallest) ratio over the factories; the class
  // PoA estimate is the maximum of these.
  std::vector<double> best_ratio_per_instance;
  double class_ratio = 1.0;

  std::string to_csv() const;
};

inline constexpr const char* kPoaCsvHeader = "instance,k,protocol,ne_cost,opt_cost,ratio,exact_opt,exact_ne,seed";

std::string format_number(double value);

PoaTable class_poa_experiment(const std::function<GeneratedInstance(std::uint64_t trial, std::uint64_t seed)>& generator,
                              const std::vector<ProtocolFactory>& factories, std::size_t trials, std::uint64_t seed,
                              const PoaOptions& options = {});

}  // namespace costshare
