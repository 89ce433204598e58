#include "costshare/poa.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <unordered_map>

#include "costshare/error.hpp"
#include "costshare/random.hpp"

namespace costshare {

double poa_ratio(double ne_cost, double opt_cost) {
  if (opt_cost == 0.0) return ne_cost == 0.0 ? 1.0 : kInf;
  return ne_cost / opt_cost;
}

namespace {

std::vector<Vertex> members(const std::vector<Vertex>& vertices, std::uint64_t mask) {
  std::vector<Vertex> out;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (mask >> i & 1) out.push_back(vertices[i]);
  }
  return out;
}

struct Evaluation {
  double ne = 0.0;
  double opt = 0.0;
  bool exact_ne = true;
  bool exact_opt = true;
};

Evaluation evaluate(const Graph& graph, const GwspProtocol& protocol, const ActivationSet& activation,
                    const PoaOptions& options) {
  Evaluation out;
  if (activation.empty()) return out;
  const WorstNe worst = worst_ne_cost(graph, protocol, activation, options.worst_ne);
  out.ne = worst.cost;
  out.exact_ne = worst.exact;
  std::vector<Vertex> terminals = activation.players();
  terminals.push_back(graph.root());
  if (terminals.size() <= options.terminal_cap) {
    out.opt = exact_steiner(graph, terminals, options.terminal_cap).total_cost;
  } else {
    out.opt = approx_steiner(graph, terminals).total_cost;
    out.exact_opt = false;
  }
  return out;
}

void require_subset_cap(const Graph& graph, const PoaOptions& options) {
  if (graph.num_vertices() - 1 > options.subset_cap) {
    fail(ErrorKind::kInstanceTooLarge, std::to_string(graph.num_vertices() - 1) +
                                           " non-root vertices exceed the subset cap of " +
                                           std::to_string(options.subset_cap));
  }
}

}  // namespace

PoaReport adversarial_poa(const Graph& graph, const GwspProtocol& protocol, const PoaOptions& options) {
  require_subset_cap(graph, options);
  const std::vector<Vertex> vertices = graph.non_root_vertices();
  const SubsetSteinerTable table(graph, vertices, graph.root(), options.subset_cap);
  PoaReport report;
  bool first = true;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << vertices.size()); ++mask) {
    const ActivationSet activation(graph, members(vertices, mask));
    const WorstNe worst = worst_ne_cost(graph, protocol, activation, options.worst_ne);
    const double opt = table.cost(mask);
    if (std::isinf(opt)) fail(ErrorKind::kUnreachable, "activation set cannot be connected to the root");
    report.exact_ne = report.exact_ne && worst.exact;
    const double ratio = poa_ratio(worst.cost, opt);
    if (first || definitely_less(report.ratio, ratio)) {
      first = false;
      report.ratio = ratio;
      report.ne_cost = worst.cost;
      report.opt_cost = opt;
      report.witness = activation.players();
    }
  }
  return report;
}

PoaReport adversarial_poa(const Graph& graph, const GwspProtocol& protocol, const std::vector<ActivationSet>& family,
                          const PoaOptions& options) {
  PoaReport report;
  bool first = true;
  for (const ActivationSet& activation : family) {
    if (activation.empty()) continue;
    const Evaluation eval = evaluate(graph, protocol, activation, options);
    report.exact_ne = report.exact_ne && eval.exact_ne;
    report.exact_opt = report.exact_opt && eval.exact_opt;
    const double ratio = poa_ratio(eval.ne, eval.opt);
    if (first || definitely_less(report.ratio, ratio)) {
      first = false;
      report.ratio = ratio;
      report.ne_cost = eval.ne;
      report.opt_cost = eval.opt;
      report.witness = activation.players();
    }
  }
  return report;
}

ActivationModel::ActivationModel(const Graph& graph, std::vector<double> p) : probs(std::move(p)) {
  require(probs.size() == graph.num_vertices(), "activation probabilities must cover every vertex");
  for (Vertex v = 0; v < probs.size(); ++v) {
    if (v == graph.root()) {
      probs[v] = 0.0;
      continue;
    }
    require(probs[v] >= 0.0 && probs[v] <= 1.0, "probability of '" + graph.id(v) + "' is outside [0,1]");
  }
}

double ActivationModel::probability(const std::vector<Vertex>& vertices, std::uint64_t mask) const {
  double p = 1.0;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    p *= (mask >> i & 1) ? probs[vertices[i]] : 1.0 - probs[vertices[i]];
  }
  return p;
}

PoaReport stochastic_poa(const Graph& graph, const GwspProtocol& protocol, const ActivationModel& model,
                         const PoaOptions& options) {
  require_subset_cap(graph, options);
  require(model.probs.size() == graph.num_vertices(), "activation model does not match the graph");
  const std::vector<Vertex> vertices = graph.non_root_vertices();
  const SubsetSteinerTable table(graph, vertices, graph.root(), options.subset_cap);
  PoaReport report;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << vertices.size()); ++mask) {
    const double p = model.probability(vertices, mask);
    if (p == 0.0) continue;
    const ActivationSet activation(graph, members(vertices, mask));
    const WorstNe worst = worst_ne_cost(graph, protocol, activation, options.worst_ne);
    report.exact_ne = report.exact_ne && worst.exact;
    report.ne_cost += p * worst.cost;
    report.opt_cost += p * table.cost(mask);
  }
  report.ratio = poa_ratio(report.ne_cost, report.opt_cost);
  return report;
}

PoaReport stochastic_poa(const Graph& graph, const GwspProtocol& protocol, const ActivationModel& model,
                         const MonteCarlo& mc, const PoaOptions& options) {
  require(mc.samples > 0, "Monte-Carlo mode needs at least one sample");
  require(model.probs.size() == graph.num_vertices(), "activation model does not match the graph");
  const std::vector<Vertex> vertices = graph.non_root_vertices();
  Rng rng(mc.seed);
  std::unordered_map<std::string, Evaluation> cache;
  PoaReport report;
  report.samples = mc.samples;
  double sum_ne = 0.0, sum_opt = 0.0, sum_ne2 = 0.0, sum_opt2 = 0.0, sum_cross = 0.0;
  for (std::size_t s = 0; s < mc.samples; ++s) {
    std::vector<Vertex> drawn;
    std::string key(vertices.size(), '0');
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      if (rng.bernoulli(model.probs[vertices[i]])) {
        drawn.push_back(vertices[i]);
        key[i] = '1';
      }
    }
    auto it = cache.find(key);
    if (it == cache.end()) {
      it = cache.emplace(key, evaluate(graph, protocol, ActivationSet(graph, drawn), options)).first;
    }
    const Evaluation& eval = it->second;
    report.exact_ne = report.exact_ne && eval.exact_ne;
    report.exact_opt = report.exact_opt && eval.exact_opt;
    sum_ne += eval.ne;
    sum_opt += eval.opt;
    sum_ne2 += eval.ne * eval.ne;
    sum_opt2 += eval.opt * eval.opt;
    sum_cross += eval.ne * eval.opt;
  }
  const double n = static_cast<double>(mc.samples);
  const double mean_ne = sum_ne / n;
  const double mean_opt = sum_opt / n;
  report.ne_cost = mean_ne;
  report.opt_cost = mean_opt;
  report.ratio = poa_ratio(mean_ne, mean_opt);
  if (mc.samples > 1) {
    const double var_ne = std::max(0.0, (sum_ne2 - n * mean_ne * mean_ne) / (n - 1));
    const double var_opt = std::max(0.0, (sum_opt2 - n * mean_opt * mean_opt) / (n - 1));
    const double cov = (sum_cross - n * mean_ne * mean_opt) / (n - 1);
    report.ne_stderr = std::sqrt(var_ne / n);
    report.opt_stderr = std::sqrt(var_opt / n);
    if (mean_ne > 0.0 && mean_opt > 0.0) {
      const double rel = var_ne / (n * mean_ne * mean_ne) + var_opt / (n * mean_opt * mean_opt) -
                         2.0 * cov / (n * mean_ne * mean_opt);
      report.ratio_stderr = report.ratio * std::sqrt(std::max(0.0, rel));
    }
  }
  return report;
}

std::string format_number(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[64];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, end);
}

std::string PoaTable::to_csv() const {
  std::ostringstream out;
  out << kPoaCsvHeader << '\n';
  for (const PoaRow& row : rows) {
    out << row.instance << ',' << row.k << ',' << row.protocol << ',' << format_number(row.ne_cost) << ','
        << format_number(row.opt_cost) << ',' << format_number(row.ratio) << ',' << (row.exact_opt ? "true" : "false")
        << ',' << (row.exact_ne ? "true" : "false") << ',' << row.seed << '\n';
  }
  return out.str();
}

PoaTable class_poa_experiment(const std::function<GeneratedInstance(std::uint64_t trial, std::uint64_t seed)>& generator,
                              const std::vector<ProtocolFactory>& factories, std::size_t trials, std::uint64_t seed,
                              const PoaOptions& options) {
  require(!factories.empty(), "at least one protocol factory is required");
  PoaTable table;
  for (std::uint64_t trial = 0; trial < trials; ++trial) {
    const GeneratedInstance instance = generator(trial, seed);
    double best = kInf;
    for (const ProtocolFactory& factory : factories) {
      const PoaReport report = adversarial_poa(instance.graph, factory.make(instance.graph), options);
      table.rows.push_back({instance.name, report.witness.size(), factory.name, report.ne_cost, report.opt_cost,
                            report.ratio, report.exact_opt, report.exact_ne, seed});
      best = std::min(best, report.ratio);
    }
    table.best_ratio_per_instance.push_back(best);
    table.class_ratio = std::max(table.class_ratio, best);
  }
  return table;
}

}  // namespace costshare
