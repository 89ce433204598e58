#include "costshare/protocols.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <memory>

#include "costshare/error.hpp"

namespace costshare {

GwspProtocol::GwspProtocol(const Graph& graph, std::vector<std::vector<Vertex>> parts, std::vector<double> weights)
    : parts_(std::move(parts)), part_of_(graph.num_vertices(), kNoPart), weights_(std::move(weights)) {
  require(weights_.size() == graph.num_vertices(), "weights must cover every vertex");
  std::size_t covered = 0;
  for (std::size_t p = 0; p < parts_.size(); ++p) {
    require(!parts_[p].empty(), "empty part in protocol");
    for (Vertex v : parts_[p]) {
      require(v < graph.num_vertices(), "part member out of range");
      require(v != graph.root(), "the root cannot belong to a part");
      require(part_of_[v] == kNoPart, "vertex '" + graph.id(v) + "' appears in two parts");
      require(weights_[v] > 0.0 && std::isfinite(weights_[v]), "weight of '" + graph.id(v) + "' must be positive and finite");
      part_of_[v] = p;
      ++covered;
    }
  }
  require(covered + 1 == graph.num_vertices(), "parts must cover every non-root vertex");
}

GwspProtocol GwspProtocol::ordered(const Graph& graph, std::vector<Vertex> order) {
  std::vector<std::vector<Vertex>> parts;
  parts.reserve(order.size());
  for (Vertex v : order) parts.push_back({v});
  return GwspProtocol(graph, std::move(parts), std::vector<double>(graph.num_vertices(), 1.0));
}

GwspProtocol GwspProtocol::shapley(const Graph& graph) {
  return GwspProtocol(graph, {graph.non_root_vertices()}, std::vector<double>(graph.num_vertices(), 1.0));
}

bool GwspProtocol::is_ordered() const {
  return std::all_of(parts_.begin(), parts_.end(), [](const auto& part) { return part.size() == 1; });
}

bool GwspProtocol::is_shapley() const {
  if (parts_.size() != 1) return false;
  const double w = weights_[parts_[0][0]];
  return std::all_of(parts_[0].begin(), parts_[0].end(), [&](Vertex v) { return weights_[v] == w; });
}

std::vector<Vertex> GwspProtocol::flattened_order(const Graph& graph) const {
  std::vector<Vertex> out;
  for (const auto& part : parts_) {
    std::vector<Vertex> members = part;
    std::sort(members.begin(), members.end(), [&](Vertex a, Vertex b) { return graph.lex_less(a, b); });
    out.insert(out.end(), members.begin(), members.end());
  }
  return out;
}

double GwspProtocol::share(double edge_cost, std::span<const Vertex> users, Vertex i) const {
  if (std::find(users.begin(), users.end(), i) == users.end()) fail(ErrorKind::kNotAUser, "player is not a user of the edge");
  std::size_t earliest = kNoPart;
  for (Vertex u : users) earliest = std::min(earliest, part_of(u));
  if (earliest == kNoPart) fail(ErrorKind::kUnknownPlayer, "no user of the edge belongs to a part");
  if (part_of(i) != earliest) return 0.0;
  double total = 0.0;
  for (Vertex u : users) {
    if (part_of(u) == earliest) total += weights_[u];
  }
  return weights_[i] / total * edge_cost;
}

bool validate_budget_balance(const GwspProtocol& protocol, double edge_cost, std::span<const Vertex> users) {
  if (users.empty()) return true;
  double sum = 0.0;
  for (Vertex u : users) sum += protocol.share(edge_cost, users, u);
  return approx_equal(sum, edge_cost);
}

EdgePotential::EdgePotential(std::size_t ground_size, Evaluator evaluator)
    : ground_size_(ground_size), evaluator_(std::move(evaluator)) {
  require(ground_size_ <= 20, "edge potential ground set is limited to 20 elements");
}

EdgePotential EdgePotential::from_singletons(std::vector<double> singleton_values) {
  const std::size_t g = singleton_values.size();
  require(g <= 20, "edge potential ground set is limited to 20 elements");
  for (double f : singleton_values) require(f > 0.0 && std::isfinite(f), "singleton potentials must be positive");
  auto table = std::make_shared<std::vector<double>>(std::size_t{1} << g, 0.0);
  for (std::uint64_t s = 1; s < table->size(); ++s) {
    double numerator = 1.0;
    double denominator = 0.0;
    for (std::uint64_t rest = s; rest != 0; rest &= rest - 1) {
      const auto i = static_cast<std::size_t>(std::countr_zero(rest));
      numerator += (*table)[s & ~(std::uint64_t{1} << i)] / singleton_values[i];
      denominator += 1.0 / singleton_values[i];
    }
    (*table)[s] = numerator / denominator;
  }
  return EdgePotential(g, [table](std::uint64_t s) { return (*table)[s]; });
}

EdgePotential::Validation EdgePotential::validate(double tol) const {
  Validation report;
  const std::uint64_t full = std::uint64_t{1} << ground_size_;
  for (std::uint64_t s = 1; s < full; ++s) {
    const double fs = evaluator_(s);
    double sum = 0.0;
    for (std::uint64_t rest = s; rest != 0; rest &= rest - 1) {
      const std::uint64_t bit = rest & (~rest + 1);
      const double below = evaluator_(s & ~bit);
      if (!(fs > below)) report.increasing = false;
      sum += (fs - below) / evaluator_(bit);
    }
    const double residual = std::fabs(sum - 1.0);
    if (residual > report.worst_residual) {
      report.worst_residual = residual;
      report.worst_subset = s;
    }
    if (residual > tol) report.normalized = false;
  }
  return report;
}

double potential_share(const EdgePotential& f, double edge_cost, std::uint64_t users, std::size_t i) {
  const std::uint64_t bit = std::uint64_t{1} << i;
  if (!(users & bit)) fail(ErrorKind::kNotAUser, "player is not a user of the edge");
  return edge_cost * (f(users) - f(users & ~bit)) / f(bit);
}

}  // namespace costshare
