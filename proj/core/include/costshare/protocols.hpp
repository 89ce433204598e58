#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "costshare/graph.hpp"

namespace costshare {

// Ordered partition U_1..U_h of the non-root vertices with positive weights.
// On an edge, the users in the earliest part that contains any user split the
// cost in proportion to their weights; everybody else pays nothing.
class GwspProtocol {
 public:
  static constexpr std::size_t kNoPart = static_cast<std::size_t>(-1);

  GwspProtocol() = default;
  // `weights` is indexed by vertex; the root's entry is ignored.
  GwspProtocol(const Graph& graph, std::vector<std::vector<Vertex>> parts, std::vector<double> weights);

  // Singleton parts, earliest first.
  static GwspProtocol ordered(const Graph& graph, std::vector<Vertex> order);
  // One part holding every non-root vertex, equal weights.
  static GwspProtocol shapley(const Graph& graph);

  const std::vector<std::vector<Vertex>>& parts() const { return parts_; }
  std::size_t part_of(Vertex v) const { return v < part_of_.size() ? part_of_[v] : kNoPart; }
  double weight(Vertex v) const { return weights_[v]; }
  std::size_t num_vertices() const { return part_of_.size(); }

  bool is_ordered() const;
  bool is_shapley() const;

  // Parts in order, members of a part by vertex id. For ordered protocols
  // this is the permutation itself.
  std::vector<Vertex> flattened_order(const Graph& graph) const;

  // Throws kNotAUser when i is not among `users`, kUnknownPlayer when no user
  // belongs to any part.
  double share(double edge_cost, std::span<const Vertex> users, Vertex i) const;

 private:
  std::vector<std::vector<Vertex>> parts_;
  std::vector<std::size_t> part_of_;
  std::vector<double> weights_;
};

bool validate_budget_balance(const GwspProtocol& protocol, double edge_cost, std::span<const Vertex> users);

// Set function over a ground set of at most 20 elements; subsets are bitmasks.
class EdgePotential {
 public:
  using Evaluator = std::function<double(std::uint64_t)>;

  EdgePotential(std::size_t ground_size, Evaluator evaluator);

  // The unique edge potential with the given singleton values, built by the
  // recursion f(S) = (1 + sum_i f(S-i)/f(i)) / sum_i 1/f(i).
  static EdgePotential from_singletons(std::vector<double> singleton_values);

  std::size_t ground_size() const { return ground_size_; }
  double operator()(std::uint64_t subset) const { return evaluator_(subset); }
  double singleton(std::size_t i) const { return evaluator_(std::uint64_t{1} << i); }

  struct Validation {
    bool increasing = true;
    bool normalized = true;
    double worst_residual = 0.0;
    std::uint64_t worst_subset = 0;
    bool ok() const { return increasing && normalized; }
  };
  // Exhaustive over all subsets; requires ground_size <= 20.
  Validation validate(double tol = 1e-9) const;

 private:
  std::size_t ground_size_;
  Evaluator evaluator_;
};

// c * (f(S) - f(S - i)) / f(i). Throws kNotAUser when i is not in `users`.
double potential_share(const EdgePotential& f, double edge_cost, std::uint64_t users, std::size_t i);

}  // namespace costshare
