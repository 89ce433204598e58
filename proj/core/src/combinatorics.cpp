#include "costshare/combinatorics.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>

#include "costshare/error.hpp"

namespace costshare {

namespace {

// Kuhn's augmenting-path matching from left slots to right colors.
class BipartiteMatcher {
 public:
  BipartiteMatcher(std::vector<std::vector<std::size_t>> adjacency, std::size_t right_size)
      : adjacency_(std::move(adjacency)), match_right_(right_size, kFree), match_left_(adjacency_.size(), kFree) {}

  std::size_t solve() {
    std::size_t matched = 0;
    for (std::size_t left = 0; left < adjacency_.size(); ++left) {
      visited_.assign(match_right_.size(), 0);
      if (augment(left)) ++matched;
    }
    return matched;
  }

  std::size_t partner(std::size_t left) const { return match_left_[left]; }

  static constexpr std::size_t kFree = static_cast<std::size_t>(-1);

 private:
  bool augment(std::size_t left) {
    for (std::size_t right : adjacency_[left]) {
      if (visited_[right]) continue;
      visited_[right] = 1;
      if (match_right_[right] == kFree || augment(match_right_[right])) {
        match_right_[right] = left;
        match_left_[left] = right;
        return true;
      }
    }
    return false;
  }

  std::vector<std::vector<std::size_t>> adjacency_;
  std::vector<std::size_t> match_right_;
  std::vector<std::size_t> match_left_;
  std::vector<char> visited_;
};

}  // namespace

std::vector<std::vector<ColoredElement>> rainbow_transversal(const std::vector<std::vector<ColoredElement>>& parts,
                                                              std::size_t quota, std::size_t r) {
  if (quota == 0 || r == 0) fail(ErrorKind::kNoRainbow, "quota and multiplicity bound must be positive");
  std::map<std::uint64_t, std::size_t> multiplicity;
  std::set<std::int64_t> elements;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i].size() != quota * r * r) {
      fail(ErrorKind::kNoRainbow, "part " + std::to_string(i) + " has " + std::to_string(parts[i].size()) +
                                      " elements, expected " + std::to_string(quota * r * r));
    }
    for (const ColoredElement& x : parts[i]) {
      if (!elements.insert(x.element).second) fail(ErrorKind::kNoRainbow, "parts are not disjoint");
      if (++multiplicity[x.color] > r) {
        fail(ErrorKind::kNoRainbow, "color " + std::to_string(x.color) + " occurs more than " + std::to_string(r) +
                                        " times");
      }
    }
  }
  std::map<std::uint64_t, std::size_t> color_index;
  for (const auto& [color, count] : multiplicity) color_index.emplace(color, color_index.size());

  std::vector<std::vector<std::size_t>> adjacency;
  for (const auto& part : parts) {
    std::vector<std::size_t> colors;
    for (const ColoredElement& x : part) colors.push_back(color_index.at(x.color));
    std::sort(colors.begin(), colors.end());
    colors.erase(std::unique(colors.begin(), colors.end()), colors.end());
    for (std::size_t slot = 0; slot < quota; ++slot) adjacency.push_back(colors);
  }
  BipartiteMatcher matcher(std::move(adjacency), color_index.size());
  if (matcher.solve() != parts.size() * quota) fail(ErrorKind::kNoRainbow, "no perfect matching of slots to colors");

  std::vector<std::uint64_t> colors(color_index.size());
  for (const auto& [color, index] : color_index) colors[index] = color;
  std::vector<std::vector<ColoredElement>> chosen(parts.size());
  for (std::size_t i = 0; i < parts.size(); ++i) {
    for (std::size_t slot = 0; slot < quota; ++slot) {
      const std::uint64_t color = colors[matcher.partner(i * quota + slot)];
      const auto it = std::find_if(parts[i].begin(), parts[i].end(),
                                   [&](const ColoredElement& x) { return x.color == color; });
      chosen[i].push_back(*it);
    }
  }
  return chosen;
}

bool is_rainbow_transversal(const std::vector<std::vector<ColoredElement>>& parts,
                            const std::vector<std::vector<ColoredElement>>& chosen, std::size_t quota) {
  if (chosen.size() != parts.size()) return false;
  std::set<std::uint64_t> colors;
  std::set<std::int64_t> elements;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (chosen[i].size() != quota) return false;
    for (const ColoredElement& x : chosen[i]) {
      if (std::find(parts[i].begin(), parts[i].end(), x) == parts[i].end()) return false;
      if (!colors.insert(x.color).second || !elements.insert(x.element).second) return false;
    }
  }
  return true;
}

std::vector<std::int64_t> nonconsecutive_transversal(const std::vector<std::vector<std::int64_t>>& parts) {
  const std::size_t m = parts.size();
  require(m >= 1, "at least one part is required");
  std::vector<std::vector<std::int64_t>> sorted = parts;
  std::vector<char> seen(m * m + 1, 0);
  for (auto& part : sorted) {
    require(part.size() == m, "every part must have exactly m elements");
    for (std::int64_t x : part) {
      require(x >= 1 && static_cast<std::size_t>(x) <= m * m && !seen[static_cast<std::size_t>(x)],
              "parts must partition 1..m^2");
      seen[static_cast<std::size_t>(x)] = 1;
    }
    std::sort(part.begin(), part.end());
  }
  // Step k takes the k-th smallest element of the remaining part that
  // minimizes it. Each pick is at least 2 above the previous one: every
  // remaining part had its (k-1)-th element strictly above the previous pick.
  std::vector<std::int64_t> chosen(m, 0);
  std::vector<char> done(m, 0);
  for (std::size_t k = 0; k < m; ++k) {
    std::size_t best = m;
    for (std::size_t i = 0; i < m; ++i) {
      if (!done[i] && (best == m || sorted[i][k] < sorted[best][k])) best = i;
    }
    done[best] = 1;
    chosen[best] = sorted[best][k];
  }
  return chosen;
}

bool is_nonconsecutive_transversal(const std::vector<std::vector<std::int64_t>>& parts,
                                   const std::vector<std::int64_t>& chosen) {
  if (chosen.size() != parts.size()) return false;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (std::find(parts[i].begin(), parts[i].end(), chosen[i]) == parts[i].end()) return false;
    for (std::size_t j = i + 1; j < parts.size(); ++j) {
      const std::int64_t gap = chosen[i] > chosen[j] ? chosen[i] - chosen[j] : chosen[j] - chosen[i];
      if (gap < 2) return false;
    }
  }
  return true;
}

}  // namespace costshare
