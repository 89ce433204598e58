#pragma once

#include <cstdint>
#include <vector>

namespace costshare {

struct ColoredElement {
  std::int64_t element = 0;
  std::uint64_t color = 0;

  friend bool operator==(const ColoredElement&, const ColoredElement&) = default;
};

// Picks `quota` elements from every part so that all picked colors are
// distinct. Requires every part to hold exactly quota * r^2 elements and every
// color to occur at most r times overall; throws kNoRainbow otherwise. The
// choice comes from a maximum matching between (part, slot) pairs and colors.
std::vector<std::vector<ColoredElement>> rainbow_transversal(const std::vector<std::vector<ColoredElement>>& parts,
                                                              std::size_t quota, std::size_t r);

// Independent check of the rainbow and quota conditions.
bool is_rainbow_transversal(const std::vector<std::vector<ColoredElement>>& parts,
                            const std::vector<std::vector<ColoredElement>>& chosen, std::size_t quota);

// One element per part of a partition of {1..m^2} into m parts of size m,
// with every two chosen elements at least 2 apart. Result is aligned with the
// parts. Throws kValidation if the input is not such a partition.
std::vector<std::int64_t> nonconsecutive_transversal(const std::vector<std::vector<std::int64_t>>& parts);

bool is_nonconsecutive_transversal(const std::vector<std::vector<std::int64_t>>& parts,
                                   const std::vector<std::int64_t>& chosen);

}  // namespace costshare
