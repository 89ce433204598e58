#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "costshare/random.hpp"

namespace costshare {

using Bits = std::uint64_t;

// Q_n on n-bit strings. Coordinates are 1-based with x_1 the leftmost
// (most significant) character of the string form.
class Hypercube {
 public:
  explicit Hypercube(std::size_t n);

  std::size_t dimension() const { return n_; }
  Bits size() const { return Bits{1} << n_; }

  static unsigned distance(Bits a, Bits b) { return static_cast<unsigned>(std::popcount(a ^ b)); }
  static unsigned level(Bits x) { return static_cast<unsigned>(std::popcount(x)); }

  Bits coordinate_mask(std::size_t c) const { return Bits{1} << (n_ - c); }
  bool coordinate(Bits x, std::size_t c) const { return (x & coordinate_mask(c)) != 0; }
  // Mask of the coordinates in [first, last].
  Bits range_mask(std::size_t first, std::size_t last) const;

  // d(x, y, R): Hamming distance inside R when x and y agree outside R,
  // infinite (nullopt) otherwise.
  std::optional<unsigned> restricted_distance(Bits x, Bits y, Bits r_mask) const;

  // Number of ones among x_1..x_{c-1}, for the edge that flips coordinate c.
  unsigned prefix_sum(Bits x, std::size_t c) const;

  std::string id(Bits x) const;
  Bits parse(std::string_view bits) const;
  std::vector<Bits> neighbors(Bits x) const;

 private:
  std::size_t n_;
};

// Bijection from Q_n vertices onto ranks 1..2^n.
class Labeling {
 public:
  explicit Labeling(std::vector<std::uint32_t> labels);
  static Labeling random(std::size_t n, Rng& rng);

  std::uint32_t operator()(Bits x) const { return labels_[x]; }
  const std::vector<std::uint32_t>& labels() const { return labels_; }

 private:
  std::vector<std::uint32_t> labels_;
};

// Classes D_0..D_r of a path v_0..v_{2^r} and the parents of every interior
// vertex (the two vertices at path distance 2^{r-j} for v in D_j).
struct PathClasses {
  std::size_t r = 0;
  std::vector<std::vector<std::size_t>> classes;
  std::vector<std::size_t> class_of;
  std::vector<std::size_t> left_parent;   // meaningful for interior indices
  std::vector<std::size_t> right_parent;
};

PathClasses classes_of_path(std::size_t r);

// True iff the labels are distinct and every interior label exceeds both of
// its parents' labels.
bool is_zigzag(std::span<const std::int64_t> labels, std::size_t r);

struct ZigZagCertificate {
  std::size_t n = 0;
  std::size_t r = 0;
  std::vector<Bits> path;
  std::vector<std::uint32_t> labels;
};

struct ZigZagCheck {
  bool zigzag = false;
  bool distance_preserving = false;
  bool length_ok = false;
  bool ok() const { return zigzag && distance_preserving && length_ok; }
};

ZigZagCheck verify_certificate(const ZigZagCertificate& certificate);

struct ZigZagSearch {
  std::optional<ZigZagCertificate> certificate;
  std::size_t expansions = 0;
  bool budget_exhausted = false;
};

inline constexpr std::size_t kDefaultZigZagBudget = 10'000'000;

// Backtracking over geodesics of length 2^r (a start vertex plus 2^r distinct
// coordinates to flip), pruned by the parent constraints as vertices are
// placed. Budget counts placed vertices.
ZigZagSearch search_zigzag(const Hypercube& cube, const Labeling& labeling, std::size_t r,
                           std::size_t budget = kDefaultZigZagBudget);

// As search_zigzag, but throws kNotFoundWithinBudget on failure.
ZigZagCertificate find_zigzag(const Hypercube& cube, const Labeling& labeling, std::size_t r,
                              std::size_t budget = kDefaultZigZagBudget);

enum class Color : std::uint8_t { kBlue, kRed };

class EdgeColoring {
 public:
  EdgeColoring(std::size_t n, Color fill);
  static EdgeColoring random(std::size_t n, Rng& rng);

  std::size_t dimension() const { return n_; }
  Color color(Bits a, Bits b) const { return colors_[slot(a, b)]; }
  void set(Bits a, Bits b, Color c) { colors_[slot(a, b)] = c; }

 private:
  std::size_t slot(Bits a, Bits b) const;

  std::size_t n_;
  std::vector<Color> colors_;
};

// Edge (z, z') with z on an odd level and z' on an even level is blue iff
// label(z) < label(z').
EdgeColoring order_coloring(const Hypercube& cube, const Labeling& labeling);

enum class GmClass { kV1, kV2, kV3, kNone };

// Membership of a 4m-bit string in V_1(m), V_2(m), V_3(m).
GmClass gm_membership(std::size_t m, Bits x);
std::vector<Bits> gm_vertices(std::size_t m, GmClass which);

struct CommonNeighborReport {
  std::size_t first_pairs = 0;   // V_1 pairs with d(x, x', [2m]) = 2
  std::size_t second_pairs = 0;  // V_2 pairs with d(x, x', [2m+1, 4m]) = 2
  std::vector<std::string> violations;
  bool ok() const { return violations.empty() && first_pairs > 0 && second_pairs > 0; }
};

// Exhaustive check that each qualifying pair has exactly one common neighbor
// in G_m, lying in V_3 (first statement) or V_1 (second statement).
CommonNeighborReport verify_common_neighbor(std::size_t m);

// Copy of G_m in Q_n: the 6m-bit strings obtained by inserting blocks of ones
// (sized from `prefix`) into G_m strings, written onto coordinates `coords`.
struct GmEmbedding {
  std::size_t m = 0;
  std::size_t n = 0;
  std::vector<std::size_t> coords;  // 6m increasing 1-based coordinates
  std::vector<std::size_t> prefix;  // 2m increasing values in [0, 4m-1]
  Color color = Color::kBlue;

  Bits embed(Bits x) const;
};

struct GmSearch {
  std::optional<GmEmbedding> embedding;
  std::size_t candidates = 0;
  bool budget_exhausted = false;
};

// Best-effort search over coordinate subsets and prefix choices for a
// monochromatic copy of G_m. Budget counts candidate embeddings.
GmSearch find_monochromatic_gm(const Hypercube& cube, const EdgeColoring& coloring, std::size_t m,
                               std::size_t budget = 1'000'000);

// Edges of G_m as (V_1 vertex, V_2 or V_3 vertex) pairs.
std::vector<std::pair<Bits, Bits>> gm_edges(std::size_t m);

}  // namespace costshare
