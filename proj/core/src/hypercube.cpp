#include "costshare/hypercube.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "costshare/error.hpp"

namespace costshare {

Hypercube::Hypercube(std::size_t n) : n_(n) { require(n <= 30, "hypercube dimension is limited to 30"); }

Bits Hypercube::range_mask(std::size_t first, std::size_t last) const {
  Bits mask = 0;
  for (std::size_t c = first; c <= last && c <= n_; ++c) {
    if (c >= 1) mask |= coordinate_mask(c);
  }
  return mask;
}

std::optional<unsigned> Hypercube::restricted_distance(Bits x, Bits y, Bits r_mask) const {
  const Bits diff = x ^ y;
  if (diff & ~r_mask) return std::nullopt;
  return static_cast<unsigned>(std::popcount(diff));
}

unsigned Hypercube::prefix_sum(Bits x, std::size_t c) const {
  if (c <= 1) return 0;
  return static_cast<unsigned>(std::popcount(x & range_mask(1, c - 1)));
}

std::string Hypercube::id(Bits x) const {
  std::string out(n_, '0');
  for (std::size_t c = 1; c <= n_; ++c) {
    if (coordinate(x, c)) out[c - 1] = '1';
  }
  return out;
}

Bits Hypercube::parse(std::string_view bits) const {
  require(bits.size() == n_, "bit string has the wrong length");
  Bits x = 0;
  for (std::size_t c = 1; c <= n_; ++c) {
    require(bits[c - 1] == '0' || bits[c - 1] == '1', "bit string may only contain 0 and 1");
    if (bits[c - 1] == '1') x |= coordinate_mask(c);
  }
  return x;
}

std::vector<Bits> Hypercube::neighbors(Bits x) const {
  std::vector<Bits> out;
  out.reserve(n_);
  for (std::size_t c = 1; c <= n_; ++c) out.push_back(x ^ coordinate_mask(c));
  return out;
}

Labeling::Labeling(std::vector<std::uint32_t> labels) : labels_(std::move(labels)) {
  require(!labels_.empty() && std::has_single_bit(labels_.size()), "a labeling must cover 2^n vertices");
  std::vector<char> seen(labels_.size() + 1, 0);
  for (std::uint32_t l : labels_) {
    require(l >= 1 && l <= labels_.size() && !seen[l], "labels must be a bijection onto 1..2^n");
    seen[l] = 1;
  }
}

Labeling Labeling::random(std::size_t n, Rng& rng) {
  std::vector<std::uint32_t> labels(std::size_t{1} << n);
  std::iota(labels.begin(), labels.end(), 1u);
  rng.shuffle(labels);
  return Labeling(std::move(labels));
}

PathClasses classes_of_path(std::size_t r) {
  require(r <= 20, "path depth is limited to 20");
  const std::size_t length = std::size_t{1} << r;
  PathClasses pc;
  pc.r = r;
  pc.classes.assign(r + 1, {});
  pc.class_of.assign(length + 1, 0);
  pc.left_parent.assign(length + 1, 0);
  pc.right_parent.assign(length + 1, 0);
  pc.classes[0] = {0, length};
  for (std::size_t i = 1; i < length; ++i) {
    // i is in D_j iff 2^{r-j} is the largest power of two dividing i.
    const auto tz = static_cast<std::size_t>(std::countr_zero(i));
    const std::size_t j = r - tz;
    const std::size_t step = std::size_t{1} << tz;
    pc.classes[j].push_back(i);
    pc.class_of[i] = j;
    pc.left_parent[i] = i - step;
    pc.right_parent[i] = i + step;
  }
  return pc;
}

bool is_zigzag(std::span<const std::int64_t> labels, std::size_t r) {
  if (r > 20 || labels.size() != (std::size_t{1} << r) + 1) return false;
  std::vector<std::int64_t> sorted(labels.begin(), labels.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
  const PathClasses pc = classes_of_path(r);
  for (std::size_t i = 1; i + 1 < labels.size(); ++i) {
    if (labels[i] <= labels[pc.left_parent[i]] || labels[i] <= labels[pc.right_parent[i]]) return false;
  }
  return true;
}

ZigZagCheck verify_certificate(const ZigZagCertificate& cert) {
  ZigZagCheck check;
  const std::size_t length = cert.r <= 20 ? (std::size_t{1} << cert.r) : 0;
  check.length_ok = length > 0 && cert.path.size() == length + 1 && cert.labels.size() == cert.path.size() &&
                    cert.n <= 30 &&
                    std::all_of(cert.path.begin(), cert.path.end(), [&](Bits x) { return x < (Bits{1} << cert.n); });
  if (!check.length_ok) return check;
  std::vector<std::int64_t> labels(cert.labels.begin(), cert.labels.end());
  check.zigzag = is_zigzag(labels, cert.r);
  check.distance_preserving = true;
  for (std::size_t i = 0; i < cert.path.size(); ++i) {
    for (std::size_t j = i + 1; j < cert.path.size(); ++j) {
      if (Hypercube::distance(cert.path[i], cert.path[j]) != j - i) check.distance_preserving = false;
    }
  }
  return check;
}

namespace {

class ZigZagSearcher {
 public:
  ZigZagSearcher(const Hypercube& cube, const Labeling& labeling, std::size_t r, std::size_t budget)
      : cube_(cube), labeling_(labeling), pc_(classes_of_path(r)), length_(std::size_t{1} << r), budget_(budget),
        path_(length_ + 1), right_children_(length_ + 1) {
    for (std::size_t i = 1; i < length_; ++i) right_children_[pc_.right_parent[i]].push_back(i);
  }

  ZigZagSearch run() {
    ZigZagSearch result;
    if (length_ <= cube_.dimension()) {
      for (Bits start = 0; start < cube_.size() && !found_ && !exhausted_; ++start) {
        if (!spend()) break;
        path_[0] = start;
        extend(1, 0);
      }
    }
    result.expansions = expansions_;
    result.budget_exhausted = exhausted_;
    if (found_) {
      ZigZagCertificate cert;
      cert.n = cube_.dimension();
      cert.r = pc_.r;
      cert.path = path_;
      for (Bits x : path_) cert.labels.push_back(labeling_(x));
      result.certificate = std::move(cert);
    }
    return result;
  }

 private:
  bool spend() {
    if (expansions_ >= budget_) {
      exhausted_ = true;
      return false;
    }
    ++expansions_;
    return true;
  }

  bool admissible(std::size_t p, Bits v) const {
    const std::uint32_t label = labeling_(v);
    if (p < length_ && label <= labeling_(path_[pc_.left_parent[p]])) return false;
    for (std::size_t child : right_children_[p]) {
      if (labeling_(path_[child]) <= label) return false;
    }
    return true;
  }

  void extend(std::size_t p, Bits used) {
    if (p > length_) {
      found_ = true;
      return;
    }
    for (std::size_t c = 1; c <= cube_.dimension(); ++c) {
      const Bits flip = cube_.coordinate_mask(c);
      if (used & flip) continue;
      const Bits v = path_[p - 1] ^ flip;
      if (!admissible(p, v)) continue;
      if (!spend()) return;
      path_[p] = v;
      extend(p + 1, used | flip);
      if (found_ || exhausted_) return;
    }
  }

  const Hypercube& cube_;
  const Labeling& labeling_;
  PathClasses pc_;
  std::size_t length_;
  std::size_t budget_;
  std::vector<Bits> path_;
  std::vector<std::vector<std::size_t>> right_children_;
  std::size_t expansions_ = 0;
  bool found_ = false;
  bool exhausted_ = false;
};

}  // namespace

ZigZagSearch search_zigzag(const Hypercube& cube, const Labeling& labeling, std::size_t r, std::size_t budget) {
  require(r >= 1, "zig-zag depth must be at least 1");
  require(labeling.labels().size() == cube.size(), "labeling does not match the hypercube");
  return ZigZagSearcher(cube, labeling, r, budget).run();
}

ZigZagCertificate find_zigzag(const Hypercube& cube, const Labeling& labeling, std::size_t r, std::size_t budget) {
  ZigZagSearch result = search_zigzag(cube, labeling, r, budget);
  if (!result.certificate) {
    fail(ErrorKind::kNotFoundWithinBudget,
         "no zig-zag path of depth " + std::to_string(r) + " found after " + std::to_string(result.expansions) +
             " expansions" + (result.budget_exhausted ? " (budget exhausted)" : " (search space exhausted)"));
  }
  return std::move(*result.certificate);
}

EdgeColoring::EdgeColoring(std::size_t n, Color fill) : n_(n), colors_((std::size_t{1} << n) * n, fill) {
  require(n <= 24, "edge colorings are limited to dimension 24");
}

EdgeColoring EdgeColoring::random(std::size_t n, Rng& rng) {
  EdgeColoring coloring(n, Color::kBlue);
  for (auto& c : coloring.colors_) c = rng.bernoulli(0.5) ? Color::kRed : Color::kBlue;
  return coloring;
}

std::size_t EdgeColoring::slot(Bits a, Bits b) const {
  const Bits diff = a ^ b;
  require(std::popcount(diff) == 1, "not a hypercube edge");
  return static_cast<std::size_t>(std::min(a, b)) * n_ + static_cast<std::size_t>(std::countr_zero(diff));
}

EdgeColoring order_coloring(const Hypercube& cube, const Labeling& labeling) {
  EdgeColoring coloring(cube.dimension(), Color::kBlue);
  for (Bits x = 0; x < cube.size(); ++x) {
    for (std::size_t c = 1; c <= cube.dimension(); ++c) {
      if (cube.coordinate(x, c)) continue;
      const Bits y = x | cube.coordinate_mask(c);
      const bool x_odd = Hypercube::level(x) % 2 == 1;
      const Bits z = x_odd ? x : y;
      const Bits z_even = x_odd ? y : x;
      coloring.set(x, y, labeling(z) < labeling(z_even) ? Color::kBlue : Color::kRed);
    }
  }
  return coloring;
}

GmClass gm_membership(std::size_t m, Bits x) {
  require(m >= 1 && m <= 7, "G_m is supported for 1 <= m <= 7");
  const std::size_t bits = 4 * m;
  if (x >> bits) return GmClass::kNone;
  std::size_t zeros_first = 0, ones_first = 0, zeros_second = 0, ones_second = 0;
  for (std::size_t j = 1; j <= 2 * m; ++j) {
    const auto pair = static_cast<unsigned>((x >> (bits - 2 * j)) & 3);
    const bool first = j <= m;
    if (pair == 0) ++(first ? zeros_first : zeros_second);
    if (pair == 3) ++(first ? ones_first : ones_second);
  }
  if (zeros_first || ones_second) return GmClass::kNone;
  if (ones_first == 0 && zeros_second == 0) return GmClass::kV2;
  if (ones_first == 0 && zeros_second == 1) return GmClass::kV1;
  if (ones_first == 1 && zeros_second == 1) return GmClass::kV3;
  return GmClass::kNone;
}

std::vector<Bits> gm_vertices(std::size_t m, GmClass which) {
  std::vector<Bits> out;
  for (Bits x = 0; x < (Bits{1} << (4 * m)); ++x) {
    if (gm_membership(m, x) == which) out.push_back(x);
  }
  return out;
}

std::vector<std::pair<Bits, Bits>> gm_edges(std::size_t m) {
  std::vector<std::pair<Bits, Bits>> edges;
  for (Bits x : gm_vertices(m, GmClass::kV1)) {
    for (std::size_t b = 0; b < 4 * m; ++b) {
      const Bits y = x ^ (Bits{1} << b);
      const GmClass c = gm_membership(m, y);
      if (c == GmClass::kV2 || c == GmClass::kV3) edges.emplace_back(x, y);
    }
  }
  return edges;
}

CommonNeighborReport verify_common_neighbor(std::size_t m) {
  require(m >= 1 && m <= 4, "exhaustive verification is limited to m <= 4");
  const Hypercube cube(4 * m);
  CommonNeighborReport report;
  auto record = [&](const std::string& what) {
    if (report.violations.size() < 20) report.violations.push_back(what);
  };
  auto check_pairs = [&](GmClass pair_class, Bits r_mask, GmClass expected, std::size_t& counter) {
    const std::vector<Bits> vertices = gm_vertices(m, pair_class);
    for (std::size_t a = 0; a < vertices.size(); ++a) {
      for (std::size_t b = a + 1; b < vertices.size(); ++b) {
        const Bits x = vertices[a], y = vertices[b];
        const auto d = cube.restricted_distance(x, y, r_mask);
        if (!d || *d != 2) continue;
        ++counter;
        std::vector<Bits> common;
        for (Bits z : cube.neighbors(x)) {
          if (Hypercube::distance(z, y) == 1 && gm_membership(m, z) != GmClass::kNone) common.push_back(z);
        }
        if (common.size() != 1 || gm_membership(m, common[0]) != expected) {
          record(cube.id(x) + "," + cube.id(y) + ": " + std::to_string(common.size()) + " common neighbours");
        }
      }
    }
  };
  check_pairs(GmClass::kV1, cube.range_mask(1, 2 * m), GmClass::kV3, report.first_pairs);
  check_pairs(GmClass::kV2, cube.range_mask(2 * m + 1, 4 * m), GmClass::kV1, report.second_pairs);
  return report;
}

Bits GmEmbedding::embed(Bits x) const {
  std::vector<std::size_t> beta(2 * m + 1);
  beta[0] = prefix[0];
  for (std::size_t i = 1; i < 2 * m; ++i) beta[i] = prefix[i] - prefix[i - 1] - 1;
  beta[2 * m] = 4 * m - 1 - prefix[2 * m - 1];
  std::vector<bool> seq;
  seq.reserve(6 * m);
  auto ones = [&](std::size_t count) { seq.insert(seq.end(), count, true); };
  auto bit = [&](std::size_t coordinate) { seq.push_back(((x >> (4 * m - coordinate)) & 1) != 0); };
  ones(beta[0]);
  for (std::size_t j = 1; j <= 2 * m; ++j) {
    bit(2 * j - 1);
    if (j <= m) {
      ones(beta[j]);
      bit(2 * j);
    } else {
      bit(2 * j);
      ones(beta[j]);
    }
  }
  Bits out = 0;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (seq[i]) out |= Bits{1} << (n - coords[i]);
  }
  return out;
}

namespace {

bool next_combination(std::vector<std::size_t>& c, std::size_t lo, std::size_t hi) {
  const std::size_t k = c.size();
  for (std::size_t i = k; i-- > 0;) {
    if (c[i] < hi - (k - 1 - i)) {
      ++c[i];
      for (std::size_t j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  (void)lo;
  return false;
}

}  // namespace

GmSearch find_monochromatic_gm(const Hypercube& cube, const EdgeColoring& coloring, std::size_t m, std::size_t budget) {
  require(coloring.dimension() == cube.dimension(), "coloring does not match the hypercube");
  GmSearch result;
  const std::size_t n = cube.dimension();
  if (n < 6 * m) return result;
  const auto edges = gm_edges(m);
  std::vector<std::size_t> coords(6 * m);
  std::iota(coords.begin(), coords.end(), std::size_t{1});
  do {
    std::vector<std::size_t> prefix(2 * m);
    std::iota(prefix.begin(), prefix.end(), std::size_t{0});
    do {
      if (result.candidates >= budget) {
        result.budget_exhausted = true;
        return result;
      }
      ++result.candidates;
      GmEmbedding embedding{m, n, coords, prefix, Color::kBlue};
      bool mono = true;
      std::optional<Color> seen;
      for (auto [a, b] : edges) {
        const Color c = coloring.color(embedding.embed(a), embedding.embed(b));
        if (!seen) seen = c;
        if (c != *seen) {
          mono = false;
          break;
        }
      }
      if (mono) {
        embedding.color = seen.value_or(Color::kBlue);
        result.embedding = std::move(embedding);
        return result;
      }
    } while (next_combination(prefix, 0, 4 * m - 1));
  } while (next_combination(coords, 1, n));
  return result;
}

}  // namespace costshare
