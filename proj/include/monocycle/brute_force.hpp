#pragma once

// Permutation-enumeration oracles. Independent of the DP tables; only meant
// for tiny instances in tests and for re-confirming negative solver results.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "monocycle/graph.hpp"

namespace monocycle::brute {

/// Cycle on exactly the vertices of mask, by trying every ordering that
/// starts at the lowest member.
inline std::optional<std::vector<Vertex>> cycle_on(const ColouredGraph& g, View view, std::uint64_t mask) {
  std::vector<Vertex> vs;
  for (Vertex v = 0; v < g.order(); ++v) {
    if ((mask >> v) & 1U) vs.push_back(v);
  }
  if (vs.size() <= 1) return vs;
  if (vs.size() == 2) {
    if (g.adjacent(vs[0], vs[1], view)) return vs;
    return std::nullopt;
  }
  do {
    bool ok = true;
    for (std::size_t i = 0; i < vs.size() && ok; ++i) ok = g.adjacent(vs[i], vs[(i + 1) % vs.size()], view);
    if (ok) return vs;
  } while (std::next_permutation(vs.begin() + 1, vs.end()));
  return std::nullopt;
}

struct Split {
  std::vector<Vertex> red;
  std::vector<Vertex> blue;
};

/// Any (subset, red ordering, blue ordering) triple that partitions V.
inline std::optional<Split> partition(const ColouredGraph& g) {
  const int n = g.order();
  const std::uint64_t full = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  for (std::uint64_t s = 0; s <= full; ++s) {
    auto red = cycle_on(g, View::kRed, s);
    if (red) {
      auto blue = cycle_on(g, View::kBlue, full ^ s);
      if (blue) return Split{*red, *blue};
    }
    if (s == full) break;
  }
  return std::nullopt;
}

/// Number of x-y paths with exactly l internal vertices, by ordered
/// enumeration of internal tuples.
inline long long count_paths(const ColouredGraph& g, View view, Vertex x, Vertex y, int l) {
  const int n = g.order();
  std::vector<Vertex> tuple(static_cast<std::size_t>(l), 0);
  long long total = 0;
  const auto check = [&] {
    std::vector<Vertex> seq{x};
    seq.insert(seq.end(), tuple.begin(), tuple.end());
    seq.push_back(y);
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    for (std::size_t i = 0; i < seq.size(); ++i) {
      if (seen[static_cast<std::size_t>(seq[i])]) return false;
      seen[static_cast<std::size_t>(seq[i])] = true;
      if (i > 0 && !g.adjacent(seq[i - 1], seq[i], view)) return false;
    }
    return true;
  };
  while (true) {
    if (check()) ++total;
    int i = l - 1;
    while (i >= 0 && tuple[static_cast<std::size_t>(i)] == n - 1) tuple[static_cast<std::size_t>(i--)] = 0;
    if (i < 0) break;
    ++tuple[static_cast<std::size_t>(i)];
  }
  return total;
}

}  // namespace monocycle::brute
