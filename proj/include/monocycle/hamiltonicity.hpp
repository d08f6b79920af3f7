#pragma once

// Exact Hamilton cycle / path decisions by subset DP, and the classical
// degree-sequence sufficient conditions.
//
// Path lengths are counted in edges throughout.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "monocycle/error.hpp"
#include "monocycle/graph.hpp"

namespace monocycle {

inline constexpr int kDpCap = 24;

inline void require_dp_order(int n) {
  if (n > kDpCap) {
    throw CapacityError("exact DP supports at most " + std::to_string(kDpCap) + " vertices, got " +
                        std::to_string(n));
  }
}

inline std::vector<std::uint32_t> adjacency_words(const ColouredGraph& g, View view) {
  require_dp_order(g.order());
  std::vector<std::uint32_t> adj(static_cast<std::size_t>(g.order()));
  for (Vertex v = 0; v < g.order(); ++v) adj[static_cast<std::size_t>(v)] = static_cast<std::uint32_t>(g.neighbours(v, view).mask());
  return adj;
}

inline int lowest(std::uint32_t mask) { return std::countr_zero(mask); }

/// dp[mask] is the set of v such that mask has a Hamilton path from
/// lowest(mask) to v. Built for every mask at once; reconstruction walks
/// back through the table picking the lowest valid predecessor.
class HamTable {
 public:
  HamTable(const ColouredGraph& g, View view) : n_(g.order()), adj_(adjacency_words(g, view)) {
    dp_.assign(std::size_t{1} << n_, 0);
    const std::uint32_t limit = n_ == 32 ? 0 : (std::uint32_t{1} << n_);
    for (std::uint32_t mask = 1; mask < limit; ++mask) {
      const int low = lowest(mask);
      if (mask == (std::uint32_t{1} << low)) {
        dp_[mask] = mask;
        continue;
      }
      std::uint32_t ends = 0;
      for (std::uint32_t rest = mask & (mask - 1); rest != 0; rest &= rest - 1) {
        const int v = lowest(rest);
        if ((adj_[static_cast<std::size_t>(v)] & dp_[mask ^ (std::uint32_t{1} << v)]) != 0) ends |= std::uint32_t{1} << v;
      }
      dp_[mask] = ends;
    }
  }

  int order() const { return n_; }

  std::uint32_t ends(std::uint32_t mask) const { return dp_[mask]; }

  /// Cycle on mask under the degenerate convention (empty, vertex, edge count).
  bool has_cycle(std::uint32_t mask) const {
    const int k = std::popcount(mask);
    if (k <= 1) return true;
    return (dp_[mask] & adj_[static_cast<std::size_t>(lowest(mask))]) != 0;
  }

  /// Vertex sequence of a cycle on mask starting at its lowest vertex, or
  /// nullopt.
  std::optional<std::vector<Vertex>> cycle(std::uint32_t mask) const {
    if (!has_cycle(mask)) return std::nullopt;
    if (mask == 0) return std::vector<Vertex>{};
    const int low = lowest(mask);
    if (std::popcount(mask) == 1) return std::vector<Vertex>{low};
    return path_to(mask, lowest(dp_[mask] & adj_[static_cast<std::size_t>(low)]));
  }

  /// Hamilton path of mask from lowest(mask) to end, which must be in ends(mask).
  std::vector<Vertex> path_to(std::uint32_t mask, int end) const {
    std::vector<Vertex> rev{end};
    std::uint32_t m = mask;
    int cur = end;
    while (std::popcount(m) > 1) {
      m ^= std::uint32_t{1} << cur;
      cur = lowest(dp_[m] & adj_[static_cast<std::size_t>(cur)]);
      rev.push_back(cur);
    }
    std::reverse(rev.begin(), rev.end());
    return rev;
  }

 private:
  int n_;
  std::vector<std::uint32_t> adj_;
  std::vector<std::uint32_t> dp_;
};

inline std::uint32_t to_mask32(const VertexSet& s) { return static_cast<std::uint32_t>(s.mask()); }

/// Members of s in order, used to map induced-graph ids back.
inline std::vector<Vertex> lift(const std::vector<Vertex>& local, const std::vector<Vertex>& members) {
  std::vector<Vertex> out;
  out.reserve(local.size());
  for (Vertex v : local) out.push_back(members[static_cast<std::size_t>(v)]);
  return out;
}

/// Cycle of the view on exactly the vertices of s, under the degenerate
/// convention. Works for any n as long as |s| fits the DP cap.
inline std::optional<std::vector<Vertex>> mono_cycle_on(const ColouredGraph& g, View view, const VertexSet& s) {
  const auto members = s.to_vector();
  if (members.size() <= 1) return members;
  if (members.size() == 2) {
    if (g.adjacent(members[0], members[1], view)) return members;
    return std::nullopt;
  }
  const ColouredGraph h = induced(g, s);
  const HamTable table(h, view);
  auto local = table.cycle((std::uint32_t{1} << h.order()) - 1);
  if (!local) return std::nullopt;
  return lift(*local, members);
}

inline bool has_mono_cycle_on(const ColouredGraph& g, View view, const VertexSet& s) {
  return mono_cycle_on(g, view, s).has_value();
}

/// Hamilton path of view restricted to s from a to b, or nullopt.
inline std::optional<std::vector<Vertex>> hamilton_path_between(const ColouredGraph& g, View view,
                                                                 const VertexSet& s, Vertex a, Vertex b) {
  if (a == b || !s.contains(a) || !s.contains(b)) {
    throw PreconditionError("hamilton_path_between needs distinct ends inside the vertex set");
  }
  const auto members = s.to_vector();
  const ColouredGraph h = induced(g, s);
  const auto adj = adjacency_words(h, view);
  const int k = h.order();
  const auto local_of = [&](Vertex v) {
    return static_cast<int>(std::lower_bound(members.begin(), members.end(), v) - members.begin());
  };
  const int la = local_of(a);
  const int lb = local_of(b);
  const std::uint32_t start = std::uint32_t{1} << la;
  std::vector<std::uint32_t> f(std::size_t{1} << k, 0);
  f[start] = start;
  for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << k); ++mask) {
    if ((mask & start) == 0 || mask == start) continue;
    std::uint32_t ends = 0;
    for (std::uint32_t rest = mask & ~start; rest != 0; rest &= rest - 1) {
      const int v = lowest(rest);
      if ((adj[static_cast<std::size_t>(v)] & f[mask ^ (std::uint32_t{1} << v)]) != 0) ends |= std::uint32_t{1} << v;
    }
    f[mask] = ends;
  }
  std::uint32_t m = (std::uint32_t{1} << k) - 1;
  if (((f[m] >> lb) & 1U) == 0) return std::nullopt;
  std::vector<Vertex> rev{lb};
  int cur = lb;
  while (m != start) {
    m ^= std::uint32_t{1} << cur;
    cur = lowest(f[m] & adj[static_cast<std::size_t>(cur)]);
    rev.push_back(cur);
  }
  std::reverse(rev.begin(), rev.end());
  return lift(rev, members);
}

/// A longest path of the view (vertex sequence; empty only when n = 0).
inline std::vector<Vertex> longest_path(const ColouredGraph& g, View view) {
  const auto adj = adjacency_words(g, view);
  const int n = g.order();
  if (n == 0) return {};
  // hp[mask]: ends of Hamilton paths of mask with any start.
  std::vector<std::uint32_t> hp(std::size_t{1} << n, 0);
  std::uint32_t best_mask = 1;
  for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << n); ++mask) {
    if (std::popcount(mask) == 1) {
      hp[mask] = mask;
      continue;
    }
    std::uint32_t ends = 0;
    for (std::uint32_t rest = mask; rest != 0; rest &= rest - 1) {
      const int v = lowest(rest);
      if ((adj[static_cast<std::size_t>(v)] & hp[mask ^ (std::uint32_t{1} << v)]) != 0) ends |= std::uint32_t{1} << v;
    }
    hp[mask] = ends;
    if (ends != 0 && std::popcount(mask) > std::popcount(best_mask)) best_mask = mask;
  }
  std::uint32_t m = best_mask;
  int cur = lowest(hp[m]);
  std::vector<Vertex> path{cur};
  while (std::popcount(m) > 1) {
    m ^= std::uint32_t{1} << cur;
    cur = lowest(hp[m] & adj[static_cast<std::size_t>(cur)]);
    path.push_back(cur);
  }
  return path;
}

/// Number of edges on a longest path of the view.
inline int longest_path_length(const ColouredGraph& g, View view) {
  const auto p = longest_path(g, view);
  return p.empty() ? 0 : static_cast<int>(p.size()) - 1;
}

inline std::vector<int> degree_sequence(const ColouredGraph& g, View view, const VertexSet& s) {
  std::vector<int> d;
  s.for_each([&](Vertex v) { d.push_back(g.degree_into(v, view, s)); });
  std::sort(d.begin(), d.end());
  return d;
}

inline std::vector<int> degree_sequence(const ColouredGraph& g, View view) {
  return degree_sequence(g, view, VertexSet::full(g.order()));
}

inline void require_sorted(const std::vector<int>& d) {
  if (!std::is_sorted(d.begin(), d.end())) throw PreconditionError("degree sequence must be nondecreasing");
}

/// d_i >= i + 1 or d_{n-i} >= n - i for every 1 <= i <= n/2 (1-based).
inline bool chvatal_guarantees(const std::vector<int>& d) {
  require_sorted(d);
  const int n = static_cast<int>(d.size());
  if (n < 3) throw PreconditionError("Chvatal condition needs at least 3 vertices");
  const auto at = [&](int i) { return d[static_cast<std::size_t>(i - 1)]; };
  for (int i = 1; i <= n / 2; ++i) {
    if (at(i) < i + 1 && at(n - i) < n - i) return false;
  }
  return true;
}

/// x_i >= i + 1 or y_{n-i} >= n - i + 1, evaluated for 1 <= i <= n - 1; at
/// i = n the right-hand side would reference y_0.
inline bool chvatal_bipartite_guarantees(const std::vector<int>& x, const std::vector<int>& y) {
  if (x.size() != y.size()) throw PreconditionError("bipartite Chvatal condition needs balanced parts");
  require_sorted(x);
  require_sorted(y);
  const int n = static_cast<int>(x.size());
  if (n < 2) return false;
  for (int i = 1; i <= n - 1; ++i) {
    if (x[static_cast<std::size_t>(i - 1)] < i + 1 && y[static_cast<std::size_t>(n - i - 1)] < n - i + 1) return false;
  }
  return true;
}

/// (longest path <= l) implies e <= n*l/2, evaluated on this instance.
inline bool erdos_gallai_bound_holds(const ColouredGraph& g, View view, int l) {
  if (longest_path_length(g, view) > l) return true;
  return 2LL * g.edge_count(view) <= static_cast<long long>(g.order()) * l;
}

/// Premise of Bondy's theorem: minimum degree strictly above n/2.
inline bool bondy_premise(const ColouredGraph& g, View view) {
  return g.order() >= 1 && 2 * min_degree(g, view) > g.order();
}

/// present[L] for L in 3..n: the view has a cycle on exactly L vertices.
inline std::vector<bool> cycle_lengths_present(const ColouredGraph& g, View view) {
  const int n = g.order();
  std::vector<bool> present(static_cast<std::size_t>(std::max(n, 2) + 1), false);
  if (n < 3) return present;
  const HamTable table(g, view);
  for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << n); ++mask) {
    const int k = std::popcount(mask);
    if (k >= 3 && !present[static_cast<std::size_t>(k)] && table.has_cycle(mask)) present[static_cast<std::size_t>(k)] = true;
  }
  return present;
}

inline bool is_pancyclic(const ColouredGraph& g, View view) {
  const auto present = cycle_lengths_present(g, view);
  for (int L = 3; L <= g.order(); ++L) {
    if (!present[static_cast<std::size_t>(L)]) return false;
  }
  return g.order() >= 3;
}

/// Checks that seq is a cycle of the view under the degenerate convention.
inline bool is_cycle_in(const ColouredGraph& g, View view, const std::vector<Vertex>& seq) {
  VertexSet seen(g.order());
  for (Vertex v : seq) {
    if (v < 0 || v >= g.order() || seen.contains(v)) return false;
    seen.insert(v);
  }
  if (seq.size() <= 1) return true;
  if (seq.size() == 2) return g.adjacent(seq[0], seq[1], view);
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (!g.adjacent(seq[i], seq[(i + 1) % seq.size()], view)) return false;
  }
  return true;
}

/// Checks that seq is a simple path of the view (any length >= 0 edges).
inline bool is_path_in(const ColouredGraph& g, View view, const std::vector<Vertex>& seq) {
  VertexSet seen(g.order());
  for (std::size_t i = 0; i < seq.size(); ++i) {
    const Vertex v = seq[i];
    if (v < 0 || v >= g.order() || seen.contains(v)) return false;
    seen.insert(v);
    if (i > 0 && !g.adjacent(seq[i - 1], v, view)) return false;
  }
  return true;
}

}  // namespace monocycle
