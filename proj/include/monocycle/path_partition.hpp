#pragma once

// Splits a vertex set into U, W of equal size with no U-W edges and a path
// through everything else; and the balanced bipartite consequence.

#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "monocycle/error.hpp"
#include "monocycle/graph.hpp"
#include "monocycle/hamiltonicity.hpp"

namespace monocycle {

struct PathPartition {
  VertexSet u;
  VertexSet w;
  std::vector<Vertex> path;
  std::vector<int> progress;  // |U| - |W| after each step
};

/// Runs the three-move process on `vertices` using the neighbour sets in
/// adj: start a path from the lowest vertex of U, extend it by the lowest
/// neighbour in U of its last vertex, or retire that last vertex into W.
inline PathPartition path_partition(std::span<const VertexSet> adj, const VertexSet& vertices) {
  PathPartition out{vertices, VertexSet(vertices.universe()), {}, {}};
  int measure = out.u.size();
  while (out.u.size() > out.w.size()) {
    if (out.path.empty()) {
      const Vertex v = out.u.first();
      out.u.erase(v);
      out.path.push_back(v);
    } else {
      const Vertex last = out.path.back();
      const Vertex next = (adj[static_cast<std::size_t>(last)] & out.u).first();
      if (next >= 0) {
        out.u.erase(next);
        out.path.push_back(next);
      } else {
        out.path.pop_back();
        out.w.insert(last);
      }
    }
    const int now = out.u.size() - out.w.size();
    if (now != measure - 1) throw std::logic_error("path partition progress measure did not drop by one");
    measure = now;
    out.progress.push_back(now);
  }
  return out;
}

inline PathPartition partition_empty_pair_path(const ColouredGraph& g, View view) {
  const auto adj = g.adjacency(view);
  return path_partition(adj, VertexSet::full(g.order()));
}

/// U, W, path form a partition of `vertices`, |U| = |W|, no U-W edge and
/// the path uses view edges.
inline bool is_valid_path_partition(std::span<const VertexSet> adj, const VertexSet& vertices, const PathPartition& p) {
  if (p.u.size() != p.w.size() || p.u.intersects(p.w)) return false;
  VertexSet covered = p.u | p.w;
  for (std::size_t i = 0; i < p.path.size(); ++i) {
    const Vertex v = p.path[i];
    if (!vertices.contains(v) || covered.contains(v)) return false;
    covered.insert(v);
    if (i > 0 && !adj[static_cast<std::size_t>(p.path[i - 1])].contains(v)) return false;
  }
  if (!(covered == vertices)) return false;
  bool crossing = false;
  p.u.for_each([&](Vertex v) { crossing = crossing || adj[static_cast<std::size_t>(v)].intersects(p.w); });
  return !crossing;
}

/// Neighbour sets of the view keeping only edges between v1 and v2.
inline std::vector<VertexSet> cross_adjacency(const ColouredGraph& g, View view, const VertexSet& v1, const VertexSet& v2) {
  std::vector<VertexSet> adj(static_cast<std::size_t>(g.order()), VertexSet(g.order()));
  v1.for_each([&](Vertex v) { adj[static_cast<std::size_t>(v)] = g.neighbours(v, view) & v2; });
  v2.for_each([&](Vertex v) { adj[static_cast<std::size_t>(v)] = g.neighbours(v, view) & v1; });
  return adj;
}

/// X1 in v1 and X2 in v2 of equal size with no edges between them, taken
/// from the path partition of the cross edges. Returns nullopt when the
/// sets come out smaller than (n - k) / 4.
inline std::optional<std::pair<VertexSet, VertexSet>> bipartite_sets_from(std::span<const VertexSet> adj,
                                                                          const VertexSet& v1, const VertexSet& v2,
                                                                          int k) {
  const auto p = path_partition(adj, v1 | v2);
  const VertexSet u1 = p.u & v1;
  const VertexSet u2 = p.u & v2;
  VertexSet x1 = u1.size() >= u2.size() ? u1 : p.w & v1;
  VertexSet x2 = u1.size() >= u2.size() ? p.w & v2 : u2;
  // An odd path can leave the two sides one apart; trim the larger.
  while (x1.size() > x2.size()) {
    Vertex last = -1;
    x1.for_each([&](Vertex v) { last = v; });
    x1.erase(last);
  }
  while (x2.size() > x1.size()) {
    Vertex last = -1;
    x2.for_each([&](Vertex v) { last = v; });
    x2.erase(last);
  }
  const int n = (v1 | v2).size();
  if (4 * x1.size() < n - k) return std::nullopt;
  return std::make_pair(x1, x2);
}

/// Balanced bipartite view without a path of k edges: sets X1, X2 of equal
/// size >= (n - k)/4 with no edges between. The premise is checked exactly
/// when n fits the DP cap.
inline std::optional<std::pair<VertexSet, VertexSet>> bipartite_corollary(const ColouredGraph& g, View view,
                                                                          const VertexSet& v1, const VertexSet& v2,
                                                                          int k) {
  if (v1.intersects(v2) || (v1 | v2).size() != g.order()) throw PreconditionError("v1, v2 must partition V");
  if (v1.size() != v2.size()) throw PreconditionError("bipartition must be balanced");
  bool inside = false;
  v1.for_each([&](Vertex v) { inside = inside || g.neighbours(v, view).intersects(v1); });
  v2.for_each([&](Vertex v) { inside = inside || g.neighbours(v, view).intersects(v2); });
  if (inside) throw PreconditionError("view has an edge inside a side of the bipartition");
  if (g.order() <= kDpCap && longest_path_length(g, view) >= k) {
    throw PreconditionError("view contains a path with " + std::to_string(k) + " edges");
  }
  const auto adj = cross_adjacency(g, view, v1, v2);
  return bipartite_sets_from(adj, v1, v2, k);
}

}  // namespace monocycle
