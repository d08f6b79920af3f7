#pragma once

// Absorbing paths: sampled anchor families, pair gadgets (strong) and
// quadruple gadgets (weak), the re-routing that swallows one vertex (or one
// cross pair), and whole-set absorption.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "monocycle/error.hpp"
#include "monocycle/graph.hpp"
#include "monocycle/rng.hpp"
#include "monocycle/robustness.hpp"

namespace monocycle {

enum class AbsorbMode { kStrong, kWeak };

inline const char* to_string(AbsorbMode m) { return m == AbsorbMode::kStrong ? "strong" : "weak"; }

inline constexpr int kAnchorRetries = 16;
inline constexpr std::int64_t kWiringBudget = 2'000'000;

// ---------------------------------------------------------------------------
// Path search

/// Path with exactly `edges` edges from `from` to `to` whose interior lies in
/// `free`. Depth-first, lowest index first, bounded by a node budget.
inline std::optional<std::vector<Vertex>> find_path_of_length(std::span<const VertexSet> adj, Vertex from, Vertex to,
                                                              int edges, const VertexSet& free,
                                                              std::int64_t budget = kWiringBudget) {
  if (edges < 1 || from == to) return std::nullopt;
  const VertexSet& target_row = adj[static_cast<std::size_t>(to)];
  if (edges == 1) {
    if (!adj[static_cast<std::size_t>(from)].contains(to)) return std::nullopt;
    return std::vector<Vertex>{from, to};
  }
  std::vector<Vertex> path{from};
  VertexSet avail = free;
  avail.erase(from);
  avail.erase(to);
  std::int64_t left = budget;
  const auto dfs = [&](auto&& self, Vertex cur, int remaining) -> bool {
    if (--left < 0) return false;
    VertexSet next = adj[static_cast<std::size_t>(cur)] & avail;
    if (remaining == 2) next &= target_row;
    for (Vertex c = next.first(); c >= 0; c = next.next_from(c + 1)) {
      path.push_back(c);
      if (remaining == 2) return true;
      avail.erase(c);
      if (self(self, c, remaining - 1)) return true;
      avail.insert(c);
      path.pop_back();
      if (left < 0) return false;
    }
    return false;
  };
  if (!dfs(dfs, from, edges)) return std::nullopt;
  path.push_back(to);
  return path;
}

// ---------------------------------------------------------------------------
// Uniform gadget length

struct UniformL {
  int l = 0;
  std::vector<std::pair<std::pair<Vertex, Vertex>, std::uint64_t>> counts;  // sampled pairs, counts capped at min_paths
};

/// Smallest l <= k_max such that each sampled pair (cross pairs when side_x
/// is given) has at least min_paths paths with 4l - 1 edges inside f.
inline UniformL find_uniform_l(const ColouredGraph& g, View view, const VertexSet& f, int k_max,
                               const std::optional<VertexSet>& side_x = std::nullopt, std::uint64_t min_paths = 1,
                               int samples = 32, std::uint64_t seed = 0) {
  if (f.size() < 2 || !is_connected(g, view, f)) throw PreconditionError("subgraph must be connected with two vertices");
  std::vector<VertexSet> adj(static_cast<std::size_t>(g.order()), VertexSet(g.order()));
  f.for_each([&](Vertex v) {
    adj[static_cast<std::size_t>(v)] = g.neighbours(v, view) & f;
    if (side_x) adj[static_cast<std::size_t>(v)] &= side_x->contains(v) ? f - *side_x : *side_x;
  });
  std::vector<std::pair<Vertex, Vertex>> pairs;
  const auto members = f.to_vector();
  for (std::size_t i = 0; i < members.size(); ++i) {
    for (std::size_t j = i + 1; j < members.size(); ++j) {
      if (!side_x || side_x->contains(members[i]) != side_x->contains(members[j])) pairs.emplace_back(members[i], members[j]);
    }
  }
  Rng rng(seed);
  rng.shuffle(pairs);
  if (pairs.size() > static_cast<std::size_t>(samples)) pairs.resize(static_cast<std::size_t>(samples));
  std::sort(pairs.begin(), pairs.end());
  Budget budget(path_budget());
  for (int l = 1; l <= k_max; ++l) {
    UniformL out{l, {}};
    bool ok = true;
    for (auto [x, y] : pairs) {
      const auto c = count_paths(adj, f, x, y, 4 * l - 2, budget, min_paths);
      out.counts.push_back({{x, y}, c});
      if (c < min_paths) {
        ok = false;
        break;
      }
    }
    if (ok) return out;
  }
  throw ConstructionError("no gadget length l <= " + std::to_string(k_max) + " found");
}

// ---------------------------------------------------------------------------
// Anchors

struct AnchorFamily {
  std::vector<std::vector<Vertex>> members;  // pairs (x, y) or quadruples (a, b, c, d)
  double p = 0;
  std::uint64_t seed = 0;  // seed of the accepted attempt
  int attempts = 0;
  int threshold = 0;
  int min_coverage = 0;
};

/// Pairs both of whose members are neighbours of v.
inline int pair_coverage(const ColouredGraph& g, View view, Vertex v, const std::vector<std::vector<Vertex>>& members) {
  const VertexSet nb = g.neighbours(v, view);
  return static_cast<int>(std::count_if(members.begin(), members.end(), [&](const auto& m) {
    return nb.contains(m[0]) && nb.contains(m[1]);
  }));
}

/// Quadruple coverage of the cross pair (x, y): a, c in N(x) and b, d in N(y).
inline bool quad_fits(const ColouredGraph& g, View view, Vertex x, Vertex y, const std::vector<Vertex>& q) {
  return g.adjacent(x, q[0], view) && g.adjacent(x, q[2], view) && g.adjacent(y, q[1], view) && g.adjacent(y, q[3], view);
}

namespace detail {

inline int min_pair_coverage(const ColouredGraph& g, View view, const VertexSet& f,
                             const std::vector<std::vector<Vertex>>& members, const VertexSet& skip) {
  int best = INT32_MAX;
  f.for_each([&](Vertex v) {
    if (!skip.contains(v)) best = std::min(best, pair_coverage(g, view, v, members));
  });
  return best == INT32_MAX ? 0 : best;
}

inline int min_quad_coverage(const ColouredGraph& g, View view, const VertexSet& xs, const VertexSet& ys,
                             const std::vector<std::vector<Vertex>>& members, const VertexSet& skip) {
  const int n = g.order();
  const int q = static_cast<int>(members.size());
  std::vector<VertexSet> as_x(static_cast<std::size_t>(n), VertexSet(q));
  std::vector<VertexSet> as_y(static_cast<std::size_t>(n), VertexSet(q));
  for (int j = 0; j < q; ++j) {
    const auto& m = members[static_cast<std::size_t>(j)];
    const VertexSet xa = g.neighbours(m[0], view) & g.neighbours(m[2], view);
    const VertexSet yb = g.neighbours(m[1], view) & g.neighbours(m[3], view);
    xa.for_each([&](Vertex v) { as_x[static_cast<std::size_t>(v)].insert(j); });
    yb.for_each([&](Vertex v) { as_y[static_cast<std::size_t>(v)].insert(j); });
  }
  int best = INT32_MAX;
  xs.for_each([&](Vertex x) {
    if (skip.contains(x)) return;
    ys.for_each([&](Vertex y) {
      if (!skip.contains(y)) best = std::min(best, as_x[static_cast<std::size_t>(x)].intersection_size(as_y[static_cast<std::size_t>(y)]));
    });
  });
  return best == INT32_MAX ? 0 : best;
}

}  // namespace detail

inline int anchor_threshold(AbsorbMode mode, double p, double alpha, int n) {
  const double power = mode == AbsorbMode::kStrong ? alpha * alpha : alpha * alpha * alpha * alpha;
  return std::max(1, static_cast<int>(std::ceil(p * power * n / 16 - 1e-9)));
}

/// Strong: every pair of f kept independently with probability p/n.
/// Weak: ceil(pn) random quadruples (a, c outside side_x, b, d inside).
/// Intersecting members are dropped, the family is cut to floor(pn), and the
/// draw is repeated with fresh seeds until coverage meets the threshold.
inline AnchorFamily sample_anchors(const ColouredGraph& g, View view, const VertexSet& f, double p, AbsorbMode mode,
                                   std::uint64_t seed, double alpha, int n_ref = 0,
                                   const std::optional<VertexSet>& side_x = std::nullopt) {
  const int n = n_ref > 0 ? n_ref : g.order();
  if (p <= 0 || p > 1) throw PreconditionError("p must lie in (0, 1]");
  if (mode == AbsorbMode::kWeak && !side_x) throw PreconditionError("weak anchors need a bipartition");
  const auto members = f.to_vector();
  const VertexSet xs = side_x ? *side_x & f : VertexSet(g.order());
  const VertexSet ys = side_x ? f - *side_x : VertexSet(g.order());
  const auto xv = xs.to_vector();
  const auto yv = ys.to_vector();
  const int cap = static_cast<int>(std::floor(p * n + 1e-9));

  AnchorFamily fam;
  fam.p = p;
  fam.threshold = anchor_threshold(mode, p, alpha, n);
  for (int attempt = 0; attempt < kAnchorRetries; ++attempt) {
    const std::uint64_t s = derive_seed(seed, static_cast<std::uint64_t>(attempt));
    Rng rng(s);
    std::vector<std::vector<Vertex>> drawn;
    if (mode == AbsorbMode::kStrong) {
      for (std::size_t i = 0; i < members.size(); ++i) {
        for (std::size_t j = i + 1; j < members.size(); ++j) {
          if (rng.bernoulli(p / n)) drawn.push_back({members[i], members[j]});
        }
      }
      rng.shuffle(drawn);
    } else if (xv.size() >= 2 && yv.size() >= 2) {
      const int want = static_cast<int>(std::ceil(p * n - 1e-9));
      for (int t = 0; t < want; ++t) {
        const Vertex a = yv[rng.below(yv.size())];
        const Vertex b = xv[rng.below(xv.size())];
        const Vertex c = yv[rng.below(yv.size())];
        const Vertex d = xv[rng.below(xv.size())];
        drawn.push_back({a, b, c, d});
      }
    }
    std::vector<std::vector<Vertex>> kept;
    VertexSet used(g.order());
    for (auto& m : drawn) {
      VertexSet mine(g.order());
      bool clash = false;
      for (Vertex v : m) {
        clash = clash || used.contains(v) || mine.contains(v);
        mine.insert(v);
      }
      if (clash) continue;
      used |= mine;
      kept.push_back(std::move(m));
    }
    if (static_cast<int>(kept.size()) > cap) kept.resize(static_cast<std::size_t>(cap));
    const VertexSet none(g.order());
    const int cov = mode == AbsorbMode::kStrong ? detail::min_pair_coverage(g, view, f, kept, none)
                                                : detail::min_quad_coverage(g, view, xs, ys, kept, none);
    fam.attempts = attempt + 1;
    if (cov >= fam.threshold) {
      fam.members = std::move(kept);
      fam.seed = s;
      fam.min_coverage = cov;
      return fam;
    }
  }
  throw ConstructionError("anchor coverage below " + std::to_string(fam.threshold) + " after " +
                          std::to_string(kAnchorRetries) + " draws");
}

// ---------------------------------------------------------------------------
// Gadgets

struct Gadget {
  AbsorbMode mode = AbsorbMode::kStrong;
  int l = 1;
  std::vector<Vertex> anchor;
  // strong: "u" is u_1..u_4l. weak: "a", "b", "c", "d" hold a_1..a_2l etc.
  std::map<std::string, std::vector<Vertex>> spine;
  // Named sub-paths with both ends included: "P1", "P3", ... (strong);
  // "P1".."P{2l-1}", "Q2".."Q{2l}", "R" (weak).
  std::map<std::string, std::vector<Vertex>> paths;
  bool used = false;
  std::vector<Vertex> absorbed;  // w, or x then y
};

namespace detail {

inline void append_interior(std::vector<Vertex>& out, const std::vector<Vertex>& p, bool reversed) {
  if (p.size() <= 2) return;
  if (reversed) {
    out.insert(out.end(), p.rbegin() + 1, p.rend() - 1);
  } else {
    out.insert(out.end(), p.begin() + 1, p.end() - 1);
  }
}

inline std::string key(char c, int i) { return std::string(1, c) + std::to_string(i); }

}  // namespace detail

inline int strong_gadget_order(int l) { return 8 * l * l - 4 * l + 2; }

/// Q_j = (u2 u1 P1 u4 u3 P3 u6 ... u_{4l-2} u_{4l-3} P_{4l-3} u_{4l-1} u_{4l}),
/// or its weak counterpart.
inline std::vector<Vertex> quiet_sequence(const Gadget& gd) {
  std::vector<Vertex> s;
  const int l = gd.l;
  const auto& P = gd.paths;
  if (gd.mode == AbsorbMode::kStrong) {
    const auto u = [&](int i) { return gd.spine.at("u")[static_cast<std::size_t>(i - 1)]; };
    for (int i = 1; i <= 4 * l - 5; i += 2) {
      s.push_back(u(i + 1));
      s.push_back(u(i));
      detail::append_interior(s, P.at(detail::key('P', i)), false);
    }
    s.push_back(u(4 * l - 2));
    s.push_back(u(4 * l - 3));
    detail::append_interior(s, P.at(detail::key('P', 4 * l - 3)), false);
    s.push_back(u(4 * l - 1));
    s.push_back(u(4 * l));
    return s;
  }
  const auto v = [&](const char* name, int i) { return gd.spine.at(name)[static_cast<std::size_t>(i - 1)]; };
  const auto in = [&](char c, int i, bool rev) { detail::append_interior(s, P.at(detail::key(c, i)), rev); };
  s.push_back(v("b", 1));
  s.push_back(v("a", 1));
  in('P', 1, false);
  for (int i = 2 * l; i >= 3; --i) {
    s.push_back(v("c", i));
    s.push_back(v("d", i));
    in('Q', i, false);
  }
  s.push_back(v("c", 2));
  s.push_back(v("d", 2));
  in('Q', 2, false);
  s.push_back(v("d", 1));
  s.push_back(v("c", 1));
  detail::append_interior(s, P.at("R"), false);
  for (int i = 2; i <= 2 * l - 2; ++i) {
    s.push_back(v("b", i));
    s.push_back(v("a", i));
    in('P', i, false);
  }
  s.push_back(v("b", 2 * l - 1));
  s.push_back(v("a", 2 * l - 1));
  in('P', 2 * l - 1, false);
  s.push_back(v("a", 2 * l));
  s.push_back(v("b", 2 * l));
  return s;
}

/// The re-routed block containing the absorbed vertex (strong) or the
/// absorbed cross pair x, y (weak), with the same two ends.
inline std::vector<Vertex> absorbing_sequence(const Gadget& gd, Vertex w, Vertex y = -1) {
  std::vector<Vertex> s;
  const int l = gd.l;
  const auto& P = gd.paths;
  if (gd.mode == AbsorbMode::kStrong) {
    const auto u = [&](int i) { return gd.spine.at("u")[static_cast<std::size_t>(i - 1)]; };
    for (int i = 3; i <= 4 * l - 5; i += 4) {
      s.push_back(u(i - 1));
      s.push_back(u(i));
      detail::append_interior(s, P.at(detail::key('P', i)), false);
    }
    s.push_back(u(4 * l - 2));
    s.push_back(u(4 * l - 1));
    detail::append_interior(s, P.at(detail::key('P', 4 * l - 3)), true);
    s.push_back(u(4 * l - 3));
    for (int i = 4 * l - 7; i >= 1; i -= 4) {
      s.push_back(u(i + 3));
      detail::append_interior(s, P.at(detail::key('P', i)), true);
      s.push_back(u(i));
    }
    s.push_back(w);
    s.push_back(u(4 * l));
    return s;
  }
  const Vertex x = w;
  const auto v = [&](const char* name, int i) { return gd.spine.at(name)[static_cast<std::size_t>(i - 1)]; };
  const auto in = [&](char c, int i, bool rev) { detail::append_interior(s, P.at(detail::key(c, i)), rev); };
  s.push_back(v("b", 1));
  for (int i = 2; i <= 2 * l - 2; i += 2) {
    s.push_back(v("a", i));
    in('P', i, false);
    s.push_back(v("b", i + 1));
  }
  s.push_back(v("a", 2 * l));
  in('P', 2 * l - 1, true);
  s.push_back(v("a", 2 * l - 1));
  for (int i = 2 * l - 3; i >= 3; i -= 2) {
    s.push_back(v("b", i + 1));
    in('P', i, true);
    s.push_back(v("a", i));
  }
  s.push_back(v("b", 2));
  detail::append_interior(s, P.at("R"), true);
  s.push_back(v("c", 1));
  s.push_back(x);
  s.push_back(v("a", 1));
  in('P', 1, false);
  s.push_back(v("c", 2 * l));
  for (int i = 2 * l - 1; i >= 3; i -= 2) {
    s.push_back(v("d", i));
    in('Q', i, false);
    s.push_back(v("c", i - 1));
  }
  s.push_back(v("d", 1));
  in('Q', 2, true);
  s.push_back(v("d", 2));
  for (int i = 4; i <= 2 * l; i += 2) {
    s.push_back(v("c", i - 1));
    in('Q', i, true);
    s.push_back(v("d", i));
  }
  s.push_back(y);
  s.push_back(v("b", 2 * l));
  return s;
}

inline std::vector<Vertex> current_sequence(const Gadget& gd) {
  if (!gd.used) return quiet_sequence(gd);
  return gd.mode == AbsorbMode::kStrong ? absorbing_sequence(gd, gd.absorbed[0])
                                        : absorbing_sequence(gd, gd.absorbed[0], gd.absorbed[1]);
}

namespace detail {

/// Neighbour rows inside f; for weak gadgets only the cross edges of the
/// bipartition are kept.
inline std::vector<VertexSet> wiring_adjacency(const ColouredGraph& g, View view, const VertexSet& f,
                                               const std::optional<VertexSet>& side_x) {
  std::vector<VertexSet> adj(static_cast<std::size_t>(g.order()), VertexSet(g.order()));
  f.for_each([&](Vertex v) {
    adj[static_cast<std::size_t>(v)] = g.neighbours(v, view) & f;
    if (side_x) adj[static_cast<std::size_t>(v)] &= side_x->contains(v) ? f - *side_x : *side_x;
  });
  return adj;
}

struct Wiring {
  std::span<const VertexSet> adj;
  VertexSet free;  // vertices still available for interiors
  const std::optional<VertexSet>* side_x;
  int max_edges;

  std::vector<Vertex> exact(Vertex a, Vertex b, int edges, const std::string& what) {
    auto p = find_path_of_length(adj, a, b, edges, free);
    if (!p) throw CapacityError("no fresh " + std::to_string(edges) + "-edge path for " + what);
    take(*p);
    return *p;
  }

  /// Shortest parity-correct length first; lengths grow by two.
  std::vector<Vertex> shortest(Vertex a, Vertex b, int min_edges, const std::string& what) {
    const bool same_side = (*side_x)->contains(a) == (*side_x)->contains(b);
    int edges = same_side ? 2 : 1;
    while (edges < min_edges) edges += 2;
    for (; edges <= max_edges; edges += 2) {
      if (auto p = find_path_of_length(adj, a, b, edges, free)) {
        take(*p);
        return *p;
      }
    }
    throw CapacityError("no fresh path for " + what);
  }

  void take(const std::vector<Vertex>& p) {
    for (Vertex v : p) free.erase(v);
  }
};

}  // namespace detail

/// Wires one gadget around `anchor` (a pair or a quadruple) through vertices
/// of f outside `occupied`. Anchor vertices must be unoccupied.
inline Gadget build_gadget(const ColouredGraph& g, View view, const VertexSet& f, const std::vector<Vertex>& anchor,
                           int l, const VertexSet& occupied, const std::optional<VertexSet>& side_x = std::nullopt) {
  Gadget gd;
  gd.anchor = anchor;
  gd.mode = anchor.size() == 2 ? AbsorbMode::kStrong : AbsorbMode::kWeak;
  if (anchor.size() != 2 && anchor.size() != 4) throw PreconditionError("anchor must be a pair or a quadruple");
  if (gd.mode == AbsorbMode::kWeak && !side_x) throw PreconditionError("weak gadget needs a bipartition");
  for (Vertex v : anchor) {
    if (!f.contains(v) || occupied.contains(v)) throw CapacityError("anchor vertex " + std::to_string(v) + " unavailable");
  }
  gd.l = gd.mode == AbsorbMode::kWeak ? std::max(2, l) : l;
  l = gd.l;
  const auto adj = detail::wiring_adjacency(g, view, f, side_x);
  detail::Wiring wire{adj, f - occupied, &side_x, 4 * l + 1};
  for (Vertex v : anchor) wire.free.erase(v);

  if (gd.mode == AbsorbMode::kStrong) {
    auto& u = gd.spine["u"] = wire.exact(anchor[0], anchor[1], 4 * l - 1, "the spine");
    const auto at = [&](int i) { return u[static_cast<std::size_t>(i - 1)]; };
    for (int i = 1; i <= 4 * l - 5; i += 2) {
      gd.paths[detail::key('P', i)] = wire.exact(at(i), at(i + 3), 4 * l - 1, detail::key('P', i));
    }
    gd.paths[detail::key('P', 4 * l - 3)] = wire.exact(at(4 * l - 3), at(4 * l - 1), 4 * l - 1, detail::key('P', 4 * l - 3));
    return gd;
  }

  // (a1 b1 ... a2l b2l) from a to b; (c1 d1 ... c2l d2l) from c to d.
  const auto ab = wire.exact(anchor[0], anchor[1], 4 * l - 1, "the a-b spine");
  const auto cd = wire.exact(anchor[2], anchor[3], 4 * l - 1, "the c-d spine");
  for (const char* name : {"a", "b", "c", "d"}) gd.spine[name].clear();
  for (int i = 0; i < 2 * l; ++i) {
    gd.spine["a"].push_back(ab[static_cast<std::size_t>(2 * i)]);
    gd.spine["b"].push_back(ab[static_cast<std::size_t>(2 * i + 1)]);
    gd.spine["c"].push_back(cd[static_cast<std::size_t>(2 * i)]);
    gd.spine["d"].push_back(cd[static_cast<std::size_t>(2 * i + 1)]);
  }
  const auto v = [&](const char* name, int i) { return gd.spine.at(name)[static_cast<std::size_t>(i - 1)]; };
  gd.paths["P1"] = wire.shortest(v("a", 1), v("c", 2 * l), 2, "P1");
  for (int i = 2; i <= 2 * l - 2; ++i) gd.paths[detail::key('P', i)] = wire.shortest(v("a", i), v("b", i + 1), 1, detail::key('P', i));
  gd.paths[detail::key('P', 2 * l - 1)] = wire.shortest(v("a", 2 * l - 1), v("a", 2 * l), 2, detail::key('P', 2 * l - 1));
  gd.paths["Q2"] = wire.shortest(v("d", 2), v("d", 1), 2, "Q2");
  for (int i = 3; i <= 2 * l; ++i) gd.paths[detail::key('Q', i)] = wire.shortest(v("d", i), v("c", i - 1), 1, detail::key('Q', i));
  gd.paths["R"] = wire.shortest(v("c", 1), v("b", 2), 1, "R");
  return gd;
}

// ---------------------------------------------------------------------------
// Absorbing path

struct AbsorbParams {
  AbsorbMode mode = AbsorbMode::kStrong;
  double rho = 0.3;
  double alpha = 0.5;
  int k = 1;
  int l = 0;       // 0: smallest l found by find_uniform_l
  double p = 0;    // 0: rho / (8 l^2)
  int n_ref = 0;   // 0: order of the graph
  std::optional<VertexSet> side_x;
  std::uint64_t seed = 0;
  std::uint64_t min_paths = 1;
};

struct AbsorbingPath {
  AbsorbMode mode = AbsorbMode::kStrong;
  View view = View::kRed;
  int l = 1;
  double rho = 0;
  double p = 0;
  int n_ref = 0;
  VertexSet f;
  std::optional<VertexSet> side_x;
  AnchorFamily anchors;
  std::vector<Gadget> gadgets;
  std::vector<std::vector<Vertex>> connectors;  // full paths joining gadget j to j + 1
  VertexSet original;
  VertexSet absorbed;
  std::pair<Vertex, Vertex> ends{-1, -1};
  int capacity = 0;  // admissible |W| (strong) or |W ∩ X| (weak)

  std::vector<Vertex> sequence() const {
    std::vector<Vertex> s;
    for (std::size_t j = 0; j < gadgets.size(); ++j) {
      const auto block = current_sequence(gadgets[j]);
      s.insert(s.end(), block.begin(), block.end());
      if (j < connectors.size()) detail::append_interior(s, connectors[j], false);
    }
    return s;
  }
};

/// Simple path through view edges, same ends as built, vertex set equal to
/// the original one plus everything absorbed. Empty string when fine.
inline std::string absorbing_path_violation(const ColouredGraph& g, const AbsorbingPath& q) {
  const auto s = q.sequence();
  if (s.empty()) return "empty path";
  VertexSet seen(g.order());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (seen.contains(s[i])) return "vertex " + std::to_string(s[i]) + " repeated";
    seen.insert(s[i]);
    if (i > 0 && !g.adjacent(s[i - 1], s[i], q.view)) {
      return "missing edge {" + std::to_string(s[i - 1]) + "," + std::to_string(s[i]) + "}";
    }
  }
  if (s.front() != q.ends.first || s.back() != q.ends.second) return "ends moved";
  if (!(seen == (q.original | q.absorbed))) return "vertex set differs from original plus absorbed";
  return {};
}

namespace detail {

inline void assert_valid(const ColouredGraph& g, const AbsorbingPath& q) {
  const auto why = absorbing_path_violation(g, q);
  if (!why.empty()) throw std::logic_error("absorbing path invariant broken: " + why);
}

inline int min_strong_coverage(const ColouredGraph& g, const AbsorbingPath& q, const VertexSet& outside) {
  std::vector<std::vector<Vertex>> anchors;
  for (const auto& gd : q.gadgets) anchors.push_back(gd.anchor);
  return min_pair_coverage(g, q.view, outside, anchors, VertexSet(g.order()));
}

}  // namespace detail

/// Builds the absorbing path of f: anchors, one gadget per anchor, joined by
/// connectors (4l - 1 edges strong; shortest even length weak). Gadgets are
/// added while the path stays within floor(rho * n) vertices.
inline AbsorbingPath build_absorbing_path(const ColouredGraph& g, View view, const VertexSet& f, const AbsorbParams& ps) {
  const int n = ps.n_ref > 0 ? ps.n_ref : g.order();
  const bool weak = ps.mode == AbsorbMode::kWeak;
  if (weak && !ps.side_x) throw PreconditionError("weak mode needs a bipartition");
  const auto check = check_robust(g, view, f, ps.alpha, ps.k, n, weak ? ps.side_x : std::nullopt);
  if (check.verdict != (weak ? Robustness::kWeak : Robustness::kStrong)) {
    throw PreconditionError(std::string("F is not ") + to_string(ps.mode) + "ly robust at the given parameters");
  }

  AbsorbingPath q;
  q.mode = ps.mode;
  q.view = view;
  q.rho = ps.rho;
  q.n_ref = n;
  q.f = f;
  q.side_x = ps.side_x;
  q.absorbed = VertexSet(g.order());
  q.original = VertexSet(g.order());
  q.l = ps.l > 0 ? ps.l : find_uniform_l(g, view, f, ps.k, weak ? ps.side_x : std::nullopt, ps.min_paths, 32, ps.seed).l;
  if (weak) q.l = std::max(2, q.l);
  q.p = ps.p > 0 ? ps.p : ps.rho / (8.0 * q.l * q.l);
  if (q.p * n < 1 - 1e-9) throw CapacityError("p * n < 1: no room for an anchor");
  q.anchors = sample_anchors(g, view, f, q.p, ps.mode, ps.seed, ps.alpha, n, ps.side_x);

  const int limit = static_cast<int>(std::floor(ps.rho * n + 1e-9));
  VertexSet occupied(g.order());
  for (const auto& a : q.anchors.members) {
    for (Vertex v : a) occupied.insert(v);
  }
  const auto adj = detail::wiring_adjacency(g, view, f, weak ? ps.side_x : std::nullopt);
  int size = 0;
  for (const auto& anchor : q.anchors.members) {
    VertexSet blocked = occupied;
    for (Vertex v : anchor) blocked.erase(v);
    Gadget gd = build_gadget(g, view, f, anchor, q.l, blocked, weak ? ps.side_x : std::nullopt);
    const auto block = quiet_sequence(gd);
    VertexSet taken = occupied;
    for (Vertex v : block) taken.insert(v);
    std::optional<std::vector<Vertex>> conn;
    if (!q.gadgets.empty()) {
      const Vertex from = quiet_sequence(q.gadgets.back()).back();
      detail::Wiring wire{adj, f - taken, &ps.side_x, 4 * q.l + 1};
      conn = weak ? wire.shortest(from, block.front(), 2, "connector")
                  : wire.exact(from, block.front(), 4 * q.l - 1, "connector");
    }
    const int grown = size + static_cast<int>(block.size()) + (conn ? static_cast<int>(conn->size()) - 2 : 0);
    if (grown > limit) break;
    size = grown;
    occupied = std::move(taken);
    if (conn) {
      for (Vertex v : *conn) occupied.insert(v);
      q.connectors.push_back(std::move(*conn));
    }
    q.gadgets.push_back(std::move(gd));
  }
  if (q.gadgets.empty()) throw CapacityError("rho * n = " + std::to_string(limit) + " vertices cannot hold a gadget");

  const auto s = q.sequence();
  for (Vertex v : s) q.original.insert(v);
  q.ends = {s.front(), s.back()};
  detail::assert_valid(g, q);

  const VertexSet outside = f - q.original;
  const int rho2 = static_cast<int>(std::floor(ps.rho * ps.rho * n + 1e-9));
  if (!weak) {
    q.capacity = std::min(rho2, detail::min_strong_coverage(g, q, outside));
  } else {
    std::vector<std::vector<Vertex>> quads;
    for (const auto& gd : q.gadgets) quads.push_back(gd.anchor);
    q.capacity = std::min(rho2, detail::min_quad_coverage(g, view, *ps.side_x & outside, outside - *ps.side_x, quads,
                                                          VertexSet(g.order())));
  }
  return q;
}

/// Swallows w into the unused gadget gadget_id (strong mode).
inline void absorb_one(const ColouredGraph& g, AbsorbingPath& q, std::size_t gadget_id, Vertex w) {
  if (q.mode != AbsorbMode::kStrong) throw PreconditionError("absorb_one is for strong paths; use absorb_pair");
  if (gadget_id >= q.gadgets.size()) throw PreconditionError("no gadget " + std::to_string(gadget_id));
  Gadget& gd = q.gadgets[gadget_id];
  if (gd.used) throw PreconditionError("gadget " + std::to_string(gadget_id) + " already used");
  if (w < 0 || w >= g.order() || q.original.contains(w) || q.absorbed.contains(w)) {
    throw PreconditionError("vertex " + std::to_string(w) + " is already on the path");
  }
  if (!g.adjacent(w, gd.anchor[0], q.view) || !g.adjacent(w, gd.anchor[1], q.view)) {
    throw PreconditionError("vertex " + std::to_string(w) + " is not adjacent to both anchors of gadget " +
                            std::to_string(gadget_id));
  }
  gd.used = true;
  gd.absorbed = {w};
  q.absorbed.insert(w);
  detail::assert_valid(g, q);
}

/// Swallows x (side X, adjacent to a and c) and y (side Y, adjacent to b and
/// d) into the unused quadruple gadget gadget_id.
inline void absorb_pair(const ColouredGraph& g, AbsorbingPath& q, std::size_t gadget_id, Vertex x, Vertex y) {
  if (q.mode != AbsorbMode::kWeak) throw PreconditionError("absorb_pair is for weak paths");
  if (gadget_id >= q.gadgets.size()) throw PreconditionError("no gadget " + std::to_string(gadget_id));
  Gadget& gd = q.gadgets[gadget_id];
  if (gd.used) throw PreconditionError("gadget " + std::to_string(gadget_id) + " already used");
  for (Vertex v : {x, y}) {
    if (v < 0 || v >= g.order() || q.original.contains(v) || q.absorbed.contains(v)) {
      throw PreconditionError("vertex " + std::to_string(v) + " is already on the path");
    }
  }
  if (!quad_fits(g, q.view, x, y, gd.anchor)) {
    throw PreconditionError("pair (" + std::to_string(x) + "," + std::to_string(y) + ") does not fit gadget " +
                            std::to_string(gadget_id));
  }
  gd.used = true;
  gd.absorbed = {x, y};
  q.absorbed.insert(x);
  q.absorbed.insert(y);
  detail::assert_valid(g, q);
}

/// Absorbs all of w. Strong: each vertex in increasing order takes the
/// lowest unused gadget adjacent to both anchors. Weak: W must be balanced;
/// the i-th smallest vertices of W ∩ X and W ∩ Y are paired.
inline void absorb_set(const ColouredGraph& g, AbsorbingPath& q, const VertexSet& w) {
  if (w.intersects(q.original | q.absorbed)) throw PreconditionError("W meets the path");
  if (!w.is_subset_of(q.f)) throw PreconditionError("W must lie inside F");
  const auto fits = [&](std::size_t j, const auto& ok) { return !q.gadgets[j].used && ok(q.gadgets[j]); };
  if (q.mode == AbsorbMode::kStrong) {
    for (Vertex v = w.first(); v >= 0; v = w.next_from(v + 1)) {
      std::size_t j = 0;
      const auto adjacent = [&](const Gadget& gd) {
        return g.adjacent(v, gd.anchor[0], q.view) && g.adjacent(v, gd.anchor[1], q.view);
      };
      while (j < q.gadgets.size() && !fits(j, adjacent)) ++j;
      if (j == q.gadgets.size()) throw ConstructionError("no unused gadget for vertex " + std::to_string(v));
      absorb_one(g, q, j, v);
    }
    return;
  }
  const auto xs = (w & *q.side_x).to_vector();
  const auto ys = (w - *q.side_x).to_vector();
  if (xs.size() != ys.size()) throw PreconditionError("W is not balanced across the bipartition");
  for (std::size_t i = 0; i < xs.size(); ++i) {
    std::size_t j = 0;
    const auto pairs = [&](const Gadget& gd) { return quad_fits(g, q.view, xs[i], ys[i], gd.anchor); };
    while (j < q.gadgets.size() && !fits(j, pairs)) ++j;
    if (j == q.gadgets.size()) {
      throw ConstructionError("no unused gadget for pair (" + std::to_string(xs[i]) + "," + std::to_string(ys[i]) + ")");
    }
    absorb_pair(g, q, j, xs[i], ys[i]);
  }
}

/// Random W outside the path within capacity; balanced in weak mode.
inline VertexSet random_admissible_set(const AbsorbingPath& q, Rng& rng) {
  const VertexSet outside = q.f - (q.original | q.absorbed);
  VertexSet w(outside.universe());
  if (q.mode == AbsorbMode::kStrong) {
    auto pool = outside.to_vector();
    rng.shuffle(pool);
    const int size = std::min<int>(rng.below(q.capacity + 1), static_cast<int>(pool.size()));
    for (int i = 0; i < size; ++i) w.insert(pool[static_cast<std::size_t>(i)]);
    return w;
  }
  auto xs = (outside & *q.side_x).to_vector();
  auto ys = (outside - *q.side_x).to_vector();
  rng.shuffle(xs);
  rng.shuffle(ys);
  const int size = std::min<int>({rng.below(q.capacity + 1), static_cast<int>(xs.size()), static_cast<int>(ys.size())});
  for (int i = 0; i < size; ++i) {
    w.insert(xs[static_cast<std::size_t>(i)]);
    w.insert(ys[static_cast<std::size_t>(i)]);
  }
  return w;
}

inline nlohmann::ordered_json to_json_value(const AbsorbingPath& q) {
  nlohmann::ordered_json j;
  const auto s = q.sequence();
  j["mode"] = to_string(q.mode);
  j["l"] = q.l;
  j["rho"] = q.rho;
  j["p"] = q.p;
  j["n_ref"] = q.n_ref;
  j["path"] = s;
  j["ends"] = {q.ends.first, q.ends.second};
  j["capacity"] = q.capacity;
  j["anchor_threshold"] = q.anchors.threshold;
  j["anchor_min_coverage"] = q.anchors.min_coverage;
  std::vector<std::size_t> where(static_cast<std::size_t>(q.f.universe()), SIZE_MAX);
  for (std::size_t i = 0; i < s.size(); ++i) where[static_cast<std::size_t>(s[i])] = i;
  auto arr = nlohmann::ordered_json::array();
  for (const auto& gd : q.gadgets) {
    nlohmann::ordered_json e;
    e["anchor"] = gd.anchor;
    e["used"] = gd.used;
    e["absorbed"] = gd.absorbed;
    nlohmann::ordered_json sp;
    for (const auto& [name, verts] : gd.spine) {
      std::vector<std::size_t> offs;
      for (Vertex v : verts) offs.push_back(where[static_cast<std::size_t>(v)]);
      sp[name] = {{"vertices", verts}, {"offsets", offs}};
    }
    e["spine"] = std::move(sp);
    nlohmann::ordered_json ps;
    for (const auto& [name, verts] : gd.paths) ps[name] = verts;
    e["paths"] = std::move(ps);
    arr.push_back(std::move(e));
  }
  j["gadgets"] = std::move(arr);
  j["connectors"] = q.connectors;
  return j;
}

}  // namespace monocycle
