#pragma once

// Maximum matchings (Edmonds blossom, Hopcroft-Karp), the exhaustive Tutte
// oracle and matching-or-structure dichotomies for tripartite and bipartite
// host graphs.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "monocycle/error.hpp"
#include "monocycle/graph.hpp"

namespace monocycle {

struct Matching {
  std::vector<Vertex> mate;  // -1 when unmatched

  Matching() = default;
  explicit Matching(int n) : mate(static_cast<std::size_t>(n), -1) {}

  int size() const {
    return static_cast<int>(std::count_if(mate.begin(), mate.end(), [](Vertex m) { return m >= 0; })) / 2;
  }

  std::vector<std::pair<Vertex, Vertex>> edges() const {
    std::vector<std::pair<Vertex, Vertex>> out;
    for (std::size_t v = 0; v < mate.size(); ++v) {
      if (mate[v] > static_cast<Vertex>(v)) out.emplace_back(static_cast<Vertex>(v), mate[v]);
    }
    return out;
  }

  bool covers(const VertexSet& s) const {
    bool ok = true;
    s.for_each([&](Vertex v) { ok = ok && mate[static_cast<std::size_t>(v)] >= 0; });
    return ok;
  }

  bool is_perfect() const {
    return std::all_of(mate.begin(), mate.end(), [](Vertex m) { return m >= 0; });
  }
};

/// Mates are symmetric and every matched pair is a view edge.
inline bool is_matching_in(const ColouredGraph& g, View view, const Matching& m) {
  if (static_cast<int>(m.mate.size()) != g.order()) return false;
  for (Vertex v = 0; v < g.order(); ++v) {
    const Vertex u = m.mate[static_cast<std::size_t>(v)];
    if (u < 0) continue;
    if (u >= g.order() || u == v || m.mate[static_cast<std::size_t>(u)] != v || !g.adjacent(u, v, view)) return false;
  }
  return true;
}

namespace detail {

// Edmonds' algorithm in the O(n^3) BFS formulation. Vertices are scanned in
// increasing order, so the result is a function of the graph alone.
class Blossom {
 public:
  Blossom(const ColouredGraph& g, View view, const VertexSet& within)
      : n_(g.order()), within_(within), match_(static_cast<std::size_t>(n_), -1) {
    adj_.resize(static_cast<std::size_t>(n_));
    within.for_each([&](Vertex v) { adj_[static_cast<std::size_t>(v)] = (g.neighbours(v, view) & within).to_vector(); });
  }

  void run() {
    for (Vertex v = within_.first(); v >= 0; v = within_.next_from(v + 1)) {
      if (match_[idx(v)] != -1) continue;
      const Vertex end = search({v});
      if (end >= 0) augment(end);
    }
  }

  /// Outer vertices of the alternating forest grown from every exposed
  /// vertex; after run() these are exactly the vertices some maximum
  /// matching misses.
  VertexSet outer_after_maximum() {
    std::vector<Vertex> roots;
    within_.for_each([&](Vertex v) {
      if (match_[idx(v)] == -1) roots.push_back(v);
    });
    if (search(roots) >= 0) throw ConstructionError("matching was not maximum");
    VertexSet out(n_);
    within_.for_each([&](Vertex v) {
      if (used_[idx(v)]) out.insert(v);
    });
    return out;
  }

  const std::vector<Vertex>& mates() const { return match_; }

 private:
  static std::size_t idx(Vertex v) { return static_cast<std::size_t>(v); }

  Vertex lca(Vertex a, Vertex b) {
    std::vector<bool> seen(static_cast<std::size_t>(n_), false);
    while (true) {
      a = base_[idx(a)];
      seen[idx(a)] = true;
      if (match_[idx(a)] == -1) break;
      a = parent_[idx(match_[idx(a)])];
    }
    while (true) {
      b = base_[idx(b)];
      if (seen[idx(b)]) return b;
      if (match_[idx(b)] == -1) throw ConstructionError("alternating trees met; matching was not maximum");
      b = parent_[idx(match_[idx(b)])];
    }
  }

  void mark_path(Vertex v, Vertex b, Vertex child) {
    while (base_[idx(v)] != b) {
      in_blossom_[idx(base_[idx(v)])] = true;
      in_blossom_[idx(base_[idx(match_[idx(v)])])] = true;
      parent_[idx(v)] = child;
      child = match_[idx(v)];
      v = parent_[idx(match_[idx(v)])];
    }
  }

  /// Grows alternating trees from roots; returns the exposed end of an
  /// augmenting path, or -1.
  Vertex search(const std::vector<Vertex>& roots) {
    used_.assign(static_cast<std::size_t>(n_), false);
    parent_.assign(static_cast<std::size_t>(n_), -1);
    base_.resize(static_cast<std::size_t>(n_));
    for (Vertex i = 0; i < n_; ++i) base_[idx(i)] = i;
    std::vector<bool> is_root(static_cast<std::size_t>(n_), false);
    std::deque<Vertex> queue;
    for (Vertex r : roots) {
      used_[idx(r)] = true;
      is_root[idx(r)] = true;
      queue.push_back(r);
    }
    while (!queue.empty()) {
      const Vertex v = queue.front();
      queue.pop_front();
      for (Vertex to : adj_[idx(v)]) {
        if (base_[idx(v)] == base_[idx(to)] || match_[idx(v)] == to) continue;
        const bool outer = is_root[idx(to)] || (match_[idx(to)] != -1 && parent_[idx(match_[idx(to)])] != -1);
        if (outer) {
          const Vertex cur = lca(v, to);
          in_blossom_.assign(static_cast<std::size_t>(n_), false);
          mark_path(v, cur, to);
          mark_path(to, cur, v);
          for (Vertex i = 0; i < n_; ++i) {
            if (in_blossom_[idx(base_[idx(i)])]) {
              base_[idx(i)] = cur;
              if (!used_[idx(i)]) {
                used_[idx(i)] = true;
                queue.push_back(i);
              }
            }
          }
        } else if (parent_[idx(to)] == -1) {
          parent_[idx(to)] = v;
          if (match_[idx(to)] == -1) return to;
          const Vertex next = match_[idx(to)];
          used_[idx(next)] = true;
          queue.push_back(next);
        }
      }
    }
    return -1;
  }

  void augment(Vertex v) {
    while (v != -1) {
      const Vertex pv = parent_[idx(v)];
      const Vertex ppv = match_[idx(pv)];
      match_[idx(v)] = pv;
      match_[idx(pv)] = v;
      v = ppv;
    }
  }

  int n_;
  VertexSet within_;
  std::vector<std::vector<Vertex>> adj_;
  std::vector<Vertex> match_;
  std::vector<Vertex> parent_;
  std::vector<Vertex> base_;
  std::vector<bool> used_;
  std::vector<bool> in_blossom_;
};

}  // namespace detail

/// Maximum matching of the view restricted to `within`.
inline Matching max_matching(const ColouredGraph& g, View view, const VertexSet& within) {
  detail::Blossom b(g, view, within);
  b.run();
  Matching m(g.order());
  m.mate = b.mates();
  return m;
}

inline Matching max_matching(const ColouredGraph& g, View view) {
  return max_matching(g, view, VertexSet::full(g.order()));
}

/// Hopcroft-Karp on the edges of the view between left and right.
inline Matching max_bipartite_matching(const ColouredGraph& g, View view, const VertexSet& left,
                                       const VertexSet& right) {
  if (left.intersects(right)) throw PreconditionError("bipartition sides overlap");
  const int n = g.order();
  const auto ls = left.to_vector();
  std::vector<std::vector<Vertex>> adj(static_cast<std::size_t>(n));
  for (Vertex u : ls) adj[static_cast<std::size_t>(u)] = (g.neighbours(u, view) & right).to_vector();
  Matching m(n);
  auto& mate = m.mate;
  constexpr int kInf = std::numeric_limits<int>::max();
  std::vector<int> dist(static_cast<std::size_t>(n), kInf);

  const auto bfs = [&] {
    std::deque<Vertex> q;
    bool found = false;
    for (Vertex u : ls) {
      if (mate[static_cast<std::size_t>(u)] == -1) {
        dist[static_cast<std::size_t>(u)] = 0;
        q.push_back(u);
      } else {
        dist[static_cast<std::size_t>(u)] = kInf;
      }
    }
    while (!q.empty()) {
      const Vertex u = q.front();
      q.pop_front();
      for (Vertex w : adj[static_cast<std::size_t>(u)]) {
        const Vertex back = mate[static_cast<std::size_t>(w)];
        if (back == -1) {
          found = true;
        } else if (dist[static_cast<std::size_t>(back)] == kInf) {
          dist[static_cast<std::size_t>(back)] = dist[static_cast<std::size_t>(u)] + 1;
          q.push_back(back);
        }
      }
    }
    return found;
  };

  std::vector<std::size_t> it(static_cast<std::size_t>(n), 0);
  const auto dfs = [&](auto&& self, Vertex u) -> bool {
    auto& i = it[static_cast<std::size_t>(u)];
    for (; i < adj[static_cast<std::size_t>(u)].size(); ++i) {
      const Vertex w = adj[static_cast<std::size_t>(u)][i];
      const Vertex back = mate[static_cast<std::size_t>(w)];
      if (back == -1 || (dist[static_cast<std::size_t>(back)] == dist[static_cast<std::size_t>(u)] + 1 && self(self, back))) {
        mate[static_cast<std::size_t>(u)] = w;
        mate[static_cast<std::size_t>(w)] = u;
        ++i;
        return true;
      }
    }
    dist[static_cast<std::size_t>(u)] = kInf;
    return false;
  };

  while (bfs()) {
    std::fill(it.begin(), it.end(), 0);
    for (Vertex u : ls) {
      if (mate[static_cast<std::size_t>(u)] == -1) dfs(dfs, u);
    }
  }
  return m;
}

/// Blossom in general; Hopcroft-Karp when a bipartition side is supplied.
inline Matching max_matching(const ColouredGraph& g, View view, const std::optional<VertexSet>& left_side) {
  if (!left_side) return max_matching(g, view);
  return max_bipartite_matching(g, view, *left_side, left_side->complement());
}

struct GallaiEdmonds {
  VertexSet d;  // missed by some maximum matching
  VertexSet a;  // neighbours of d outside d
  VertexSet c;  // everything else
  Matching matching;
};

inline GallaiEdmonds gallai_edmonds(const ColouredGraph& g, View view, const VertexSet& within) {
  detail::Blossom b(g, view, within);
  b.run();
  GallaiEdmonds out;
  out.d = b.outer_after_maximum();
  out.a = VertexSet(g.order());
  out.d.for_each([&](Vertex v) { out.a |= g.neighbours(v, view); });
  out.a &= within;
  out.a -= out.d;
  out.c = within - out.d - out.a;
  out.matching.mate = b.mates();
  return out;
}

inline GallaiEdmonds gallai_edmonds(const ColouredGraph& g, View view) {
  return gallai_edmonds(g, view, VertexSet::full(g.order()));
}

// ---------------------------------------------------------------------------
// Tutte oracle

inline constexpr int kTutteCap = 16;

/// Number of odd components of the graph on `alive` given neighbour masks.
inline int odd_components(const std::vector<std::uint32_t>& adj, std::uint32_t alive) {
  int odd = 0;
  while (alive != 0) {
    std::uint32_t comp = alive & (~alive + 1);
    std::uint32_t frontier = comp;
    while (frontier != 0) {
      std::uint32_t next = 0;
      for (std::uint32_t f = frontier; f != 0; f &= f - 1) next |= adj[static_cast<std::size_t>(std::countr_zero(f))];
      next &= alive & ~comp;
      comp |= next;
      frontier = next;
    }
    odd += std::popcount(comp) & 1;
    alive &= ~comp;
  }
  return odd;
}

struct TutteResult {
  bool ok = true;
  VertexSet violator;
  int odd_components = 0;
};

/// Exhaustive check of the Tutte condition; the violator reported is the
/// numerically smallest violating set.
inline TutteResult tutte_oracle(const ColouredGraph& g, View view) {
  const int n = g.order();
  if (n > kTutteCap) {
    throw CapacityError("Tutte oracle supports at most " + std::to_string(kTutteCap) + " vertices");
  }
  std::vector<std::uint32_t> adj(static_cast<std::size_t>(n));
  for (Vertex v = 0; v < n; ++v) adj[static_cast<std::size_t>(v)] = static_cast<std::uint32_t>(g.neighbours(v, view).mask());
  const std::uint32_t full = (std::uint32_t{1} << n) - 1;
  for (std::uint32_t u = 0; u <= full; ++u) {
    const int odd = odd_components(adj, full & ~u);
    if (odd > std::popcount(u)) return {false, VertexSet::from_mask(n, u), odd};
    if (u == full) break;
  }
  return {true, VertexSet(n), 0};
}

// ---------------------------------------------------------------------------
// Lemma dichotomies

inline constexpr double kSlack = 1e-9;

inline bool at_least(double lhs, double rhs) { return lhs >= rhs - kSlack; }

enum class WitnessKind {
  kIndependentPair,
  kSmallNeighbourhood,
  kLargeIndependent,
  kSplitIndependent,
  kNotTwoConnected,
};

inline const char* to_string(WitnessKind k) {
  switch (k) {
    case WitnessKind::kIndependentPair: return "independent-pair";
    case WitnessKind::kSmallNeighbourhood: return "small-neighbourhood";
    case WitnessKind::kLargeIndependent: return "large-independent";
    case WitnessKind::kSplitIndependent: return "split-independent";
    case WitnessKind::kNotTwoConnected: return "not-2-connected";
  }
  return "";
}

/// Structural certificate returned when a perfect matching is absent.
/// `set` is the independent set, or the cut for kNotTwoConnected; parts are
/// 0-based indices into the partition the lemma was called with.
struct StabilityWitness {
  WitnessKind kind = WitnessKind::kIndependentPair;
  double eps = 0;
  int part_i = -1;
  int part_j = -1;
  VertexSet set;
  VertexSet neighbourhood;
};

struct Exhaustion {
  std::string detail;
};

struct HallWitness {
  VertexSet a1;
  VertexSet a2;
};

using Partition = std::vector<VertexSet>;

inline bool is_independent(const ColouredGraph& g, View view, const VertexSet& s) {
  bool ok = true;
  s.for_each([&](Vertex v) { ok = ok && !g.neighbours(v, view).intersects(s); });
  return ok;
}

inline VertexSet neighbourhood(const ColouredGraph& g, View view, const VertexSet& s) {
  VertexSet out(g.order());
  s.for_each([&](Vertex v) { out |= g.neighbours(v, view); });
  return out;
}

inline void require_partition(const ColouredGraph& g, const Partition& parts, std::size_t count) {
  if (parts.size() != count) throw PreconditionError("expected " + std::to_string(count) + " parts");
  VertexSet seen(g.order());
  for (const auto& p : parts) {
    if (p.universe() != g.order()) throw PreconditionError("part has the wrong universe");
    if (p.intersects(seen)) throw PreconditionError("parts overlap");
    seen |= p;
  }
  if (seen.size() != g.order()) throw PreconditionError("parts do not cover the vertex set");
}

/// Removing `cut` disconnects the view (or leaves nothing).
inline bool disconnects(const ColouredGraph& g, View view, const VertexSet& cut) {
  const VertexSet rest = VertexSet::full(g.order()) - cut;
  return rest.empty() || components(g, view, rest).size() > 1;
}

/// Cut of size at most one, or nullopt when the view is 2-connected.
inline std::optional<VertexSet> small_cut(const ColouredGraph& g, View view) {
  const int n = g.order();
  if (disconnects(g, view, VertexSet(n))) return VertexSet(n);
  if (n < 3) return std::nullopt;
  for (Vertex v = 0; v < n; ++v) {
    if (disconnects(g, view, VertexSet(n, {v}))) return VertexSet(n, {v});
  }
  return std::nullopt;
}

inline double bound(double coeff, double eps_coeff, double eps, int n) { return (coeff + eps_coeff * eps) * n; }

/// Direct structural check of a witness against the graph and the
/// quantitative bounds of the lemma that produced it.
inline bool verify_witness(const ColouredGraph& g, View view, const Partition& parts, const StabilityWitness& w) {
  const int n = g.order();
  const auto part = [&](int i) -> const VertexSet& { return parts.at(static_cast<std::size_t>(i)); };
  switch (w.kind) {
    case WitnessKind::kIndependentPair:
      return is_independent(g, view, w.set) && w.set.is_subset_of(part(w.part_i) | part(w.part_j)) &&
             at_least(w.set.intersection_size(part(w.part_i)), bound(0.25, -5, w.eps, n)) &&
             at_least(w.set.intersection_size(part(w.part_j)), bound(0.25, -5, w.eps, n));
    case WitnessKind::kSmallNeighbourhood:
      return is_independent(g, view, w.set) && w.set.is_subset_of(part(w.part_i)) &&
             at_least(w.set.size(), bound(0.25, -4, w.eps, n)) && neighbourhood(g, view, w.set) == w.neighbourhood &&
             at_least(bound(0.25, 3, w.eps, n), w.neighbourhood.size());
    case WitnessKind::kLargeIndependent:
      return is_independent(g, view, w.set) && w.set.is_subset_of(part(w.part_i)) &&
             part(w.part_i).size() > part(1 - w.part_i).size() && at_least(w.set.size(), bound(0.5, -1, w.eps, n));
    case WitnessKind::kSplitIndependent:
      return is_independent(g, view, w.set) && at_least(w.set.size(), bound(0.5, -6, w.eps, n)) &&
             at_least(w.set.intersection_size(part(0)), bound(0.25, -9, w.eps, n)) &&
             at_least(w.set.intersection_size(part(1)), bound(0.25, -9, w.eps, n));
    case WitnessKind::kNotTwoConnected:
      return w.set.size() <= 1 && disconnects(g, view, w.set);
  }
  return false;
}

namespace detail {

/// One representative per component of the view on `alive`; for components
/// touching both preferred parts the representative goes to the smaller
/// running side. Representatives outside `allowed` are skipped.
inline VertexSet balanced_representatives(const ColouredGraph& g, View view, const VertexSet& alive,
                                          const VertexSet& side_a, const VertexSet& side_b) {
  VertexSet out(g.order());
  int count_a = 0;
  int count_b = 0;
  std::vector<VertexSet> flexible;
  for (const auto& comp : components(g, view, alive)) {
    const VertexSet in_a = comp & side_a;
    const VertexSet in_b = comp & side_b;
    if (!in_a.empty() && !in_b.empty()) {
      flexible.push_back(comp);
    } else if (!in_a.empty()) {
      out.insert(in_a.first());
      ++count_a;
    } else if (!in_b.empty()) {
      out.insert(in_b.first());
      ++count_b;
    }
  }
  for (const auto& comp : flexible) {
    if (count_a <= count_b) {
      out.insert((comp & side_a).first());
      ++count_a;
    } else {
      out.insert((comp & side_b).first());
      ++count_b;
    }
  }
  return out;
}

/// Local index of each member of s and neighbour masks restricted to s
/// (|s| <= 32).
struct LocalMasks {
  std::vector<Vertex> members;
  std::vector<std::uint32_t> adj;
};

inline LocalMasks local_masks(const ColouredGraph& g, View view, const VertexSet& s) {
  LocalMasks out;
  out.members = s.to_vector();
  for (Vertex v : out.members) {
    std::uint32_t m = 0;
    for (std::size_t i = 0; i < out.members.size(); ++i) {
      if (g.adjacent(v, out.members[i], view)) m |= std::uint32_t{1} << i;
    }
    out.adj.push_back(m);
  }
  return out;
}

inline VertexSet lift_mask(const LocalMasks& lm, std::uint32_t mask, int n) {
  VertexSet out(n);
  for (std::uint32_t r = mask; r != 0; r &= r - 1) out.insert(lm.members[static_cast<std::size_t>(std::countr_zero(r))]);
  return out;
}

inline bool independent_mask(const LocalMasks& lm, std::uint32_t mask) {
  for (std::uint32_t r = mask; r != 0; r &= r - 1) {
    if ((lm.adj[static_cast<std::size_t>(std::countr_zero(r))] & mask) != 0) return false;
  }
  return true;
}

}  // namespace detail

inline constexpr int kExhaustiveWitnessCap = 16;

/// Perfect matching of a tripartite graph whose parts have size at most n/2
/// and whose vertices x in X_i have degree > 3n/4 - |X_i|.
inline Matching tripartite_exact(const ColouredGraph& g, View view, const Partition& parts) {
  const int n = g.order();
  require_partition(g, parts, 3);
  if (n % 2 != 0) throw PreconditionError("tripartite matching needs an even vertex count");
  for (std::size_t i = 0; i < 3; ++i) {
    const int size = parts[i].size();
    if (2 * size > n) throw PreconditionError("part " + std::to_string(i + 1) + " exceeds n/2");
    bool ok = true;
    parts[i].for_each([&](Vertex x) {
      ok = ok && !g.neighbours(x, view).intersects(parts[i]) && 4 * g.degree(x, view) > 3 * n - 4 * size;
    });
    if (!ok) throw PreconditionError("part " + std::to_string(i + 1) + " violates independence or the degree bound");
  }
  Matching m = max_matching(g, view);
  if (!m.is_perfect()) throw std::logic_error("tripartite premises hold but no perfect matching was found");
  return m;
}

/// Perfect matching, or an independent set inside two parts with both
/// intersections at least (1/4 - 5 eps) n.
inline std::variant<Matching, StabilityWitness> tripartite_stability(const ColouredGraph& g, View view,
                                                                    const Partition& parts, double eps,
                                                                    int exhaustive_cap = kExhaustiveWitnessCap) {
  const int n = g.order();
  require_partition(g, parts, 3);
  if (n % 2 != 0) throw PreconditionError("tripartite matching needs an even vertex count");
  if (eps <= 0) throw PreconditionError("eps must be positive");
  for (std::size_t i = 0; i < 3; ++i) {
    const int size = parts[i].size();
    if (!at_least(bound(0.5, -4, eps, n), size)) {
      throw PreconditionError("part " + std::to_string(i + 1) + " exceeds (1/2 - 4 eps) n");
    }
    const VertexSet outside = parts[i].complement();
    bool ok = true;
    parts[i].for_each([&](Vertex x) { ok = ok && at_least(g.degree_into(x, view, outside), bound(0.75, -1, eps, n) - size); });
    if (!ok) throw PreconditionError("part " + std::to_string(i + 1) + " violates the degree bound");
  }

  Matching m = max_matching(g, view);
  if (m.is_perfect()) return m;

  const double need = bound(0.25, -5, eps, n);
  const std::pair<int, int> pairs[] = {{0, 1}, {0, 2}, {1, 2}};
  if (n <= exhaustive_cap) {
    for (auto [i, j] : pairs) {
      const VertexSet pool = parts[static_cast<std::size_t>(i)] | parts[static_cast<std::size_t>(j)];
      const auto lm = detail::local_masks(g, view, pool);
      const auto side_i = static_cast<std::uint32_t>(
          [&] {
            std::uint32_t s = 0;
            for (std::size_t k = 0; k < lm.members.size(); ++k) {
              if (parts[static_cast<std::size_t>(i)].contains(lm.members[k])) s |= std::uint32_t{1} << k;
            }
            return s;
          }());
      std::optional<std::uint32_t> best;
      int best_score = -1;
      for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << lm.members.size()); ++mask) {
        const int a = std::popcount(mask & side_i);
        const int b = std::popcount(mask & ~side_i);
        if (std::min(a, b) <= best_score || !detail::independent_mask(lm, mask)) continue;
        best_score = std::min(a, b);
        best = mask;
      }
      if (best && at_least(best_score, need)) {
        StabilityWitness w{WitnessKind::kIndependentPair, eps, i, j, detail::lift_mask(lm, *best, n), VertexSet(n)};
        if (!verify_witness(g, view, parts, w)) throw std::logic_error("independent-pair witness failed verification");
        return w;
      }
    }
  } else {
    const auto ge = gallai_edmonds(g, view);
    const VertexSet alive = VertexSet::full(n) - ge.a;
    for (auto [i, j] : pairs) {
      const VertexSet y = detail::balanced_representatives(g, view, alive, parts[static_cast<std::size_t>(i)],
                                                           parts[static_cast<std::size_t>(j)]);
      StabilityWitness w{WitnessKind::kIndependentPair, eps, i, j, y, VertexSet(n)};
      if (verify_witness(g, view, parts, w)) return w;
    }
  }
  throw ConstructionError("no perfect matching and no independent-pair witness at this scale");
}

/// Perfect matching of a balanced bipartite graph, or sets A_i in X_i of
/// size within (1/4 +- eps) n with no edges between them.
inline std::variant<Matching, HallWitness> hall_dichotomy(const ColouredGraph& g, View view, const Partition& parts,
                                                          double eps) {
  const int n = g.order();
  require_partition(g, parts, 2);
  const VertexSet& x1 = parts[0];
  const VertexSet& x2 = parts[1];
  if (x1.size() != x2.size()) throw PreconditionError("Hall dichotomy needs balanced parts");
  bool ok = true;
  for (Vertex v = 0; v < n; ++v) {
    const VertexSet& other = x1.contains(v) ? x2 : x1;
    ok = ok && at_least(g.degree_into(v, view, other), bound(0.25, -1, eps, n));
  }
  if (!ok) throw PreconditionError("minimum degree across the bipartition is below (1/4 - eps) n");

  Matching m = max_bipartite_matching(g, view, x1, x2);
  if (m.covers(x1)) return m;

  // Alternating search from an exposed vertex of X1: the reached X1 vertices
  // have fewer neighbours than members.
  const Vertex root = [&] {
    Vertex r = -1;
    x1.for_each([&](Vertex v) {
      if (r < 0 && m.mate[static_cast<std::size_t>(v)] < 0) r = v;
    });
    return r;
  }();
  VertexSet a1(n, {root});
  std::deque<Vertex> q{root};
  while (!q.empty()) {
    const Vertex u = q.front();
    q.pop_front();
    (g.neighbours(u, view) & x2).for_each([&](Vertex w) {
      const Vertex back = m.mate[static_cast<std::size_t>(w)];
      if (back >= 0 && !a1.contains(back)) {
        a1.insert(back);
        q.push_back(back);
      }
    });
  }
  HallWitness w{a1, x2 - neighbourhood(g, view, a1)};
  const bool sized = at_least(w.a1.size(), bound(0.25, -1, eps, n)) && at_least(bound(0.25, 1, eps, n), w.a1.size()) &&
                     at_least(w.a2.size(), bound(0.25, -1, eps, n)) && at_least(bound(0.25, 1, eps, n), w.a2.size());
  if (!sized || neighbourhood(g, view, w.a1).intersects(w.a2)) {
    throw std::logic_error("Hall witness failed verification");
  }
  return w;
}

/// Perfect matching, or one of the four structural outcomes; an Exhaustion
/// report when no outcome can be exhibited at this scale.
inline std::variant<Matching, StabilityWitness, Exhaustion> bipartite_technical(
    const ColouredGraph& g, View view, const Partition& parts, double eps, int exhaustive_cap = kExhaustiveWitnessCap) {
  const int n = g.order();
  require_partition(g, parts, 2);
  if (n % 2 != 0) throw PreconditionError("needs an even vertex count");
  for (std::size_t i = 0; i < 2; ++i) {
    const int size = parts[i].size();
    if (!at_least(size, bound(0.5, -1, eps, n))) {
      throw PreconditionError("part " + std::to_string(i + 1) + " is smaller than (1/2 - eps) n");
    }
    bool ok = true;
    parts[i].for_each([&](Vertex u) { ok = ok && at_least(g.degree_into(u, view, parts[1 - i]), bound(0.75, -1, eps, n) - size); });
    if (!ok) throw PreconditionError("part " + std::to_string(i + 1) + " violates the cross-degree bound");
  }

  Matching m = max_matching(g, view);
  if (m.is_perfect()) return m;

  const auto checked = [&](StabilityWitness w) -> std::optional<StabilityWitness> {
    if (verify_witness(g, view, parts, w)) return w;
    return std::nullopt;
  };

  if (auto cut = small_cut(g, view)) {
    StabilityWitness w{WitnessKind::kNotTwoConnected, eps, -1, -1, *cut, VertexSet(n)};
    if (!verify_witness(g, view, parts, w)) throw std::logic_error("cut witness failed verification");
    return w;
  }

  if (n <= std::min(exhaustive_cap, 24)) {
    const auto lm = detail::local_masks(g, view, VertexSet::full(n));
    std::vector<std::uint32_t> side(2, 0);
    for (Vertex v = 0; v < n; ++v) side[parts[0].contains(v) ? 0 : 1] |= std::uint32_t{1} << v;
    std::vector<std::uint32_t> independent;
    for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << n); ++mask) {
      if (detail::independent_mask(lm, mask)) independent.push_back(mask);
    }
    const auto nbhd = [&](std::uint32_t mask) {
      std::uint32_t out = 0;
      for (std::uint32_t r = mask; r != 0; r &= r - 1) out |= lm.adj[static_cast<std::size_t>(std::countr_zero(r))];
      return out;
    };
    for (int i = 0; i < 2; ++i) {
      for (std::uint32_t mask : independent) {
        if ((mask & ~side[static_cast<std::size_t>(i)]) != 0) continue;
        const VertexSet a = VertexSet::from_mask(n, mask);
        if (auto w = checked({WitnessKind::kSmallNeighbourhood, eps, i, -1, a, VertexSet::from_mask(n, nbhd(mask))})) return *w;
      }
    }
    for (int i = 0; i < 2; ++i) {
      for (std::uint32_t mask : independent) {
        if ((mask & ~side[static_cast<std::size_t>(i)]) != 0) continue;
        if (auto w = checked({WitnessKind::kLargeIndependent, eps, i, -1, VertexSet::from_mask(n, mask), VertexSet(n)})) return *w;
      }
    }
    for (std::uint32_t mask : independent) {
      if (auto w = checked({WitnessKind::kSplitIndependent, eps, -1, -1, VertexSet::from_mask(n, mask), VertexSet(n)})) return *w;
    }
    return Exhaustion{"exhaustive search over independent sets found no outcome"};
  }

  // Candidates from the Gallai-Edmonds barrier: isolated and representative
  // vertices of G - A, plus a degree-ordered greedy independent set per part.
  const auto ge = gallai_edmonds(g, view);
  const VertexSet alive = VertexSet::full(n) - ge.a;
  VertexSet isolated(n);
  alive.for_each([&](Vertex v) {
    if (!g.neighbours(v, view).intersects(alive)) isolated.insert(v);
  });
  const auto greedy = [&](const VertexSet& pool) {
    auto order = pool.to_vector();
    std::stable_sort(order.begin(), order.end(), [&](Vertex a, Vertex b) { return g.degree(a, view) < g.degree(b, view); });
    VertexSet out(n);
    for (Vertex v : order) {
      if (!g.neighbours(v, view).intersects(out)) out.insert(v);
    }
    return out;
  };
  for (int i = 0; i < 2; ++i) {
    for (const VertexSet& a : {isolated & parts[static_cast<std::size_t>(i)], greedy(parts[static_cast<std::size_t>(i)])}) {
      if (auto w = checked({WitnessKind::kSmallNeighbourhood, eps, i, -1, a, neighbourhood(g, view, a)})) return *w;
    }
  }
  for (int i = 0; i < 2; ++i) {
    const VertexSet reps = detail::balanced_representatives(g, view, alive & parts[static_cast<std::size_t>(i)],
                                                            parts[static_cast<std::size_t>(i)], VertexSet(n));
    for (const VertexSet& a : {reps, greedy(parts[static_cast<std::size_t>(i)])}) {
      if (auto w = checked({WitnessKind::kLargeIndependent, eps, i, -1, a, VertexSet(n)})) return *w;
    }
  }
  const VertexSet reps = detail::balanced_representatives(g, view, alive, parts[0], parts[1]);
  for (const VertexSet& a : {reps, greedy(VertexSet::full(n))}) {
    if (auto w = checked({WitnessKind::kSplitIndependent, eps, -1, -1, a, VertexSet(n)})) return *w;
  }
  return Exhaustion{"barrier and greedy candidates verified no outcome"};
}

}  // namespace monocycle
