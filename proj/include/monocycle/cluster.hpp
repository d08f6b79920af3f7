#pragma once

// Cluster graphs and their random blow-ups, robust subgraphs extracted from
// connected cluster components, monochromatic connected matchings, and the
// conversion of a connected matching into one long monochromatic cycle.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "monocycle/error.hpp"
#include "monocycle/graph.hpp"
#include "monocycle/hamiltonicity.hpp"
#include "monocycle/matching.hpp"
#include "monocycle/path_partition.hpp"
#include "monocycle/rng.hpp"
#include "monocycle/robustness.hpp"

namespace monocycle {

/// Clusters 0..m-1 with sizes; `reduced` carries the colour flags of each
/// pair as marks, `d` the density used when blowing up.
struct ClusterGraph {
  std::vector<int> sizes;
  double d = 0.5;
  ColouredGraph reduced;

  ClusterGraph() = default;
  ClusterGraph(std::vector<int> s, double density) : sizes(std::move(s)), d(density), reduced(static_cast<int>(sizes.size())) {}

  int clusters() const { return static_cast<int>(sizes.size()); }
  void flag(int i, int j, Mark m) { reduced.set_mark(i, j, m); }

  void validate() const {
    if (!(d > 0.0 && d <= 1.0)) throw PreconditionError("cluster density must lie in (0, 1]");
    for (int s : sizes) {
      if (s < 1) throw PreconditionError("cluster sizes must be at least 1");
    }
    if (reduced.order() != clusters()) throw PreconditionError("flag table does not match the cluster count");
  }
};

inline nlohmann::ordered_json to_json_value(const ClusterGraph& cg) {
  nlohmann::ordered_json j;
  j["sizes"] = cg.sizes;
  auto pairs = nlohmann::ordered_json::array();
  for (const auto& e : cg.reduced.edges()) pairs.push_back({e.u, e.v, to_string(e.mark)});
  j["pairs"] = std::move(pairs);
  j["d"] = cg.d;
  return j;
}

template <typename Json>
ClusterGraph cluster_graph_from_json_value(const Json& j) {
  if (!j.is_object() || !j.contains("sizes") || !j["sizes"].is_array()) {
    throw FormatError(FormatErrorCode::kBadShape, "expected object with array field 'sizes'");
  }
  std::vector<int> sizes;
  for (const auto& s : j["sizes"]) {
    if (!s.is_number_integer() || s.template get<long long>() < 1 || s.template get<long long>() > 100'000) {
      throw FormatError(FormatErrorCode::kOutOfRange, "cluster sizes must be integers in 1..100000");
    }
    sizes.push_back(s.template get<int>());
  }
  double d = 0.5;
  if (j.contains("d")) {
    if (!j["d"].is_number()) throw FormatError(FormatErrorCode::kBadShape, "'d' must be a number");
    d = j["d"].template get<double>();
    if (!(d > 0.0 && d <= 1.0)) throw FormatError(FormatErrorCode::kOutOfRange, "'d' must lie in (0, 1]");
  }
  ClusterGraph cg(std::move(sizes), d);
  const int m = cg.clusters();
  if (!j.contains("pairs")) return cg;
  if (!j["pairs"].is_array()) throw FormatError(FormatErrorCode::kBadShape, "'pairs' must be an array");
  for (const auto& p : j["pairs"]) {
    if (!p.is_array() || p.size() != 3 || !p[0].is_number_integer() || !p[1].is_number_integer() ||
        !p[2].is_string()) {
      throw FormatError(FormatErrorCode::kBadShape, "pair must be [i, j, colour]");
    }
    const auto a = p[0].template get<long long>();
    const auto b = p[1].template get<long long>();
    if (a < 0 || b < 0 || a >= m || b >= m) throw FormatError(FormatErrorCode::kOutOfRange, "cluster index out of range");
    if (a == b) throw FormatError(FormatErrorCode::kSelfLoop, "pair joins cluster " + std::to_string(a) + " to itself");
    const Mark mark = parse_mark(p[2].template get<std::string>());
    if (cg.reduced.mark(static_cast<int>(a), static_cast<int>(b)) != Mark::kNone) {
      throw FormatError(FormatErrorCode::kDuplicatePair, "cluster pair listed twice");
    }
    cg.flag(static_cast<int>(a), static_cast<int>(b), mark);
  }
  return cg;
}

inline ClusterGraph cluster_graph_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(FormatErrorCode::kMalformedJson, e.what());
  }
  return cluster_graph_from_json_value(j);
}

struct ClusterMap {
  std::vector<int> cluster_of;
  std::vector<VertexSet> members;

  VertexSet union_of(const VertexSet& clusters) const {
    VertexSet out(static_cast<int>(cluster_of.size()));
    clusters.for_each([&](int c) { out |= members[static_cast<std::size_t>(c)]; });
    return out;
  }
};

struct BlowUp {
  ColouredGraph g;
  ClusterGraph cg;
  ClusterMap map;
};

/// Clusters occupy consecutive vertex ranges. Every cross pair of a flagged
/// cluster pair receives each flagged colour independently with probability d.
inline BlowUp blow_up(const ClusterGraph& cg, std::uint64_t seed) {
  cg.validate();
  int n = 0;
  for (int s : cg.sizes) n += s;
  BlowUp out{ColouredGraph(n), cg, {}};
  out.map.cluster_of.resize(static_cast<std::size_t>(n));
  std::vector<int> start;
  for (int c = 0, v = 0; c < cg.clusters(); ++c) {
    start.push_back(v);
    VertexSet members(n);
    for (int i = 0; i < cg.sizes[static_cast<std::size_t>(c)]; ++i, ++v) {
      members.insert(v);
      out.map.cluster_of[static_cast<std::size_t>(v)] = c;
    }
    out.map.members.push_back(std::move(members));
  }
  Rng rng(seed);
  for (const auto& e : cg.reduced.edges()) {
    const bool red = mark_in_view(e.mark, View::kRed);
    const bool blue = mark_in_view(e.mark, View::kBlue);
    for (int a = 0; a < cg.sizes[static_cast<std::size_t>(e.u)]; ++a) {
      for (int b = 0; b < cg.sizes[static_cast<std::size_t>(e.v)]; ++b) {
        const int bits = (red && rng.bernoulli(cg.d) ? 1 : 0) | (blue && rng.bernoulli(cg.d) ? 2 : 0);
        if (bits != 0) {
          out.g.set_mark(start[static_cast<std::size_t>(e.u)] + a, start[static_cast<std::size_t>(e.v)] + b,
                         static_cast<Mark>(bits));
        }
      }
    }
  }
  return out;
}

inline nlohmann::ordered_json to_json_value(const ClusterMap& map) {
  auto clusters = nlohmann::ordered_json::array();
  for (const auto& m : map.members) clusters.push_back(m.to_vector());
  return clusters;
}

// ---------------------------------------------------------------------------
// Robust subgraphs of cluster components.

struct Extraction {
  View view = View::kRed;
  VertexSet clusters;
  VertexSet u;  // all vertices of the designated clusters
  VertexSet f;  // survivors
  std::vector<int> stripped;  // per designated cluster, in index order
  double retention = 0.0;
  RobustnessCheck check;
};

namespace detail {

inline void require_component(const ClusterGraph& cg, View view, const VertexSet& clusters) {
  if (clusters.universe() != cg.clusters()) throw PreconditionError("cluster set universe does not match");
  if (clusters.size() < 2) throw PreconditionError("a component needs at least two clusters");
  if (!is_connected(cg.reduced, view, clusters)) {
    throw PreconditionError("designated clusters are not connected in the " + std::string(to_string(view)) + " view");
  }
}

/// N_i for each designated cluster: the union of its flagged neighbours'
/// vertices inside the designated set.
inline std::vector<VertexSet> neighbour_unions(const ClusterGraph& cg, const ClusterMap& map, View view,
                                               const VertexSet& clusters) {
  std::vector<VertexSet> out(static_cast<std::size_t>(cg.clusters()), VertexSet(static_cast<int>(map.cluster_of.size())));
  clusters.for_each([&](int c) {
    out[static_cast<std::size_t>(c)] = map.union_of(cg.reduced.neighbours(c, view) & clusters);
  });
  return out;
}

/// Repeatedly removes v in cluster i with deg(v, N_i ∩ survivors) <= 3 eps |N_i|
/// until nothing changes.
inline void strip(const ColouredGraph& g, const ClusterMap& map, View view, const VertexSet& clusters,
                  const std::vector<VertexSet>& nbr, double eps, VertexSet& survivors) {
  for (bool changed = true; changed;) {
    changed = false;
    clusters.for_each([&](int c) {
      const auto& n_i = nbr[static_cast<std::size_t>(c)];
      const double floor = 3.0 * eps * n_i.size();
      (map.members[static_cast<std::size_t>(c)] & survivors).for_each([&](Vertex v) {
        if (g.degree_into(v, view, n_i & survivors) <= floor) {
          survivors.erase(v);
          changed = true;
        }
      });
    });
  }
}

}  // namespace detail

struct ExtractParams {
  double eps = 0.05;
  double alpha = 0.01;
  int k = 2;
  int n_ref = 0;  // 0: |U|
  int threads = 1;
};

inline Extraction finish_extraction(const BlowUp& b, View view, const VertexSet& clusters, const VertexSet& survivors,
                                    double min_retention, const ExtractParams& params) {
  Extraction out;
  out.view = view;
  out.clusters = clusters;
  out.u = b.map.union_of(clusters);
  out.f = out.u & survivors;
  clusters.for_each([&](int c) {
    const auto& mem = b.map.members[static_cast<std::size_t>(c)];
    out.stripped.push_back(mem.size() - (mem & survivors).size());
  });
  out.retention = out.u.empty() ? 1.0 : static_cast<double>(out.f.size()) / out.u.size();
  if (out.retention + 1e-12 < min_retention) {
    throw ConstructionError("retention " + std::to_string(out.retention) + " below " + std::to_string(min_retention) +
                            ": blow-up not dense enough for eps");
  }
  std::optional<VertexSet> side_x;
  if (const auto sides = bipartition(b.cg.reduced, view, clusters)) {
    side_x = b.map.union_of(*sides & clusters) & out.f;
  }
  const int n_ref = params.n_ref > 0 ? params.n_ref : out.u.size();
  out.check = check_robust(b.g, view, out.f, params.alpha, params.k, n_ref, side_x, params.threads);
  return out;
}

/// F on the survivors of the stripping inside the designated clusters, with
/// its robustness verdict: strong for a non-bipartite cluster component,
/// weak (sides = the two cluster classes) otherwise.
inline Extraction extract_robust_component(const BlowUp& b, View view, const VertexSet& clusters,
                                           const ExtractParams& params = {}) {
  detail::require_component(b.cg, view, clusters);
  const auto nbr = detail::neighbour_unions(b.cg, b.map, view, clusters);
  VertexSet survivors = b.map.union_of(clusters);
  detail::strip(b.g, b.map, view, clusters, nbr, params.eps, survivors);
  return finish_extraction(b, view, clusters, survivors, 1.0 - params.eps, params);
}

/// Several components at once over one shared survivor set: a vertex that
/// fails in any component it belongs to is gone from all of them.
inline std::vector<Extraction> extract_many(const BlowUp& b, const std::vector<std::pair<View, VertexSet>>& components,
                                            const ExtractParams& params = {}) {
  VertexSet survivors(b.g.order());
  std::vector<std::vector<VertexSet>> nbrs;
  for (const auto& [view, clusters] : components) {
    detail::require_component(b.cg, view, clusters);
    nbrs.push_back(detail::neighbour_unions(b.cg, b.map, view, clusters));
    survivors |= b.map.union_of(clusters);
  }
  for (int before = -1; before != survivors.size();) {
    before = survivors.size();
    for (std::size_t i = 0; i < components.size(); ++i) {
      detail::strip(b.g, b.map, components[i].first, components[i].second, nbrs[i], params.eps, survivors);
    }
  }
  std::vector<Extraction> out;
  for (const auto& [view, clusters] : components) {
    out.push_back(finish_extraction(b, view, clusters, survivors, 1.0 - 2.0 * params.eps, params));
  }
  return out;
}

inline nlohmann::ordered_json to_json_value(const Extraction& e) {
  nlohmann::ordered_json j;
  j["view"] = to_string(e.view);
  j["clusters"] = e.clusters.to_vector();
  j["size_u"] = e.u.size();
  j["size_f"] = e.f.size();
  j["retention"] = e.retention;
  j["stripped"] = e.stripped;
  j["robustness"] = to_json_value(e.check);
  return j;
}

// ---------------------------------------------------------------------------
// Connected matchings.

struct ConnectedMatching {
  View view = View::kRed;
  std::vector<std::pair<int, int>> edges;
  VertexSet component;

  int size() const { return static_cast<int>(edges.size()); }
};

/// Maximum matching inside each component of the view; the largest wins,
/// ties going to the component with the lowest vertex.
inline ConnectedMatching find_connected_matching(const ColouredGraph& reduced, View view) {
  ConnectedMatching best;
  best.view = view;
  best.component = VertexSet(reduced.order());
  bool first = true;
  for (const auto& comp : components(reduced, view)) {
    const auto m = max_matching(reduced, view, comp);
    if (first || m.size() > best.size()) {
      best.edges = m.edges();
      best.component = comp;
      first = false;
    }
  }
  return best;
}

inline bool is_connected_matching(const ColouredGraph& reduced, const ConnectedMatching& cm) {
  if (cm.component.universe() != reduced.order()) return false;
  if (!cm.component.empty() && !is_connected(reduced, cm.view, cm.component)) return false;
  VertexSet used(reduced.order());
  for (const auto& [a, b] : cm.edges) {
    if (a < 0 || b < 0 || a >= reduced.order() || b >= reduced.order()) return false;
    if (used.contains(a) || used.contains(b) || !reduced.adjacent(a, b, cm.view)) return false;
    if (!cm.component.contains(a) || !cm.component.contains(b)) return false;
    used.insert(a);
    used.insert(b);
  }
  return true;
}

inline nlohmann::ordered_json to_json_value(const ConnectedMatching& cm) {
  nlohmann::ordered_json j;
  j["view"] = to_string(cm.view);
  j["size"] = cm.size();
  auto edges = nlohmann::ordered_json::array();
  for (const auto& [a, b] : cm.edges) edges.push_back({a, b});
  j["edges"] = std::move(edges);
  j["component"] = cm.component.to_vector();
  return j;
}

// ---------------------------------------------------------------------------
// Matching to cycle.

struct ConversionParams {
  double eps = 0.1;
  double floor_factor = 6.0;
  std::optional<std::pair<Vertex, Vertex>> endpoints;
  std::int64_t search_budget = 200'000;
};

struct Conversion {
  bool is_path = false;
  std::vector<Vertex> walk;  // cycle or path
  VertexSet u;               // vertices of the matched clusters
  int covered = 0;           // |walk ∩ U|
  double coverage = 0.0;
  double floor = 0.0;
};

namespace detail {

inline int ceil_frac(double x, int size) { return static_cast<int>(std::ceil(x * size - 1e-9)); }

/// Cluster-level BFS from `from` to `to` inside the component, avoiding
/// clusters whose connector allowance is spent. Interior clusters only.
inline std::optional<std::vector<int>> cluster_route(const ColouredGraph& reduced, View view, const VertexSet& component,
                                                     int from, int to, const std::vector<int>& spare) {
  const int m = reduced.order();
  std::vector<int> parent(static_cast<std::size_t>(m), -2);
  std::deque<int> queue{from};
  parent[static_cast<std::size_t>(from)] = -1;
  while (!queue.empty()) {
    const int c = queue.front();
    queue.pop_front();
    if (c == to) break;
    (reduced.neighbours(c, view) & component).for_each([&](int nb) {
      if (parent[static_cast<std::size_t>(nb)] != -2) return;
      if (nb != to && spare[static_cast<std::size_t>(nb)] <= 0) return;
      parent[static_cast<std::size_t>(nb)] = c;
      queue.push_back(nb);
    });
  }
  if (parent[static_cast<std::size_t>(to)] == -2) return std::nullopt;
  std::vector<int> route;
  for (int c = to; c != -1; c = parent[static_cast<std::size_t>(c)]) route.push_back(c);
  std::reverse(route.begin(), route.end());
  return route;
}

struct Connector {
  std::vector<Vertex> interior;  // one vertex per interior cluster
  bool broken = false;           // endpoint mode: the walk is cut here
};

/// One vertex per interior cluster of the route, consecutive ones adjacent,
/// the first with >= need_a free neighbours in the route's first cluster and
/// the last with >= need_b in its last.
inline std::optional<std::vector<Vertex>> connector_vertices(const ColouredGraph& g, View view, const ClusterMap& map,
                                                             const std::vector<int>& route, const VertexSet& free,
                                                             int need_a, int need_b, std::int64_t& budget) {
  const std::size_t inner = route.size() - 2;
  if (inner == 0) return std::vector<Vertex>{};
  const VertexSet& first = map.members[static_cast<std::size_t>(route.front())];
  const VertexSet& last = map.members[static_cast<std::size_t>(route.back())];
  std::vector<Vertex> chosen;
  auto ok_end = [&](Vertex v, std::size_t pos) {
    if (pos == 0 && g.degree_into(v, view, first & free) < need_a) return false;
    if (pos + 1 == inner && g.degree_into(v, view, last & free) < need_b) return false;
    return true;
  };
  auto dfs = [&](auto&& self, std::size_t pos) -> bool {
    if (pos == inner) return true;
    if (--budget < 0) return false;
    VertexSet cand = map.members[static_cast<std::size_t>(route[pos + 1])] & free;
    if (pos > 0) cand &= g.neighbours(chosen.back(), view);
    for (Vertex v = cand.first(); v >= 0; v = cand.next_from(v + 1)) {
      if (!ok_end(v, pos)) continue;
      chosen.push_back(v);
      if (self(self, pos + 1)) return true;
      chosen.pop_back();
    }
    return false;
  };
  if (!dfs(dfs, 0)) return std::nullopt;
  return chosen;
}

/// Up to `count` lowest members of cand.
inline VertexSet lowest(const VertexSet& cand, int count) {
  VertexSet out(cand.universe());
  for (Vertex v = cand.first(); v >= 0 && out.size() < count; v = cand.next_from(v + 1)) out.insert(v);
  return out;
}

/// Threads leftover vertices back into the walk, singly between two
/// consecutive neighbours or as an adjacent pair x-v-w-y.
inline void patch_in(const ColouredGraph& g, View view, std::vector<Vertex>& walk, VertexSet spare, bool cyclic) {
  for (bool grew = true; grew && !spare.empty() && !walk.empty();) {
    grew = false;
    for (Vertex v = spare.first(); v >= 0; v = spare.next_from(v + 1)) {
      const VertexSet& nv = g.neighbours(v, view);
      const std::size_t gaps = cyclic ? walk.size() : walk.size() - 1;
      bool placed = false;
      for (std::size_t i = 0; i < gaps && !placed; ++i) {
        const Vertex x = walk[i];
        const Vertex y = walk[(i + 1) % walk.size()];
        if (!nv.contains(x)) continue;
        if (nv.contains(y)) {
          walk.insert(walk.begin() + static_cast<std::ptrdiff_t>(i + 1), v);
          spare.erase(v);
          placed = true;
          continue;
        }
        const Vertex w = (nv & spare & g.neighbours(y, view)).first();
        if (w < 0) continue;
        walk.insert(walk.begin() + static_cast<std::ptrdiff_t>(i + 1), {v, w});
        spare.erase(v);
        spare.erase(w);
        placed = true;
      }
      grew = grew || placed;
    }
  }
}

}  // namespace detail

/// Long cycle through the matched cluster pairs. Each matched pair (i, j)
/// contributes a path alternating V_i and V_j from the path partition of its
/// cross edges; consecutive pairs are joined through reserved landing sets
/// A ⊂ V_j, B ⊂ V_i' and a short connector that uses at most one vertex per
/// cluster. With endpoints (s, t) the same construction yields an s-t path.
inline Conversion matching_to_cycle(const BlowUp& b, const ConnectedMatching& cm, const VertexSet& reserved,
                                    const ConversionParams& params = {}) {
  const auto& cg = b.cg;
  const auto& g = b.g;
  const View view = cm.view;
  const double eps = params.eps;
  if (eps <= 0.0) throw PreconditionError("eps must be positive");
  if (cg.d < 3.0 * eps) throw PreconditionError("cluster density must be at least 3 eps");
  if (cm.edges.empty()) throw PreconditionError("matching is empty");
  if (!is_connected_matching(cg.reduced, cm)) throw PreconditionError("matching is not a connected matching of the view");
  if (reserved.universe() != g.order()) throw PreconditionError("reserved set universe does not match");

  const int m = cm.size();
  const auto& members = b.map.members;
  auto cluster = [&](int c) -> const VertexSet& { return members[static_cast<std::size_t>(c)]; };
  auto csize = [&](int c) { return cg.sizes[static_cast<std::size_t>(c)]; };

  Conversion out;
  out.is_path = params.endpoints.has_value();
  out.u = VertexSet(g.order());
  for (const auto& [i, j] : cm.edges) out.u |= cluster(i) | cluster(j);

  VertexSet free = VertexSet::full(g.order()) - reserved;
  Vertex s_end = -1;
  Vertex t_end = -1;
  if (params.endpoints) {
    s_end = params.endpoints->first;
    t_end = params.endpoints->second;
    if (s_end == t_end || !free.contains(s_end) || !free.contains(t_end)) {
      throw PreconditionError("endpoints must be two distinct unreserved vertices");
    }
    free.erase(s_end);
    free.erase(t_end);
  }

  // Connector l leaves pair l from its j-side and lands on pair l+1's i-side.
  std::vector<int> spare(static_cast<std::size_t>(cg.clusters()));
  for (int c = 0; c < cg.clusters(); ++c) spare[static_cast<std::size_t>(c)] = std::max(1, detail::ceil_frac(eps, csize(c)));
  std::vector<detail::Connector> conn(static_cast<std::size_t>(m));
  std::vector<VertexSet> land_a(static_cast<std::size_t>(m), VertexSet(g.order()));
  std::vector<VertexSet> land_b(static_cast<std::size_t>(m), VertexSet(g.order()));
  std::int64_t budget = params.search_budget;
  for (int l = 0; l < m; ++l) {
    const int jl = cm.edges[static_cast<std::size_t>(l)].second;
    const int in = cm.edges[static_cast<std::size_t>((l + 1) % m)].first;
    const int need_a = detail::ceil_frac(2.0 * eps, csize(jl));
    const int need_b = detail::ceil_frac(2.0 * eps, csize(in));
    const int take_a = std::max(1, detail::ceil_frac(eps, csize(jl)));
    const int take_b = std::max(1, detail::ceil_frac(eps, csize(in)));
    const std::string label = "connector " + std::to_string(jl) + "->" + std::to_string(in);
    auto& c = conn[static_cast<std::size_t>(l)];
    if (out.is_path && l == m - 1) {
      // The walk is cut here: t closes the last pair, s opens the first.
      c.broken = true;
      c.interior = {t_end, s_end};
      if (g.degree_into(t_end, view, cluster(jl) & free) < need_a ||
          g.degree_into(s_end, view, cluster(in) & free) < need_b) {
        throw ConstructionError(label + ": an endpoint lacks neighbours in its landing cluster");
      }
    } else {
      const auto route = detail::cluster_route(cg.reduced, view, cm.component, jl, in, spare);
      if (!route) throw ConstructionError(label + ": no cluster route");
      auto verts = detail::connector_vertices(g, view, b.map, *route, free, need_a, need_b, budget);
      if (!verts) throw ConstructionError(label + ": no vertex connector");
      for (std::size_t p = 1; p + 1 < route->size(); ++p) --spare[static_cast<std::size_t>((*route)[p])];
      c.interior = std::move(*verts);
      for (Vertex v : c.interior) free.erase(v);
    }
    if (!c.interior.empty()) {
      land_a[static_cast<std::size_t>(l)] =
          detail::lowest(cluster(jl) & free & g.neighbours(c.interior.front(), view), take_a);
      free -= land_a[static_cast<std::size_t>(l)];
      land_b[static_cast<std::size_t>(l)] =
          detail::lowest(cluster(in) & free & g.neighbours(c.interior.back(), view), take_b);
      free -= land_b[static_cast<std::size_t>(l)];
    } else {
      // Adjacent clusters: the landing sets must see each other directly.
      land_a[static_cast<std::size_t>(l)] = detail::lowest(cluster(jl) & free, take_a);
      free -= land_a[static_cast<std::size_t>(l)];
      VertexSet reach(g.order());
      land_a[static_cast<std::size_t>(l)].for_each([&](Vertex a) { reach |= g.neighbours(a, view); });
      land_b[static_cast<std::size_t>(l)] = detail::lowest(cluster(in) & free & reach, take_b);
      free -= land_b[static_cast<std::size_t>(l)];
    }
    if (land_a[static_cast<std::size_t>(l)].empty() || land_b[static_cast<std::size_t>(l)].empty()) {
      throw ConstructionError(label + ": empty landing set");
    }
  }

  // Long path inside every matched pair, oriented j-side first.
  std::vector<std::vector<Vertex>> q(static_cast<std::size_t>(m));
  for (int l = 0; l < m; ++l) {
    const auto [il, jl] = cm.edges[static_cast<std::size_t>(l)];
    const VertexSet vi = cluster(il) & free;
    const VertexSet vj = cluster(jl) & free;
    const auto adj = cross_adjacency(g, view, vi, vj);
    auto path = path_partition(adj, vi | vj).path;
    if (!path.empty() && vi.contains(path.front())) std::reverse(path.begin(), path.end());
    q[static_cast<std::size_t>(l)] = std::move(path);
  }

  // Splice l: end of Q_l -> a in A_l -> connector -> b in B_l -> start of Q_{l+1}.
  std::vector<std::size_t> head(static_cast<std::size_t>(m), 0);
  std::vector<std::size_t> tail(static_cast<std::size_t>(m), 0);  // exclusive end
  std::vector<Vertex> pick_a(static_cast<std::size_t>(m), -1);
  std::vector<Vertex> pick_b(static_cast<std::size_t>(m), -1);
  for (int l = 0; l < m; ++l) {
    const auto& ql = q[static_cast<std::size_t>(l)];
    const auto& qn = q[static_cast<std::size_t>((l + 1) % m)];
    const auto [il, jl] = cm.edges[static_cast<std::size_t>(l)];
    const int in = cm.edges[static_cast<std::size_t>((l + 1) % m)].first;
    const int jn = cm.edges[static_cast<std::size_t>((l + 1) % m)].second;
    const std::size_t trim_l = static_cast<std::size_t>(detail::ceil_frac(2.0 * eps, std::min(csize(il), csize(jl))));
    const std::size_t trim_n = static_cast<std::size_t>(detail::ceil_frac(2.0 * eps, std::min(csize(in), csize(jn))));
    const auto& c = conn[static_cast<std::size_t>(l)];
    const std::string label = "splice after pair (" + std::to_string(il) + "," + std::to_string(jl) + ")";
    if (ql.size() < 2 || qn.size() < 2) throw ConstructionError(label + ": pair path too short");
    bool done = false;
    // Ends of Q_l lie in V_i, starts of Q_{l+1} in V_j'.
    for (std::size_t te = 0; te <= trim_l && te < ql.size() && !done; ++te) {
      const Vertex e = ql[ql.size() - 1 - te];
      if (!cluster(il).contains(e)) continue;
      for (std::size_t ts = 0; ts <= trim_n && ts < qn.size() && !done; ++ts) {
        const Vertex s = qn[ts];
        if (!cluster(jn).contains(s)) continue;
        // With one pair both cuts live on the same path; keep them apart.
        if (m == 1 && ts + te + 2 > ql.size()) continue;
        const VertexSet as = land_a[static_cast<std::size_t>(l)] & g.neighbours(e, view);
        const VertexSet bs = land_b[static_cast<std::size_t>(l)] & g.neighbours(s, view);
        as.for_each([&](Vertex a) {
          if (done) return;
          bs.for_each([&](Vertex bb) {
            if (done) return;
            if (c.interior.empty() && !g.adjacent(a, bb, view)) return;
            pick_a[static_cast<std::size_t>(l)] = a;
            pick_b[static_cast<std::size_t>(l)] = bb;
            tail[static_cast<std::size_t>(l)] = ql.size() - te;
            head[static_cast<std::size_t>((l + 1) % m)] = ts;
            done = true;
          });
        });
      }
    }
    if (!done) throw ConstructionError(label + ": no landing edge within the trim window");
  }

  std::vector<Vertex> walk;
  for (int l = 0; l < m; ++l) {
    const auto& ql = q[static_cast<std::size_t>(l)];
    if (head[static_cast<std::size_t>(l)] >= tail[static_cast<std::size_t>(l)]) {
      throw ConstructionError("pair path trimmed away");
    }
    walk.insert(walk.end(), ql.begin() + static_cast<std::ptrdiff_t>(head[static_cast<std::size_t>(l)]),
                ql.begin() + static_cast<std::ptrdiff_t>(tail[static_cast<std::size_t>(l)]));
    walk.push_back(pick_a[static_cast<std::size_t>(l)]);
    const auto& inner = conn[static_cast<std::size_t>(l)].interior;
    walk.insert(walk.end(), inner.begin(), inner.end());
    walk.push_back(pick_b[static_cast<std::size_t>(l)]);
  }
  if (out.is_path) {
    // Rotate so the walk reads s ... t.
    const auto it = std::find(walk.begin(), walk.end(), s_end);
    std::rotate(walk.begin(), it, walk.end());
    if (walk.back() != t_end) throw std::logic_error("endpoint rotation lost t");
  }
  VertexSet leftover = out.u - reserved - VertexSet::from(g.order(), walk);
  detail::patch_in(g, view, walk, leftover, !out.is_path);

  const bool shaped = out.is_path ? is_path_in(g, view, walk) : is_cycle_in(g, view, walk);
  if (!shaped) throw std::logic_error("assembled walk is not a monochromatic " + std::string(out.is_path ? "path" : "cycle"));
  for (Vertex v : walk) {
    if (reserved.contains(v)) throw std::logic_error("assembled walk touches a reserved vertex");
  }
  out.walk = std::move(walk);
  for (Vertex v : out.walk) out.covered += out.u.contains(v) ? 1 : 0;
  out.coverage = out.u.empty() ? 1.0 : static_cast<double>(out.covered) / out.u.size();
  out.floor = 1.0 - params.floor_factor * eps;
  if (out.coverage + 1e-12 < out.floor) {
    throw ConstructionError("coverage " + std::to_string(out.covered) + "/" + std::to_string(out.u.size()) +
                            " below the floor");
  }
  return out;
}

/// Two vertex-disjoint cycles: the first conversion runs with the second
/// matching's clusters untouched apart from connectors, the second reserves
/// everything the first used. Both use the looser floor factor 9.
inline std::pair<Conversion, Conversion> two_cycles(const BlowUp& b, const ConnectedMatching& first,
                                                    const ConnectedMatching& second, double eps) {
  VertexSet c1(b.cg.clusters());
  VertexSet c2(b.cg.clusters());
  for (const auto& [x, y] : first.edges) { c1.insert(x); c1.insert(y); }
  for (const auto& [x, y] : second.edges) { c2.insert(x); c2.insert(y); }
  if (c1.intersects(c2)) throw PreconditionError("matched cluster sets must be disjoint");
  ConversionParams p;
  p.eps = eps;
  p.floor_factor = 9.0;
  const auto one = matching_to_cycle(b, first, VertexSet(b.g.order()), p);
  const auto two = matching_to_cycle(b, second, VertexSet::from(b.g.order(), one.walk), p);
  return {one, two};
}

inline nlohmann::ordered_json to_json_value(const Conversion& c) {
  nlohmann::ordered_json j;
  j["kind"] = c.is_path ? "path" : "cycle";
  j["length"] = c.walk.size();
  j["size_u"] = c.u.size();
  j["covered"] = c.covered;
  j["coverage"] = c.coverage;
  j["floor"] = c.floor;
  j["walk"] = c.walk;
  return j;
}

}  // namespace monocycle
