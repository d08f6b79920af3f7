#pragma once

// Data model shared by every module: dense vertex ids, a bitset vertex set and
// a graph whose edges carry a red mark, a blue mark, or both.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <boost/container/small_vector.hpp>
#include <json.hpp>

#include "monocycle/error.hpp"
#include "monocycle/rng.hpp"

#ifndef MONOCYCLE_INLINE_WORDS
#define MONOCYCLE_INLINE_WORDS 1
#endif

namespace monocycle {

using Vertex = int;

enum class Mark : std::uint8_t { kNone = 0, kRed = 1, kBlue = 2, kBoth = 3 };

/// Which colour class a query looks at. kUnion is the underlying graph.
enum class View : std::uint8_t { kRed, kBlue, kUnion };

inline bool mark_in_view(Mark m, View view) {
  switch (view) {
    case View::kRed: return (static_cast<int>(m) & 1) != 0;
    case View::kBlue: return (static_cast<int>(m) & 2) != 0;
    case View::kUnion: return m != Mark::kNone;
  }
  return false;
}

inline const char* to_string(Mark m) {
  switch (m) {
    case Mark::kRed: return "R";
    case Mark::kBlue: return "B";
    case Mark::kBoth: return "RB";
    case Mark::kNone: break;
  }
  return "";
}

inline const char* to_string(View v) {
  switch (v) {
    case View::kRed: return "R";
    case View::kBlue: return "B";
    case View::kUnion: return "U";
  }
  return "";
}

inline std::optional<View> parse_view(const std::string& s) {
  if (s == "R" || s == "r" || s == "red") return View::kRed;
  if (s == "B" || s == "b" || s == "blue") return View::kBlue;
  if (s == "U" || s == "u" || s == "union") return View::kUnion;
  return std::nullopt;
}

inline Mark mark_of(View v) {
  switch (v) {
    case View::kRed: return Mark::kRed;
    case View::kBlue: return Mark::kBlue;
    case View::kUnion: return Mark::kBoth;
  }
  return Mark::kNone;
}

/// Bitset over the universe 0..universe-1. Up to 64 * MONOCYCLE_INLINE_WORDS
/// vertices live inline; larger universes spill to the heap.
class VertexSet {
 public:
  VertexSet() = default;

  explicit VertexSet(int universe)
      : universe_(universe), words_(static_cast<std::size_t>((universe + 63) / 64), 0) {}

  VertexSet(int universe, std::initializer_list<Vertex> members) : VertexSet(universe) {
    for (Vertex v : members) insert(v);
  }

  template <typename Range>
  static VertexSet from(int universe, const Range& members) {
    VertexSet s(universe);
    for (Vertex v : members) s.insert(v);
    return s;
  }

  static VertexSet full(int universe) {
    VertexSet s(universe);
    for (auto& w : s.words_) w = ~std::uint64_t{0};
    s.trim();
    return s;
  }

  /// Set whose members are the bits of mask (universe <= 64).
  static VertexSet from_mask(int universe, std::uint64_t mask) {
    VertexSet s(universe);
    if (!s.words_.empty()) s.words_[0] = mask;
    s.trim();
    return s;
  }

  int universe() const { return universe_; }

  bool contains(Vertex v) const {
    return v >= 0 && v < universe_ && ((words_[word_of(v)] >> bit_of(v)) & 1U) != 0;
  }

  void insert(Vertex v) { words_[word_of(v)] |= std::uint64_t{1} << bit_of(v); }
  void erase(Vertex v) { words_[word_of(v)] &= ~(std::uint64_t{1} << bit_of(v)); }

  int size() const {
    int total = 0;
    for (auto w : words_) total += std::popcount(w);
    return total;
  }

  bool empty() const {
    return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
  }

  /// Lowest member, or -1.
  Vertex first() const { return next_from(0); }

  /// Lowest member >= from, or -1.
  Vertex next_from(Vertex from) const {
    if (from < 0) from = 0;
    if (from >= universe_) return -1;
    std::size_t wi = word_of(from);
    std::uint64_t w = words_[wi] & (~std::uint64_t{0} << bit_of(from));
    while (true) {
      if (w != 0) return static_cast<Vertex>(wi * 64 + static_cast<std::size_t>(std::countr_zero(w)));
      if (++wi >= words_.size()) return -1;
      w = words_[wi];
    }
  }

  template <typename F>
  void for_each(F&& f) const {
    for (std::size_t wi = 0; wi < words_.size(); ++wi) {
      std::uint64_t w = words_[wi];
      while (w != 0) {
        f(static_cast<Vertex>(wi * 64 + static_cast<std::size_t>(std::countr_zero(w))));
        w &= w - 1;
      }
    }
  }

  std::vector<Vertex> to_vector() const {
    std::vector<Vertex> out;
    out.reserve(static_cast<std::size_t>(size()));
    for_each([&](Vertex v) { out.push_back(v); });
    return out;
  }

  /// Members as a bitmask; only meaningful for universes of at most 64.
  std::uint64_t mask() const { return words_.empty() ? 0 : words_[0]; }

  bool intersects(const VertexSet& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      if ((words_[i] & o.words_[i]) != 0) return true;
    }
    return false;
  }

  bool is_subset_of(const VertexSet& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      if ((words_[i] & ~o.words_[i]) != 0) return false;
    }
    return true;
  }

  int intersection_size(const VertexSet& o) const {
    int total = 0;
    for (std::size_t i = 0; i < words_.size(); ++i) total += std::popcount(words_[i] & o.words_[i]);
    return total;
  }

  VertexSet complement() const {
    VertexSet out(*this);
    for (auto& w : out.words_) w = ~w;
    out.trim();
    return out;
  }

  VertexSet& operator&=(const VertexSet& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }
  VertexSet& operator|=(const VertexSet& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  /// Set difference.
  VertexSet& operator-=(const VertexSet& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
    return *this;
  }

  friend VertexSet operator&(VertexSet a, const VertexSet& b) { return a &= b; }
  friend VertexSet operator|(VertexSet a, const VertexSet& b) { return a |= b; }
  friend VertexSet operator-(VertexSet a, const VertexSet& b) { return a -= b; }

  friend bool operator==(const VertexSet& a, const VertexSet& b) {
    return a.universe_ == b.universe_ && std::equal(a.words_.begin(), a.words_.end(), b.words_.begin());
  }

 private:
  static std::size_t word_of(Vertex v) { return static_cast<std::size_t>(v) / 64; }
  static unsigned bit_of(Vertex v) { return static_cast<unsigned>(v) % 64; }

  void trim() {
    if (universe_ % 64 != 0 && !words_.empty()) {
      words_.back() &= (std::uint64_t{1} << (universe_ % 64)) - 1;
    }
  }

  int universe_ = 0;
  boost::container::small_vector<std::uint64_t, MONOCYCLE_INLINE_WORDS> words_;
};

struct ColouredEdge {
  Vertex u;
  Vertex v;
  Mark mark;

  friend bool operator==(const ColouredEdge&, const ColouredEdge&) = default;
};

/// Simple graph on 0..n-1 whose edges are red, blue, or both.
class ColouredGraph {
 public:
  ColouredGraph() = default;

  explicit ColouredGraph(int n) : n_(n) {
    red_.assign(static_cast<std::size_t>(n), VertexSet(n));
    blue_.assign(static_cast<std::size_t>(n), VertexSet(n));
  }

  ColouredGraph(int n, std::initializer_list<ColouredEdge> edges) : ColouredGraph(n) {
    for (const auto& e : edges) set_mark(e.u, e.v, e.mark);
  }

  int order() const { return n_; }

  Mark mark(Vertex u, Vertex v) const {
    int m = (red_[idx(u)].contains(v) ? 1 : 0) | (blue_[idx(u)].contains(v) ? 2 : 0);
    return static_cast<Mark>(m);
  }

  /// Overwrites the mark on {u, v}; kNone removes the pair.
  void set_mark(Vertex u, Vertex v, Mark m) {
    if (u == v) throw PreconditionError("self-loop on vertex " + std::to_string(u));
    assign(red_, u, v, (static_cast<int>(m) & 1) != 0);
    assign(blue_, u, v, (static_cast<int>(m) & 2) != 0);
  }

  /// Adds the colours of m to whatever {u, v} already carries.
  void add_mark(Vertex u, Vertex v, Mark m) {
    set_mark(u, v, static_cast<Mark>(static_cast<int>(mark(u, v)) | static_cast<int>(m)));
  }

  bool adjacent(Vertex u, Vertex v, View view) const {
    switch (view) {
      case View::kRed: return red_[idx(u)].contains(v);
      case View::kBlue: return blue_[idx(u)].contains(v);
      case View::kUnion: return red_[idx(u)].contains(v) || blue_[idx(u)].contains(v);
    }
    return false;
  }

  VertexSet neighbours(Vertex v, View view) const {
    switch (view) {
      case View::kRed: return red_[idx(v)];
      case View::kBlue: return blue_[idx(v)];
      case View::kUnion: return red_[idx(v)] | blue_[idx(v)];
    }
    return VertexSet(n_);
  }

  int degree(Vertex v, View view) const { return neighbours(v, view).size(); }

  int degree_into(Vertex v, View view, const VertexSet& s) const {
    return neighbours(v, view).intersection_size(s);
  }

  /// Neighbour sets of every vertex in the given view.
  std::vector<VertexSet> adjacency(View view) const {
    std::vector<VertexSet> out;
    out.reserve(static_cast<std::size_t>(n_));
    for (Vertex v = 0; v < n_; ++v) out.push_back(neighbours(v, view));
    return out;
  }

  /// Neighbour bitmasks (n <= 64).
  std::vector<std::uint64_t> adjacency_masks(View view) const {
    std::vector<std::uint64_t> out(static_cast<std::size_t>(n_));
    for (Vertex v = 0; v < n_; ++v) out[idx(v)] = neighbours(v, view).mask();
    return out;
  }

  int edge_count(View view) const {
    int twice = 0;
    for (Vertex v = 0; v < n_; ++v) twice += degree(v, view);
    return twice / 2;
  }

  /// All coloured pairs with u < v in lexicographic order.
  std::vector<ColouredEdge> edges() const {
    std::vector<ColouredEdge> out;
    for (Vertex u = 0; u < n_; ++u) {
      (red_[idx(u)] | blue_[idx(u)]).for_each([&](Vertex v) {
        if (u < v) out.push_back({u, v, mark(u, v)});
      });
    }
    return out;
  }

  friend bool operator==(const ColouredGraph& a, const ColouredGraph& b) {
    return a.n_ == b.n_ && a.red_ == b.red_ && a.blue_ == b.blue_;
  }

 private:
  std::size_t idx(Vertex v) const {
    if (v < 0 || v >= n_) throw PreconditionError("vertex " + std::to_string(v) + " out of range");
    return static_cast<std::size_t>(v);
  }

  void assign(std::vector<VertexSet>& rows, Vertex u, Vertex v, bool on) {
    if (on) {
      rows[idx(u)].insert(v);
      rows[idx(v)].insert(u);
    } else {
      rows[idx(u)].erase(v);
      rows[idx(v)].erase(u);
    }
  }

  int n_ = 0;
  std::vector<VertexSet> red_;
  std::vector<VertexSet> blue_;
};

// ---------------------------------------------------------------------------
// Queries

inline int min_degree(const ColouredGraph& g, View view) {
  if (g.order() == 0) throw PreconditionError("min_degree of the empty graph is undefined");
  int best = g.order();
  for (Vertex v = 0; v < g.order(); ++v) best = std::min(best, g.degree(v, view));
  return best;
}

inline int max_degree(const ColouredGraph& g, View view) {
  int best = 0;
  for (Vertex v = 0; v < g.order(); ++v) best = std::max(best, g.degree(v, view));
  return best;
}

/// G[s], relabelled so that the i-th smallest member of s becomes vertex i.
inline ColouredGraph induced(const ColouredGraph& g, const VertexSet& s) {
  const auto members = s.to_vector();
  ColouredGraph out(static_cast<int>(members.size()));
  for (std::size_t i = 0; i < members.size(); ++i) {
    for (std::size_t j = i + 1; j < members.size(); ++j) {
      Mark m = g.mark(members[i], members[j]);
      if (m != Mark::kNone) out.set_mark(static_cast<Vertex>(i), static_cast<Vertex>(j), m);
    }
  }
  return out;
}

/// Vertices reachable from start inside `within` using view edges.
inline VertexSet component_of(const ColouredGraph& g, View view, Vertex start, const VertexSet& within) {
  VertexSet seen(g.order());
  seen.insert(start);
  VertexSet frontier = seen;
  while (!frontier.empty()) {
    VertexSet next(g.order());
    frontier.for_each([&](Vertex v) { next |= g.neighbours(v, view); });
    next &= within;
    next -= seen;
    seen |= next;
    frontier = next;
  }
  return seen;
}

/// Connected components of view restricted to `within`, ordered by lowest vertex.
inline std::vector<VertexSet> components(const ColouredGraph& g, View view, const VertexSet& within) {
  std::vector<VertexSet> out;
  VertexSet rest = within;
  while (!rest.empty()) {
    VertexSet c = component_of(g, view, rest.first(), within);
    rest -= c;
    out.push_back(std::move(c));
  }
  return out;
}

inline std::vector<VertexSet> components(const ColouredGraph& g, View view) {
  return components(g, view, VertexSet::full(g.order()));
}

inline bool is_connected(const ColouredGraph& g, View view, const VertexSet& within) {
  return within.empty() || components(g, view, within).size() == 1;
}

/// Side assignment of a proper 2-colouring of view restricted to `within`, or
/// nullopt when that graph has an odd cycle. Returned set is the side
/// containing the lowest vertex of each component.
inline std::optional<VertexSet> bipartition(const ColouredGraph& g, View view, const VertexSet& within) {
  const int n = g.order();
  std::vector<int> side(static_cast<std::size_t>(n), -1);
  VertexSet first_side(n);
  for (Vertex s = within.first(); s >= 0; s = within.next_from(s + 1)) {
    if (side[static_cast<std::size_t>(s)] >= 0) continue;
    side[static_cast<std::size_t>(s)] = 0;
    std::vector<Vertex> stack{s};
    while (!stack.empty()) {
      Vertex v = stack.back();
      stack.pop_back();
      if (side[static_cast<std::size_t>(v)] == 0) first_side.insert(v);
      bool ok = true;
      (g.neighbours(v, view) & within).for_each([&](Vertex u) {
        auto& su = side[static_cast<std::size_t>(u)];
        if (su < 0) {
          su = 1 - side[static_cast<std::size_t>(v)];
          stack.push_back(u);
        } else if (su == side[static_cast<std::size_t>(v)]) {
          ok = false;
        }
      });
      if (!ok) return std::nullopt;
    }
  }
  return first_side;
}

// ---------------------------------------------------------------------------
// Generators

inline ColouredGraph complete_graph(int n, Mark m) {
  ColouredGraph g(n);
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) g.set_mark(u, v, m);
  }
  return g;
}

/// Complete bipartite graph with parts {0..a-1} and {a..a+b-1}.
inline ColouredGraph complete_bipartite(int a, int b, Mark m) {
  ColouredGraph g(a + b);
  for (Vertex u = 0; u < a; ++u) {
    for (Vertex v = a; v < a + b; ++v) g.set_mark(u, v, m);
  }
  return g;
}

/// Cycle 0-1-...-(n-1)-0 with the i-th edge {i, i+1 mod n} carrying marks[i % size].
inline ColouredGraph cycle_graph(int n, const std::vector<Mark>& marks) {
  ColouredGraph g(n);
  for (Vertex i = 0; i < n; ++i) g.set_mark(i, (i + 1) % n, marks[static_cast<std::size_t>(i) % marks.size()]);
  return g;
}

inline ColouredGraph path_graph(int n, Mark m) {
  ColouredGraph g(n);
  for (Vertex i = 0; i + 1 < n; ++i) g.set_mark(i, i + 1, m);
  return g;
}

inline Mark random_colour(Rng& rng, double red_probability) {
  return rng.bernoulli(red_probability) ? Mark::kRed : Mark::kBlue;
}

/// Random 2-coloured graph whose union view has minimum degree >= delta_target.
/// Pairs are first kept with probability delta_target / (n - 1); deficient
/// vertices are then joined to random non-neighbours, preferring deficient ones.
inline ColouredGraph random_min_degree_graph(int n, int delta_target, double colour_bias, std::uint64_t seed) {
  if (n < 1 || delta_target < 0 || delta_target > n - 1) {
    throw PreconditionError("minimum degree " + std::to_string(delta_target) + " is infeasible on " +
                            std::to_string(n) + " vertices");
  }
  Rng rng(seed);
  ColouredGraph g(n);
  const double keep = n > 1 ? static_cast<double>(delta_target) / (n - 1) : 0.0;
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) {
      if (rng.bernoulli(keep)) g.set_mark(u, v, random_colour(rng, colour_bias));
    }
  }
  for (Vertex v = 0; v < n; ++v) {
    while (g.degree(v, View::kUnion) < delta_target) {
      std::vector<Vertex> deficient;
      std::vector<Vertex> others;
      for (Vertex u = 0; u < n; ++u) {
        if (u == v || g.adjacent(u, v, View::kUnion)) continue;
        (g.degree(u, View::kUnion) < delta_target ? deficient : others).push_back(u);
      }
      const auto& pool = deficient.empty() ? others : deficient;
      Vertex u = pool[static_cast<std::size_t>(rng.below(static_cast<int>(pool.size())))];
      g.set_mark(u, v, random_colour(rng, colour_bias));
    }
  }
  return g;
}

/// Erdos-Renyi style random 2-coloured graph: each pair present with
/// probability density, red with probability colour_bias.
inline ColouredGraph random_graph(int n, double density, double colour_bias, std::uint64_t seed) {
  Rng rng(seed);
  ColouredGraph g(n);
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) {
      if (rng.bernoulli(density)) g.set_mark(u, v, random_colour(rng, colour_bias));
    }
  }
  return g;
}

// ---------------------------------------------------------------------------
// Serialization

inline nlohmann::ordered_json to_json_value(const ColouredGraph& g) {
  nlohmann::ordered_json j;
  j["n"] = g.order();
  auto edges = nlohmann::ordered_json::array();
  for (const auto& e : g.edges()) edges.push_back({e.u, e.v, to_string(e.mark)});
  j["edges"] = std::move(edges);
  return j;
}

inline std::string to_json(const ColouredGraph& g) { return to_json_value(g).dump(); }

inline Mark parse_mark(const std::string& s) {
  if (s == "R") return Mark::kRed;
  if (s == "B") return Mark::kBlue;
  if (s == "RB" || s == "BR") return Mark::kBoth;
  throw FormatError(FormatErrorCode::kBadColour, "unknown colour tag '" + s + "'");
}

template <typename Json>
ColouredGraph graph_from_json_value(const Json& j) {
  if (!j.is_object() || !j.contains("n") || !j["n"].is_number_integer()) {
    throw FormatError(FormatErrorCode::kBadShape, "expected object with integer field 'n'");
  }
  const auto n = j["n"].template get<long long>();
  if (n < 0 || n > 1'000'000) throw FormatError(FormatErrorCode::kBadShape, "vertex count out of bounds");
  ColouredGraph g(static_cast<int>(n));
  if (!j.contains("edges")) return g;
  if (!j["edges"].is_array()) throw FormatError(FormatErrorCode::kBadShape, "'edges' must be an array");
  for (const auto& e : j["edges"]) {
    if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() || !e[1].is_number_integer() ||
        !e[2].is_string()) {
      throw FormatError(FormatErrorCode::kBadShape, "edge must be [u, v, colour]");
    }
    const auto u = e[0].template get<long long>();
    const auto v = e[1].template get<long long>();
    if (u < 0 || v < 0 || u >= n || v >= n) {
      throw FormatError(FormatErrorCode::kOutOfRange,
                        "edge [" + std::to_string(u) + "," + std::to_string(v) + "] outside 0.." +
                            std::to_string(n - 1));
    }
    if (u == v) throw FormatError(FormatErrorCode::kSelfLoop, "self-loop at " + std::to_string(u));
    const Mark m = parse_mark(e[2].template get<std::string>());
    if (g.mark(static_cast<Vertex>(u), static_cast<Vertex>(v)) != Mark::kNone) {
      throw FormatError(FormatErrorCode::kDuplicatePair,
                        "pair {" + std::to_string(u) + "," + std::to_string(v) + "} listed twice (use \"RB\")");
    }
    g.set_mark(static_cast<Vertex>(u), static_cast<Vertex>(v), m);
  }
  return g;
}

inline ColouredGraph graph_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(FormatErrorCode::kMalformedJson, e.what());
  }
  return graph_from_json_value(j);
}

inline std::string to_dot(const ColouredGraph& g) {
  std::ostringstream out;
  out << "graph G {\n";
  for (Vertex v = 0; v < g.order(); ++v) out << "  " << v << ";\n";
  for (const auto& e : g.edges()) {
    const char* colour = e.mark == Mark::kRed ? "red" : e.mark == Mark::kBlue ? "blue" : "purple";
    out << "  " << e.u << " -- " << e.v << " [color=" << colour << "];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace monocycle
