#pragma once

// Path counting con_l(x, y), strong/weak robustness checks, uniform walk
// lengths and the perturbation harness.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "monocycle/error.hpp"
#include "monocycle/graph.hpp"
#include "monocycle/rng.hpp"

namespace monocycle {

inline constexpr std::int64_t kDefaultPathBudget = 10'000'000;

/// Node budget for path enumeration; MONOCYCLE_BUDGET overrides the default.
inline std::int64_t path_budget() {
  if (const char* env = std::getenv("MONOCYCLE_BUDGET")) {
    char* end = nullptr;
    const long long v = std::strtoll(env, &end, 10);
    if (end != env && v > 0) return v;
  }
  return kDefaultPathBudget;
}

/// Shared expansion counter; every DFS node draws one unit.
class Budget {
 public:
  explicit Budget(std::int64_t units) : left_(units) {}
  void spend() {
    if (left_.fetch_sub(1, std::memory_order_relaxed) <= 0) throw BudgetExhausted("path enumeration budget exhausted");
  }

 private:
  std::atomic<std::int64_t> left_;
};

namespace detail {

struct PathCount {
  std::span<const VertexSet> adj;
  Vertex y;
  std::uint64_t stop_at;
  Budget* budget;
  std::uint64_t total = 0;
  VertexSet free;

  void dfs(Vertex cur, int left) {
    budget->spend();
    const VertexSet& here = adj[static_cast<std::size_t>(cur)];
    if (left == 1) {
      total += static_cast<std::uint64_t>((here & adj[static_cast<std::size_t>(y)]).intersection_size(free));
      return;
    }
    for (Vertex c = (here & free).first(); c >= 0 && total < stop_at; c = (here & free).next_from(c + 1)) {
      free.erase(c);
      dfs(c, left - 1);
      free.insert(c);
    }
  }
};

}  // namespace detail

/// Number of x-y paths with l internal vertices using only `alive` and the
/// neighbour sets in adj. Stops early once stop_at is reached.
inline std::uint64_t count_paths(std::span<const VertexSet> adj, const VertexSet& alive, Vertex x, Vertex y, int l,
                                 Budget& budget, std::uint64_t stop_at = UINT64_MAX) {
  if (l < 0 || x == y) throw PreconditionError("count_paths needs l >= 0 and x != y");
  if (!alive.contains(x) || !alive.contains(y)) return 0;
  if (l == 0) return adj[static_cast<std::size_t>(x)].contains(y) ? 1 : 0;
  detail::PathCount pc{adj, y, stop_at, &budget, 0, alive};
  pc.free.erase(x);
  pc.free.erase(y);
  pc.dfs(x, l);
  return pc.total;
}

inline std::uint64_t count_paths(const ColouredGraph& g, View view, Vertex x, Vertex y, int l) {
  if (x < 0 || y < 0 || x >= g.order() || y >= g.order()) throw PreconditionError("vertex out of range");
  Budget budget(path_budget());
  const auto adj = g.adjacency(view);
  return count_paths(adj, VertexSet::full(g.order()), x, y, l, budget);
}

enum class Robustness { kStrong, kWeak, kNone, kBudget };

inline const char* to_string(Robustness r) {
  switch (r) {
    case Robustness::kStrong: return "strong";
    case Robustness::kWeak: return "weak";
    case Robustness::kNone: return "none";
    case Robustness::kBudget: return "budget";
  }
  return "?";
}

struct RobustnessCheck {
  double alpha = 0;
  int k = 0;
  int n_ref = 0;
  Robustness verdict = Robustness::kNone;
  std::optional<int> witness_l;
  std::optional<VertexSet> side_x;  // weak checks only; Y is the rest of F
  VertexSet vertices;

  bool robust() const { return verdict == Robustness::kStrong || verdict == Robustness::kWeak; }
};

/// Smallest count meeting alpha * n^l.
inline std::uint64_t robust_threshold(double alpha, int n_ref, int l) {
  const double need = alpha * std::pow(static_cast<double>(n_ref), l);
  return static_cast<std::uint64_t>(std::max(0.0, std::ceil(need - 1e-9)));
}

namespace detail {

/// Runs pred over [0, count) on up to `threads` workers; false as soon as
/// any call is false. Exceptions are rethrown on the caller.
template <typename Pred>
bool parallel_all(std::size_t count, int threads, Pred pred) {
  threads = std::max(1, std::min<int>(threads, static_cast<int>(count)));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) {
      if (!pred(i)) return false;
    }
    return true;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> ok{true};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      try {
        for (std::size_t i = next++; i < count && ok && !failed; i = next++) {
          if (!pred(i)) ok = false;
        }
      } catch (...) {
        if (!failed.exchange(true)) error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
  return ok;
}

}  // namespace detail

inline int default_threads() { return std::max(1, static_cast<int>(std::thread::hardware_concurrency())); }

/// Looks for the smallest l in [1, k] with con_l(x, y) >= alpha * n_ref^l
/// over every pair of f (strong), or over every x in side_x, y in f - side_x
/// counting paths of the bipartite restriction (weak).
inline RobustnessCheck check_robust(const ColouredGraph& g, View view, const VertexSet& f, double alpha, int k,
                                    int n_ref, const std::optional<VertexSet>& side_x = std::nullopt,
                                    int threads = 1, std::int64_t budget_units = path_budget()) {
  if (f.universe() != g.order()) throw PreconditionError("subgraph universe does not match the graph");
  if (n_ref < f.size()) throw PreconditionError("n_ref must be at least |F|");
  if (alpha <= 0) throw PreconditionError("alpha must be positive");
  if (side_x && !side_x->is_subset_of(f)) throw PreconditionError("bipartition side must lie inside F");

  RobustnessCheck out;
  out.alpha = alpha;
  out.k = k;
  out.n_ref = n_ref;
  out.side_x = side_x;
  out.vertices = f;

  std::vector<VertexSet> adj(static_cast<std::size_t>(g.order()), VertexSet(g.order()));
  VertexSet side_y = f;
  if (side_x) side_y -= *side_x;
  f.for_each([&](Vertex v) {
    VertexSet row = g.neighbours(v, view) & f;
    if (side_x) row &= side_x->contains(v) ? side_y : *side_x;
    adj[static_cast<std::size_t>(v)] = std::move(row);
  });

  std::vector<std::pair<Vertex, Vertex>> pairs;
  if (side_x) {
    side_x->for_each([&](Vertex x) { side_y.for_each([&](Vertex y) { pairs.emplace_back(x, y); }); });
  } else {
    const auto members = f.to_vector();
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (std::size_t j = i + 1; j < members.size(); ++j) pairs.emplace_back(members[i], members[j]);
    }
  }

  Budget budget(budget_units);
  try {
    for (int l = 1; l <= k; ++l) {
      // Cross pairs of a bipartite graph are joined only by odd-length paths.
      if (side_x && l % 2 == 1) continue;
      const std::uint64_t need = robust_threshold(alpha, n_ref, l);
      const bool all = detail::parallel_all(pairs.size(), threads, [&](std::size_t i) {
        return count_paths(adj, f, pairs[i].first, pairs[i].second, l, budget, need) >= need;
      });
      if (all) {
        out.verdict = side_x ? Robustness::kWeak : Robustness::kStrong;
        out.witness_l = l;
        break;
      }
    }
  } catch (const BudgetExhausted&) {
    out.verdict = Robustness::kBudget;
    return out;
  }
  if (out.verdict == Robustness::kStrong) {
    f.for_each([&](Vertex v) {
      if (adj[static_cast<std::size_t>(v)].size() + 1e-9 < alpha * n_ref && f.size() > 1) {
        throw std::logic_error("strong verdict with a vertex of degree below alpha * n_ref");
      }
    });
  }
  return out;
}

/// Smallest k <= 3n such that every ordered pair, a vertex with itself
/// included, is joined by a walk of exactly k edges. Absent for disconnected
/// or bipartite views.
inline std::optional<int> uniform_odd_walk_length(const ColouredGraph& g, View view) {
  const int n = g.order();
  if (n == 0 || !is_connected(g, view, VertexSet::full(n)) || bipartition(g, view, VertexSet::full(n))) {
    return std::nullopt;
  }
  const auto adj = g.adjacency(view);
  const VertexSet all = VertexSet::full(n);
  std::vector<VertexSet> reach(static_cast<std::size_t>(n), VertexSet(n));
  for (Vertex v = 0; v < n; ++v) reach[static_cast<std::size_t>(v)].insert(v);
  for (int k = 1; k <= 3 * n; ++k) {
    bool full = true;
    for (auto& row : reach) {
      VertexSet next(n);
      row.for_each([&](Vertex u) { next |= adj[static_cast<std::size_t>(u)]; });
      row = std::move(next);
      full = full && row == all;
    }
    if (full) return k;
  }
  throw std::logic_error("no uniform walk length within 3n on a connected non-bipartite graph");
}

/// True when every pair (diagonal included) has a walk of exactly k edges.
inline bool all_walks_of_length(const ColouredGraph& g, View view, int k) {
  const int n = g.order();
  const auto adj = g.adjacency(view);
  for (Vertex v = 0; v < n; ++v) {
    VertexSet row(n, {v});
    for (int i = 0; i < k; ++i) {
      VertexSet next(n);
      row.for_each([&](Vertex u) { next |= adj[static_cast<std::size_t>(u)]; });
      row = std::move(next);
    }
    if (!(row == VertexSet::full(n))) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Perturbations

struct PerturbationParams {
  double alpha = 0.5;
  int k = 1;
  int n_ref = 0;
  double beta = 0.05;
  int trials = 1;
  std::uint64_t seed = 0;
  std::optional<VertexSet> side_x;
  int threads = 1;
};

struct PerturbationTrial {
  std::string kind;
  int trial = 0;
  int changed = 0;  // vertices deleted, edges deleted or attachments made
  RobustnessCheck check;
  bool pass = false;
};

struct PerturbationReport {
  RobustnessCheck base;
  std::vector<PerturbationTrial> trials;

  bool all_passed() const {
    return std::all_of(trials.begin(), trials.end(), [](const auto& t) { return t.pass; });
  }
};

inline void remove_from_view(ColouredGraph& g, Vertex u, Vertex v, View view) {
  const Mark m = g.mark(u, v);
  if (view == View::kUnion || m != Mark::kBoth) {
    g.set_mark(u, v, Mark::kNone);
  } else {
    g.set_mark(u, v, view == View::kRed ? Mark::kBlue : Mark::kRed);
  }
}

/// Re-checks f after random vertex deletion and edge deletion at (alpha/2, k)
/// and after adding one vertex with ceil(alpha * n_ref) neighbours in f at
/// (alpha^3/2, k + 2). The added vertex grows the ground graph, so that
/// check uses n_ref + 1.
inline PerturbationReport perturbation_suite(const ColouredGraph& g, View view, const VertexSet& f,
                                             const PerturbationParams& p) {
  PerturbationReport report;
  const int n_ref = p.n_ref > 0 ? p.n_ref : g.order();
  report.base = check_robust(g, view, f, p.alpha, p.k, n_ref, p.side_x, p.threads);
  if (!report.base.robust()) throw PreconditionError("F is not robust at the given parameters");
  const int cap = static_cast<int>(std::floor(p.beta * n_ref + 1e-9));
  const auto side = [&](const VertexSet& within) -> std::optional<VertexSet> {
    if (!p.side_x) return std::nullopt;
    return *p.side_x & within;
  };

  for (int t = 0; t < p.trials; ++t) {
    Rng rng(derive_seed(p.seed, static_cast<std::uint64_t>(t)));
    {
      auto members = f.to_vector();
      rng.shuffle(members);
      VertexSet kept = f;
      const int drop = std::min<int>(cap, static_cast<int>(members.size()));
      for (int i = 0; i < drop; ++i) kept.erase(members[static_cast<std::size_t>(i)]);
      PerturbationTrial tr{"delete-vertices", t, drop, check_robust(g, view, kept, p.alpha / 2, p.k, n_ref, side(kept), p.threads), false};
      tr.pass = tr.check.robust();
      report.trials.push_back(std::move(tr));
    }
    {
      ColouredGraph h = g;
      std::vector<std::pair<Vertex, Vertex>> edges;
      f.for_each([&](Vertex u) {
        (g.neighbours(u, view) & f).for_each([&](Vertex v) {
          if (u < v) edges.emplace_back(u, v);
        });
      });
      rng.shuffle(edges);
      std::vector<int> lost(static_cast<std::size_t>(g.order()), 0);
      int removed = 0;
      for (auto [u, v] : edges) {
        if (lost[static_cast<std::size_t>(u)] >= cap || lost[static_cast<std::size_t>(v)] >= cap || !rng.bernoulli(0.5)) continue;
        remove_from_view(h, u, v, view);
        ++lost[static_cast<std::size_t>(u)];
        ++lost[static_cast<std::size_t>(v)];
        ++removed;
      }
      PerturbationTrial tr{"delete-edges", t, removed, check_robust(h, view, f, p.alpha / 2, p.k, n_ref, p.side_x, p.threads), false};
      tr.pass = tr.check.robust();
      report.trials.push_back(std::move(tr));
    }
    {
      const int n = g.order();
      ColouredGraph h(n + 1);
      for (const auto& e : g.edges()) h.set_mark(e.u, e.v, e.mark);
      VertexSet pool = p.side_x ? f - *p.side_x : f;
      std::vector<Vertex> targets;
      pool.for_each([&](Vertex v) { targets.push_back(v); });
      rng.shuffle(targets);
      const int attach = std::min<int>(static_cast<int>(std::ceil(p.alpha * n_ref - 1e-9)), static_cast<int>(targets.size()));
      for (int i = 0; i < attach; ++i) h.set_mark(n, targets[static_cast<std::size_t>(i)], mark_of(view));
      VertexSet grown(n + 1);
      f.for_each([&](Vertex v) { grown.insert(v); });
      grown.insert(n);
      std::optional<VertexSet> grown_x;
      if (p.side_x) {
        grown_x = VertexSet(n + 1);
        p.side_x->for_each([&](Vertex v) { grown_x->insert(v); });
        grown_x->insert(n);
      }
      const double a3 = p.alpha * p.alpha * p.alpha / 2;
      PerturbationTrial tr{"add-vertex", t, attach, check_robust(h, view, grown, a3, p.k + 2, n_ref + 1, grown_x, p.threads), false};
      tr.pass = tr.check.robust();
      report.trials.push_back(std::move(tr));
    }
  }
  return report;
}

inline nlohmann::ordered_json to_json_value(const RobustnessCheck& c) {
  nlohmann::ordered_json j;
  j["verdict"] = to_string(c.verdict);
  j["alpha"] = c.alpha;
  j["k"] = c.k;
  j["n_ref"] = c.n_ref;
  j["witness_l"] = c.witness_l ? nlohmann::ordered_json(*c.witness_l) : nlohmann::ordered_json(nullptr);
  j["vertices"] = c.vertices.to_vector();
  if (c.side_x) {
    j["x"] = c.side_x->to_vector();
    j["y"] = (c.vertices - *c.side_x).to_vector();
  }
  return j;
}

inline nlohmann::ordered_json to_json_value(const PerturbationReport& r) {
  nlohmann::ordered_json j;
  j["base"] = to_json_value(r.base);
  auto arr = nlohmann::ordered_json::array();
  for (const auto& t : r.trials) {
    nlohmann::ordered_json e;
    e["kind"] = t.kind;
    e["trial"] = t.trial;
    e["changed"] = t.changed;
    e["alpha"] = t.check.alpha;
    e["k"] = t.check.k;
    e["verdict"] = to_string(t.check.verdict);
    e["pass"] = t.pass;
    arr.push_back(std::move(e));
  }
  j["trials"] = std::move(arr);
  j["all_passed"] = r.all_passed();
  return j;
}

}  // namespace monocycle
