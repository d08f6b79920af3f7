#pragma once

// Block models: symbolic graphs whose blocks have sizes a*m + b and whose
// block pairs are red-complete, blue-complete, empty or arbitrarily
// coloured. Instantiation, sharpness checks against the exact solver, and
// an exhaustive search for models without a red-cycle/blue-cycle partition.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "monocycle/error.hpp"
#include "monocycle/graph.hpp"
#include "monocycle/hamiltonicity.hpp"
#include "monocycle/partition.hpp"
#include "monocycle/rng.hpp"

namespace monocycle {

enum class Rule : std::uint8_t { kEmpty, kRed, kBlue, kArbitrary };

inline const char* to_string(Rule r) {
  switch (r) {
    case Rule::kEmpty: return "E";
    case Rule::kRed: return "R";
    case Rule::kBlue: return "B";
    case Rule::kArbitrary: return "A";
  }
  return "?";
}

inline Rule parse_rule(const std::string& s) {
  if (s == "E") return Rule::kEmpty;
  if (s == "R") return Rule::kRed;
  if (s == "B") return Rule::kBlue;
  if (s == "A") return Rule::kArbitrary;
  throw FormatError(FormatErrorCode::kBadColour, "unknown block rule '" + s + "'");
}

/// Affine size a*m + b.
struct Block {
  int a = 1;
  int b = 0;

  int size(int m) const { return a * m + b; }
  friend bool operator==(const Block&, const Block&) = default;
};

struct BlockModel {
  std::vector<Block> blocks;
  std::vector<std::vector<Rule>> rules;  // between blocks; diagonal ignored
  std::vector<Rule> intra;
  std::string origin;

  int count() const { return static_cast<int>(blocks.size()); }

  int order(int m) const {
    int n = 0;
    for (const auto& bl : blocks) n += bl.size(m);
    return n;
  }

  Rule rule(int i, int j) const {
    return i == j ? intra[static_cast<std::size_t>(i)] : rules[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }

  bool has_arbitrary() const {
    for (int i = 0; i < count(); ++i) {
      for (int j = i; j < count(); ++j) {
        if (rule(i, j) == Rule::kArbitrary) return true;
      }
    }
    return false;
  }

  void validate() const {
    const auto k = blocks.size();
    if (rules.size() != k || intra.size() != k) throw PreconditionError("rule tables do not match the block count");
    for (std::size_t i = 0; i < k; ++i) {
      if (rules[i].size() != k) throw PreconditionError("rule matrix is not square");
      for (std::size_t j = 0; j < k; ++j) {
        if (i != j && rules[i][j] != rules[j][i]) throw PreconditionError("rule matrix is not symmetric");
      }
    }
  }

  /// Degree of a vertex of block i at scale m, counting arbitrary pairs as edges.
  int block_degree(int i, int m) const {
    int d = 0;
    for (int j = 0; j < count(); ++j) {
      if (rule(i, j) == Rule::kEmpty) continue;
      d += j == i ? blocks[static_cast<std::size_t>(j)].size(m) - 1 : blocks[static_cast<std::size_t>(j)].size(m);
    }
    return d;
  }

  int min_degree(int m) const {
    int best = order(m);
    for (int i = 0; i < count(); ++i) {
      if (blocks[static_cast<std::size_t>(i)].size(m) > 0) best = std::min(best, block_degree(i, m));
    }
    return best;
  }
};

inline nlohmann::ordered_json to_json_value(const BlockModel& model) {
  nlohmann::ordered_json j;
  auto blocks = nlohmann::ordered_json::array();
  for (const auto& bl : model.blocks) blocks.push_back({{"a", bl.a}, {"b", bl.b}});
  j["blocks"] = std::move(blocks);
  auto rules = nlohmann::ordered_json::array();
  for (int i = 0; i < model.count(); ++i) {
    auto row = nlohmann::ordered_json::array();
    for (int k = 0; k < model.count(); ++k) row.push_back(i == k ? "E" : to_string(model.rule(i, k)));
    rules.push_back(std::move(row));
  }
  j["rules"] = std::move(rules);
  auto intra = nlohmann::ordered_json::array();
  for (Rule r : model.intra) intra.push_back(to_string(r));
  j["intra"] = std::move(intra);
  if (!model.origin.empty()) j["origin"] = model.origin;
  return j;
}

template <typename Json>
BlockModel block_model_from_json_value(const Json& j) {
  auto shape = [](const std::string& what) { return FormatError(FormatErrorCode::kBadShape, what); };
  if (!j.is_object() || !j.contains("blocks") || !j["blocks"].is_array()) throw shape("expected object with array 'blocks'");
  BlockModel model;
  for (const auto& bl : j["blocks"]) {
    if (!bl.is_object() || !bl.contains("a") || !bl.contains("b") || !bl["a"].is_number_integer() ||
        !bl["b"].is_number_integer()) {
      throw shape("block must be {\"a\": int, \"b\": int}");
    }
    model.blocks.push_back({bl["a"].template get<int>(), bl["b"].template get<int>()});
  }
  const auto k = model.blocks.size();
  model.rules.assign(k, std::vector<Rule>(k, Rule::kEmpty));
  model.intra.assign(k, Rule::kEmpty);
  if (j.contains("rules")) {
    if (!j["rules"].is_array() || j["rules"].size() != k) throw shape("'rules' must be a square matrix over the blocks");
    for (std::size_t r = 0; r < k; ++r) {
      const auto& row = j["rules"][r];
      if (!row.is_array() || row.size() != k) throw shape("'rules' must be a square matrix over the blocks");
      for (std::size_t c = 0; c < k; ++c) {
        if (!row[c].is_string()) throw shape("rule entries must be strings");
        model.rules[r][c] = parse_rule(row[c].template get<std::string>());
      }
    }
    for (std::size_t r = 0; r < k; ++r) {
      for (std::size_t c = 0; c < k; ++c) {
        if (r != c && model.rules[r][c] != model.rules[c][r]) {
          throw FormatError(FormatErrorCode::kDuplicatePair, "rule matrix is not symmetric");
        }
      }
    }
  }
  if (j.contains("intra")) {
    if (!j["intra"].is_array() || j["intra"].size() != k) throw shape("'intra' must list one rule per block");
    for (std::size_t r = 0; r < k; ++r) {
      if (!j["intra"][r].is_string()) throw shape("rule entries must be strings");
      model.intra[r] = parse_rule(j["intra"][r].template get<std::string>());
    }
  }
  if (j.contains("origin") && j["origin"].is_string()) model.origin = j["origin"].template get<std::string>();
  return model;
}

inline BlockModel block_model_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(FormatErrorCode::kMalformedJson, e.what());
  }
  return block_model_from_json_value(j);
}

/// How arbitrary pairs are coloured.
enum class Fill { kRandom, kAllRed, kAllBlue };

inline ColouredGraph instantiate(const BlockModel& model, int m, std::uint64_t seed, Fill fill = Fill::kRandom) {
  model.validate();
  std::vector<int> start;
  int n = 0;
  for (const auto& bl : model.blocks) {
    if (bl.size(m) < 0) throw PreconditionError("block size " + std::to_string(bl.a) + "m+" + std::to_string(bl.b) + " is negative at m=" + std::to_string(m));
    start.push_back(n);
    n += bl.size(m);
  }
  ColouredGraph g(n);
  Rng rng(seed);
  for (int i = 0; i < model.count(); ++i) {
    for (int k = i; k < model.count(); ++k) {
      const Rule r = model.rule(i, k);
      if (r == Rule::kEmpty) continue;
      const int si = start[static_cast<std::size_t>(i)];
      const int sk = start[static_cast<std::size_t>(k)];
      for (int u = si; u < si + model.blocks[static_cast<std::size_t>(i)].size(m); ++u) {
        for (int v = i == k ? u + 1 : sk; v < sk + model.blocks[static_cast<std::size_t>(k)].size(m); ++v) {
          Mark mark = r == Rule::kRed ? Mark::kRed : Mark::kBlue;
          if (r == Rule::kArbitrary) {
            if (fill == Fill::kAllRed) mark = Mark::kRed;
            else if (fill == Fill::kAllBlue) mark = Mark::kBlue;
            else mark = rng.bernoulli(0.5) ? Mark::kRed : Mark::kBlue;
          }
          g.set_mark(u, v, mark);
        }
      }
    }
  }
  return g;
}

/// ceil(3n/4) - 1.
inline int sharpness_degree(int n) { return (3 * n + 3) / 4 - 1; }

struct FillOutcome {
  std::string label;
  bool partitioned = false;
};

struct SharpnessReport {
  int m = 0;
  int n = 0;
  int min_degree = 0;
  int target = 0;
  bool degree_mismatch = false;  // min degree already at 3n/4
  std::vector<FillOutcome> fills;
  bool pass = false;
};

inline constexpr int kDefaultFillSeeds = 16;

/// Solver verdict on every fill: the two monochromatic extremes and
/// `seeds` random ones when the model has arbitrary pairs, a single one
/// otherwise. PASS needs min degree = ceil(3n/4) - 1 and no partition.
inline SharpnessReport verify_sharpness(const BlockModel& model, int m, int seeds = kDefaultFillSeeds,
                                        std::uint64_t seed = 0, bool stop_early = false) {
  SharpnessReport rep;
  rep.m = m;
  rep.n = model.order(m);
  require_dp_order(rep.n);
  rep.target = sharpness_degree(rep.n);
  std::vector<std::pair<std::string, ColouredGraph>> graphs;
  if (model.has_arbitrary()) {
    graphs.emplace_back("all-red", instantiate(model, m, 0, Fill::kAllRed));
    graphs.emplace_back("all-blue", instantiate(model, m, 0, Fill::kAllBlue));
    for (int s = 0; s < seeds; ++s) {
      graphs.emplace_back("seed-" + std::to_string(s), instantiate(model, m, derive_seed(seed, static_cast<std::uint64_t>(s))));
    }
  } else {
    graphs.emplace_back("fixed", instantiate(model, m, 0));
  }
  rep.min_degree = ::monocycle::min_degree(graphs.front().second, View::kUnion);
  rep.degree_mismatch = 4 * rep.min_degree >= 3 * rep.n;
  bool none = true;
  for (const auto& [label, g] : graphs) {
    const bool part = solve(g).has_value();
    rep.fills.push_back({label, part});
    none = none && !part;
    if (stop_early && part) break;
  }
  rep.pass = none && !rep.degree_mismatch && rep.min_degree == rep.target;
  return rep;
}

inline nlohmann::ordered_json to_json_value(const SharpnessReport& r) {
  nlohmann::ordered_json j;
  j["m"] = r.m;
  j["n"] = r.n;
  j["min_degree"] = r.min_degree;
  j["target"] = r.target;
  j["degree_mismatch"] = r.degree_mismatch;
  auto fills = nlohmann::ordered_json::array();
  for (const auto& f : r.fills) fills.push_back({{"fill", f.label}, {"result", f.partitioned ? "partition" : "none"}});
  j["fills"] = std::move(fills);
  j["pass"] = r.pass;
  return j;
}

/// Every single-vertex deletion of the instance still has no partition.
/// Only meaningful for models without arbitrary pairs.
inline bool deletion_hereditary(const BlockModel& model, int m) {
  const auto g = instantiate(model, m, 0);
  for (Vertex v = 0; v < g.order(); ++v) {
    if (solve(induced(g, VertexSet::full(g.order()) - VertexSet(g.order(), {v}))).has_value()) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Search.

/// Orders and degrees of the form a*m + b.
struct Affine {
  int a = 0;
  int b = 0;
  int at(int m) const { return a * m + b; }
  std::string str() const {
    return std::to_string(a) + "m" + (b < 0 ? "-" : "+") + std::to_string(b < 0 ? -b : b);
  }
};

struct SearchParams {
  int max_blocks = 5;
  std::vector<int> probes{2, 3};
  Affine order{4, 1};
  Affine degree{3, 0};
  int b_min = 0;
  int b_max = 2;
  bool upgrade_arbitrary = true;
  int fill_seeds = kDefaultFillSeeds;
  int threads = 1;
};

struct SearchReport {
  std::vector<BlockModel> models;
  std::uint64_t supports = 0;
  std::uint64_t solver_calls = 0;
};

namespace detail {

inline std::uint64_t mix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Colour-refinement hash of the edge-labelled instance, invariant under
/// vertex relabelling and under swapping red with blue.
inline std::uint64_t model_hash(const BlockModel& model, int m) {
  std::vector<int> block_of;
  for (int i = 0; i < model.count(); ++i) {
    for (int s = 0; s < model.blocks[static_cast<std::size_t>(i)].size(m); ++s) block_of.push_back(i);
  }
  const std::size_t n = block_of.size();
  auto run = [&](bool swap) {
    auto label = [&](std::size_t u, std::size_t v) -> std::uint64_t {
      Rule r = model.rule(block_of[u], block_of[v]);
      if (swap && r == Rule::kRed) r = Rule::kBlue;
      else if (swap && r == Rule::kBlue) r = Rule::kRed;
      return static_cast<std::uint64_t>(r);
    };
    std::vector<std::uint64_t> colour(n, 1);
    for (std::size_t round = 0; round <= n; ++round) {
      std::vector<std::uint64_t> next(n);
      for (std::size_t u = 0; u < n; ++u) {
        std::vector<std::uint64_t> seen;
        for (std::size_t v = 0; v < n; ++v) {
          if (v != u && label(u, v) != 0) seen.push_back(mix(label(u, v) * 1000003 + colour[v]));
        }
        std::sort(seen.begin(), seen.end());
        std::uint64_t h = mix(colour[u]);
        for (auto s : seen) h = mix(h ^ s);
        next[u] = h;
      }
      colour = std::move(next);
    }
    std::sort(colour.begin(), colour.end());
    std::uint64_t h = mix(n);
    for (auto c : colour) h = mix(h ^ c);
    return h;
  };
  return std::min(run(false), run(true));
}

inline void size_vectors(const SearchParams& p, int k, std::vector<Block>& cur, std::vector<std::vector<Block>>& out) {
  if (static_cast<int>(cur.size()) == k) {
    int sa = 0;
    int sb = 0;
    for (const auto& bl : cur) {
      sa += bl.a;
      sb += bl.b;
    }
    if (sa == p.order.a && sb == p.order.b) out.push_back(cur);
    return;
  }
  for (int a = p.order.a; a >= 0; --a) {
    for (int b = p.b_max; b >= p.b_min; --b) {
      const Block bl{a, b};
      // Nonincreasing block order breaks most relabelling symmetry.
      if (!cur.empty() && (cur.back().a < a || (cur.back().a == a && cur.back().b < b))) continue;
      bool positive = true;
      for (int m : p.probes) positive = positive && bl.size(m) >= 1;
      if (!positive) continue;
      cur.push_back(bl);
      size_vectors(p, k, cur, out);
      cur.pop_back();
    }
  }
}

struct Slot {
  int i;
  int j;
};

}  // namespace detail

/// Exhaustive search over block counts up to max_blocks, nonincreasing
/// affine size vectors with the target order, supports whose minimum degree
/// is exactly the target at every probe, and red/blue assignments of the
/// nonempty pairs (colour swap factored out). Survivors at every probe are
/// then greedily given arbitrary pairs where that keeps them sharp.
inline SearchReport search_models(const SearchParams& p) {
  if (p.max_blocks < 1 || p.max_blocks > 5) throw PreconditionError("max_blocks must lie in 1..5");
  if (p.probes.empty()) throw PreconditionError("at least one probe is needed");
  for (int m : p.probes) {
    if (p.order.at(m) > kDpCap) throw CapacityError("probe instance exceeds the solver cap");
  }
  struct Job {
    std::vector<Block> sizes;
    BlockModel support;
    std::vector<detail::Slot> slots;
  };
  std::vector<Job> jobs;
  for (int k = 1; k <= p.max_blocks; ++k) {
    std::vector<std::vector<Block>> vectors;
    std::vector<Block> cur;
    detail::size_vectors(p, k, cur, vectors);
    for (const auto& sizes : vectors) {
      std::vector<detail::Slot> all;
      for (int i = 0; i < k; ++i) {
        for (int j = i; j < k; ++j) {
          bool single = true;
          for (int m : p.probes) single = single && sizes[static_cast<std::size_t>(i)].size(m) == 1;
          if (i == j && single) continue;  // no pairs inside a lone vertex
          all.push_back({i, j});
        }
      }
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << all.size()); ++mask) {
        BlockModel model;
        model.blocks = sizes;
        model.rules.assign(static_cast<std::size_t>(k), std::vector<Rule>(static_cast<std::size_t>(k), Rule::kEmpty));
        model.intra.assign(static_cast<std::size_t>(k), Rule::kEmpty);
        std::vector<detail::Slot> used;
        for (std::size_t s = 0; s < all.size(); ++s) {
          if (((mask >> s) & 1U) == 0) continue;
          const auto [i, j] = all[s];
          if (i == j) model.intra[static_cast<std::size_t>(i)] = Rule::kRed;
          else model.rules[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
              model.rules[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = Rule::kRed;
          used.push_back(all[s]);
        }
        bool fits = !used.empty();
        for (int m : p.probes) fits = fits && model.min_degree(m) == p.degree.at(m);
        if (fits) jobs.push_back({sizes, std::move(model), std::move(used)});
      }
    }
  }

  struct Found {
    std::vector<BlockModel> models;
    std::uint64_t calls = 0;
  };
  std::vector<Found> found(jobs.size());
  auto set = [](BlockModel& model, detail::Slot s, Rule r) {
    if (s.i == s.j) model.intra[static_cast<std::size_t>(s.i)] = r;
    else model.rules[static_cast<std::size_t>(s.i)][static_cast<std::size_t>(s.j)] =
        model.rules[static_cast<std::size_t>(s.j)][static_cast<std::size_t>(s.i)] = r;
  };
  auto sharp_everywhere = [&](const BlockModel& model, std::uint64_t& calls) {
    for (int m : p.probes) {
      const auto rep = verify_sharpness(model, m, p.fill_seeds, 0, true);
      calls += rep.fills.size();
      if (!rep.pass) return false;
    }
    return true;
  };
  auto run = [&](std::size_t index) {
    const Job& job = jobs[index];
    Found& f = found[index];
    const std::size_t e = job.slots.size();
    // The first slot stays red: swapping colours maps solutions to solutions.
    for (std::uint64_t colours = 0; colours < (std::uint64_t{1} << (e - 1)); ++colours) {
      BlockModel model = job.support;
      for (std::size_t s = 1; s < e; ++s) set(model, job.slots[s], ((colours >> (s - 1)) & 1U) ? Rule::kBlue : Rule::kRed);
      if (!sharp_everywhere(model, f.calls)) continue;
      f.models.push_back(model);
      if (!p.upgrade_arbitrary) continue;
      BlockModel wide = model;
      bool any = false;
      for (const auto& s : job.slots) {
        BlockModel trial = wide;
        set(trial, s, Rule::kArbitrary);
        if (sharp_everywhere(trial, f.calls)) {
          wide = std::move(trial);
          any = true;
        }
      }
      if (any) f.models.push_back(std::move(wide));
    }
  };
  const int threads = std::max(1, p.threads);
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < jobs.size(); i = next++) run(i);
    });
  }
  for (auto& th : pool) th.join();

  SearchReport report;
  report.supports = jobs.size();
  std::map<std::uint64_t, bool> seen;
  const int smallest = *std::min_element(p.probes.begin(), p.probes.end());
  std::string probes;
  for (int m : p.probes) probes += (probes.empty() ? "" : ",") + std::to_string(m);
  for (auto& f : found) {
    report.solver_calls += f.calls;
    for (auto& model : f.models) {
      if (!seen.emplace(detail::model_hash(model, smallest), true).second) continue;
      model.origin = "search: order " + p.order.str() + ", degree " + p.degree.str() + ", blocks<=" +
                     std::to_string(p.max_blocks) + ", probes {" + probes + "}";
      report.models.push_back(std::move(model));
    }
  }
  return report;
}

inline nlohmann::ordered_json to_json_value(const SearchReport& r) {
  nlohmann::ordered_json j;
  j["supports"] = r.supports;
  j["solver_calls"] = r.solver_calls;
  j["found"] = r.models.size();
  auto models = nlohmann::ordered_json::array();
  for (const auto& m : r.models) models.push_back(to_json_value(m));
  j["models"] = std::move(models);
  return j;
}

}  // namespace monocycle
