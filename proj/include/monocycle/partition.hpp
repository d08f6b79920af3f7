#pragma once

// Exact solver for partitions of a 2-coloured graph into one red and one
// blue cycle, its certificate verifier and the random scanner.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "monocycle/brute_force.hpp"
#include "monocycle/graph.hpp"
#include "monocycle/hamiltonicity.hpp"
#include "monocycle/rng.hpp"

namespace monocycle {

struct PartitionCertificate {
  std::vector<Vertex> red;
  std::vector<Vertex> blue;

  friend bool operator==(const PartitionCertificate&, const PartitionCertificate&) = default;
};

struct Verdict {
  bool valid = false;
  std::string reason;
};

inline Verdict verify(const ColouredGraph& g, const PartitionCertificate& cert) {
  const int n = g.order();
  std::vector<int> hits(static_cast<std::size_t>(n), 0);
  for (const auto* seq : {&cert.red, &cert.blue}) {
    for (Vertex v : *seq) {
      if (v < 0 || v >= n) return {false, "not a partition: vertex " + std::to_string(v) + " out of range"};
      if (++hits[static_cast<std::size_t>(v)] > 1) {
        return {false, "not a partition: vertex " + std::to_string(v) + " used twice"};
      }
    }
  }
  for (Vertex v = 0; v < n; ++v) {
    if (hits[static_cast<std::size_t>(v)] == 0) return {false, "not a partition: vertex " + std::to_string(v) + " uncovered"};
  }
  const auto check = [&](const std::vector<Vertex>& seq, View view, const char* name) -> std::optional<Verdict> {
    if (seq.size() <= 1) return std::nullopt;
    const std::size_t pairs = seq.size() == 2 ? 1 : seq.size();
    for (std::size_t i = 0; i < pairs; ++i) {
      const Vertex a = seq[i];
      const Vertex b = seq[(i + 1) % seq.size()];
      if (!g.adjacent(a, b, view)) {
        return Verdict{false, std::string("colour violation: ") + name + " cycle uses {" + std::to_string(a) + "," +
                                  std::to_string(b) + "}"};
      }
    }
    return std::nullopt;
  };
  if (auto bad = check(cert.red, View::kRed, "red")) return *bad;
  if (auto bad = check(cert.blue, View::kBlue, "blue")) return *bad;
  return {true, "ok"};
}

/// Next mask with the same popcount (Gosper's hack); 0 after the last one
/// below 2^n.
inline std::uint64_t next_same_popcount(std::uint64_t mask, int n) {
  if (mask == 0) return 0;
  const std::uint64_t low = mask & (~mask + 1);
  const std::uint64_t ripple = mask + low;
  const std::uint64_t next = (((ripple ^ mask) >> 2) / low) | ripple;
  return next >= (std::uint64_t{1} << n) ? 0 : next;
}

/// Red side S of the certificate: popcount of S from n down to 0, then
/// increasing mask. Finds a red Hamilton cycle whenever one exists.
inline std::optional<PartitionCertificate> solve(const ColouredGraph& g, int threads = 1) {
  const int n = g.order();
  require_dp_order(n);
  const HamTable red(g, View::kRed);
  const HamTable blue(g, View::kBlue);
  const std::uint32_t full = (std::uint32_t{1} << n) - 1;
  const auto fits = [&](std::uint32_t s) { return red.has_cycle(s) && blue.has_cycle(full ^ s); };
  const auto certificate = [&](std::uint32_t s) {
    return PartitionCertificate{*red.cycle(s), *blue.cycle(full ^ s)};
  };

  threads = std::max(1, threads);
  for (int k = n; k >= 0; --k) {
    const std::uint64_t first = k == 0 ? 0 : (std::uint64_t{1} << k) - 1;
    if (threads == 1 || n < 14) {
      for (std::uint64_t s = first;; s = next_same_popcount(s, n)) {
        if (fits(static_cast<std::uint32_t>(s))) return certificate(static_cast<std::uint32_t>(s));
        if (k == 0 || next_same_popcount(s, n) == 0) break;
      }
      continue;
    }
    std::vector<std::uint32_t> stratum;
    for (std::uint64_t s = first;; s = next_same_popcount(s, n)) {
      stratum.push_back(static_cast<std::uint32_t>(s));
      if (k == 0 || next_same_popcount(s, n) == 0) break;
    }
    std::atomic<std::size_t> best{stratum.size()};
    std::vector<std::thread> pool;
    const std::size_t chunk = (stratum.size() + static_cast<std::size_t>(threads) - 1) / static_cast<std::size_t>(threads);
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        const std::size_t lo = chunk * static_cast<std::size_t>(t);
        const std::size_t hi = std::min(stratum.size(), lo + chunk);
        for (std::size_t i = lo; i < hi && i < best.load(std::memory_order_relaxed); ++i) {
          if (fits(stratum[i])) {
            std::size_t cur = best.load();
            while (i < cur && !best.compare_exchange_weak(cur, i)) {
            }
            break;
          }
        }
      });
    }
    for (auto& th : pool) th.join();
    if (best.load() < stratum.size()) return certificate(stratum[best.load()]);
  }
  return std::nullopt;
}

inline nlohmann::ordered_json to_json_value(const PartitionCertificate& c) {
  nlohmann::ordered_json j;
  j["red"] = c.red;
  j["blue"] = c.blue;
  return j;
}

inline PartitionCertificate certificate_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(FormatErrorCode::kMalformedJson, e.what());
  }
  if (!j.is_object() || !j.contains("red") || !j.contains("blue") || !j["red"].is_array() || !j["blue"].is_array()) {
    throw FormatError(FormatErrorCode::kBadShape, "certificate needs arrays 'red' and 'blue'");
  }
  PartitionCertificate c;
  try {
    c.red = j["red"].get<std::vector<Vertex>>();
    c.blue = j["blue"].get<std::vector<Vertex>>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(FormatErrorCode::kBadShape, e.what());
  }
  return c;
}

// ---------------------------------------------------------------------------
// Scanner

inline int scan_degree_target(int n) { return (3 * n + 3) / 4; }

struct ScanRecord {
  std::uint64_t index = 0;
  ColouredGraph graph;
  std::optional<PartitionCertificate> certificate;
  bool certificate_valid = false;
  std::optional<bool> oracle_agrees;  // only for negative results with n <= 10
};

struct ScanReport {
  int n = 0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  int degree_target = 0;
  bool exhaustive = false;
  std::vector<ScanRecord> records;

  std::uint64_t yes() const {
    return static_cast<std::uint64_t>(std::count_if(records.begin(), records.end(), [](const auto& r) { return r.certificate.has_value(); }));
  }
  std::uint64_t no() const { return records.size() - yes(); }
  bool all_certificates_valid() const {
    return std::all_of(records.begin(), records.end(), [](const auto& r) { return !r.certificate || r.certificate_valid; });
  }
  bool oracle_consistent() const {
    return std::all_of(records.begin(), records.end(), [](const auto& r) { return r.oracle_agrees.value_or(true); });
  }
};

inline constexpr int kOracleCap = 10;

/// The 64 red/blue colourings of K4, in the order of the binary expansion
/// of the colouring index over the lexicographically sorted pairs.
inline ColouredGraph k4_colouring(unsigned index) {
  ColouredGraph g(4);
  unsigned bit = 0;
  for (Vertex u = 0; u < 4; ++u) {
    for (Vertex v = u + 1; v < 4; ++v, ++bit) g.set_mark(u, v, ((index >> bit) & 1U) ? Mark::kBlue : Mark::kRed);
  }
  return g;
}

/// Random instances with union minimum degree >= ceil(3n/4); for n = 4 the
/// whole colouring space of K4 is enumerated instead.
inline ScanReport scan_conjecture(int n, std::uint64_t trials, std::uint64_t seed, int threads = 1) {
  if (n < 4) throw PreconditionError("scan needs n >= 4");
  require_dp_order(n);
  ScanReport report;
  report.n = n;
  report.trials = trials;
  report.seed = seed;
  report.degree_target = scan_degree_target(n);
  if (trials == 0) return report;
  report.exhaustive = n == 4;
  const std::uint64_t count = report.exhaustive ? 64 : trials;
  report.records.resize(count);

  const auto run = [&](std::uint64_t i) {
    ScanRecord& r = report.records[i];
    r.index = i;
    r.graph = report.exhaustive
                  ? k4_colouring(static_cast<unsigned>(i))
                  : random_min_degree_graph(n, report.degree_target, 0.5, derive_seed(derive_seed(seed, static_cast<std::uint64_t>(n)), i));
    r.certificate = solve(r.graph);
    if (r.certificate) {
      r.certificate_valid = verify(r.graph, *r.certificate).valid;
    } else if (n <= kOracleCap) {
      r.oracle_agrees = !brute::partition(r.graph).has_value();
    }
  };

  threads = std::max(1, threads);
  std::atomic<std::uint64_t> next{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::uint64_t i = next++; i < count; i = next++) run(i);
    });
  }
  for (auto& th : pool) th.join();
  return report;
}

inline nlohmann::ordered_json to_json_value(const ScanReport& r) {
  nlohmann::ordered_json j;
  j["n"] = r.n;
  j["trials"] = r.trials;
  j["seed"] = r.seed;
  j["degree_target"] = r.degree_target;
  j["exhaustive"] = r.exhaustive;
  j["yes"] = r.yes();
  j["no"] = r.no();
  j["certificates_verified"] = r.all_certificates_valid();
  j["oracle_consistent"] = r.oracle_consistent();
  auto negatives = nlohmann::ordered_json::array();
  for (const auto& rec : r.records) {
    if (rec.certificate) continue;
    nlohmann::ordered_json e;
    e["index"] = rec.index;
    e["graph"] = to_json_value(rec.graph);
    if (rec.oracle_agrees) e["oracle_confirmed"] = *rec.oracle_agrees;
    negatives.push_back(std::move(e));
  }
  j["no_instances"] = std::move(negatives);
  if (r.exhaustive) {
    auto per = nlohmann::ordered_json::array();
    for (const auto& rec : r.records) {
      nlohmann::ordered_json e;
      e["colouring"] = rec.index;
      e["partition"] = rec.certificate.has_value();
      if (rec.certificate) e["certificate"] = to_json_value(*rec.certificate);
      per.push_back(std::move(e));
    }
    j["colourings"] = std::move(per);
  }
  return j;
}

}  // namespace monocycle
