// monocycle: command-line front end. Payloads go to stdout as one JSON
// document; logs and timings go to stderr.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "monocycle/monocycle.hpp"

using namespace monocycle;
using Json = nlohmann::ordered_json;

namespace {

enum Exit { kOk = 0, kNegative = 1, kUsage = 2, kCapacity = 3 };

struct Options {
  std::uint64_t seed = 0;
  int threads = default_threads();
  double eps = 0.1;
  double alpha = 0.5;
  int k = 1;
  double rho = 0.3;
  std::string view = "R";
  std::string out;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

View view_of(const std::string& s) {
  const auto v = parse_view(s);
  if (!v) throw UsageError("--view must be R, B or U");
  return *v;
}

/// Inline JSON (starting with '[') or a file holding an array of vertex arrays.
std::vector<VertexSet> parse_parts(const std::string& text, int n) {
  const std::string body = !text.empty() && text.front() == '[' ? text : read_input(text);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(FormatErrorCode::kMalformedJson, e.what());
  }
  if (j.is_object() && j.contains("parts")) j = j["parts"];
  if (!j.is_array()) throw FormatError(FormatErrorCode::kBadShape, "parts must be an array of vertex arrays");
  std::vector<VertexSet> parts;
  for (const auto& p : j) {
    if (!p.is_array()) throw FormatError(FormatErrorCode::kBadShape, "parts must be an array of vertex arrays");
    VertexSet s(n);
    for (const auto& v : p) {
      if (!v.is_number_integer() || v.get<int>() < 0 || v.get<int>() >= n) {
        throw FormatError(FormatErrorCode::kOutOfRange, "part member outside 0.." + std::to_string(n - 1));
      }
      s.insert(v.get<int>());
    }
    parts.push_back(std::move(s));
  }
  return parts;
}

Json sets_json(const std::vector<VertexSet>& parts) {
  Json a = Json::array();
  for (const auto& p : parts) a.push_back(p.to_vector());
  return a;
}

Json matching_json(const Matching& m) {
  Json j;
  j["size"] = m.size();
  j["perfect"] = m.is_perfect();
  Json e = Json::array();
  for (const auto& [u, v] : m.edges()) e.push_back({u, v});
  j["edges"] = std::move(e);
  return j;
}

Json witness_json(const StabilityWitness& w) {
  Json j;
  j["kind"] = to_string(w.kind);
  j["part_i"] = w.part_i;
  j["part_j"] = w.part_j;
  j["set"] = w.set.to_vector();
  j["neighbourhood"] = w.neighbourhood.to_vector();
  return j;
}

/// "8..12" or "9".
std::pair<int, int> parse_range(const std::string& s) {
  const auto dots = s.find("..");
  try {
    if (dots == std::string::npos) {
      const int v = std::stoi(s);
      return {v, v};
    }
    return {std::stoi(s.substr(0, dots)), std::stoi(s.substr(dots + 2))};
  } catch (const std::exception&) {
    throw UsageError("bad range '" + s + "'");
  }
}

/// "4m+1", "3m", "3m-1".
Affine parse_affine(const std::string& s) {
  const auto mpos = s.find('m');
  try {
    if (mpos == std::string::npos) return {0, std::stoi(s)};
    Affine a;
    a.a = mpos == 0 ? 1 : std::stoi(s.substr(0, mpos));
    const std::string rest = s.substr(mpos + 1);
    a.b = rest.empty() ? 0 : std::stoi(rest);
    return a;
  } catch (const std::exception&) {
    throw UsageError("bad affine form '" + s + "'");
  }
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  try {
    while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
  } catch (const std::exception&) {
    throw UsageError("bad integer list '" + s + "'");
  }
  return out;
}

struct Report {
  std::string subcommand;
  Json parameters = Json::object();
  std::string result;
  Json payload;
  std::optional<bool> verified;
  int code = kOk;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monochromatic cycle partition toolkit"};
  app.fallthrough();
  app.require_subcommand(1);
  Options opt;
  app.add_option("--seed", opt.seed, "Seed for every randomized step");
  app.add_option("--threads", opt.threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--eps", opt.eps, "Tolerance eps");
  app.add_option("--alpha", opt.alpha, "Robustness density alpha");
  app.add_option("--k", opt.k, "Path length bound k");
  app.add_option("--rho", opt.rho, "Absorbing path budget rho");
  app.add_option("--view", opt.view, "Colour view: R, B or U");
  app.add_option("--out", opt.out, "Also write the report to this file");

  Report rep;
  std::function<void()> action;

  std::string graph_path;
  std::string cert_path;
  std::string parts_text;

  auto* solve_cmd = app.add_subcommand("solve", "Partition into a red and a blue cycle");
  solve_cmd->add_option("graph", graph_path, "Graph JSON (- for stdin)")->required();
  solve_cmd->callback([&] {
    action = [&] {
      const auto g = graph_from_json(read_input(graph_path));
      rep.parameters["n"] = g.order();
      const auto cert = solve(g, opt.threads);
      if (!cert) {
        rep.result = "none";
        rep.code = kNegative;
        return;
      }
      rep.result = "partition";
      rep.payload = to_json_value(*cert);
      rep.verified = verify(g, *cert).valid;
    };
  });

  auto* verify_cmd = app.add_subcommand("verify", "Check a partition certificate");
  verify_cmd->add_option("graph", graph_path, "Graph JSON")->required();
  verify_cmd->add_option("certificate", cert_path, "Certificate JSON")->required();
  verify_cmd->callback([&] {
    action = [&] {
      const auto g = graph_from_json(read_input(graph_path));
      const auto cert = certificate_from_json(read_input(cert_path));
      const auto v = verify(g, cert);
      rep.result = v.valid ? "valid" : "invalid";
      rep.payload = {{"reason", v.reason}};
      rep.verified = v.valid;
      rep.code = v.valid ? kOk : kNegative;
    };
  });

  std::string n_range = "8..12";
  std::uint64_t trials = 100;
  auto* scan_cmd = app.add_subcommand("scan", "Random instances at minimum degree ceil(3n/4)");
  scan_cmd->add_option("--n", n_range, "Order or range a..b");
  scan_cmd->add_option("--trials", trials, "Instances per order");
  scan_cmd->callback([&] {
    action = [&] {
      const auto [lo, hi] = parse_range(n_range);
      if (lo > hi) throw UsageError("empty range");
      rep.parameters["n"] = n_range;
      rep.parameters["trials"] = trials;
      Json per = Json::array();
      bool ok = true;
      for (int n = lo; n <= hi; ++n) {
        const auto r = scan_conjecture(n, trials, opt.seed, opt.threads);
        ok = ok && r.all_certificates_valid() && r.oracle_consistent();
        per.push_back(to_json_value(r));
        std::cerr << "scan n=" << n << ": " << r.yes() << " yes, " << r.no() << " no\n";
      }
      rep.payload = std::move(per);
      rep.verified = ok;
      rep.result = ok ? "consistent" : "inconsistent";
      rep.code = ok ? kOk : kNegative;
    };
  });

  auto* matching_cmd = app.add_subcommand("matching", "Maximum matching of the view");
  matching_cmd->add_option("graph", graph_path, "Graph JSON")->required();
  matching_cmd->callback([&] {
    action = [&] {
      const auto g = graph_from_json(read_input(graph_path));
      const View view = view_of(opt.view);
      rep.parameters["view"] = to_string(view);
      const auto m = max_matching(g, view);
      rep.payload = matching_json(m);
      rep.verified = is_matching_in(g, view, m);
      rep.result = m.is_perfect() ? "perfect" : "maximum";
    };
  });

  auto* tutte_cmd = app.add_subcommand("tutte", "Tutte condition against the blossom matching");
  tutte_cmd->add_option("graph", graph_path, "Graph JSON")->required();
  tutte_cmd->callback([&] {
    action = [&] {
      const auto g = graph_from_json(read_input(graph_path));
      const View view = view_of(opt.view);
      rep.parameters["view"] = to_string(view);
      const auto t = tutte_oracle(g, view);
      const auto m = max_matching(g, view);
      rep.payload = {{"tutte_holds", t.ok}, {"matching", matching_json(m)}};
      if (!t.ok) {
        rep.payload["violator"] = t.violator.to_vector();
        rep.payload["odd_components"] = t.odd_components;
      }
      rep.verified = t.ok == m.is_perfect();
      rep.result = t.ok ? "perfect-matching" : "violator";
      rep.code = t.ok ? kOk : kNegative;
    };
  });

  std::string lemma_kind;
  auto* lemma_cmd = app.add_subcommand("lemma", "Matching lemmas on a partitioned graph");
  lemma_cmd->add_option("kind", lemma_kind, "tripartite-exact | tripartite-stability | hall | bipartite-technical")
      ->required()
      ->check(CLI::IsMember({"tripartite-exact", "tripartite-stability", "hall", "bipartite-technical"}));
  lemma_cmd->add_option("graph", graph_path, "Graph JSON")->required();
  lemma_cmd->add_option("--parts", parts_text, "Parts as inline JSON or a file")->required();
  lemma_cmd->callback([&] {
    action = [&] {
      const auto g = graph_from_json(read_input(graph_path));
      const View view = view_of(opt.view);
      const auto parts = parse_parts(parts_text, g.order());
      rep.parameters["kind"] = lemma_kind;
      rep.parameters["view"] = to_string(view);
      rep.parameters["parts"] = sets_json(parts);
      auto matched = [&](const Matching& m) {
        rep.result = "matching";
        rep.payload = matching_json(m);
        rep.verified = is_matching_in(g, view, m) && m.is_perfect();
      };
      if (lemma_kind == "tripartite-exact") {
        matched(tripartite_exact(g, view, parts));
        return;
      }
      rep.parameters["eps"] = opt.eps;
      if (lemma_kind == "tripartite-stability") {
        const auto r = tripartite_stability(g, view, parts, opt.eps);
        if (const auto* m = std::get_if<Matching>(&r)) return matched(*m);
        const auto& w = std::get<StabilityWitness>(r);
        rep.result = "witness";
        rep.payload = witness_json(w);
        rep.verified = verify_witness(g, view, parts, w);
        rep.code = kNegative;
      } else if (lemma_kind == "hall") {
        const auto r = hall_dichotomy(g, view, parts, opt.eps);
        if (const auto* m = std::get_if<Matching>(&r)) return matched(*m);
        const auto& w = std::get<HallWitness>(r);
        rep.result = "witness";
        rep.payload = {{"a1", w.a1.to_vector()}, {"a2", w.a2.to_vector()}};
        bool none = true;
        w.a1.for_each([&](Vertex v) { none = none && !g.neighbours(v, view).intersects(w.a2); });
        rep.verified = none;
        rep.code = kNegative;
      } else {
        const auto r = bipartite_technical(g, view, parts, opt.eps);
        if (const auto* m = std::get_if<Matching>(&r)) return matched(*m);
        if (const auto* w = std::get_if<StabilityWitness>(&r)) {
          rep.result = "witness";
          rep.payload = witness_json(*w);
          rep.verified = verify_witness(g, view, parts, *w);
        } else {
          rep.result = "exhausted";
          rep.payload = {{"detail", std::get<Exhaustion>(r).detail}};
        }
        rep.code = kNegative;
      }
    };
  });

  auto* pp_cmd = app.add_subcommand("path-partition", "U, W of equal size with no U-W edge and a path on the rest");
  pp_cmd->add_option("graph", graph_path, "Graph JSON")->required();
  pp_cmd->add_option("--parts", parts_text, "Bipartition: run the balanced bipartite consequence with --k");
  pp_cmd->callback([&] {
    action = [&] {
      const auto g = graph_from_json(read_input(graph_path));
      const View view = view_of(opt.view);
      rep.parameters["view"] = to_string(view);
      if (parts_text.empty()) {
        const auto p = partition_empty_pair_path(g, view);
        rep.result = "partition";
        rep.payload = {{"u", p.u.to_vector()}, {"w", p.w.to_vector()}, {"path", p.path}, {"steps", p.progress.size()}};
        const auto adj = g.adjacency(view);
        rep.verified = is_valid_path_partition(adj, VertexSet::full(g.order()), p);
        return;
      }
      const auto parts = parse_parts(parts_text, g.order());
      if (parts.size() != 2) throw UsageError("--parts needs exactly two sides");
      rep.parameters["k"] = opt.k;
      const auto x = bipartite_corollary(g, view, parts[0], parts[1], opt.k);
      if (!x) {
        rep.result = "none";
        rep.code = kNegative;
        return;
      }
      rep.result = "sets";
      rep.payload = {{"x1", x->first.to_vector()}, {"x2", x->second.to_vector()}};
      bool none = true;
      x->first.for_each([&](Vertex v) { none = none && !g.neighbours(v, view).intersects(x->second); });
      rep.verified = none && x->first.size() == x->second.size() && 4 * x->first.size() >= g.order() - opt.k;
    };
  });

  double beta = 0;
  int perturb_trials = 0;
  auto* robust_cmd = app.add_subcommand("robust", "Strong or weak robustness check, optionally perturbed");
  robust_cmd->add_option("graph", graph_path, "Graph JSON")->required();
  robust_cmd->add_option("--parts", parts_text, "Bipartition for the weak check (first side is X)");
  robust_cmd->add_option("--beta", beta, "Perturbation size");
  robust_cmd->add_option("--trials", perturb_trials, "Perturbation trials per kind (0: none)");
  robust_cmd->callback([&] {
    action = [&] {
      const auto g = graph_from_json(read_input(graph_path));
      const View view = view_of(opt.view);
      std::optional<VertexSet> side_x;
      if (!parts_text.empty()) side_x = parse_parts(parts_text, g.order()).at(0);
      rep.parameters["view"] = to_string(view);
      rep.parameters["alpha"] = opt.alpha;
      rep.parameters["k"] = opt.k;
      const auto all = VertexSet::full(g.order());
      const auto check = check_robust(g, view, all, opt.alpha, opt.k, g.order(), side_x, opt.threads);
      rep.result = to_string(check.verdict);
      rep.payload = {{"check", to_json_value(check)}};
      rep.code = check.verdict == Robustness::kBudget ? kCapacity : check.robust() ? kOk : kNegative;
      if (perturb_trials > 0 && check.robust()) {
        PerturbationParams p;
        p.alpha = opt.alpha;
        p.k = opt.k;
        p.beta = beta;
        p.trials = perturb_trials;
        p.seed = opt.seed;
        p.side_x = side_x;
        p.threads = opt.threads;
        const auto r = perturbation_suite(g, view, all, p);
        rep.payload["perturbation"] = to_json_value(r);
        rep.verified = r.all_passed();
        if (!r.all_passed()) rep.code = kNegative;
      }
    };
  });

  std::string mode = "strong";
  int sets = 10;
  auto* absorb_cmd = app.add_subcommand("absorb", "Build an absorbing path and absorb random sets");
  absorb_cmd->add_option("graph", graph_path, "Graph JSON")->required();
  absorb_cmd->add_option("--mode", mode, "strong or weak")->check(CLI::IsMember({"strong", "weak"}));
  absorb_cmd->add_option("--parts", parts_text, "Bipartition for weak mode (first side is X)");
  absorb_cmd->add_option("--sets", sets, "Random admissible sets to absorb");
  absorb_cmd->callback([&] {
    action = [&] {
      const auto g = graph_from_json(read_input(graph_path));
      const View view = view_of(opt.view);
      AbsorbParams p;
      p.mode = mode == "weak" ? AbsorbMode::kWeak : AbsorbMode::kStrong;
      p.rho = opt.rho;
      p.alpha = opt.alpha;
      p.k = opt.k;
      p.seed = opt.seed;
      if (!parts_text.empty()) p.side_x = parse_parts(parts_text, g.order()).at(0);
      rep.parameters = {{"view", to_string(view)}, {"mode", mode}, {"rho", opt.rho}, {"alpha", opt.alpha},
                        {"k", opt.k}, {"sets", sets}};
      const auto all = VertexSet::full(g.order());
      const auto q = build_absorbing_path(g, view, all, p);
      Rng rng(derive_seed(opt.seed, 1));
      Json runs = Json::array();
      bool ok = absorbing_path_violation(g, q).empty();
      for (int i = 0; i < sets; ++i) {
        auto copy = q;
        const auto w = random_admissible_set(copy, rng);
        absorb_set(g, copy, w);
        const auto seq = copy.sequence();
        const bool good = is_path_in(g, view, seq) && seq.front() == q.ends.first && seq.back() == q.ends.second &&
                          VertexSet::from(g.order(), seq) == (q.original | w) &&
                          static_cast<int>(seq.size()) == q.original.size() + w.size();
        ok = ok && good;
        runs.push_back({{"w", w.to_vector()}, {"ok", good}});
      }
      rep.result = "absorbing-path";
      rep.payload = {{"path", to_json_value(q)}, {"absorptions", std::move(runs)}};
      rep.verified = ok;
      rep.code = ok ? kOk : kNegative;
    };
  });

  bool extract = false;
  auto* convert_cmd = app.add_subcommand("convert", "Blow up a cluster graph and turn a connected matching into a cycle");
  convert_cmd->add_option("clusters", graph_path, "Cluster graph JSON")->required();
  convert_cmd->add_flag("--extract", extract, "Also extract the robust subgraph of the matching's component");
  convert_cmd->callback([&] {
    action = [&] {
      const auto cg = cluster_graph_from_json(read_input(graph_path));
      const View view = view_of(opt.view);
      rep.parameters = {{"view", to_string(view)}, {"eps", opt.eps}};
      const auto b = blow_up(cg, opt.seed);
      const auto cm = find_connected_matching(cg.reduced, view);
      rep.payload = {{"n", b.g.order()}, {"matching", to_json_value(cm)}};
      if (extract) {
        ExtractParams ep;
        ep.eps = opt.eps;
        ep.alpha = opt.alpha;
        ep.k = opt.k;
        ep.threads = opt.threads;
        rep.payload["extraction"] = to_json_value(extract_robust_component(b, view, cm.component, ep));
      }
      ConversionParams cp;
      cp.eps = opt.eps;
      try {
        const auto c = matching_to_cycle(b, cm, VertexSet(b.g.order()), cp);
        rep.payload["conversion"] = to_json_value(c);
        rep.verified = is_cycle_in(b.g, view, c.walk) && c.coverage >= c.floor;
        rep.result = "cycle";
      } catch (const ConstructionError& e) {
        rep.payload["error"] = e.what();
        rep.result = "splice-failure";
        rep.code = kNegative;
      }
    };
  });

  auto* family_cmd = app.add_subcommand("family", "Block models: search, verify, emit");
  family_cmd->require_subcommand(1);
  int blocks = 5;
  std::string order = "4m+1";
  std::string degree = "3m";
  std::string probes = "2,3";
  bool no_arbitrary = false;
  int fill_seeds = kDefaultFillSeeds;
  int scale = 2;
  std::string model_path;
  auto* fsearch = family_cmd->add_subcommand("search", "Exhaustive search for sharp block models");
  fsearch->add_option("--blocks", blocks, "Maximum block count (1..5)");
  fsearch->add_option("--order", order, "Order as am+b");
  fsearch->add_option("--degree", degree, "Minimum degree as am+b");
  fsearch->add_option("--probes", probes, "Comma-separated m values");
  fsearch->add_flag("--no-arbitrary", no_arbitrary, "Skip arbitrary-region upgrades");
  fsearch->add_option("--fills", fill_seeds, "Random fills per arbitrary check");
  fsearch->callback([&] {
    action = [&] {
      SearchParams p;
      p.max_blocks = blocks;
      p.order = parse_affine(order);
      p.degree = parse_affine(degree);
      p.probes = parse_int_list(probes);
      p.upgrade_arbitrary = !no_arbitrary;
      p.fill_seeds = fill_seeds;
      p.threads = opt.threads;
      rep.parameters = {{"blocks", blocks}, {"order", order}, {"degree", degree}, {"probes", p.probes},
                        {"arbitrary", !no_arbitrary}, {"fills", fill_seeds}};
      const auto r = search_models(p);
      bool ok = true;
      for (const auto& model : r.models) {
        for (int m : p.probes) ok = ok && verify_sharpness(model, m, fill_seeds, opt.seed).pass;
      }
      rep.payload = to_json_value(r);
      rep.verified = ok;
      rep.result = r.models.empty() ? "none" : "models";
      rep.code = r.models.empty() ? kNegative : kOk;
    };
  });
  auto* fverify = family_cmd->add_subcommand("verify", "Sharpness of a block model at scale m");
  fverify->add_option("model", model_path, "Block model JSON")->required();
  fverify->add_option("--m", scale, "Scale m");
  fverify->add_option("--fills", fill_seeds, "Random fills for arbitrary regions");
  fverify->callback([&] {
    action = [&] {
      const auto model = block_model_from_json(read_input(model_path));
      rep.parameters = {{"m", scale}, {"fills", fill_seeds}};
      const auto r = verify_sharpness(model, scale, fill_seeds, opt.seed);
      rep.payload = to_json_value(r);
      rep.result = r.pass ? "sharp" : "not-sharp";
      rep.code = r.pass ? kOk : kNegative;
    };
  });
  auto* femit = family_cmd->add_subcommand("emit", "Instantiate a block model as a graph");
  femit->add_option("model", model_path, "Block model JSON")->required();
  femit->add_option("--m", scale, "Scale m");
  femit->callback([&] {
    action = [&] {
      const auto model = block_model_from_json(read_input(model_path));
      rep.parameters = {{"m", scale}};
      rep.payload = to_json_value(instantiate(model, scale, opt.seed));
      rep.result = "graph";
    };
  });

  std::string gen_kind;
  int gen_n = 8;
  int gen_b = 0;
  int gen_delta = 0;
  double density = 0.5;
  double red_share = 0.5;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a coloured graph");
  gen_cmd->add_option("kind", gen_kind, "complete | bipartite | cycle | path | random | min-degree")
      ->required()
      ->check(CLI::IsMember({"complete", "bipartite", "cycle", "path", "random", "min-degree"}));
  gen_cmd->add_option("--n", gen_n, "Order (first side for bipartite)");
  gen_cmd->add_option("--b", gen_b, "Second side for bipartite");
  gen_cmd->add_option("--delta", gen_delta, "Minimum degree target for min-degree");
  gen_cmd->add_option("--density", density, "Edge probability for random");
  gen_cmd->add_option("--red", red_share, "Probability that an edge is red");
  gen_cmd->callback([&] {
    action = [&] {
      if (gen_n < 0 || gen_n > 100'000) throw UsageError("--n out of range");
      const Mark mark = opt.view == "B" ? Mark::kBlue : Mark::kRed;
      rep.parameters = {{"kind", gen_kind}, {"n", gen_n}};
      ColouredGraph g;
      if (gen_kind == "complete") g = complete_graph(gen_n, mark);
      else if (gen_kind == "bipartite") g = complete_bipartite(gen_n, gen_b, mark);
      else if (gen_kind == "cycle") g = cycle_graph(gen_n, {mark});
      else if (gen_kind == "path") g = path_graph(gen_n, mark);
      else if (gen_kind == "random") g = random_graph(gen_n, density, red_share, opt.seed);
      else g = random_min_degree_graph(gen_n, gen_delta, red_share, opt.seed);
      rep.payload = to_json_value(g);
      rep.result = "graph";
    };
  });

  auto* ham_cmd = app.add_subcommand("ham", "Hamilton cycle of the view and the degree conditions");
  ham_cmd->add_option("graph", graph_path, "Graph JSON")->required();
  ham_cmd->callback([&] {
    action = [&] {
      const auto g = graph_from_json(read_input(graph_path));
      const View view = view_of(opt.view);
      rep.parameters["view"] = to_string(view);
      const auto all = VertexSet::full(g.order());
      const auto cycle = mono_cycle_on(g, view, all);
      auto degrees = degree_sequence(g, view);
      std::sort(degrees.begin(), degrees.end());
      rep.payload = {{"chvatal", chvatal_guarantees(degrees)}, {"bondy_premise", bondy_premise(g, view)}};
      if (cycle) {
        rep.payload["cycle"] = *cycle;
        rep.verified = is_cycle_in(g, view, *cycle) && static_cast<int>(cycle->size()) == g.order();
        rep.result = "hamiltonian";
      } else {
        rep.result = "none";
        rep.code = kNegative;
      }
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e, std::cerr, std::cerr);
    return kUsage;
  }
  if (!action) {
    std::cerr << app.help();
    return kUsage;
  }
  for (const auto* sub : app.get_subcommands()) {
    rep.subcommand = sub->get_name();
    for (const auto* inner : sub->get_subcommands()) rep.subcommand += " " + inner->get_name();
  }

  const auto start = std::chrono::steady_clock::now();
  try {
    action();
  } catch (const UsageError& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return kUsage;
  } catch (const FormatError& e) {
    std::cerr << "input: " << e.what() << "\n";
    return kUsage;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition: " << e.what() << "\n";
    return kUsage;
  } catch (const CapacityError& e) {
    rep.result = "capacity";
    rep.payload = {{"error", e.what()}};
    rep.code = kCapacity;
  } catch (const BudgetExhausted& e) {
    rep.result = "budget";
    rep.payload = {{"error", e.what()}};
    rep.code = kCapacity;
  } catch (const ConstructionError& e) {
    rep.result = "construction-failure";
    rep.payload = {{"error", e.what()}};
    rep.code = kNegative;
  }
  std::cerr << rep.subcommand << ": "
            << std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() << " s\n";

  Json out;
  out["subcommand"] = rep.subcommand;
  out["seed"] = opt.seed;
  out["parameters"] = rep.parameters;
  out["result"] = rep.result;
  if (!rep.payload.is_null()) out["payload"] = rep.payload;
  if (rep.verified) out["verified"] = *rep.verified;
  const std::string text = out.dump() + "\n";
  std::cout << text;
  if (!opt.out.empty()) {
    std::ofstream f(opt.out);
    if (!f) {
      std::cerr << "cannot write '" << opt.out << "'\n";
      return kUsage;
    }
    f << text;
  }
  return rep.code;
}
