#include <gtest/gtest.h>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/max_cardinality_matching.hpp>

#include "monocycle/matching.hpp"

using namespace monocycle;

namespace {

ColouredGraph petersen() {
  ColouredGraph g(10);
  for (Vertex i = 0; i < 5; ++i) {
    g.set_mark(i, (i + 1) % 5, Mark::kRed);
    g.set_mark(i, i + 5, Mark::kRed);
    g.set_mark(5 + i, 5 + (i + 2) % 5, Mark::kRed);
  }
  return g;
}

int boost_matching_size(const ColouredGraph& g, View view) {
  using BGraph = boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS>;
  BGraph b(static_cast<std::size_t>(g.order()));
  for (const auto& e : g.edges()) {
    if (mark_in_view(e.mark, view)) boost::add_edge(static_cast<std::size_t>(e.u), static_cast<std::size_t>(e.v), b);
  }
  std::vector<boost::graph_traits<BGraph>::vertex_descriptor> mate(static_cast<std::size_t>(g.order()));
  boost::edmonds_maximum_cardinality_matching(b, &mate[0]);
  return static_cast<int>(boost::matching_size(b, &mate[0]));
}

Partition sized_parts(int n, const std::vector<int>& sizes) {
  Partition parts;
  Vertex next = 0;
  for (int s : sizes) {
    VertexSet p(n);
    for (int k = 0; k < s; ++k) p.insert(next++);
    parts.push_back(p);
  }
  return parts;
}

ColouredGraph complete_multipartite(const Partition& parts, int n) {
  ColouredGraph g(n);
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) {
      bool same = false;
      for (const auto& p : parts) same = same || (p.contains(u) && p.contains(v));
      if (!same) g.set_mark(u, v, Mark::kRed);
    }
  }
  return g;
}

// n vertices, parts as listed, with (u,v) joined when join(u, v) holds.
template <typename F>
ColouredGraph build(int n, F&& join) {
  ColouredGraph g(n);
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) {
      if (join(u, v)) g.set_mark(u, v, Mark::kRed);
    }
  }
  return g;
}

}  // namespace

TEST(MaxMatching, Examples) {
  EXPECT_EQ(max_matching(complete_graph(4, Mark::kRed), View::kRed).size(), 2);
  EXPECT_EQ(max_matching(cycle_graph(5, {Mark::kBlue}), View::kBlue).size(), 2);
  const auto p = max_matching(petersen(), View::kRed);
  EXPECT_EQ(p.size(), 5);
  EXPECT_TRUE(p.is_perfect());
  EXPECT_TRUE(tutte_oracle(petersen(), View::kRed).ok);
}

TEST(MaxMatching, AgreesWithBoostAndIsValid) {
  for (std::uint64_t seed = 0; seed < 2000; ++seed) {
    Rng rng(seed);
    const int n = 1 + rng.below(40);
    const auto g = random_graph(n, 0.02 + 0.3 * rng.uniform(), 0.5, seed);
    const auto m = max_matching(g, View::kUnion);
    ASSERT_TRUE(is_matching_in(g, View::kUnion, m));
    ASSERT_EQ(m.size(), boost_matching_size(g, View::kUnion)) << to_json(g);
  }
}

TEST(MaxMatching, DeterministicUnderFixedInput) {
  const auto g = random_graph(30, 0.2, 0.5, 4);
  EXPECT_EQ(max_matching(g, View::kRed).mate, max_matching(g, View::kRed).mate);
}

TEST(HopcroftKarp, AgreesWithBlossomOnBipartiteGraphs) {
  for (std::uint64_t seed = 0; seed < 2000; ++seed) {
    Rng rng(seed);
    const int a = 1 + rng.below(20);
    const int b = 1 + rng.below(20);
    const double p = 0.02 + 0.3 * rng.uniform();
    const auto g = build(a + b, [&](Vertex u, Vertex v) { return u < a && v >= a && rng.bernoulli(p); });
    VertexSet left(a + b);
    for (Vertex v = 0; v < a; ++v) left.insert(v);
    const auto hk = max_bipartite_matching(g, View::kRed, left, left.complement());
    ASSERT_TRUE(is_matching_in(g, View::kRed, hk));
    ASSERT_EQ(hk.size(), max_matching(g, View::kRed).size());
    ASSERT_EQ(max_matching(g, View::kRed, std::optional<VertexSet>(left)).size(), hk.size());
  }
}

TEST(GallaiEdmonds, MatchesDefinition) {
  for (std::uint64_t seed = 0; seed < 400; ++seed) {
    Rng rng(seed);
    const int n = 1 + rng.below(14);
    const auto g = random_graph(n, 0.1 + 0.4 * rng.uniform(), 1.0, seed);
    const int nu = max_matching(g, View::kRed).size();
    VertexSet d(n);
    for (Vertex v = 0; v < n; ++v) {
      VertexSet rest = VertexSet::full(n);
      rest.erase(v);
      if (max_matching(g, View::kRed, rest).size() == nu) d.insert(v);
    }
    const auto ge = gallai_edmonds(g, View::kRed);
    ASSERT_EQ(ge.d, d) << to_json(g);
    ASSERT_EQ(ge.a, neighbourhood(g, View::kRed, d) - d);
  }
}

TEST(Tutte, Examples) {
  EXPECT_TRUE(tutte_oracle(complete_graph(4, Mark::kRed), View::kRed).ok);
  const auto star = build(4, [](Vertex u, Vertex) { return u == 0; });
  const auto r = tutte_oracle(star, View::kRed);
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.violator, VertexSet(4, {0}));
  EXPECT_EQ(r.odd_components, 3);
  const auto odd = tutte_oracle(complete_graph(5, Mark::kRed), View::kRed);
  EXPECT_FALSE(odd.ok);
  EXPECT_TRUE(odd.violator.empty());
  EXPECT_THROW(tutte_oracle(ColouredGraph(17), View::kRed), CapacityError);
}

TEST(Tutte, EquivalentToPerfectMatchingExistence) {
  for (std::uint64_t seed = 0; seed < 10000; ++seed) {
    Rng rng(seed);
    const int n = 1 + rng.below(12);
    const auto g = random_graph(n, 0.1 + 0.6 * rng.uniform(), 0.5, seed);
    const bool perfect = max_matching(g, View::kUnion).is_perfect();
    ASSERT_EQ(perfect, tutte_oracle(g, View::kUnion).ok) << to_json(g);
  }
}

TEST(TripartiteExact, Examples) {
  const auto p222 = sized_parts(6, {2, 2, 2});
  const auto m = tripartite_exact(complete_multipartite(p222, 6), View::kRed, p222);
  EXPECT_EQ(m.size(), 3);

  const auto p444 = sized_parts(12, {4, 4, 4});
  auto g = complete_multipartite(p444, 12);
  g.set_mark(0, 4, Mark::kNone);
  EXPECT_TRUE(tripartite_exact(g, View::kRed, p444).is_perfect());

  auto sparse = complete_multipartite(p222, 6);
  sparse.set_mark(0, 2, Mark::kNone);
  sparse.set_mark(0, 3, Mark::kNone);
  EXPECT_THROW(tripartite_exact(sparse, View::kRed, p222), PreconditionError);
}

TEST(TripartiteExact, NeverFailsOnPremiseInstances) {
  int accepted = 0;
  for (std::uint64_t seed = 0; accepted < 1000; ++seed) {
    Rng rng(seed);
    const int s = 2 * (1 + rng.below(5));
    const auto parts = sized_parts(3 * s, {s, s, s});
    auto g = complete_multipartite(parts, 3 * s);
    const double p = 0.25 * rng.uniform();
    for (const auto& e : g.edges()) {
      if (rng.bernoulli(p)) g.set_mark(e.u, e.v, Mark::kNone);
    }
    try {
      const auto m = tripartite_exact(g, View::kRed, parts);
      ASSERT_TRUE(m.is_perfect());
      ASSERT_TRUE(is_matching_in(g, View::kRed, m));
      ++accepted;
    } catch (const PreconditionError&) {
    }
  }
}

TEST(TripartiteStability, CompleteBalancedGivesMatching) {
  const auto parts = sized_parts(24, {8, 8, 8});
  const auto r = tripartite_stability(complete_multipartite(parts, 24), View::kRed, parts, 0.02);
  ASSERT_TRUE(std::holds_alternative<Matching>(r));
  EXPECT_TRUE(std::get<Matching>(r).is_perfect());
}

// X1 = 8 vertices complete to everything outside X1; X2 = Y2 + t2, X3 = Y3 + t3
// with Y2 u Y3 independent (7 + 7) and t2, t3 complete to other parts.
TEST(TripartiteStability, BarrierBlowUpGivesIndependentPair) {
  const int n = 24;
  const auto parts = sized_parts(n, {8, 8, 8});
  const auto in_y = [](Vertex v) { return (v >= 8 && v < 15) || (v >= 16 && v < 23); };
  const auto part_of = [](Vertex v) { return v / 8; };
  const auto g = build(n, [&](Vertex u, Vertex v) { return part_of(u) != part_of(v) && !(in_y(u) && in_y(v)); });
  const auto r = tripartite_stability(g, View::kRed, parts, 1.0 / 24);
  ASSERT_TRUE(std::holds_alternative<StabilityWitness>(r));
  const auto& w = std::get<StabilityWitness>(r);
  EXPECT_EQ(w.kind, WitnessKind::kIndependentPair);
  EXPECT_TRUE(verify_witness(g, View::kRed, parts, w));
  EXPECT_EQ(w.set.size(), 14);
}

TEST(TripartiteStability, ExhaustiveRouteAgreesOnBlowUp) {
  const int n = 24;
  const auto parts = sized_parts(n, {8, 8, 8});
  const auto in_y = [](Vertex v) { return (v >= 8 && v < 15) || (v >= 16 && v < 23); };
  const auto part_of = [](Vertex v) { return v / 8; };
  const auto g = build(n, [&](Vertex u, Vertex v) { return part_of(u) != part_of(v) && !(in_y(u) && in_y(v)); });
  const auto r = tripartite_stability(g, View::kRed, parts, 1.0 / 24, n);
  ASSERT_TRUE(std::holds_alternative<StabilityWitness>(r));
  const auto& w = std::get<StabilityWitness>(r);
  EXPECT_TRUE(verify_witness(g, View::kRed, parts, w));
  EXPECT_EQ(w.set.intersection_size(parts[1]), 7);
  EXPECT_EQ(w.set.intersection_size(parts[2]), 7);
}

TEST(TripartiteStability, EpsTooLargeIsRejected) {
  const auto parts = sized_parts(24, {8, 8, 8});
  EXPECT_THROW(tripartite_stability(complete_multipartite(parts, 24), View::kRed, parts, 0.2), PreconditionError);
}

TEST(Hall, CompleteBipartiteGivesMatching) {
  const auto parts = sized_parts(20, {10, 10});
  const auto r = hall_dichotomy(complete_bipartite(10, 10, Mark::kBlue), View::kBlue, parts, 0.05);
  EXPECT_TRUE(std::holds_alternative<Matching>(r));
}

// A1 (t) sees only B2 (t - 1); A2 (m - t + 1) sees only B1 (m - t); B1-B2 complete.
TEST(Hall, DeficientBlowUpGivesWitness) {
  const int m = 20;
  const int t = 10;
  const int n = 2 * m;
  const auto parts = sized_parts(n, {m, m});
  const auto in_a1 = [&](Vertex v) { return v < t; };
  const auto in_b1 = [&](Vertex v) { return v >= t && v < m; };
  const auto in_b2 = [&](Vertex v) { return v >= m && v < m + t - 1; };
  const auto in_a2 = [&](Vertex v) { return v >= m + t - 1; };
  const auto g = build(n, [&](Vertex u, Vertex v) {
    return (in_a1(u) && in_b2(v)) || (in_b1(u) && in_a2(v)) || (in_b1(u) && in_b2(v));
  });
  const auto r = hall_dichotomy(g, View::kRed, parts, 0.05);
  ASSERT_TRUE(std::holds_alternative<HallWitness>(r));
  const auto& w = std::get<HallWitness>(r);
  EXPECT_FALSE(neighbourhood(g, View::kRed, w.a1).intersects(w.a2));
  EXPECT_TRUE(w.a1.is_subset_of(parts[0]));
  EXPECT_TRUE(w.a2.is_subset_of(parts[1]));
  EXPECT_GE(w.a1.size(), 8);
  EXPECT_LE(w.a1.size(), 12);
  EXPECT_GE(w.a2.size(), 8);
  EXPECT_LE(w.a2.size(), 12);
}

TEST(Hall, UnbalancedPartsRejected) {
  const auto parts = sized_parts(9, {4, 5});
  EXPECT_THROW(hall_dichotomy(complete_bipartite(4, 5, Mark::kRed), View::kRed, parts, 0.05), PreconditionError);
}

TEST(BipartiteTechnical, CompleteBipartiteGivesMatching) {
  const auto parts = sized_parts(20, {10, 10});
  const auto r = bipartite_technical(complete_bipartite(10, 10, Mark::kRed), View::kRed, parts, 0.05);
  EXPECT_TRUE(std::holds_alternative<Matching>(r));
}

TEST(BipartiteTechnical, TwoOddCliquesAreNotTwoConnected) {
  const int a = 10;
  const int n = 4 * a + 2;
  // X1 = {0..2a}, X2 = rest. Block one: X1[0..a] with X2[0..a-1]; block two the remainder.
  const auto parts = sized_parts(n, {2 * a + 1, 2 * a + 1});
  const auto block = [&](Vertex v) {
    if (v <= 2 * a) return v <= a ? 0 : 1;
    return v - (2 * a + 1) < a ? 0 : 1;
  };
  const auto g = build(n, [&](Vertex u, Vertex v) { return block(u) == block(v); });
  const auto r = bipartite_technical(g, View::kRed, parts, 0.05);
  ASSERT_TRUE(std::holds_alternative<StabilityWitness>(r));
  const auto& w = std::get<StabilityWitness>(r);
  EXPECT_EQ(w.kind, WitnessKind::kNotTwoConnected);
  EXPECT_TRUE(w.set.empty());
}

TEST(BipartiteTechnical, ArticulationVertex) {
  // Vertex 0 (in X1) joins three odd cliques of 7 vertices each.
  const int n = 22;
  std::vector<int> block(n, -1);
  const std::vector<std::vector<Vertex>> blocks = {
      {1, 2, 3, 4, 11, 12, 13}, {5, 6, 7, 14, 15, 16, 17}, {8, 9, 10, 18, 19, 20, 21}};
  for (int b = 0; b < 3; ++b) {
    for (Vertex v : blocks[static_cast<std::size_t>(b)]) block[static_cast<std::size_t>(v)] = b;
  }
  const auto g = build(n, [&](Vertex u, Vertex v) {
    return u == 0 || block[static_cast<std::size_t>(u)] == block[static_cast<std::size_t>(v)];
  });
  const auto parts = sized_parts(n, {11, 11});
  const auto r = bipartite_technical(g, View::kRed, parts, 0.12);
  ASSERT_TRUE(std::holds_alternative<StabilityWitness>(r));
  const auto& w = std::get<StabilityWitness>(r);
  EXPECT_EQ(w.kind, WitnessKind::kNotTwoConnected);
  EXPECT_EQ(w.set, VertexSet(n, {0}));
}

TEST(BipartiteTechnical, LargeIndependentInBiggerPart) {
  // X1 = 12 independent vertices, X2 = 10-clique, complete between.
  const int n = 22;
  const auto parts = sized_parts(n, {12, 10});
  const auto g = build(n, [](Vertex, Vertex v) { return v >= 12; });
  const auto r = bipartite_technical(g, View::kRed, parts, 0.05);
  ASSERT_TRUE(std::holds_alternative<StabilityWitness>(r));
  const auto& w = std::get<StabilityWitness>(r);
  EXPECT_EQ(w.kind, WitnessKind::kLargeIndependent);
  EXPECT_EQ(w.part_i, 0);
  EXPECT_TRUE(verify_witness(g, View::kRed, parts, w));
}

TEST(BipartiteTechnical, SplitIndependent) {
  // Xi = Ai (11, independent overall) + Si (10, complete to everything).
  const int n = 42;
  const auto parts = sized_parts(n, {21, 21});
  const auto in_s = [](Vertex v) { return (v >= 11 && v < 21) || v >= 32; };
  const auto g = build(n, [&](Vertex u, Vertex v) { return in_s(u) || in_s(v); });
  const auto r = bipartite_technical(g, View::kRed, parts, 0.02);
  ASSERT_TRUE(std::holds_alternative<StabilityWitness>(r));
  const auto& w = std::get<StabilityWitness>(r);
  EXPECT_EQ(w.kind, WitnessKind::kSplitIndependent);
  EXPECT_EQ(w.set.size(), 22);
  EXPECT_TRUE(verify_witness(g, View::kRed, parts, w));
}

TEST(BipartiteTechnical, ExhaustiveRouteAlwaysVerifies) {
  int witnesses = 0;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    Rng rng(seed);
    const int half = 4 + rng.below(5);
    const int n = 2 * half;
    const auto parts = sized_parts(n, {half, half});
    const double p = 0.6 + 0.4 * rng.uniform();
    // A planted independent set of half + 1 vertices rules out a perfect matching.
    std::vector<Vertex> order(static_cast<std::size_t>(n));
    for (Vertex v = 0; v < n; ++v) order[static_cast<std::size_t>(v)] = v;
    rng.shuffle(order);
    VertexSet planted(n);
    for (int k = 0; k <= half; ++k) planted.insert(order[static_cast<std::size_t>(k)]);
    const auto g = build(n, [&](Vertex u, Vertex v) { return !(planted.contains(u) && planted.contains(v)) && rng.bernoulli(p); });
    try {
      const auto r = bipartite_technical(g, View::kRed, parts, 0.1);
      if (const auto* w = std::get_if<StabilityWitness>(&r)) {
        ++witnesses;
        ASSERT_TRUE(verify_witness(g, View::kRed, parts, *w));
      } else if (const auto* m = std::get_if<Matching>(&r)) {
        ASSERT_TRUE(m->is_perfect());
      }
    } catch (const PreconditionError&) {
    }
  }
  EXPECT_GT(witnesses, 0);
}

TEST(BipartiteTechnical, PremiseViolation) {
  const auto parts = sized_parts(20, {10, 10});
  EXPECT_THROW(bipartite_technical(ColouredGraph(20), View::kRed, parts, 0.05), PreconditionError);
}
