#include <gtest/gtest.h>

#include "monocycle/absorbing.hpp"

using namespace monocycle;

namespace {

VertexSet all(int n) { return VertexSet::full(n); }

VertexSet first_half(int n) {
  VertexSet x(n);
  for (Vertex v = 0; v < n / 2; ++v) x.insert(v);
  return x;
}

// Cliques of size s placed along a path of length `len`, consecutive cliques
// completely joined.
ColouredGraph clique_path(int len, int s) {
  const int n = (len + 1) * s;
  ColouredGraph g(n);
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) {
      if (v / s - u / s <= 1) g.set_mark(u, v, Mark::kRed);
    }
  }
  return g;
}

bool consecutive_edges(const ColouredGraph& g, View view, const std::vector<Vertex>& s) {
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (!g.adjacent(s[i - 1], s[i], view)) return false;
  }
  return true;
}

AbsorbParams strong_params(double rho) {
  AbsorbParams p;
  p.rho = rho;
  p.alpha = 0.5;
  p.k = 1;
  p.seed = 1;
  return p;
}

AbsorbParams weak_params(int n) {
  AbsorbParams p;
  p.mode = AbsorbMode::kWeak;
  p.rho = 0.3;
  p.alpha = 0.2;
  p.k = 2;
  p.side_x = first_half(n);
  p.seed = 2;
  return p;
}

}  // namespace

TEST(PathSearch, ExactLengths) {
  const auto g = complete_graph(8, Mark::kRed);
  const auto adj = g.adjacency(View::kRed);
  for (int e = 1; e <= 7; ++e) {
    const auto p = find_path_of_length(adj, 0, 7, e, all(8));
    ASSERT_TRUE(p) << e;
    EXPECT_EQ(p->size(), static_cast<std::size_t>(e + 1));
    EXPECT_TRUE(consecutive_edges(g, View::kRed, *p));
  }
  EXPECT_FALSE(find_path_of_length(adj, 0, 7, 8, all(8)));
  const auto c = cycle_graph(6, {Mark::kBlue});
  const auto cadj = c.adjacency(View::kBlue);
  EXPECT_FALSE(find_path_of_length(cadj, 0, 1, 2, all(6)));
  EXPECT_TRUE(find_path_of_length(cadj, 0, 1, 5, all(6)));
}

TEST(UniformL, Examples) {
  EXPECT_EQ(find_uniform_l(complete_graph(20, Mark::kRed), View::kRed, all(20), 3, std::nullopt, 50).l, 1);
  const auto long_path = clique_path(5, 3);
  const auto u = find_uniform_l(long_path, View::kRed, all(18), 3, std::nullopt, 1, 1000);
  EXPECT_EQ(u.l, 2);
  for (const auto& [pair, count] : u.counts) EXPECT_GE(count, 1u);
  EXPECT_EQ(find_uniform_l(clique_path(3, 3), View::kRed, all(12), 3).l, 1);
  ColouredGraph split(6, {{0, 1, Mark::kRed}, {2, 3, Mark::kRed}});
  EXPECT_THROW(find_uniform_l(split, View::kRed, all(6), 3), PreconditionError);
}

TEST(Anchors, CoverageAndDisjointness) {
  const auto g = complete_graph(40, Mark::kRed);
  const auto fam = sample_anchors(g, View::kRed, all(40), 0.2, AbsorbMode::kStrong, 5, 0.5);
  EXPECT_LE(fam.members.size(), 8u);
  EXPECT_GE(fam.min_coverage, fam.threshold);
  VertexSet used(40);
  for (const auto& m : fam.members) {
    ASSERT_EQ(m.size(), 2u);
    for (Vertex v : m) {
      EXPECT_FALSE(used.contains(v));
      used.insert(v);
    }
  }
  for (Vertex v = 0; v < 40; ++v) EXPECT_GE(pair_coverage(g, View::kRed, v, fam.members), fam.threshold);
  const auto again = sample_anchors(g, View::kRed, all(40), 0.2, AbsorbMode::kStrong, 5, 0.5);
  EXPECT_EQ(fam.members, again.members);
}

TEST(Anchors, EmptyGraphCannotBeCovered) {
  EXPECT_THROW(sample_anchors(ColouredGraph(40), View::kRed, all(40), 0.2, AbsorbMode::kStrong, 0, 0.5),
               ConstructionError);
}

TEST(Anchors, WeakQuadruplesRespectSides) {
  const auto g = complete_bipartite(30, 30, Mark::kBlue);
  const auto x = first_half(60);
  const auto fam = sample_anchors(g, View::kBlue, all(60), 0.1, AbsorbMode::kWeak, 3, 0.3, 0, x);
  ASSERT_FALSE(fam.members.empty());
  for (const auto& q : fam.members) {
    EXPECT_FALSE(x.contains(q[0]));
    EXPECT_TRUE(x.contains(q[1]));
    EXPECT_FALSE(x.contains(q[2]));
    EXPECT_TRUE(x.contains(q[3]));
  }
}

TEST(Gadget, StrongLevelOne) {
  const auto g = complete_graph(60, Mark::kRed);
  const auto gd = build_gadget(g, View::kRed, all(60), {10, 20}, 1, VertexSet(60));
  const auto s = quiet_sequence(gd);
  EXPECT_EQ(static_cast<int>(s.size()), strong_gadget_order(1));
  EXPECT_TRUE(consecutive_edges(g, View::kRed, s));
  EXPECT_EQ(gd.spine.at("u").front(), 10);
  EXPECT_EQ(gd.spine.at("u").back(), 20);
  const auto t = absorbing_sequence(gd, 59);
  EXPECT_EQ(t.size(), s.size() + 1);
  EXPECT_EQ(t.front(), s.front());
  EXPECT_EQ(t.back(), s.back());
  EXPECT_TRUE(consecutive_edges(g, View::kRed, t));
  EXPECT_THROW(build_gadget(g, View::kRed, all(60), {10, 20}, 1, all(60)), CapacityError);
  VertexSet crowded = all(60);
  crowded.erase(10);
  crowded.erase(20);
  EXPECT_THROW(build_gadget(g, View::kRed, all(60), {10, 20}, 1, crowded), CapacityError);
}

TEST(Gadget, StrongLevelTwoWiring) {
  const auto g = complete_graph(200, Mark::kRed);
  const auto gd = build_gadget(g, View::kRed, all(200), {0, 1}, 2, VertexSet(200));
  const auto& u = gd.spine.at("u");
  ASSERT_EQ(u.size(), 8u);
  const auto ends = [&](const std::string& name, int a, int b) {
    const auto& p = gd.paths.at(name);
    EXPECT_EQ(p.size(), 8u) << name;
    EXPECT_EQ(p.front(), u[static_cast<std::size_t>(a - 1)]) << name;
    EXPECT_EQ(p.back(), u[static_cast<std::size_t>(b - 1)]) << name;
  };
  ends("P1", 1, 4);
  ends("P3", 3, 6);
  ends("P5", 5, 7);
  EXPECT_EQ(gd.paths.size(), 3u);
  const auto s = quiet_sequence(gd);
  EXPECT_EQ(static_cast<int>(s.size()), strong_gadget_order(2));
  EXPECT_EQ(s.front(), u[1]);
  EXPECT_EQ(s.back(), u[7]);
  VertexSet seen(200);
  for (Vertex v : s) {
    EXPECT_FALSE(seen.contains(v));
    seen.insert(v);
  }
  const auto t = absorbing_sequence(gd, 199);
  EXPECT_TRUE(consecutive_edges(g, View::kRed, t));
  EXPECT_EQ(t.size(), s.size() + 1);
  EXPECT_EQ(t.back(), u[7]);
  EXPECT_EQ(t[t.size() - 2], 199);
}

TEST(Gadget, StrongLevelsThreeAndFourOnSparseRandomGraph) {
  const auto g = random_graph(300, 0.3, 1.0, 4);
  for (int l : {3, 4}) {
    const auto gd = build_gadget(g, View::kRed, all(300), {0, 1}, l, VertexSet(300));
    const auto s = quiet_sequence(gd);
    const auto t = absorbing_sequence(gd, 299);
    EXPECT_EQ(static_cast<int>(s.size()), strong_gadget_order(l));
    EXPECT_TRUE(consecutive_edges(g, View::kRed, s));
    EXPECT_EQ(t.front(), s.front());
    EXPECT_EQ(t.back(), s.back());
    // w's two edges to the anchors are the only ones not checked here.
    std::vector<Vertex> inner(t.begin(), t.end() - 2);
    EXPECT_TRUE(consecutive_edges(g, View::kRed, inner));
  }
}

TEST(Gadget, WeakQuadrupleWiring) {
  for (int l : {2, 3}) {
    const int m = 60;
    const auto g = complete_bipartite(m, m, Mark::kRed);
    const auto x = first_half(2 * m);
    // a, c on the Y side; b, d on the X side.
    const auto gd = build_gadget(g, View::kRed, all(2 * m), {60, 0, 61, 1}, l, VertexSet(2 * m), x);
    EXPECT_EQ(gd.l, l);
    const auto s = quiet_sequence(gd);
    EXPECT_TRUE(consecutive_edges(g, View::kRed, s));
    EXPECT_EQ(s.front(), gd.spine.at("b").front());
    EXPECT_EQ(s.back(), 0);
    const auto t = absorbing_sequence(gd, 59, 119);
    EXPECT_EQ(t.size(), s.size() + 2);
    EXPECT_EQ(t.front(), s.front());
    EXPECT_EQ(t.back(), s.back());
    EXPECT_TRUE(consecutive_edges(g, View::kRed, t));
    VertexSet a(2 * m), b(2 * m);
    for (Vertex v : s) a.insert(v);
    for (Vertex v : t) b.insert(v);
    EXPECT_EQ(a.size(), static_cast<int>(s.size()));
    a.insert(59);
    a.insert(119);
    EXPECT_EQ(a, b);
  }
}

TEST(AbsorbingPath, CompleteGraphStrong) {
  const auto g = complete_graph(200, Mark::kRed);
  auto q = build_absorbing_path(g, View::kRed, all(200), strong_params(0.3));
  EXPECT_EQ(q.l, 1);
  EXPECT_LE(q.sequence().size(), 60u);
  EXPECT_GE(q.gadgets.size(), 2u);
  EXPECT_GT(q.capacity, 0);
  EXPECT_EQ(absorbing_path_violation(g, q), "");
  Rng rng(99);
  for (int t = 0; t < 100; ++t) {
    auto copy = q;
    const auto w = random_admissible_set(copy, rng);
    absorb_set(g, copy, w);
    ASSERT_EQ(absorbing_path_violation(g, copy), "");
    ASSERT_EQ(copy.sequence().size(), q.sequence().size() + static_cast<std::size_t>(w.size()));
    ASSERT_EQ(copy.sequence().front(), q.ends.first);
    ASSERT_EQ(copy.sequence().back(), q.ends.second);
  }
}

TEST(AbsorbingPath, CompleteBipartiteWeak) {
  const auto g = complete_bipartite(100, 100, Mark::kBlue);
  auto q = build_absorbing_path(g, View::kBlue, all(200), weak_params(200));
  EXPECT_EQ(q.mode, AbsorbMode::kWeak);
  EXPECT_LE(q.sequence().size(), 60u);
  EXPECT_GT(q.capacity, 0);
  Rng rng(5);
  for (int t = 0; t < 100; ++t) {
    auto copy = q;
    const auto w = random_admissible_set(copy, rng);
    EXPECT_EQ((w & *q.side_x).size() * 2, w.size());
    absorb_set(g, copy, w);
    ASSERT_EQ(absorbing_path_violation(g, copy), "");
  }
  auto copy = q;
  const VertexSet outside = q.f - q.original;
  VertexSet lopsided(200, {(outside & *q.side_x).first()});
  EXPECT_THROW(absorb_set(g, copy, lopsided), PreconditionError);
}

TEST(AbsorbingPath, WeakWithMoreAnchors) {
  const auto g = complete_bipartite(100, 100, Mark::kRed);
  auto ps = weak_params(200);
  ps.p = 0.02;
  ps.rho = 0.5;
  auto q = build_absorbing_path(g, View::kRed, all(200), ps);
  EXPECT_GE(q.gadgets.size(), 3u);
  Rng rng(8);
  for (int t = 0; t < 50; ++t) {
    auto copy = q;
    absorb_set(g, copy, random_admissible_set(copy, rng));
    ASSERT_EQ(absorbing_path_violation(g, copy), "");
  }
}

TEST(AbsorbingPath, DenseRandomGraph) {
  const auto g = random_min_degree_graph(150, 120, 1.0, 12);
  auto ps = strong_params(0.4);
  ps.alpha = 0.3;
  auto q = build_absorbing_path(g, View::kRed, all(150), ps);
  EXPECT_EQ(absorbing_path_violation(g, q), "");
  Rng rng(3);
  for (int t = 0; t < 100; ++t) {
    auto copy = q;
    absorb_set(g, copy, random_admissible_set(copy, rng));
    ASSERT_EQ(absorbing_path_violation(g, copy), "");
  }
}

TEST(AbsorbingPath, Deterministic) {
  const auto g = complete_graph(120, Mark::kBlue);
  const auto a = build_absorbing_path(g, View::kBlue, all(120), strong_params(0.3));
  const auto b = build_absorbing_path(g, View::kBlue, all(120), strong_params(0.3));
  EXPECT_EQ(a.sequence(), b.sequence());
  EXPECT_EQ(to_json_value(a).dump(), to_json_value(b).dump());
}

TEST(AbsorbingPath, TinyRhoHasNoRoom) {
  const auto g = complete_graph(200, Mark::kRed);
  EXPECT_THROW(build_absorbing_path(g, View::kRed, all(200), strong_params(0.02)), CapacityError);
  auto ps = strong_params(0.025);
  ps.p = 0.05;
  EXPECT_THROW(build_absorbing_path(g, View::kRed, all(200), ps), CapacityError);
}

TEST(AbsorbingPath, NotRobustIsRejected) {
  const auto g = complete_bipartite(20, 20, Mark::kRed);
  EXPECT_THROW(build_absorbing_path(g, View::kRed, all(40), strong_params(0.3)), PreconditionError);
}

TEST(AbsorbOne, Errors) {
  const auto g = complete_graph(60, Mark::kRed);
  auto q = build_absorbing_path(g, View::kRed, all(60), strong_params(0.3));
  ASSERT_FALSE(q.gadgets.empty());
  const Vertex w = (q.f - q.original).first();
  const auto before = q.sequence().size();
  absorb_one(g, q, 0, w);
  EXPECT_EQ(q.sequence().size(), before + 1);
  EXPECT_EQ(absorbing_path_violation(g, q), "");
  const Vertex w2 = (q.f - q.original - q.absorbed).first();
  EXPECT_THROW(absorb_one(g, q, 0, w2), PreconditionError);
  EXPECT_THROW(absorb_one(g, q, 0, w), PreconditionError);
  EXPECT_THROW(absorb_one(g, q, 99, w2), PreconditionError);

  auto h = g;
  const Vertex lonely = (q.f - q.original - q.absorbed).first();
  h.set_mark(lonely, q.gadgets[1].anchor[0], Mark::kBlue);
  auto q2 = build_absorbing_path(g, View::kRed, all(60), strong_params(0.3));
  EXPECT_THROW(absorb_one(h, q2, 1, lonely), PreconditionError);
}

TEST(AbsorbSet, EmptyIsIdentity) {
  const auto g = complete_graph(80, Mark::kRed);
  auto q = build_absorbing_path(g, View::kRed, all(80), strong_params(0.3));
  const auto before = q.sequence();
  absorb_set(g, q, VertexSet(80));
  EXPECT_EQ(q.sequence(), before);
}

TEST(AbsorbSet, ReportsStuckVertex) {
  auto g = complete_graph(80, Mark::kRed);
  auto q = build_absorbing_path(g, View::kRed, all(80), strong_params(0.3));
  const Vertex w = (q.f - q.original).first();
  for (const auto& gd : q.gadgets) g.set_mark(w, gd.anchor[0], Mark::kNone);
  try {
    absorb_set(g, q, VertexSet(80, {w}));
    FAIL();
  } catch (const ConstructionError& e) {
    EXPECT_NE(std::string(e.what()).find(std::to_string(w)), std::string::npos);
  }
}
