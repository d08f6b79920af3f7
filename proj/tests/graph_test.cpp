#include <gtest/gtest.h>

#include "monocycle/graph.hpp"

using namespace monocycle;

namespace {

ColouredGraph c5_rbrbr() {
  return cycle_graph(5, {Mark::kRed, Mark::kBlue, Mark::kRed, Mark::kBlue, Mark::kRed});
}

}  // namespace

TEST(VertexSet, BasicOps) {
  VertexSet a(70, {0, 5, 64, 69});
  VertexSet b(70, {5, 6, 69});
  EXPECT_EQ(a.size(), 4);
  EXPECT_EQ((a & b).to_vector(), (std::vector<Vertex>{5, 69}));
  EXPECT_EQ((a | b).size(), 5);
  EXPECT_EQ((a - b).to_vector(), (std::vector<Vertex>{0, 64}));
  EXPECT_EQ(a.complement().size(), 66);
  EXPECT_EQ(a.first(), 0);
  EXPECT_EQ(a.next_from(6), 64);
  EXPECT_EQ(a.next_from(70), -1);
  EXPECT_TRUE(VertexSet(3).empty());
  EXPECT_EQ(VertexSet::full(65).size(), 65);
}

TEST(MinDegree, Examples) {
  const auto k4 = complete_graph(4, Mark::kRed);
  EXPECT_EQ(min_degree(k4, View::kUnion), 3);
  EXPECT_EQ(min_degree(k4, View::kBlue), 0);
  EXPECT_EQ(min_degree(c5_rbrbr(), View::kUnion), 2);
  EXPECT_THROW(min_degree(ColouredGraph(0), View::kUnion), PreconditionError);
}

TEST(Induced, Examples) {
  const auto k4 = complete_graph(4, Mark::kRed);
  const auto e = induced(k4, VertexSet(4, {0, 1}));
  EXPECT_EQ(e.order(), 2);
  EXPECT_EQ(e.mark(0, 1), Mark::kRed);
  EXPECT_EQ(induced(k4, VertexSet(4)).order(), 0);

  const auto p = induced(c5_rbrbr(), VertexSet(5, {0, 1, 2}));
  EXPECT_EQ(p.order(), 3);
  EXPECT_EQ(p.mark(0, 1), Mark::kRed);
  EXPECT_EQ(p.mark(1, 2), Mark::kBlue);
  EXPECT_EQ(p.mark(0, 2), Mark::kNone);
}

TEST(Induced, RedEdgeCountMatchesNaiveCount) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    Rng rng(seed);
    const int n = 1 + rng.below(20);
    const auto g = random_graph(n, rng.uniform(), 0.5, seed);
    VertexSet s(n);
    for (Vertex v = 0; v < n; ++v) {
      if (rng.bernoulli(0.5)) s.insert(v);
    }
    int naive = 0;
    const auto members = s.to_vector();
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (std::size_t j = i + 1; j < members.size(); ++j) {
        const Mark m = g.mark(members[i], members[j]);
        naive += (m == Mark::kRed || m == Mark::kBoth) ? 1 : 0;
      }
    }
    EXPECT_EQ(induced(g, s).edge_count(View::kRed), naive);
  }
}

TEST(RandomMinDegree, Examples) {
  const auto k4 = random_min_degree_graph(4, 3, 0.5, 11);
  EXPECT_EQ(k4.edge_count(View::kUnion), 6);
  EXPECT_GE(min_degree(random_min_degree_graph(8, 6, 0.5, 3), View::kUnion), 6);
  EXPECT_THROW(random_min_degree_graph(3, 3, 0.5, 0), PreconditionError);
  EXPECT_EQ(random_min_degree_graph(12, 7, 0.3, 99), random_min_degree_graph(12, 7, 0.3, 99));
}

TEST(RandomMinDegree, PostconditionOverManySeeds) {
  for (std::uint64_t seed = 0; seed < 10000; ++seed) {
    const int n = 2 + static_cast<int>(seed % 19);
    const int target = static_cast<int>(derive_seed(seed, 1) % static_cast<std::uint64_t>(n));
    const auto g = random_min_degree_graph(n, target, 0.5, seed);
    ASSERT_GE(min_degree(g, View::kUnion), target) << "seed " << seed;
  }
}

TEST(Json, RoundTrip) {
  const std::string text = R"({"n":2,"edges":[[0,1,"R"]]})";
  const auto g = graph_from_json(text);
  EXPECT_EQ(g.mark(0, 1), Mark::kRed);
  EXPECT_EQ(to_json(g), text);
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    auto h = random_graph(1 + static_cast<int>(seed % 15), 0.4, 0.5, seed);
    if (seed % 3 == 0 && h.order() > 1) h.set_mark(0, 1, Mark::kBoth);
    EXPECT_EQ(graph_from_json(to_json(h)), h);
    EXPECT_EQ(to_json(graph_from_json(to_json(h))), to_json(h));
  }
}

TEST(Json, ReversedPairIsNormalised) {
  const auto g = graph_from_json(R"({"n":3,"edges":[[2,0,"B"]]})");
  EXPECT_EQ(to_json(g), R"({"n":3,"edges":[[0,2,"B"]]})");
}

TEST(Json, DistinctErrorCodes) {
  const auto code = [](const std::string& text) {
    try {
      graph_from_json(text);
    } catch (const FormatError& e) {
      return e.code();
    }
    ADD_FAILURE() << "no error for " << text;
    return FormatErrorCode::kBadShape;
  };
  EXPECT_EQ(code("{\"n\":"), FormatErrorCode::kMalformedJson);
  EXPECT_EQ(code(R"({"n":2,"edges":[[0,1,"R"],[0,1,"B"]]})"), FormatErrorCode::kDuplicatePair);
  EXPECT_EQ(code(R"({"n":3,"edges":[[0,5,"R"]]})"), FormatErrorCode::kOutOfRange);
  EXPECT_EQ(code(R"({"n":3,"edges":[[1,1,"R"]]})"), FormatErrorCode::kSelfLoop);
  EXPECT_EQ(code(R"({"n":3,"edges":[[0,1,"G"]]})"), FormatErrorCode::kBadColour);
  EXPECT_EQ(code(R"({"edges":[]})"), FormatErrorCode::kBadShape);
}

TEST(Dot, ColoursByMark) {
  ColouredGraph g(3, {{0, 1, Mark::kRed}, {1, 2, Mark::kBlue}, {0, 2, Mark::kBoth}});
  const auto dot = to_dot(g);
  EXPECT_NE(dot.find("0 -- 1 [color=red]"), std::string::npos);
  EXPECT_NE(dot.find("1 -- 2 [color=blue]"), std::string::npos);
  EXPECT_NE(dot.find("0 -- 2 [color=purple]"), std::string::npos);
}

TEST(Components, AndBipartition) {
  ColouredGraph g(6, {{0, 1, Mark::kRed}, {1, 2, Mark::kRed}, {3, 4, Mark::kBlue}});
  EXPECT_EQ(components(g, View::kRed).size(), 4u);
  EXPECT_EQ(components(g, View::kUnion).size(), 3u);
  EXPECT_TRUE(bipartition(g, View::kUnion, VertexSet::full(6)).has_value());
  EXPECT_FALSE(bipartition(complete_graph(3, Mark::kRed), View::kRed, VertexSet::full(3)).has_value());
}
