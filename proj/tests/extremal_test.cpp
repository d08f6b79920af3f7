#include <gtest/gtest.h>

#include "monocycle/extremal.hpp"

using namespace monocycle;

namespace {

BlockModel single(Rule intra) {
  BlockModel model;
  model.blocks = {{1, 0}};
  model.rules = {{Rule::kEmpty}};
  model.intra = {intra};
  return model;
}

BlockModel bipartite(Rule cross) {
  BlockModel model;
  model.blocks = {{1, 0}, {1, 0}};
  model.rules = {{Rule::kEmpty, cross}, {cross, Rule::kEmpty}};
  model.intra = {Rule::kEmpty, Rule::kEmpty};
  return model;
}

// Found by the search below for order 4m+1, degree 3m.
const char* kFourBlock =
    R"({"blocks":[{"a":2,"b":0},{"a":1,"b":0},{"a":1,"b":0},{"a":0,"b":1}],)"
    R"("rules":[["E","R","B","R"],["R","E","E","B"],["B","E","E","R"],["R","B","R","E"]],)"
    R"("intra":["R","B","R","E"]})";

SearchParams target(int b_order, int b_degree, int blocks) {
  SearchParams p;
  p.max_blocks = blocks;
  p.order = {4, b_order};
  p.degree = {3, b_degree};
  p.upgrade_arbitrary = false;
  return p;
}

}  // namespace

TEST(Instantiate, Examples) {
  const auto k = instantiate(single(Rule::kRed), 5, 0);
  EXPECT_EQ(to_json(k), to_json(complete_graph(5, Mark::kRed)));
  const auto kb = instantiate(bipartite(Rule::kBlue), 4, 0);
  EXPECT_EQ(to_json(kb), to_json(complete_bipartite(4, 4, Mark::kBlue)));
  EXPECT_EQ(instantiate(block_model_from_json(kFourBlock), 0, 0).order(), 1);
  EXPECT_EQ(instantiate(bipartite(Rule::kRed), 0, 0).order(), 0);
}

TEST(Instantiate, ArbitraryFills) {
  auto model = single(Rule::kArbitrary);
  EXPECT_EQ(instantiate(model, 6, 0, Fill::kAllRed).edge_count(View::kRed), 15);
  EXPECT_EQ(instantiate(model, 6, 0, Fill::kAllBlue).edge_count(View::kBlue), 15);
  const auto a = instantiate(model, 6, 3);
  EXPECT_EQ(a.edge_count(View::kRed) + a.edge_count(View::kBlue), 15);
  EXPECT_EQ(to_json(a), to_json(instantiate(model, 6, 3)));
}

TEST(Instantiate, NegativeSizeThrows) {
  BlockModel model = single(Rule::kRed);
  model.blocks = {{1, -3}};
  EXPECT_THROW(instantiate(model, 2, 0), PreconditionError);
  EXPECT_NO_THROW(instantiate(model, 3, 0));
}

TEST(BlockModelJson, RoundTripAndErrors) {
  const auto model = block_model_from_json(kFourBlock);
  EXPECT_EQ(model.count(), 4);
  EXPECT_EQ(model.rule(1, 3), Rule::kBlue);
  EXPECT_EQ(model.order(3), 13);
  const auto again = block_model_from_json(to_json_value(model).dump());
  EXPECT_EQ(to_json_value(again), to_json_value(model));
  EXPECT_THROW(block_model_from_json(R"({"blocks":[{"a":1}]})"), FormatError);
  EXPECT_THROW(block_model_from_json(R"({"blocks":[{"a":1,"b":0}],"rules":[["Q"]]})"), FormatError);
  EXPECT_THROW(
      block_model_from_json(R"({"blocks":[{"a":1,"b":0},{"a":1,"b":0}],"rules":[["E","R"],["B","E"]]})"),
      FormatError);
}

TEST(Sharpness, StoredModelPasses) {
  const auto model = block_model_from_json(kFourBlock);
  for (int m : {2, 3}) {
    const auto rep = verify_sharpness(model, m);
    EXPECT_EQ(rep.n, 4 * m + 1);
    EXPECT_EQ(rep.min_degree, 3 * m);
    EXPECT_EQ(rep.target, 3 * m);
    EXPECT_FALSE(rep.degree_mismatch);
    EXPECT_TRUE(rep.pass);
    ASSERT_EQ(rep.fills.size(), 1u);
  }
}

TEST(Sharpness, CompleteGraphFails) {
  const auto rep = verify_sharpness(single(Rule::kRed), 9);
  EXPECT_FALSE(rep.pass);
  EXPECT_TRUE(rep.fills[0].partitioned);
  EXPECT_TRUE(rep.degree_mismatch);
}

TEST(Sharpness, ArbitraryModelsUseAllFills) {
  auto model = single(Rule::kArbitrary);
  const auto rep = verify_sharpness(model, 7);
  EXPECT_EQ(rep.fills.size(), 2u + kDefaultFillSeeds);
  EXPECT_FALSE(rep.pass);
  EXPECT_EQ(rep.fills[0].label, "all-red");
}

TEST(Sharpness, CapacityBeyondTheSolverCap) {
  EXPECT_THROW(verify_sharpness(single(Rule::kRed), kDpCap + 1), CapacityError);
}

TEST(Search, SingleBlockFindsNothing) {
  const auto r = search_models(target(1, 0, 1));
  EXPECT_TRUE(r.models.empty());
  auto p = target(1, 0, 1);
  p.upgrade_arbitrary = true;
  EXPECT_TRUE(search_models(p).models.empty());
}

TEST(Search, FourMPlusOneAtFiveBlocks) {
  const auto r = search_models(target(1, 0, 5));
  ASSERT_FALSE(r.models.empty());
  int hereditary = 0;
  for (const auto& model : r.models) {
    for (int m : {2, 3}) ASSERT_TRUE(verify_sharpness(model, m).pass) << to_json_value(model).dump();
    EXPECT_NE(model.origin.find("4m+1"), std::string::npos);
    if (deletion_hereditary(model, 2)) ++hereditary;
  }
  // Some models keep having no partition after any single deletion.
  EXPECT_GT(hereditary, 0);
}

TEST(Search, FourMPlusTwoWithArbitraryRegions) {
  auto p = target(2, 1, 5);
  p.upgrade_arbitrary = true;
  const auto r = search_models(p);
  ASSERT_FALSE(r.models.empty());
  bool shaded = false;
  for (const auto& model : r.models) {
    shaded = shaded || model.has_arbitrary();
    for (int m : {2, 3}) {
      const auto rep = verify_sharpness(model, m, kDefaultFillSeeds, 99);
      EXPECT_TRUE(rep.pass) << to_json_value(model).dump();
      EXPECT_EQ(rep.min_degree, 3 * m + 1);
    }
  }
  EXPECT_TRUE(shaded);
}

TEST(Search, SingleDeletionsMeetTheSmallerDegreeTarget) {
  const auto model = block_model_from_json(kFourBlock);
  const auto g = instantiate(model, 2, 0);
  for (Vertex v = 0; v < g.order(); ++v) {
    const auto h = induced(g, VertexSet::full(g.order()) - VertexSet(g.order(), {v}));
    EXPECT_GE(min_degree(h, View::kUnion), 3 * 2 - 1);
  }
}

TEST(Search, TargetAtThreeQuartersFindsNothing) {
  // Min degree 3m+1 on 4m+1 vertices is at least 3n/4.
  const auto r = search_models(target(1, 1, 4));
  EXPECT_TRUE(r.models.empty());
}

TEST(Search, DeterministicAndThreadIndependent) {
  auto p = target(0, -1, 4);
  const auto a = search_models(p);
  p.threads = 3;
  const auto b = search_models(p);
  EXPECT_EQ(to_json_value(a).dump(), to_json_value(b).dump());
  EXPECT_FALSE(a.models.empty());
}

TEST(Search, Preconditions) {
  EXPECT_THROW(search_models(target(1, 0, 6)), PreconditionError);
  auto p = target(1, 0, 3);
  p.probes = {6};
  EXPECT_THROW(search_models(p), CapacityError);
}
