#include <gtest/gtest.h>

#include <cstdlib>

#include "monocycle/brute_force.hpp"
#include "monocycle/robustness.hpp"

using namespace monocycle;

namespace {

VertexSet all(int n) { return VertexSet::full(n); }

ColouredGraph two_cliques(int a) {
  ColouredGraph g(2 * a);
  for (Vertex u = 0; u < a; ++u) {
    for (Vertex v = u + 1; v < a; ++v) {
      g.set_mark(u, v, Mark::kRed);
      g.set_mark(a + u, a + v, Mark::kRed);
    }
  }
  return g;
}

}  // namespace

TEST(CountPaths, Examples) {
  EXPECT_EQ(count_paths(complete_graph(7, Mark::kRed), View::kRed, 0, 3, 1), 5u);
  const auto c4 = cycle_graph(4, {Mark::kRed});
  EXPECT_EQ(count_paths(c4, View::kRed, 0, 2, 1), 2u);
  EXPECT_EQ(count_paths(c4, View::kRed, 0, 1, 1), 0u);
  EXPECT_EQ(count_paths(c4, View::kRed, 0, 1, 0), 1u);
  EXPECT_EQ(count_paths(c4, View::kRed, 0, 1, 2), 1u);
  EXPECT_EQ(count_paths(complete_graph(6, Mark::kBlue), View::kBlue, 0, 5, 3), 24u);
  EXPECT_THROW(count_paths(c4, View::kRed, 1, 1, 1), PreconditionError);
}

TEST(CountPaths, AgreesWithTupleEnumeration) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    Rng rng(seed);
    const int n = 2 + rng.below(7);
    const auto g = random_graph(n, rng.uniform(), 0.5, seed);
    const View view = static_cast<View>(rng.below(3));
    const Vertex x = rng.below(n);
    Vertex y = rng.below(n - 1);
    if (y >= x) ++y;
    for (int l = 0; l <= 4; ++l) {
      ASSERT_EQ(static_cast<long long>(count_paths(g, view, x, y, l)), brute::count_paths(g, view, x, y, l))
          << to_json(g) << " l=" << l;
    }
  }
}

TEST(CountPaths, BudgetIsReportedDistinctly) {
  const auto g = complete_graph(14, Mark::kRed);
  Budget tiny(50);
  const auto adj = g.adjacency(View::kRed);
  EXPECT_THROW(count_paths(adj, all(14), 0, 1, 5, tiny), BudgetExhausted);
  const auto check = check_robust(g, View::kRed, all(14), 0.99, 6, 14, std::nullopt, 1, 1000);
  EXPECT_EQ(check.verdict, Robustness::kBudget);
}

TEST(CountPaths, EnvironmentOverridesBudget) {
  ::setenv("MONOCYCLE_BUDGET", "1234", 1);
  EXPECT_EQ(path_budget(), 1234);
  ::unsetenv("MONOCYCLE_BUDGET");
  EXPECT_EQ(path_budget(), kDefaultPathBudget);
}

TEST(CheckRobust, CompleteGraphIsStrongAtOne) {
  for (int n : {4, 10, 40}) {
    const auto c = check_robust(complete_graph(n, Mark::kRed), View::kRed, all(n), 0.5, 1, n);
    EXPECT_EQ(c.verdict, Robustness::kStrong) << n;
    EXPECT_EQ(c.witness_l, 1);
  }
}

TEST(CheckRobust, CompleteBipartiteByExactCount) {
  for (int m = 2; m <= 8; ++m) {
    const auto g = complete_bipartite(m, m, Mark::kBlue);
    VertexSet x(2 * m);
    for (Vertex v = 0; v < m; ++v) x.insert(v);
    // Cross pairs at l = 2 have (m - 1)^2 paths.
    const double alpha = static_cast<double>((m - 1) * (m - 1)) / (4.0 * m * m);
    const auto weak = check_robust(g, View::kBlue, all(2 * m), alpha, 2, 2 * m, x);
    EXPECT_EQ(weak.verdict, Robustness::kWeak) << m;
    EXPECT_EQ(weak.witness_l, 2);
    const auto over = check_robust(g, View::kBlue, all(2 * m), alpha * 1.01 + 1e-6, 2, 2 * m, x);
    EXPECT_EQ(over.verdict, Robustness::kNone) << m;
    EXPECT_EQ(check_robust(g, View::kBlue, all(2 * m), 0.01, 3, 2 * m).verdict, Robustness::kNone);
  }
}

TEST(CheckRobust, DisjointCliquesAreNotRobust) {
  const auto g = two_cliques(6);
  EXPECT_EQ(check_robust(g, View::kRed, all(12), 0.01, 4, 12).verdict, Robustness::kNone);
  EXPECT_EQ(check_robust(g, View::kRed, VertexSet(12, {0, 1, 2, 3, 4, 5}), 0.3, 1, 12).verdict, Robustness::kStrong);
}

TEST(CheckRobust, StrongImpliesMinimumDegree) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    const int n = 4 + rng.below(9);
    const auto g = random_graph(n, 0.5 + 0.5 * rng.uniform(), 0.5, seed);
    const double alpha = 0.05 + 0.3 * rng.uniform();
    const auto c = check_robust(g, View::kUnion, all(n), alpha, 3, n);
    if (c.verdict == Robustness::kStrong) {
      EXPECT_GE(min_degree(g, View::kUnion), alpha * n - 1e-9);
    }
  }
}

TEST(CheckRobust, ThreadsAgree) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto g = random_graph(16, 0.6, 0.5, seed);
    const auto a = check_robust(g, View::kUnion, all(16), 0.15, 3, 16, std::nullopt, 1);
    const auto b = check_robust(g, View::kUnion, all(16), 0.15, 3, 16, std::nullopt, 4);
    EXPECT_EQ(a.verdict, b.verdict);
    EXPECT_EQ(a.witness_l, b.witness_l);
  }
}

TEST(WalkLength, Examples) {
  EXPECT_EQ(uniform_odd_walk_length(complete_graph(3, Mark::kRed), View::kRed), 2);
  const auto c5 = cycle_graph(5, {Mark::kRed});
  const auto k = uniform_odd_walk_length(c5, View::kRed);
  ASSERT_TRUE(k);
  EXPECT_LE(*k, 15);
  EXPECT_TRUE(all_walks_of_length(c5, View::kRed, *k));
  EXPECT_FALSE(all_walks_of_length(c5, View::kRed, *k - 1));
  EXPECT_FALSE(uniform_odd_walk_length(cycle_graph(4, {Mark::kRed}), View::kRed));
  EXPECT_FALSE(uniform_odd_walk_length(two_cliques(3), View::kRed));
}

TEST(WalkLength, RandomConnectedNonBipartite) {
  int seen = 0;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    Rng rng(seed);
    const int n = 3 + rng.below(12);
    const auto g = random_graph(n, 0.15 + 0.4 * rng.uniform(), 0.5, seed);
    const auto k = uniform_odd_walk_length(g, View::kUnion);
    if (!k) continue;
    ++seen;
    EXPECT_LE(*k, 3 * n);
    EXPECT_TRUE(all_walks_of_length(g, View::kUnion, *k));
    if (*k > 1) {
      EXPECT_FALSE(all_walks_of_length(g, View::kUnion, *k - 1));
    }
  }
  EXPECT_GT(seen, 100);
}

TEST(Perturbation, CompleteGraphKeepsDegradedParameters) {
  PerturbationParams p;
  p.alpha = 0.5;
  p.k = 1;
  p.n_ref = 40;
  p.beta = 0.05;
  p.trials = 3;
  p.seed = 9;
  const auto r = perturbation_suite(complete_graph(40, Mark::kRed), View::kRed, all(40), p);
  EXPECT_EQ(r.base.verdict, Robustness::kStrong);
  ASSERT_EQ(r.trials.size(), 9u);
  EXPECT_TRUE(r.all_passed());
  for (const auto& t : r.trials) {
    if (t.kind == "delete-vertices") {
      EXPECT_EQ(t.changed, 2);
      EXPECT_DOUBLE_EQ(t.check.alpha, 0.25);
    }
    if (t.kind == "add-vertex") {
      EXPECT_EQ(t.changed, 20);
      EXPECT_DOUBLE_EQ(t.check.alpha, 0.0625);
      EXPECT_EQ(t.check.k, 3);
    }
  }
}

TEST(Perturbation, WeakCompleteBipartite) {
  const int m = 8;
  VertexSet x(2 * m);
  for (Vertex v = 0; v < m; ++v) x.insert(v);
  PerturbationParams p;
  p.alpha = 0.1;
  p.k = 2;
  p.beta = 0.0625;
  p.trials = 2;
  p.side_x = x;
  const auto r = perturbation_suite(complete_bipartite(m, m, Mark::kRed), View::kRed, all(2 * m), p);
  EXPECT_EQ(r.base.verdict, Robustness::kWeak);
  EXPECT_TRUE(r.all_passed());
}

TEST(Perturbation, OversizedBetaRecordsFailures) {
  PerturbationParams p;
  p.alpha = 0.5;
  p.k = 1;
  p.beta = 0.45;
  p.trials = 2;
  const auto r = perturbation_suite(complete_graph(20, Mark::kBlue), View::kBlue, all(20), p);
  EXPECT_FALSE(r.all_passed());
  EXPECT_EQ(r.trials.size(), 6u);
}

TEST(Perturbation, RequiresRobustInput) {
  PerturbationParams p;
  EXPECT_THROW(perturbation_suite(two_cliques(4), View::kRed, all(8), p), PreconditionError);
}
