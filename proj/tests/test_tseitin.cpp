#include <gtest/gtest.h>

#include "ppsz/ppsz.hpp"

using namespace ppsz;

namespace {

std::size_t count_bridges(const Graph& g, std::size_t threshold) {
  return bridge_clauses(g, default_edge_vars(g), threshold).size();
}

}  // namespace

TEST(TseitinClauses, Examples) {
  const Graph p = path_graph(3);  // middle vertex has degree 2
  const auto vars = default_edge_vars(p);
  const auto cs = tseitin_clauses(p, vars);
  // ends: one unit clause (~x) each; middle: 2 clauses
  EXPECT_EQ(cs.size(), 4u);
  EXPECT_NE(std::find(cs.begin(), cs.end(), Clause{-1, 2}), cs.end());
  EXPECT_NE(std::find(cs.begin(), cs.end(), Clause{1, -2}), cs.end());

  Graph k13(4);
  for (std::size_t i = 1; i < 4; ++i) k13.add_edge(0, i);
  std::size_t centre = 0;
  for (const auto& c : tseitin_clauses(k13, default_edge_vars(k13))) centre += c.width() == 3;
  EXPECT_EQ(centre, 4u);

  Graph isolated(3);
  isolated.add_edge(0, 1);
  EXPECT_EQ(tseitin_clauses(isolated, default_edge_vars(isolated)).size(), 2u);
}

TEST(TseitinClauses, SolutionsAreEvenSubgraphs) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Graph g = random_regular_graph(6, 3, 3, seed);
    const CnfFormula f(g.num_edges(), tseitin_clauses(g, default_edge_vars(g)));
    std::size_t count = 0;
    for (std::uint32_t m = 0; m < (1u << g.num_edges()); ++m) {
      Assignment a(g.num_edges());
      std::vector<std::size_t> deg(g.num_vertices(), 0);
      for (std::size_t e = 0; e < g.num_edges(); ++e) {
        const bool on = (m >> e) & 1u;
        a.set(static_cast<Var>(e + 1), on);
        if (on) {
          ++deg[g.edge(e).u];
          ++deg[g.edge(e).v];
        }
      }
      bool even = true;
      for (auto d : deg) even &= d % 2 == 0;
      EXPECT_EQ(satisfies(f, a), even);
      count += even;
    }
    // cycle space dimension |E| - |V| + 1
    EXPECT_EQ(count, std::size_t{1} << (g.num_edges() - g.num_vertices() + 1));
  }
}

TEST(BridgeClauses, Examples) {
  EXPECT_EQ(count_bridges(cycle_graph(6), 2), 3u);
  EXPECT_EQ(count_bridges(cycle_graph(6), 0), 15u);
  Graph s(5);
  for (std::size_t i = 1; i < 5; ++i) s.add_edge(0, i);
  EXPECT_EQ(count_bridges(s, 1), 0u);
}

TEST(BridgeClauses, DefaultThreshold) {
  EXPECT_EQ(default_bridge_threshold(3), 1u);
  EXPECT_EQ(default_bridge_threshold(4), 1u);
  EXPECT_EQ(default_bridge_threshold(5), 2u);
  EXPECT_EQ(default_bridge_threshold(6), 2u);
  EXPECT_EQ(default_bridge_threshold(std::nullopt), 0u);
}

TEST(GenerateTseitin, Examples) {
  const auto six = generate_tseitin_instance(6, 3, 1);
  EXPECT_EQ(six.formula.num_vars(), 9u);
  EXPECT_TRUE(six.unique_verified);
  EXPECT_TRUE(uniquely_satisfied_by_zero(six.formula));

  const auto ten = generate_tseitin_instance(10, 3, 2);
  EXPECT_EQ(ten.formula.num_vars(), 15u);
  EXPECT_TRUE(ten.unique_verified);

  EXPECT_THROW(generate_tseitin_instance(5, 3, 1), PreconditionError);
}

TEST(GenerateTseitin, VariableCountAndDeterminism) {
  for (std::size_t n : {8u, 12u, 16u}) {
    const auto a = generate_tseitin_instance(n, 3, 99);
    EXPECT_EQ(a.formula.num_vars(), 3 * n / 2);
    EXPECT_EQ(a.to_dimacs(), generate_tseitin_instance(n, 3, 99).to_dimacs());
  }
}

TEST(GenerateTseitin, DimacsCarriesGraph) {
  const auto inst = generate_tseitin_instance(8, 3, 4);
  const auto file = parse_dimacs_file(inst.to_dimacs());
  EXPECT_EQ(file.formula, inst.formula);
  const auto meta = parse_metadata(file.comments);
  EXPECT_EQ(meta.get("family"), "tseitin");
  EXPECT_EQ(meta.get("seed"), "4");
  const auto [g, vars] = graph_from_metadata(meta, file.formula.num_vars());
  EXPECT_EQ(g.edges(), inst.graph.edges());
  EXPECT_EQ(vars, inst.var_of_edge);
}

TEST(CycleObstruction, HoldsUpToHorizon) {
  const auto inst = generate_tseitin_instance(10, 3, 3);
  const std::size_t g = inst.girth.value();
  for (const auto& c : fundamental_cycles(inst.graph)) {
    EXPECT_TRUE(cycle_obstruction_test(inst, c, 1).passed);
    EXPECT_TRUE(cycle_obstruction_test(inst, c, obstruction_horizon(g)).passed);
  }
}

TEST(CycleObstruction, FailsOnceWidthCoversTheCycle) {
  // Long cycle with a bridge threshold of 2: weak(w) with w = |C| can chain
  // every equality and one bridge.
  const auto inst = make_tseitin_instance(cycle_graph(8), 2);
  const std::vector<std::size_t> c = all_edges(inst.graph);
  EXPECT_TRUE(cycle_obstruction_test(inst, c, 1).passed);
  std::size_t w = 1;
  while (w <= c.size() && cycle_obstruction_test(inst, c, w).passed) ++w;
  EXPECT_LE(w, c.size());
  EXPECT_GT(w, 2u);
}

TEST(CycleObstruction, RejectsNonCycle) {
  const auto inst = generate_tseitin_instance(6, 3, 1);
  EXPECT_THROW(cycle_obstruction_test(inst, {0, 1}, 1), PreconditionError);
}

TEST(CycleObstruction, CycleFoundInAcyclicityArgument) {
  // More than n-1 undetermined edges must contain a cycle.
  const auto inst = generate_tseitin_instance(12, 3, 8);
  std::vector<std::size_t> many;
  for (std::size_t e = 0; e < inst.graph.num_vertices(); ++e) many.push_back(e);
  const auto c = find_cycle(inst.graph, many);
  ASSERT_TRUE(c.has_value());
  EXPECT_TRUE(cycle_obstruction_test(inst, *c, 1).passed);
}
