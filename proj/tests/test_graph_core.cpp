#include <gtest/gtest.h>

#include "gramdim/clique_sum.hpp"
#include "gramdim/graph.hpp"
#include "gramdim/minors.hpp"
#include "gramdim/treewidth.hpp"
#include "support.hpp"

using namespace gramdim;
using namespace gramdim::testing;

namespace {

std::vector<Edge> sorted_pairs(std::initializer_list<std::pair<int, int>> ps) {
  std::vector<Edge> out;
  for (auto [a, b] : ps) out.emplace_back(a, b);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST(GraphBasics, RejectsLoopsAndOutOfRange) {
  Graph g(3);
  EXPECT_THROW(g.add_edge(1, 1), InvalidInput);
  EXPECT_THROW(g.add_edge(0, 3), InvalidInput);
  g.add_edge(0, 1);
  g.add_edge(1, 0);
  EXPECT_EQ(g.edge_count(), 1);
}

TEST(GraphBasics, TemplatesAreCubic) {
  const Graph v8 = builtin::v8();
  const Graph c = builtin::c5xc2();
  EXPECT_EQ(v8.vertex_count(), 8);
  EXPECT_EQ(v8.edge_count(), 12);
  EXPECT_EQ(c.vertex_count(), 10);
  EXPECT_EQ(c.edge_count(), 15);
  for (int v = 0; v < 8; ++v) EXPECT_EQ(v8.degree(v), 3);
  for (int v = 0; v < 10; ++v) EXPECT_EQ(c.degree(v), 3);
  EXPECT_EQ(builtin::petersen().edge_count(), 15);
  EXPECT_EQ(builtin::k222().edge_count(), 12);
}

TEST(MinorOps, ContractTriangle) {
  const Graph k2 = contract_edge(builtin::complete(3), Edge(0, 1));
  EXPECT_EQ(k2.vertex_count(), 2);
  EXPECT_EQ(k2.edge_count(), 1);
  EXPECT_EQ(k2.label(0), "1+2");
}

TEST(MinorOps, K6MinusMatchingIsK222) {
  Graph g = builtin::complete(6);
  g = delete_edge(g, Edge(0, 3));
  g = delete_edge(g, Edge(1, 4));
  g = delete_edge(g, Edge(2, 5));
  EXPECT_EQ(g, builtin::k222());
}

TEST(MinorOps, ContractPrismEdge) {
  // Triangle-free, so no parallel edges collapse.
  const Graph c = builtin::c5xc2();
  for (const auto& e : c.edges()) {
    const Graph h = contract_edge(c, e);
    EXPECT_EQ(h.vertex_count(), 9);
    EXPECT_EQ(h.edge_count(), 14);
  }
}

TEST(MinorOps, RejectsMissingEdge) {
  EXPECT_THROW(delete_edge(builtin::path(3), Edge(0, 2)), InvalidInput);
  EXPECT_THROW(contract_edge(builtin::path(3), Edge(0, 2)), InvalidInput);
}

TEST(Minors, IdentityEmbedding) {
  const auto w = has_minor(builtin::complete(4), MinorPattern::K4);
  ASSERT_TRUE(w);
  EXPECT_EQ(check_witness(builtin::complete(4), *w), "");
  for (VertexSet s : w->branch_sets) EXPECT_EQ(popcount(s), 1);
}

TEST(Minors, V8HasNoK5) {
  EXPECT_FALSE(has_minor(builtin::v8(), MinorPattern::K5));
  EXPECT_FALSE(has_minor(builtin::v8(), MinorPattern::K222));
  EXPECT_FALSE(has_minor(builtin::c5xc2(), MinorPattern::K5));
  EXPECT_FALSE(has_minor(builtin::c5xc2(), MinorPattern::K222));
}

TEST(Minors, PetersenHasK5) {
  const Graph p = builtin::petersen();
  const auto w = has_minor(p, MinorPattern::K5);
  ASSERT_TRUE(w);
  EXPECT_EQ(check_witness(p, *w), "");
  VertexSet used = 0;
  for (VertexSet s : w->branch_sets) used |= s;
  EXPECT_LE(popcount(used), 10);
}

TEST(Minors, AgreesWithBruteForce) {
  Rng rng(11);
  const MinorPattern patterns[] = {MinorPattern::K3, MinorPattern::K4, MinorPattern::K5, MinorPattern::K222};
  int graphs = 0;
  for (int trial = 0; trial < 160; ++trial) {
    const int n = uniform_int(rng, 3, 7);
    const Graph g = random_graph(n, uniform_real(rng, 0.3, 0.9), rng);
    for (MinorPattern p : patterns) {
      if (p == MinorPattern::K222 && trial % 4 != 0) continue;
      const bool expected = naive_has_minor(g, p);
      const auto w = has_minor(g, p);
      ASSERT_EQ(w.has_value(), expected) << to_string(p) << " trial " << trial;
      if (w) {
        EXPECT_EQ(check_witness(g, *w), "");
      }
      EXPECT_EQ(has_minor_direct(g, p).has_value(), expected);
    }
    ++graphs;
  }
  EXPECT_EQ(graphs, 160);
}

TEST(Classifier, Examples) {
  const auto k5 = classify_gram_dimension(builtin::complete(5));
  EXPECT_EQ(k5.band, GramBand::AtLeast5);
  ASSERT_TRUE(k5.witness);
  EXPECT_EQ(k5.witness->pattern, MinorPattern::K5);
  EXPECT_EQ(classify_gram_dimension(builtin::v8()).band, GramBand::AtMost4);
  EXPECT_EQ(classify_gram_dimension(builtin::c5xc2()).band, GramBand::AtMost4);
  EXPECT_EQ(classify_gram_dimension(builtin::path(3)).band, GramBand::AtMost2);
  EXPECT_EQ(classify_gram_dimension(Graph(4)).band, GramBand::AtMost1);
  EXPECT_EQ(classify_gram_dimension(builtin::cycle(6)).band, GramBand::AtMost3);
  const auto k222 = classify_gram_dimension(builtin::k222());
  EXPECT_EQ(k222.band, GramBand::AtLeast5);
  ASSERT_TRUE(k222.witness);
  EXPECT_EQ(check_witness(builtin::k222(), *k222.witness), "");
}

TEST(Classifier, TreesAtMostTwo) {
  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    const Graph g = random_tree(uniform_int(rng, 2, 20), rng);
    EXPECT_EQ(classify_gram_dimension(g).band, GramBand::AtMost2);
  }
}

TEST(Classifier, MinorMonotone) {
  Rng rng(5);
  for (int t = 0; t < 12; ++t) {
    const Graph g = random_graph(uniform_int(rng, 5, 9), uniform_real(rng, 0.35, 0.75), rng);
    const int top = classify_gram_dimension(g).bound();
    for (const auto& e : g.edges()) {
      EXPECT_LE(classify_gram_dimension(delete_edge(g, e)).bound(), top);
      EXPECT_LE(classify_gram_dimension(contract_edge(g, e)).bound(), top);
    }
  }
}

TEST(Treewidth, Examples) {
  const auto k4 = treewidth_at_most(builtin::complete(4), 3);
  ASSERT_TRUE(k4);
  ASSERT_EQ(k4->bags.size(), 1u);
  EXPECT_EQ(k4->bags[0], VertexSet{0xF});
  EXPECT_FALSE(treewidth_at_most(builtin::k222(), 3));
  const auto c6 = treewidth_at_most(builtin::cycle(6), 2);
  ASSERT_TRUE(c6);
  EXPECT_EQ(c6->width, 2);
  EXPECT_EQ(c6->bags.size(), 4u);
  EXPECT_EQ(check_tree_decomposition(builtin::cycle(6), *c6), "");
  EXPECT_FALSE(treewidth_at_most(builtin::cycle(6), 1));
}

TEST(Treewidth, ObstructionSuite) {
  Graph v8_plus = builtin::v8();
  v8_plus.add_edge(0, 2);
  const std::vector<Graph> suite = {
      builtin::complete(4), builtin::complete(5), builtin::complete(6), builtin::k222(),
      builtin::v8(),        builtin::c5xc2(),     builtin::petersen(),  builtin::cycle(7),
      builtin::path(6),     builtin::wheel(4),    builtin::wheel(6),    builtin::star(5),
      glue(builtin::complete(5), builtin::path(3), {{0, 0}}),
      v8_plus,
      Graph(6, sorted_pairs({{0, 3}, {0, 4}, {0, 5}, {1, 3}, {1, 4}, {1, 5}, {2, 3}, {2, 4}, {2, 5}})),
      Graph(6, sorted_pairs({{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}, {0, 3}, {1, 4}, {2, 5}})),
      Graph(8, sorted_pairs({{0, 1}, {1, 2}, {2, 3}, {3, 0}, {4, 5}, {5, 6}, {6, 7}, {7, 4},
                             {0, 4}, {1, 5}, {2, 6}, {3, 7}})),
      glue(builtin::v8(), builtin::complete(4), {{0, 0}, {1, 1}}),
      glue(builtin::c5xc2(), builtin::cycle(5), {{3, 0}}),
      Graph(5)};
  ASSERT_EQ(suite.size(), 20u);
  for (std::size_t k = 0; k < suite.size(); ++k) {
    const Graph& g = suite[k];
    const auto td = treewidth_at_most(g, 3);
    if (td) {
      EXPECT_EQ(check_tree_decomposition(g, *td), "");
    }
    const bool obstructed = has_minor(g, MinorPattern::K5) || has_minor(g, MinorPattern::K222) ||
                            (g.vertex_count() >= 8 && find_subgraph(g, builtin::v8())) ||
                            (g.vertex_count() >= 10 && find_subgraph(g, builtin::c5xc2()));
    EXPECT_EQ(!td.has_value(), obstructed) << "graph " << k;
  }
}

TEST(Chordal, Examples) {
  const auto k4 = chordal_structure(builtin::complete(4));
  ASSERT_TRUE(k4);
  ASSERT_EQ(k4->cliques.size(), 1u);
  EXPECT_FALSE(chordal_structure(builtin::cycle(4)));
  const auto p = chordal_structure(builtin::path(3));
  ASSERT_TRUE(p);
  auto cliques = p->cliques;
  std::sort(cliques.begin(), cliques.end());
  EXPECT_EQ(cliques, (std::vector<VertexSet>{0b011, 0b110}));
  EXPECT_EQ(p->clique_tree.size(), 1u);
}

TEST(Chordal, CliqueTreeRunningIntersection) {
  Rng rng(8);
  for (int t = 0; t < 30; ++t) {
    const Graph g = random_chordal(uniform_int(rng, 2, 12), rng);
    const auto cs = chordal_structure(g);
    ASSERT_TRUE(cs);
    TreeDecomposition td;
    td.bags = cs->cliques;
    td.tree_edges = cs->clique_tree;
    td.width = 0;
    for (VertexSet b : td.bags) td.width = std::max(td.width, popcount(b) - 1);
    EXPECT_EQ(check_tree_decomposition(g, td), "");
    for (VertexSet b : cs->cliques) EXPECT_TRUE(g.is_clique(b));
  }
}

TEST(CliqueSum, TwoK4sOnATriangle) {
  const Graph g = glue(builtin::complete(4), builtin::complete(4), {{0, 0}, {1, 1}, {2, 2}});
  SplitOptions opts;
  opts.merge_treewidth_pieces = false;
  const auto split = clique_sum_split(g, opts);
  ASSERT_EQ(split.components.size(), 2u);
  ASSERT_EQ(split.adhesions.size(), 1u);
  EXPECT_EQ(popcount(split.adhesions[0].separator), 3);
}

TEST(CliqueSum, CutVertex) {
  const Graph g = glue(builtin::cycle(4), builtin::cycle(5), {{0, 0}});
  SplitOptions opts;
  opts.merge_treewidth_pieces = false;
  const auto split = clique_sum_split(g, opts);
  ASSERT_GE(split.components.size(), 2u);
  bool cut = false;
  for (const auto& a : split.adhesions) cut = cut || a.separator == bit(0);
  EXPECT_TRUE(cut);
}

TEST(CliqueSum, V8WithPendantPath) {
  const Graph g = glue(builtin::v8(), builtin::path(4), {{2, 0}});
  const auto split = clique_sum_split(g);
  std::vector<ComponentKind> kinds;
  for (const auto& c : split.components) kinds.push_back(c.kind);
  std::sort(kinds.begin(), kinds.end());
  EXPECT_EQ(kinds, (std::vector<ComponentKind>{ComponentKind::Treewidth3, ComponentKind::V8Type}));
  for (const auto& c : split.components)
    if (c.kind == ComponentKind::V8Type) {
      ASSERT_TRUE(c.template_map);
      EXPECT_EQ(c.vertices.size(), 8u);
    }
}

TEST(CliqueSum, SubgraphOfTheSum) {
  Rng rng(21);
  for (int t = 0; t < 10; ++t) {
    Graph g = glue(builtin::c5xc2(), random_partial_3tree(7, 0.8, rng), {{0, 0}, {1, 1}});
    const auto split = clique_sum_split(g);
    Graph sum(g.vertex_count());
    for (const auto& c : split.components)
      for (const auto& e : c.torso.edges()) {
        const int u = c.vertices[e.u];
        const int v = c.vertices[e.v];
        if (!sum.has_edge(u, v)) sum.add_edge(u, v);
      }
    for (const auto& e : g.edges()) EXPECT_TRUE(sum.has_edge(e));
  }
}

TEST(Suspension, CycleGivesWheel) {
  EXPECT_EQ(suspension(builtin::cycle(4)), builtin::wheel(4));
  EXPECT_EQ(suspension(builtin::cycle(4)).vertex_count(), 5);
}

TEST(Barvinok, Examples) {
  for (int n = 1; n <= 12; ++n) EXPECT_EQ(barvinok_bound(builtin::complete(n)), n);
  EXPECT_EQ(barvinok_bound(builtin::cycle(4)), 3);
  EXPECT_EQ(barvinok_rank(1), 1);
  EXPECT_EQ(barvinok_rank(3), 2);
  EXPECT_EQ(barvinok_rank(5), 2);
  EXPECT_EQ(barvinok_rank(6), 3);
}

TEST(Builtins, ByName) {
  EXPECT_EQ(*builtin::by_name("K5"), builtin::complete(5));
  EXPECT_EQ(*builtin::by_name("C5xC2"), builtin::c5xc2());
  EXPECT_EQ(builtin::by_name("path3")->edge_count(), 2);
  EXPECT_FALSE(builtin::by_name("nonsense"));
}
