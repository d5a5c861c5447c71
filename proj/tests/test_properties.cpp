#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "gramdim/completion.hpp"
#include "gramdim/io.hpp"
#include "gramdim/minors.hpp"
#include "gramdim/stress.hpp"
#include "support.hpp"

using namespace gramdim;
using namespace gramdim::testing;

// Every completion route reproduces the specified entries.
TEST(Properties, ProjectAfterCompleteIsIdentity) {
  Rng rng(1);
  for (int t = 0; t < 20; ++t) {
    const Graph chordal = random_chordal(uniform_int(rng, 3, 10), rng);
    const auto a = project(random_psd(chordal.vertex_count(), 3, rng), chordal);
    EXPECT_LE(a.residual(complete_chordal(a).gram()), 1e-8 * std::max(1.0, max_abs(a.known())));

    const Graph sp = random_series_parallel(uniform_int(rng, 4, 10), rng);
    const auto b = project(random_psd(sp.vertex_count(), sp.vertex_count(), rng), sp);
    const auto rb = complete_treewidth(b, *treewidth_at_most(sp, 2));
    EXPECT_LE(b.residual(rb.gram()), 1e-8 * max_abs(b.known()));
    EXPECT_LE(rb.rank, 3);
  }
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto a = random_instance(builtin::v8(), 100 + seed);
    EXPECT_LE(a.residual(flatten_and_fold(a, 4).gram()), 1e-8 * max_abs(a.known()));
  }
}

TEST(Properties, ComplementarityOnFlatten) {
  Rng rng(2);
  for (int t = 0; t < 10; ++t) {
    const Graph g = random_partial_3tree(8, 0.7, rng);
    const int n = g.vertex_count();
    std::vector<Edge> non_edges;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (!g.has_edge(i, j)) non_edges.emplace_back(i, j);
    if (non_edges.empty()) continue;
    const auto a = project(random_psd(n, uniform_int(rng, 1, n), rng), g);
    const auto f = flatten(a, non_edges[uniform_int(rng, 0, static_cast<int>(non_edges.size()) - 1)]);
    const auto chk = check_stress(f.stress, f.configuration);
    EXPECT_LE(chk.rank_x + chk.rank_omega, n);
    EXPECT_GE(chk.min_eigenvalue, -1e-8);
    EXPECT_EQ(chk.support_violation, 0.0);
  }
}

TEST(Properties, ChordalRankMatchesOracle) {
  Rng rng(3);
  for (int t = 0; t < 15; ++t) {
    const Graph g = random_chordal(uniform_int(rng, 3, 8), rng);
    const auto a = project(random_psd(g.vertex_count(), uniform_int(rng, 1, 4), rng), g);
    const auto r = complete_chordal(a);
    int clique_rank = 0;
    for (VertexSet c : maximal_cliques(g)) {
      const auto vs = members(c);
      Matrix sub(vs.size(), vs.size());
      for (std::size_t i = 0; i < vs.size(); ++i)
        for (std::size_t j = 0; j < vs.size(); ++j) sub(i, j) = a.known()(vs[i], vs[j]);
      clique_rank = std::max(clique_rank, numerical_rank(sub));
    }
    EXPECT_EQ(r.rank, clique_rank);
    if (clique_rank > 1) {
      EXPECT_FALSE(low_rank_factor_search(a, clique_rank - 1, 10, t));
    }
  }
}

TEST(Properties, CycleLemmaMatchesFactorSearch) {
  Rng rng(4);
  for (int n = 3; n <= 6; ++n)
    for (int t = 0; t < 10; ++t) {
      std::vector<double> angles(n);
      for (auto& x : angles) x = uniform_real(rng, 0, std::numbers::pi);
      std::vector<double> vals;
      const Graph c = builtin::cycle(n);
      for (const auto& e : c.edges()) {
        const int k = (e.u == 0 && e.v == n - 1) ? n - 1 : e.u;
        vals.push_back(std::cos(angles[k]));
      }
      const PartialMatrix a(c, Vector::Ones(n), vals);
      const bool planar = cycle_gd2_decide(angles, 1e-9).has_value();
      EXPECT_EQ(planar, low_rank_factor_search(a, 2, 30, t).has_value()) << "n " << n << " trial " << t;
    }
}

TEST(Properties, ClassifierBandsOnFamilies) {
  Rng rng(5);
  for (int t = 0; t < 10; ++t) {
    EXPECT_LE(classify_gram_dimension(random_series_parallel(uniform_int(rng, 3, 14), rng)).bound(), 3);
    EXPECT_LE(classify_gram_dimension(random_partial_3tree(uniform_int(rng, 4, 14), 0.8, rng)).bound(), 4);
  }
}
