#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "gramdim/graph.hpp"
#include "gramdim/minors.hpp"
#include "gramdim/numeric.hpp"
#include "gramdim/partial_matrix.hpp"

namespace gramdim::testing {

using Rng = std::mt19937_64;

inline int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
inline double uniform_real(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

inline Graph random_graph(int n, double p, Rng& rng) {
  Graph g(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (uniform_real(rng, 0, 1) < p) g.add_edge(i, j);
  return g;
}

inline Graph random_tree(int n, Rng& rng) {
  Graph g(n);
  for (int v = 1; v < n; ++v) g.add_edge(v, uniform_int(rng, 0, v - 1));
  return g;
}

// Series and parallel extensions of an edge; parallel copies go through a
// fresh vertex so the graph stays simple.
inline Graph random_series_parallel(int n, Rng& rng) {
  std::vector<Edge> edges{{0, 1}};
  for (int v = 2; v < n; ++v) {
    const Edge e = edges[uniform_int(rng, 0, static_cast<int>(edges.size()) - 1)];
    if (uniform_int(rng, 0, 1) == 0) {
      edges.erase(std::find(edges.begin(), edges.end(), e));
    }
    edges.emplace_back(e.u, v);
    edges.emplace_back(v, e.v);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return Graph(n, edges);
}

// Random 3-tree on n >= 4 vertices with each edge kept with probability keep.
inline Graph random_partial_3tree(int n, double keep, Rng& rng) {
  std::vector<std::vector<int>> triangles{{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}};
  std::vector<Edge> edges;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) edges.emplace_back(i, j);
  for (int v = 4; v < n; ++v) {
    const auto t = triangles[uniform_int(rng, 0, static_cast<int>(triangles.size()) - 1)];
    for (int u : t) edges.emplace_back(u, v);
    triangles.push_back({t[0], t[1], v});
    triangles.push_back({t[0], t[2], v});
    triangles.push_back({t[1], t[2], v});
  }
  Graph g(n);
  for (const auto& e : edges)
    if (uniform_real(rng, 0, 1) < keep) g.add_edge(e.u, e.v);
  return g;
}

// Each new vertex attaches to a random subset of a random maximal clique.
inline Graph random_chordal(int n, Rng& rng) {
  Graph g(n);
  std::vector<std::vector<int>> cliques{{0}};
  for (int v = 1; v < n; ++v) {
    const auto c = cliques[uniform_int(rng, 0, static_cast<int>(cliques.size()) - 1)];
    std::vector<int> sub;
    for (int u : c)
      if (uniform_int(rng, 0, 2) > 0) sub.push_back(u);
    if (sub.empty()) sub.push_back(c[0]);
    for (int u : sub) g.add_edge(u, v);
    sub.push_back(v);
    cliques.push_back(sub);
  }
  return g;
}

// Disjoint union of a and b with b's vertices shared[k].second identified
// with a's shared[k].first.
inline Graph glue(const Graph& a, const Graph& b, const std::vector<std::pair<int, int>>& shared) {
  const int na = a.vertex_count();
  std::vector<int> where(b.vertex_count(), -1);
  for (auto [u, v] : shared) where[v] = u;
  int next = na;
  for (int v = 0; v < b.vertex_count(); ++v)
    if (where[v] < 0) where[v] = next++;
  Graph g(next);
  for (const auto& e : a.edges()) g.add_edge(e.u, e.v);
  for (const auto& e : b.edges())
    if (!g.has_edge(where[e.u], where[e.v])) g.add_edge(where[e.u], where[e.v]);
  return g;
}

inline Matrix random_factor(int n, int rank, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix w(n, rank);
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < rank; ++c) w(i, c) = normal(rng);
  return w;
}

inline Matrix random_psd(int n, int rank, Rng& rng) {
  const Matrix w = random_factor(n, rank, rng);
  return w * w.transpose();
}

inline Matrix random_correlation(int n, int rank, Rng& rng) {
  Matrix w = random_factor(n, rank, rng);
  for (int i = 0; i < n; ++i) w.row(i).normalize();
  return w * w.transpose();
}

inline Matrix random_symmetric(int n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) m(i, j) = m(j, i) = normal(rng);
  return m;
}

// Brute-force minor test: every assignment of host vertices to pattern
// vertices or to nobody. Only for tiny hosts.
inline bool naive_has_minor(const Graph& g, MinorPattern pattern) {
  const Graph h = pattern_graph(pattern);
  const int n = g.vertex_count();
  const int p = h.vertex_count();
  if (n < p) return false;
  std::vector<VertexSet> sets(p, 0);
  const auto check = [&]() {
    for (int b = 0; b < p; ++b)
      if (!g.induces_connected(sets[b])) return false;
    for (const auto& e : h.edges()) {
      bool joined = false;
      for (int v : members(sets[e.u]))
        if (g.neighbors(v) & sets[e.v]) joined = true;
      if (!joined) return false;
    }
    return true;
  };
  const auto rec = [&](auto&& self, int v) -> bool {
    if (v == n) return check();
    for (int b = -1; b < p; ++b) {
      if (b >= 0) sets[b] |= bit(v);
      const bool found = self(self, v + 1);
      if (b >= 0) sets[b] &= ~bit(v);
      if (found) return true;
    }
    return false;
  };
  return rec(rec, 0);
}

}  // namespace gramdim::testing
