#include "gramdim/treewidth.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_set>

namespace gramdim {

std::string check_tree_decomposition(const Graph& g, const TreeDecomposition& td) {
  const int b = static_cast<int>(td.bags.size());
  if (b == 0) return g.vertex_count() == 0 ? std::string{} : "no bags";
  if (static_cast<int>(td.tree_edges.size()) != b - 1) return "tree edge count is not bags - 1";
  // Connectivity of the bag tree.
  std::vector<int> comp(b);
  std::iota(comp.begin(), comp.end(), 0);
  auto find = [&](int x) {
    while (comp[x] != x) x = comp[x] = comp[comp[x]];
    return x;
  };
  for (auto [x, y] : td.tree_edges) {
    if (x < 0 || y < 0 || x >= b || y >= b) return "tree edge out of range";
    const int rx = find(x), ry = find(y);
    if (rx == ry) return "bag graph has a cycle";
    comp[rx] = ry;
  }
  int width = -1;
  VertexSet covered = 0;
  for (auto bag : td.bags) {
    covered |= bag;
    width = std::max(width, popcount(bag) - 1);
  }
  if (covered != g.all_vertices()) return "vertex not covered by any bag";
  if (width != td.width) return "recorded width differs from max bag size - 1";
  for (const auto& e : g.edges()) {
    const VertexSet m = bit(e.u) | bit(e.v);
    if (std::none_of(td.bags.begin(), td.bags.end(), [&](VertexSet s) { return (s & m) == m; })) {
      return "edge not covered by any bag";
    }
  }
  // Running intersection: bags holding v form a connected subtree.
  for (int v = 0; v < g.vertex_count(); ++v) {
    std::vector<int> holding;
    for (int i = 0; i < b; ++i)
      if ((td.bags[i] >> v) & 1U) holding.push_back(i);
    std::vector<int> c(b);
    std::iota(c.begin(), c.end(), 0);
    auto f = [&](int x) {
      while (c[x] != x) x = c[x] = c[c[x]];
      return x;
    };
    int joins = 0;
    for (auto [x, y] : td.tree_edges) {
      if (((td.bags[x] >> v) & 1U) && ((td.bags[y] >> v) & 1U)) {
        c[f(x)] = f(y);
        ++joins;
      }
    }
    if (joins != static_cast<int>(holding.size()) - 1) return "running intersection violated";
  }
  return {};
}

TreeDecomposition decomposition_from_order(const Graph& g, const std::vector<int>& order) {
  const int n = g.vertex_count();
  std::vector<VertexSet> fill(n);
  for (int v = 0; v < n; ++v) fill[v] = g.neighbors(v);
  std::vector<int> position(n);
  for (int i = 0; i < n; ++i) position[order[i]] = i;

  std::vector<VertexSet> bags(n);
  std::vector<int> parent(n, -1);
  VertexSet eliminated = 0;
  for (int i = 0; i < n; ++i) {
    const int v = order[i];
    const VertexSet higher = fill[v] & ~eliminated & ~bit(v);
    bags[i] = higher | bit(v);
    for (int a : members(higher)) fill[a] |= higher & ~bit(a);
    eliminated |= bit(v);
    int best = -1;
    for (int a : members(higher))
      if (best < 0 || position[a] < best) best = position[a];
    parent[i] = best;
  }
  // Roots of a disconnected graph hang off the last bag.
  for (int i = 0; i + 1 < n; ++i)
    if (parent[i] < 0) parent[i] = n - 1;

  // Merge bags contained in their parent (or vice versa) until stable.
  std::vector<bool> alive(n, true);
  bool changed = true;
  while (changed) {
    changed = false;
    for (int i = 0; i < n; ++i) {
      if (!alive[i] || parent[i] < 0) continue;
      const int p = parent[i];
      if ((bags[i] & ~bags[p]) == 0) {
        alive[i] = false;
        for (int j = 0; j < n; ++j)
          if (alive[j] && parent[j] == i) parent[j] = p;
        changed = true;
      } else if ((bags[p] & ~bags[i]) == 0) {
        // Child absorbs the parent's role.
        bags[p] = bags[i];
        alive[i] = false;
        for (int j = 0; j < n; ++j)
          if (alive[j] && parent[j] == i) parent[j] = p;
        changed = true;
      }
    }
  }
  TreeDecomposition td;
  std::vector<int> index(n, -1);
  for (int i = 0; i < n; ++i) {
    if (!alive[i]) continue;
    index[i] = static_cast<int>(td.bags.size());
    td.bags.push_back(bags[i]);
  }
  for (int i = 0; i < n; ++i) {
    if (alive[i] && parent[i] >= 0) td.tree_edges.emplace_back(index[parent[i]], index[i]);
  }
  td.width = -1;
  for (auto bag : td.bags) td.width = std::max(td.width, popcount(bag) - 1);
  return td;
}

namespace {

class EliminationSearch {
 public:
  EliminationSearch(const Graph& g, int k) : g_(g), k_(k), n_(g.vertex_count()) {}

  std::optional<std::vector<int>> run() {
    std::vector<int> order;
    if (solve(0, order)) return order;
    return std::nullopt;
  }

 private:
  // Neighbours of v in the graph obtained by eliminating `gone`.
  VertexSet reach(VertexSet gone, int v) const {
    VertexSet seen = bit(v), frontier = bit(v), out = 0;
    while (frontier) {
      VertexSet next = 0;
      for (int x : members(frontier)) next |= g_.neighbors(x);
      next &= ~seen;
      seen |= next;
      out |= next & ~gone;
      frontier = next & gone;
    }
    return out;
  }

  bool solve(VertexSet gone, std::vector<int>& order) {
    const VertexSet all = g_.all_vertices();
    const VertexSet left = all & ~gone;
    if (popcount(left) <= k_ + 1) {
      for (int v : members(left)) order.push_back(v);
      return true;
    }
    if (failed_.contains(gone)) return false;
    // Eager elimination of a simplicial vertex of small degree is safe.
    std::vector<std::pair<int, int>> candidates;
    for (int v : members(left)) {
      const VertexSet nb = reach(gone, v);
      const int d = popcount(nb);
      if (d > k_) continue;
      bool simplicial = true;
      for (int a : members(nb)) {
        if ((reach(gone, a) & nb) != (nb & ~bit(a))) {
          simplicial = false;
          break;
        }
      }
      if (simplicial) {
        order.push_back(v);
        if (solve(gone | bit(v), order)) return true;
        order.pop_back();
        failed_.insert(gone);
        return false;
      }
      candidates.emplace_back(d, v);
    }
    std::sort(candidates.begin(), candidates.end());
    for (auto [d, v] : candidates) {
      order.push_back(v);
      if (solve(gone | bit(v), order)) return true;
      order.pop_back();
    }
    failed_.insert(gone);
    return false;
  }

  const Graph& g_;
  int k_;
  int n_;
  std::unordered_set<VertexSet> failed_;
};

}  // namespace

std::optional<TreeDecomposition> treewidth_at_most(const Graph& g, int k) {
  if (k < 0) throw InvalidInput("treewidth_at_most: k must be nonnegative");
  if (g.vertex_count() == 0) return TreeDecomposition{{}, {}, -1};
  auto order = EliminationSearch(g, k).run();
  if (!order) return std::nullopt;
  auto td = decomposition_from_order(g, *order);
  if (td.width > k) return std::nullopt;
  return td;
}

std::optional<TreeDecomposition> min_width_decomposition(const Graph& g, int max_width) {
  for (int k = 0; k <= max_width; ++k) {
    if (auto td = treewidth_at_most(g, k)) return td;
  }
  return std::nullopt;
}

std::optional<ChordalStructure> chordal_structure(const Graph& g) {
  const int n = g.vertex_count();
  // Maximum cardinality search; its reverse visiting order is a perfect
  // elimination order exactly when g is chordal.
  std::vector<int> weight(n, 0);
  VertexSet visited = 0;
  std::vector<int> visit;
  for (int step = 0; step < n; ++step) {
    int best = -1;
    for (int v = 0; v < n; ++v)
      if (!((visited >> v) & 1U) && (best < 0 || weight[v] > weight[best])) best = v;
    visit.push_back(best);
    visited |= bit(best);
    for (int w : members(g.neighbors(best) & ~visited)) ++weight[w];
  }
  std::vector<int> peo(visit.rbegin(), visit.rend());
  std::vector<int> position(n);
  for (int i = 0; i < n; ++i) position[peo[i]] = i;

  std::vector<VertexSet> candidate(n);
  for (int i = 0; i < n; ++i) {
    const int v = peo[i];
    VertexSet later = 0;
    for (int w : members(g.neighbors(v)))
      if (position[w] > i) later |= bit(w);
    if (!g.is_clique(later)) return std::nullopt;
    candidate[i] = later | bit(v);
  }
  ChordalStructure cs;
  cs.elimination_order = peo;
  for (int i = 0; i < n; ++i) {
    bool maximal = true;
    for (int j = 0; j < n && maximal; ++j) {
      if (j == i) continue;
      const bool inside = (candidate[i] & ~candidate[j]) == 0;
      if (inside && (candidate[i] != candidate[j] || j < i)) maximal = false;
    }
    if (maximal) cs.cliques.push_back(candidate[i]);
  }
  // Maximum-weight spanning tree on clique intersections is a clique tree.
  const int c = static_cast<int>(cs.cliques.size());
  std::vector<std::tuple<int, int, int>> pairs;
  for (int a = 0; a < c; ++a)
    for (int b = a + 1; b < c; ++b) pairs.emplace_back(-popcount(cs.cliques[a] & cs.cliques[b]), a, b);
  std::sort(pairs.begin(), pairs.end());
  std::vector<int> root(c);
  std::iota(root.begin(), root.end(), 0);
  auto find = [&](int x) {
    while (root[x] != x) x = root[x] = root[root[x]];
    return x;
  };
  for (auto [w, a, b] : pairs) {
    const int ra = find(a), rb = find(b);
    if (ra == rb) continue;
    root[ra] = rb;
    cs.clique_tree.emplace_back(a, b);
  }
  return cs;
}

}  // namespace gramdim
