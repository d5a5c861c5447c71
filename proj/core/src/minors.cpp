#include "gramdim/minors.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <unordered_set>

#include "gramdim/clique_sum.hpp"
#include "gramdim/treewidth.hpp"

namespace gramdim {

std::string to_string(MinorPattern p) {
  switch (p) {
    case MinorPattern::K3: return "K3";
    case MinorPattern::K4: return "K4";
    case MinorPattern::K5: return "K5";
    case MinorPattern::K222: return "K222";
  }
  return "?";
}

std::string to_string(GramBand b) {
  switch (b) {
    case GramBand::AtMost1: return "<=1";
    case GramBand::AtMost2: return "<=2";
    case GramBand::AtMost3: return "<=3";
    case GramBand::AtMost4: return "<=4";
    case GramBand::AtLeast5: return ">=5";
  }
  return "?";
}

Graph pattern_graph(MinorPattern p) {
  switch (p) {
    case MinorPattern::K3: return builtin::complete(3);
    case MinorPattern::K4: return builtin::complete(4);
    case MinorPattern::K5: return builtin::complete(5);
    case MinorPattern::K222: return builtin::k222();
  }
  throw InvalidInput("unknown pattern");
}

std::string check_witness(const Graph& g, const MinorWitness& w) {
  const Graph h = pattern_graph(w.pattern);
  if (static_cast<int>(w.branch_sets.size()) != h.vertex_count()) return "wrong number of branch sets";
  VertexSet used = 0;
  for (auto b : w.branch_sets) {
    if (b & ~g.all_vertices()) return "branch set leaves the host";
    if (b & used) return "branch sets overlap";
    if (!g.induces_connected(b)) return "branch set is empty or disconnected";
    used |= b;
  }
  const auto pe = h.edges();
  if (w.connecting_edges.size() != pe.size()) return "wrong number of connecting edges";
  for (std::size_t i = 0; i < pe.size(); ++i) {
    const Edge& e = w.connecting_edges[i];
    if (!g.has_edge(e)) return "connecting edge missing from host";
    const VertexSet a = w.branch_sets[pe[i].u], b = w.branch_sets[pe[i].v];
    const bool ok = ((a >> e.u) & 1U && (b >> e.v) & 1U) || ((a >> e.v) & 1U && (b >> e.u) & 1U);
    if (!ok) return "connecting edge does not join its branch sets";
  }
  return {};
}

std::optional<std::vector<int>> find_subgraph(const Graph& host, const Graph& pattern) {
  const int k = pattern.vertex_count();
  const int n = host.vertex_count();
  if (k > n || pattern.edge_count() > host.edge_count()) return std::nullopt;
  // Highest-degree pattern vertices first, each later vertex adjacent to an
  // earlier one when possible.
  std::vector<int> order;
  VertexSet placed = 0;
  for (int step = 0; step < k; ++step) {
    int best = -1, best_key = -1;
    for (int v = 0; v < k; ++v) {
      if ((placed >> v) & 1U) continue;
      const int key = 100 * popcount(pattern.neighbors(v) & placed) + pattern.degree(v);
      if (key > best_key) best = v, best_key = key;
    }
    order.push_back(best);
    placed |= bit(best);
  }
  std::vector<int> image(k, -1);
  VertexSet taken = 0;
  std::function<bool(int)> extend = [&](int idx) -> bool {
    if (idx == k) return true;
    const int p = order[idx];
    VertexSet cand = host.all_vertices() & ~taken;
    for (int q : members(pattern.neighbors(p))) {
      if (image[q] >= 0) cand &= host.neighbors(image[q]);
    }
    for (int h : members(cand)) {
      if (host.degree(h) < pattern.degree(p)) continue;
      image[p] = h;
      taken |= bit(h);
      if (extend(idx + 1)) return true;
      taken &= ~bit(h);
      image[p] = -1;
    }
    return false;
  };
  if (!extend(0)) return std::nullopt;
  return image;
}

namespace {

// Contracted host: super vertices with host branch masks.
struct MinorState {
  int n = 0;
  std::array<VertexSet, kMaxVertices> adj{};
  std::array<VertexSet, kMaxVertices> branch{};

  int edges() const {
    int twice = 0;
    for (int i = 0; i < n; ++i) twice += popcount(adj[i]);
    return twice / 2;
  }

  void remove(int v) {
    const int last = n - 1;
    for (int i = 0; i < n; ++i) adj[i] &= ~bit(v);
    if (v != last) {
      adj[v] = adj[last];
      branch[v] = branch[last];
      for (int i = 0; i < last; ++i) {
        if ((adj[i] >> last) & 1U) {
          adj[i] &= ~bit(last);
          adj[i] |= bit(v);
        }
      }
    }
    adj[last] = 0;
    branch[last] = 0;
    --n;
  }

  // Merge b into a.
  void contract(int a, int b) {
    VertexSet nb = adj[b] & ~bit(a);
    branch[a] |= branch[b];
    for (int w : members(nb)) {
      adj[w] |= bit(a);
      adj[a] |= bit(w);
    }
    remove(b);
  }

  Graph as_graph() const {
    Graph g(n);
    for (int i = 0; i < n; ++i)
      for (int j : members(adj[i]))
        if (j > i) g.add_edge(i, j);
    return g;
  }
};

struct VectorHash {
  std::size_t operator()(const std::vector<VertexSet>& v) const {
    std::size_t h = 1469598103934665603ULL;
    for (auto x : v) {
      h ^= std::hash<VertexSet>{}(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
  }
};

class MinorSearch {
 public:
  MinorSearch(const Graph& host, MinorPattern pattern)
      : host_(host), pattern_(pattern), h_(pattern_graph(pattern)) {
    min_degree_ = h_.vertex_count();
    for (int v = 0; v < h_.vertex_count(); ++v) min_degree_ = std::min(min_degree_, h_.degree(v));
  }

  std::optional<MinorWitness> run() {
    MinorState s;
    s.n = host_.vertex_count();
    for (int v = 0; v < s.n; ++v) {
      s.adj[v] = host_.neighbors(v);
      s.branch[v] = bit(v);
    }
    if (search(s)) return witness_;
    return std::nullopt;
  }

 private:
  void reduce(MinorState& s) const {
    bool changed = true;
    while (changed) {
      changed = false;
      for (int v = 0; v < s.n; ++v) {
        const int d = popcount(s.adj[v]);
        if (d <= 1) {
          s.remove(v);
          changed = true;
          break;
        }
        if (d == 2 && min_degree_ >= 3) {
          const int u = members(s.adj[v]).front();
          s.contract(u, v);
          changed = true;
          break;
        }
      }
    }
  }

  bool search(MinorState s) {
    reduce(s);
    const int hv = h_.vertex_count(), he = h_.edge_count();
    if (s.n < hv) return false;
    const int m = s.edges();
    // After reduction every vertex has degree >= 2, so each contraction or
    // deletion needed to come down to hv super vertices loses an edge.
    if (m - (s.n - hv) < he) return false;
    std::vector<VertexSet> key(s.branch.begin(), s.branch.begin() + s.n);
    std::sort(key.begin(), key.end());
    if (failed_.contains(key)) return false;

    const Graph cur = s.as_graph();
    if (auto emb = find_subgraph(cur, h_)) {
      build_witness(s, *emb);
      return true;
    }
    if (s.n > hv) {
      for (int a = 0; a < s.n; ++a) {
        for (int b : members(s.adj[a])) {
          if (b <= a) continue;
          MinorState next = s;
          next.contract(a, b);
          if (search(next)) return true;
        }
      }
    }
    failed_.insert(std::move(key));
    return false;
  }

  void build_witness(const MinorState& s, const std::vector<int>& emb) {
    MinorWitness w;
    w.pattern = pattern_;
    for (int x = 0; x < h_.vertex_count(); ++x) w.branch_sets.push_back(s.branch[emb[x]]);
    for (const auto& e : h_.edges()) {
      const VertexSet a = w.branch_sets[e.u], b = w.branch_sets[e.v];
      std::optional<Edge> found;
      for (int x : members(a)) {
        const VertexSet hit = host_.neighbors(x) & b;
        if (hit) {
          found = Edge(x, members(hit).front());
          break;
        }
      }
      w.connecting_edges.push_back(*found);
    }
    witness_ = std::move(w);
  }

  const Graph& host_;
  MinorPattern pattern_;
  Graph h_;
  int min_degree_ = 0;
  std::unordered_set<std::vector<VertexSet>, VectorHash> failed_;
  MinorWitness witness_;
};

std::optional<MinorWitness> find_k3(const Graph& g) {
  // Any cycle is a K3 model: split it into three consecutive arcs.
  const int n = g.vertex_count();
  std::vector<int> parent(n, -1), depth(n, -1);
  for (int root = 0; root < n; ++root) {
    if (depth[root] >= 0) continue;
    std::vector<int> stack = {root};
    depth[root] = 0;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int w : members(g.neighbors(v))) {
        if (w == parent[v]) continue;
        if (depth[w] >= 0) {
          // Tree path v -> lca <- w closes a cycle through edge (v, w).
          std::vector<int> left, right;
          int a = v, b = w;
          while (depth[a] > depth[b]) left.push_back(a), a = parent[a];
          while (depth[b] > depth[a]) right.push_back(b), b = parent[b];
          while (a != b) {
            left.push_back(a), a = parent[a];
            right.push_back(b), b = parent[b];
          }
          left.push_back(a);
          std::reverse(right.begin(), right.end());
          std::vector<int> cyc = left;
          cyc.insert(cyc.end(), right.begin(), right.end());
          if (cyc.size() < 3) continue;
          MinorWitness wit;
          wit.pattern = MinorPattern::K3;
          std::vector<int> rest(cyc.begin() + 2, cyc.end());
          wit.branch_sets = {bit(cyc[0]), bit(cyc[1]), mask_of(rest)};
          // pattern edges of K3 in order (0,1), (0,2), (1,2)
          wit.connecting_edges = {Edge(cyc[0], cyc[1]), Edge(cyc[0], cyc.back()),
                                  Edge(cyc[1], cyc[2])};
          return wit;
        }
        depth[w] = depth[v] + 1;
        parent[w] = v;
        stack.push_back(w);
      }
    }
  }
  return std::nullopt;
}

// BFS path from u to v whose interior avoids `blocked`; interior vertices only.
std::optional<std::vector<int>> interior_path(const Graph& g, int u, int v, VertexSet blocked) {
  const int n = g.vertex_count();
  std::vector<int> prev(n, -2);
  prev[u] = -1;
  std::vector<int> queue = {u};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const int x = queue[head];
    for (int y : members(g.neighbors(x))) {
      if (prev[y] != -2) continue;
      if (y != v && ((blocked >> y) & 1U)) continue;
      if (x == u && y == v) continue;  // need a path through the other side
      prev[y] = x;
      if (y == v) {
        std::vector<int> out;
        for (int z = prev[v]; z != u; z = prev[z]) out.push_back(z);
        return out;
      }
      queue.push_back(y);
    }
  }
  return std::nullopt;
}

std::optional<MinorWitness> lift_witness(const Graph& g, const TorsoPiece& piece,
                                         const MinorWitness& local) {
  MinorWitness w;
  w.pattern = local.pattern;
  for (auto b : local.branch_sets) {
    VertexSet mapped = 0;
    for (int x : members(b)) mapped |= bit(piece.vertices[x]);
    w.branch_sets.push_back(mapped);
  }
  VertexSet used = 0;
  for (auto b : w.branch_sets) used |= b;
  const VertexSet torso_mask = mask_of(piece.vertices);
  for (const auto& ve : piece.virtual_edges) {
    const int u = piece.vertices[ve.u], v = piece.vertices[ve.v];
    if (g.has_edge(u, v)) continue;
    int bu = -1, bv = -1;
    for (std::size_t i = 0; i < w.branch_sets.size(); ++i) {
      if ((w.branch_sets[i] >> u) & 1U) bu = static_cast<int>(i);
      if ((w.branch_sets[i] >> v) & 1U) bv = static_cast<int>(i);
    }
    if (bu < 0 || bv < 0) continue;
    auto path = interior_path(g, u, v, (torso_mask & ~bit(u) & ~bit(v)) | used);
    if (!path) return std::nullopt;
    const VertexSet pm = mask_of(*path);
    w.branch_sets[bu] |= pm;
    used |= pm;
  }
  const Graph h = pattern_graph(w.pattern);
  for (const auto& e : h.edges()) {
    std::optional<Edge> found;
    for (int x : members(w.branch_sets[e.u])) {
      const VertexSet hit = g.neighbors(x) & w.branch_sets[e.v];
      if (hit) {
        found = Edge(x, members(hit).front());
        break;
      }
    }
    if (!found) return std::nullopt;
    w.connecting_edges.push_back(*found);
  }
  if (!check_witness(g, w).empty()) return std::nullopt;
  return w;
}

bool k4_minor_free(const Graph& g) {
  // Series-parallel reduction on a multigraph-free simple graph: delete
  // vertices of degree <= 1, suppress degree-2 vertices. K4-minor-free iff
  // the graph reduces to nothing.
  MinorState s;
  s.n = g.vertex_count();
  for (int v = 0; v < s.n; ++v) s.adj[v] = g.neighbors(v), s.branch[v] = bit(v);
  bool changed = true;
  while (changed && s.n > 0) {
    changed = false;
    for (int v = 0; v < s.n; ++v) {
      const int d = popcount(s.adj[v]);
      if (d <= 1) {
        s.remove(v);
        changed = true;
        break;
      }
      if (d == 2) {
        s.contract(members(s.adj[v]).front(), v);
        changed = true;
        break;
      }
    }
  }
  return s.n == 0;
}

}  // namespace

std::optional<MinorWitness> has_minor_direct(const Graph& g, MinorPattern pattern) {
  if (pattern == MinorPattern::K3) return find_k3(g);
  return MinorSearch(g, pattern).run();
}

std::optional<MinorWitness> has_minor(const Graph& g, MinorPattern pattern) {
  if (pattern == MinorPattern::K3) return find_k3(g);
  if (pattern == MinorPattern::K4 && k4_minor_free(g)) return std::nullopt;
  const Graph h = pattern_graph(pattern);
  for (const auto& piece : two_separation_pieces(g)) {
    if (piece.torso.vertex_count() < h.vertex_count()) continue;
    if (pattern != MinorPattern::K4 && piece.torso.vertex_count() <= 24 &&
        treewidth_at_most(piece.torso, 3)) {
      continue;  // K5 and K222 have tree-width 4
    }
    auto local = MinorSearch(piece.torso, pattern).run();
    if (!local) continue;
    if (auto lifted = lift_witness(g, piece, *local)) return lifted;
    return has_minor_direct(g, pattern);
  }
  return std::nullopt;
}

GramClassification classify_gram_dimension(const Graph& g) {
  GramClassification out;
  if (g.edge_count() == 0) {
    out.band = GramBand::AtMost1;
    return out;
  }
  if (!find_k3(g)) {
    out.band = GramBand::AtMost2;
    return out;
  }
  if (k4_minor_free(g)) {
    out.band = GramBand::AtMost3;
    return out;
  }
  for (auto p : {MinorPattern::K5, MinorPattern::K222}) {
    if (auto w = has_minor(g, p)) {
      out.band = GramBand::AtLeast5;
      out.witness = std::move(w);
      return out;
    }
  }
  out.band = GramBand::AtMost4;
  return out;
}

}  // namespace gramdim
