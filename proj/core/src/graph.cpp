#include "gramdim/graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <set>

namespace gramdim {

int popcount(VertexSet s) { return std::popcount(s); }

std::vector<int> members(VertexSet s) {
  std::vector<int> out;
  while (s) {
    out.push_back(std::countr_zero(s));
    s &= s - 1;
  }
  return out;
}

VertexSet mask_of(const std::vector<int>& vs) {
  VertexSet m = 0;
  for (int v : vs) m |= bit(v);
  return m;
}

Graph::Graph(int n) : n_(n) {
  if (n < 0 || n > kMaxVertices) {
    throw InvalidInput("vertex count must lie in [0, 64], got " + std::to_string(n));
  }
  adj_.assign(n, 0);
  labels_.reserve(n);
  for (int i = 0; i < n; ++i) labels_.push_back(std::to_string(i));
}

Graph::Graph(int n, const std::vector<Edge>& edges) : Graph(n) {
  for (const auto& e : edges) {
    if (has_edge(e)) throw InvalidInput("duplicate edge");
    add_edge(e.u, e.v);
  }
}

Graph::Graph(int n, const std::vector<Edge>& edges, std::vector<std::string> labels)
    : Graph(n, edges) {
  if (static_cast<int>(labels.size()) != n) throw InvalidInput("label count differs from vertex count");
  std::set<std::string> seen(labels.begin(), labels.end());
  if (static_cast<int>(seen.size()) != n) throw InvalidInput("vertex labels must be unique");
  labels_ = std::move(labels);
}

void Graph::check_vertex(int v) const {
  if (v < 0 || v >= n_) throw InvalidInput("vertex " + std::to_string(v) + " out of range");
}

int Graph::edge_count() const {
  int twice = 0;
  for (auto a : adj_) twice += std::popcount(a);
  return twice / 2;
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  for (int u = 0; u < n_; ++u) {
    for (int v : members(adj_[u] & ~((bit(u) << 1) - 1))) out.emplace_back(u, v);
  }
  return out;
}

std::optional<int> Graph::find_label(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) return std::nullopt;
  return static_cast<int>(it - labels_.begin());
}

bool Graph::has_edge(int u, int v) const {
  check_vertex(u);
  check_vertex(v);
  return (adj_[u] >> v) & 1U;
}

int Graph::degree(int v) const {
  check_vertex(v);
  return std::popcount(adj_[v]);
}

VertexSet Graph::all_vertices() const { return n_ == 64 ? ~VertexSet{0} : bit(n_) - 1; }

void Graph::add_edge(int u, int v) {
  check_vertex(u);
  check_vertex(v);
  if (u == v) throw InvalidInput("self-loops are not allowed");
  adj_[u] |= bit(v);
  adj_[v] |= bit(u);
}

void Graph::remove_edge(int u, int v) {
  check_vertex(u);
  check_vertex(v);
  adj_[u] &= ~bit(v);
  adj_[v] &= ~bit(u);
}

bool Graph::is_clique(VertexSet s) const {
  for (int v : members(s)) {
    if ((adj_[v] & s) != (s & ~bit(v))) return false;
  }
  return true;
}

bool Graph::is_stable(VertexSet s) const {
  for (int v : members(s)) {
    if (adj_[v] & s) return false;
  }
  return true;
}

bool Graph::induces_connected(VertexSet s) const {
  if (s == 0) return false;
  VertexSet seen = s & (~s + 1);
  VertexSet frontier = seen;
  while (frontier) {
    VertexSet next = 0;
    for (int v : members(frontier)) next |= adj_[v] & s;
    frontier = next & ~seen;
    seen |= next;
  }
  return seen == s;
}

bool Graph::is_connected() const { return n_ == 0 || induces_connected(all_vertices()); }

std::vector<VertexSet> Graph::components(VertexSet within) const {
  std::vector<VertexSet> out;
  VertexSet left = within;
  while (left) {
    VertexSet seen = left & (~left + 1);
    VertexSet frontier = seen;
    while (frontier) {
      VertexSet next = 0;
      for (int v : members(frontier)) next |= adj_[v] & within;
      frontier = next & ~seen;
      seen |= next;
    }
    out.push_back(seen);
    left &= ~seen;
  }
  return out;
}

Graph Graph::induced(const std::vector<int>& vs) const {
  std::vector<std::string> labels;
  std::vector<Edge> es;
  for (std::size_t a = 0; a < vs.size(); ++a) {
    labels.push_back(label(vs[a]));
    for (std::size_t b = a + 1; b < vs.size(); ++b) {
      if (has_edge(vs[a], vs[b])) es.emplace_back(static_cast<int>(a), static_cast<int>(b));
    }
  }
  return Graph(static_cast<int>(vs.size()), es, std::move(labels));
}

Graph delete_edge(const Graph& g, const Edge& e) {
  if (!g.has_edge(e)) throw InvalidInput("delete_edge: edge is not present");
  Graph out = g;
  out.remove_edge(e.u, e.v);
  return out;
}

Graph contract_edge(const Graph& g, const Edge& e) {
  if (!g.has_edge(e)) throw InvalidInput("contract_edge: edge is not present");
  const int n = g.vertex_count();
  auto relabel = [&](int w) { return w < e.v ? w : (w == e.v ? e.u : w - 1); };
  std::set<Edge> es;
  for (const auto& f : g.edges()) {
    int a = relabel(f.u), b = relabel(f.v);
    if (a != b) es.emplace(a, b);
  }
  std::vector<std::string> labels;
  for (int w = 0; w < n; ++w) {
    if (w == e.v) continue;
    labels.push_back(w == e.u ? g.label(e.u) + "+" + g.label(e.v) : g.label(w));
  }
  return Graph(n - 1, std::vector<Edge>(es.begin(), es.end()), std::move(labels));
}

Graph suspension(const Graph& g) {
  const int n = g.vertex_count();
  auto es = g.edges();
  for (int v = 0; v < n; ++v) es.emplace_back(v, n);
  auto labels = g.labels();
  std::string apex = "apex";
  while (g.find_label(apex)) apex += "'";
  labels.push_back(apex);
  return Graph(n + 1, es, std::move(labels));
}

int barvinok_rank(int m) {
  int k = static_cast<int>((std::sqrt(1.0 + 8.0 * m) - 1.0) / 2.0);
  while ((k + 1) * (k + 2) / 2 <= m) ++k;
  while (k > 0 && k * (k + 1) / 2 > m) --k;
  return k;
}

int barvinok_bound(const Graph& g) { return barvinok_rank(g.vertex_count() + g.edge_count()); }

std::optional<std::vector<int>> spanning_subgraph_embedding(const Graph& host,
                                                            const Graph& pattern) {
  const int n = pattern.vertex_count();
  if (host.vertex_count() != n || host.edge_count() > pattern.edge_count()) return std::nullopt;
  // Backtrack over host images of pattern vertices in order; every host edge
  // between already-placed images must be a pattern edge.
  std::vector<int> image(n, -1);
  std::vector<int> preimage(n, -1);
  std::function<bool(int)> place = [&](int t) -> bool {
    if (t == n) return true;
    for (int h = 0; h < n; ++h) {
      if (preimage[h] != -1) continue;
      if (host.degree(h) > pattern.degree(t)) continue;
      bool ok = true;
      for (int s = 0; s < t && ok; ++s) {
        if (host.has_edge(h, image[s]) && !pattern.has_edge(t, s)) ok = false;
      }
      if (!ok) continue;
      image[t] = h;
      preimage[h] = t;
      if (place(t + 1)) return true;
      image[t] = -1;
      preimage[h] = -1;
    }
    return false;
  };
  if (!place(0)) return std::nullopt;
  return image;
}

namespace builtin {

namespace {
std::vector<std::string> one_based(int n) {
  std::vector<std::string> out;
  for (int i = 1; i <= n; ++i) out.push_back(std::to_string(i));
  return out;
}

std::optional<int> suffix_int(const std::string& name, const std::string& prefix) {
  if (name.size() <= prefix.size() || name.compare(0, prefix.size(), prefix) != 0) return std::nullopt;
  const auto tail = name.substr(prefix.size());
  if (!std::all_of(tail.begin(), tail.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    return std::nullopt;
  }
  if (tail.size() > 3) return std::nullopt;
  return std::stoi(tail);
}
}  // namespace

Graph complete(int n) {
  std::vector<Edge> es;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) es.emplace_back(i, j);
  return Graph(n, es, one_based(n));
}

Graph path(int n) {
  std::vector<Edge> es;
  for (int i = 0; i + 1 < n; ++i) es.emplace_back(i, i + 1);
  return Graph(n, es, one_based(n));
}

Graph cycle(int n) {
  if (n < 3) throw InvalidInput("a cycle needs at least 3 vertices");
  std::vector<Edge> es;
  for (int i = 0; i < n; ++i) es.emplace_back(i, (i + 1) % n);
  return Graph(n, es, one_based(n));
}

Graph star(int leaves) {
  std::vector<Edge> es;
  for (int i = 1; i <= leaves; ++i) es.emplace_back(0, i);
  return Graph(leaves + 1, es, one_based(leaves + 1));
}

Graph wheel(int rim) {
  Graph c = cycle(rim);
  Graph w = suspension(c);
  auto labels = one_based(rim + 1);
  return Graph(rim + 1, w.edges(), labels);
}

Graph k222() {
  // K6 minus the perfect matching (1,4), (2,5), (3,6).
  std::vector<Edge> es;
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j)
      if (j - i != 3) es.emplace_back(i, j);
  return Graph(6, es, one_based(6));
}

Graph v8() {
  std::vector<Edge> es;
  for (int i = 0; i < 8; ++i) es.emplace_back(i, (i + 1) % 8);
  for (int i = 0; i < 4; ++i) es.emplace_back(i, i + 4);
  return Graph(8, es, one_based(8));
}

Graph c5xc2() {
  const std::vector<std::pair<int, int>> one_based_edges = {
      {1, 3}, {3, 5}, {5, 7}, {7, 9}, {9, 1},    // outer 5-cycle
      {2, 4}, {4, 6}, {6, 8}, {8, 10}, {10, 2},  // inner 5-cycle
      {1, 2}, {3, 4}, {5, 6}, {7, 8}, {9, 10}};  // rungs
  std::vector<Edge> es;
  for (auto [a, b] : one_based_edges) es.emplace_back(a - 1, b - 1);
  return Graph(10, es, one_based(10));
}

Graph petersen() {
  std::vector<Edge> es;
  for (int i = 0; i < 5; ++i) {
    es.emplace_back(i, (i + 1) % 5);
    es.emplace_back(i, i + 5);
    es.emplace_back(5 + i, 5 + (i + 2) % 5);
  }
  return Graph(10, es, one_based(10));
}

std::optional<Graph> by_name(const std::string& name) {
  if (name == "K222" || name == "k222" || name == "K2,2,2") return k222();
  if (name == "V8" || name == "v8") return v8();
  if (name == "C5xC2" || name == "c5xc2" || name == "C5×C2") return c5xc2();
  if (name == "petersen" || name == "Petersen") return petersen();
  if (auto n = suffix_int(name, "path")) return path(*n);
  if (auto n = suffix_int(name, "cycle")) return cycle(*n);
  if (auto n = suffix_int(name, "wheel")) return wheel(*n);
  if (auto n = suffix_int(name, "star")) return star(*n);
  if (auto n = suffix_int(name, "K")) return complete(*n);
  if (auto n = suffix_int(name, "C")) return cycle(*n);
  if (auto n = suffix_int(name, "W")) return wheel(*n);
  return std::nullopt;
}

}  // namespace builtin
}  // namespace gramdim
