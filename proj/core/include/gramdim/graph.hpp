#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gramdim {

/// Raised when an argument violates an operation's precondition.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using VertexSet = std::uint64_t;

/// Undirected edge stored with first < second.
struct Edge {
  int u = 0;
  int v = 0;

  Edge() = default;
  Edge(int a, int b) : u(a < b ? a : b), v(a < b ? b : a) {}

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

inline constexpr int kMaxVertices = 64;

inline constexpr VertexSet bit(int v) { return VertexSet{1} << v; }
int popcount(VertexSet s);
std::vector<int> members(VertexSet s);
VertexSet mask_of(const std::vector<int>& vs);

/// Simple undirected graph on vertices 0..n-1 with a stable external label
/// per vertex. Adjacency is kept as bitmasks, so n is capped at 64.
class Graph {
 public:
  Graph() = default;
  explicit Graph(int n);
  Graph(int n, const std::vector<Edge>& edges);
  Graph(int n, const std::vector<Edge>& edges, std::vector<std::string> labels);

  int vertex_count() const { return n_; }
  int edge_count() const;
  std::vector<Edge> edges() const;
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(int v) const { return labels_.at(v); }
  std::optional<int> find_label(const std::string& label) const;

  bool has_edge(int u, int v) const;
  bool has_edge(const Edge& e) const { return has_edge(e.u, e.v); }
  VertexSet neighbors(int v) const { return adj_.at(v); }
  int degree(int v) const;
  VertexSet all_vertices() const;

  void add_edge(int u, int v);
  void remove_edge(int u, int v);

  bool is_clique(VertexSet s) const;
  bool is_stable(VertexSet s) const;
  bool is_connected() const;
  /// True when the subgraph induced by `s` is connected (empty set is not).
  bool induces_connected(VertexSet s) const;
  std::vector<VertexSet> components(VertexSet within) const;

  /// Subgraph induced by the listed vertices, renumbered in list order.
  Graph induced(const std::vector<int>& vs) const;

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_ == b.n_ && a.adj_ == b.adj_;
  }

 private:
  void check_vertex(int v) const;

  int n_ = 0;
  std::vector<VertexSet> adj_;
  std::vector<std::string> labels_;
};

Graph delete_edge(const Graph& g, const Edge& e);
/// Merges e.v into e.u; vertices above e.v shift down by one and the merged
/// vertex carries the label "u+v".
Graph contract_edge(const Graph& g, const Edge& e);
/// Adds an apex adjacent to every vertex; the apex is the last vertex.
Graph suspension(const Graph& g);
/// floor((sqrt(1 + 8(|V|+|E|)) - 1) / 2).
int barvinok_bound(const Graph& g);
/// Largest k with k(k+1)/2 <= m.
int barvinok_rank(int m);

/// Vertex numbering of a graph isomorphic to `pattern`'s spanning supergraph:
/// returns map pattern vertex -> host vertex such that every host edge is an
/// edge of the pattern under the map. Requires equal vertex counts.
std::optional<std::vector<int>> spanning_subgraph_embedding(const Graph& host,
                                                            const Graph& pattern);

namespace builtin {
Graph complete(int n);
Graph path(int n);
Graph cycle(int n);
Graph star(int leaves);
Graph wheel(int rim);
Graph k222();
/// 8-cycle 1..8 with chords (i, i+4); labels "1".."8".
Graph v8();
/// Prism over the 5-cycle with the numbering used throughout the pipeline:
/// cycles 1-3-5-7-9 and 2-4-6-8-10, rungs (1,2),(3,4),(5,6),(7,8),(9,10).
Graph c5xc2();
Graph petersen();
/// Resolves "K5", "K222", "V8", "C5xC2", "petersen", "pathN", "cycleN"/"CN",
/// "KN", "wheelN"/"WN", "starN".
std::optional<Graph> by_name(const std::string& name);
}  // namespace builtin

}  // namespace gramdim
