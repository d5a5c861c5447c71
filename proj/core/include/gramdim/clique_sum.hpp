#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gramdim/graph.hpp"
#include "gramdim/treewidth.hpp"

namespace gramdim {

enum class ComponentKind { Treewidth3, V8Type, C5xC2Type, Irreducible };

std::string to_string(ComponentKind k);

/// One piece of a clique-sum decomposition. `torso` is the subgraph induced
/// on `vertices` (host numbering, sorted) plus the virtual edges, renumbered
/// 0..k-1 in the order of `vertices`.
struct SumComponent {
  std::vector<int> vertices;
  Graph torso;
  std::vector<Edge> virtual_edges;  // in torso numbering
  ComponentKind kind = ComponentKind::Irreducible;
  /// For V8/C5xC2 pieces: template vertex -> torso vertex.
  std::optional<std::vector<int>> template_map;
  /// For Treewidth3 pieces: a decomposition of the torso of width <= 3.
  std::optional<TreeDecomposition> decomposition;

  VertexSet mask() const { return mask_of(vertices); }
};

struct SumAdhesion {
  int a = 0;
  int b = 0;
  VertexSet separator = 0;  // host numbering; a clique in both torsos
};

/// g is a subgraph of the clique sum of the component torsos glued along the
/// adhesions, which form a tree (forest joined by empty separators).
struct CliqueSumSplit {
  std::vector<SumComponent> components;
  std::vector<SumAdhesion> adhesions;
};

struct SplitOptions {
  /// Merge adjacent tree-width <= 3 pieces back into one component.
  bool merge_treewidth_pieces = true;
  /// Split along clique separators of size 3 and 4 after the 2-separations.
  bool split_clique_separators = true;
};

/// Splits along separators of size <= 2 (virtual edges added on both sides),
/// then along clique separators of size 3 and 4, and labels every piece.
CliqueSumSplit clique_sum_split(const Graph& g, const SplitOptions& options = {});

/// Raw 2-separation decomposition used by the minor tests: pieces that are
/// 3-connected or have at most 3 vertices.
struct TorsoPiece {
  std::vector<int> vertices;  // host numbering, sorted
  Graph torso;                // renumbered in `vertices` order
  std::vector<Edge> virtual_edges;
};
std::vector<TorsoPiece> two_separation_pieces(const Graph& g);

}  // namespace gramdim
