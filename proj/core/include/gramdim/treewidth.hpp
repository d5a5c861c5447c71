#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gramdim/graph.hpp"

namespace gramdim {

struct TreeDecomposition {
  std::vector<VertexSet> bags;
  std::vector<std::pair<int, int>> tree_edges;
  int width = -1;
};

/// Empty string when `td` is a tree decomposition of `g`: a tree over the
/// bags, every vertex and edge covered, running intersection.
std::string check_tree_decomposition(const Graph& g, const TreeDecomposition& td);

/// Elimination-order search for a decomposition of width <= k. Simplicial
/// vertices of degree <= k are eliminated eagerly; failed eliminated sets are
/// memoized. Practical up to a few dozen vertices for k <= 4.
std::optional<TreeDecomposition> treewidth_at_most(const Graph& g, int k);

/// Decomposition of least width w <= max_width, or nullopt.
std::optional<TreeDecomposition> min_width_decomposition(const Graph& g, int max_width);

/// Builds the decomposition induced by an elimination order (bags contained
/// in a neighbouring bag are merged away).
TreeDecomposition decomposition_from_order(const Graph& g, const std::vector<int>& order);

struct ChordalStructure {
  std::vector<int> elimination_order;  // perfect elimination order
  std::vector<VertexSet> cliques;      // maximal cliques
  std::vector<std::pair<int, int>> clique_tree;
};

/// Perfect elimination order, maximal cliques and a clique tree when g is
/// chordal; nullopt otherwise.
std::optional<ChordalStructure> chordal_structure(const Graph& g);

}  // namespace gramdim
