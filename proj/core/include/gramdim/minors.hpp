#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gramdim/graph.hpp"

namespace gramdim {

enum class MinorPattern { K3, K4, K5, K222 };

std::string to_string(MinorPattern p);
Graph pattern_graph(MinorPattern p);

/// A model of a pattern graph inside a host: one connected branch set per
/// pattern vertex, and one host edge per pattern edge joining the two
/// corresponding branch sets.
struct MinorWitness {
  MinorPattern pattern = MinorPattern::K3;
  std::vector<VertexSet> branch_sets;
  std::vector<Edge> connecting_edges;  // parallel to pattern_graph(pattern).edges()
};

/// Empty string when `w` is a valid model in `g`, otherwise the violated rule.
std::string check_witness(const Graph& g, const MinorWitness& w);

/// Exhaustive minor test. K3 reduces to cycle detection; K4, K5 and K222 are
/// 3-connected, so the search runs per 3-connected piece of a 2-separation
/// decomposition and the model is lifted back through virtual edges.
std::optional<MinorWitness> has_minor(const Graph& g, MinorPattern pattern);

/// Branch-set search on the whole graph without decomposition. Grows models
/// by contracting host edges (safe low-degree reductions first) and tests for
/// the pattern as a subgraph at every state; failed partitions are memoized.
std::optional<MinorWitness> has_minor_direct(const Graph& g, MinorPattern pattern);

/// Injective map pattern vertex -> host vertex carrying every pattern edge
/// onto a host edge (subgraph, not necessarily induced).
std::optional<std::vector<int>> find_subgraph(const Graph& host, const Graph& pattern);

enum class GramBand { AtMost1 = 1, AtMost2 = 2, AtMost3 = 3, AtMost4 = 4, AtLeast5 = 5 };

std::string to_string(GramBand b);

struct GramClassification {
  GramBand band = GramBand::AtMost1;
  /// Present exactly when band == AtLeast5.
  std::optional<MinorWitness> witness;

  /// Least k with gd <= k, or 5 for the open-ended band.
  int bound() const { return static_cast<int>(band); }
};

/// Least k <= 4 with gd(g) <= k via the excluded minors K2, K3, K4 and
/// {K5, K222}; otherwise AtLeast5 with a K5 or K222 model.
GramClassification classify_gram_dimension(const Graph& g);

}  // namespace gramdim
