#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "gramdim/bridges.hpp"
#include "gramdim/completion.hpp"
#include "gramdim/graph.hpp"
#include "gramdim/partial_matrix.hpp"

namespace gramdim {

/// Malformed input; the message names the offending field.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::uint64_t seed = 0;
  double tol = 1e-8;
  double rank_tol = 1e-7;
  int restarts = 100;
  int step_budget = 50;
  std::string output_path;

  /// Throws InvalidInput on a non-positive tolerance or budget.
  void validate() const;
  FlattenFoldOptions fold_options() const;
};

// JSON text <-> values. Vertex indices are 0-based.
//   graph:    {"n": 3, "edges": [[0,1],[1,2]], "labels": ["a","b","c"]}
//   instance: {"graph": <graph or name>, "diag": [...], "entries": [{"i":0,"j":1,"v":0.5}]}
//             ("diag" omitted means unit diagonal)
//   edm:      {"graph": <graph or name>, "entries": [{"i","j","v"}], "apex": 3}
Graph graph_from_json(const std::string& text);
std::string graph_to_json(const Graph& g, bool pretty = false);
PartialMatrix instance_from_json(const std::string& text);
std::string instance_to_json(const PartialMatrix& a, bool pretty = false);
EdmInstance edm_from_json(const std::string& text);
std::string edm_to_json(const EdmInstance& d, bool pretty = false);
/// {"factor": [[...]], "rank": r, "residual": x, "trail": [{"step","detail"}], "fallback": b}
std::string completion_to_json(const CompletionResult& r, bool pretty = false);
/// {"dim": k, "points": [[...]], "residual": x}
std::string points_to_json(const Matrix& points, double residual, bool pretty = false);

/// Unit-diagonal canonical instance on K222 from e1..e5 and (e1+e2)/sqrt2;
/// the non-edges (0,3), (1,4), (2,5) are forced to 0.
PartialMatrix canonical_k222_instance();

/// Projection onto g of W W^T, W an n x rank standard Gaussian matrix
/// (rank n when rank <= 0). Deterministic given seed.
PartialMatrix random_instance(const Graph& g, std::uint64_t seed, int rank = 0);

/// File path, inline JSON, or built-in name (see builtin::by_name).
Graph load_graph(const std::string& source);
/// File path, inline JSON, "K222" (canonical instance) or "<graph>:<seed>"
/// for a random instance on a built-in graph.
PartialMatrix load_instance(const std::string& source);
/// File path or inline JSON.
EdmInstance load_edm(const std::string& source);

}  // namespace gramdim
