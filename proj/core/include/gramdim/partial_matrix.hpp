#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gramdim/graph.hpp"
#include "gramdim/numeric.hpp"

namespace gramdim {

/// Values on the diagonal and on the edges of a graph. `off_diagonal` is
/// parallel to graph.edges() (sorted edge order).
struct PartialMatrix {
  Graph graph;
  Vector diagonal;
  std::vector<double> off_diagonal;

  PartialMatrix() = default;
  PartialMatrix(Graph g, Vector diag, std::vector<double> off);

  int size() const { return graph.vertex_count(); }
  /// Specified entry (diagonal or edge); throws InvalidInput otherwise.
  double entry(int i, int j) const;
  bool specified(int i, int j) const { return i == j || graph.has_edge(i, j); }
  void set(int i, int j, double v);
  /// Symmetric matrix holding the specified entries and zeros elsewhere.
  Matrix known() const;
  /// Max-norm error of x on the specified entries.
  double residual(const Matrix& x) const;
};

/// Edge values of a unit-diagonal partial matrix, parallel to graph.edges().
struct ElliptopeVector {
  Graph graph;
  std::vector<double> values;

  PartialMatrix to_partial() const;
};
ElliptopeVector to_elliptope(const PartialMatrix& a);

struct ValidationReport {
  bool feasible_necessary = true;
  VertexSet violated_clique = 0;
  double min_eigenvalue = 0;
  std::string detail;
};

/// Raised when an instance has no psd completion.
class InfeasibleInstance : public std::runtime_error {
 public:
  InfeasibleInstance(const std::string& what, ValidationReport r = {})
      : std::runtime_error(what), report(std::move(r)) {}
  ValidationReport report;
};

/// Checks every maximal clique's specified principal submatrix for psd-ness
/// (min eigenvalue >= -tol).
ValidationReport validate(const PartialMatrix& a, double tol = 1e-8);

/// All maximal cliques (Bron-Kerbosch with pivoting), each as a bitmask.
std::vector<VertexSet> maximal_cliques(const Graph& g);

PartialMatrix project(const Matrix& x, const Graph& g);

/// Simple cycles of length 3..max_length as vertex sequences starting at
/// their least vertex, each listed once.
std::vector<std::vector<int>> circuits(const Graph& g, int max_length);

struct GenericityReport {
  bool generic = true;
  std::vector<int> circuit;  // first circuit whose angles admit a planar representation
};

/// Tests every circuit of length <= max_length with the sign-sum cycle test
/// at angular tolerance `delta`; edge values at +-1 are never generic.
GenericityReport check_genericity(const ElliptopeVector& a, double delta = 1e-6, int max_length = 10);

/// Thrown when no generic perturbation is found within the retry budget.
class GenericityFailure : public std::runtime_error {
 public:
  GenericityFailure(const std::string& what, std::vector<int> c)
      : std::runtime_error(what), circuit(std::move(c)) {}
  std::vector<int> circuit;
};

/// Random perturbation within `epsilon` (max norm) that passes the circuit
/// genericity check and keeps a positive definite completion. The input is
/// returned unchanged when it already qualifies. Deterministic given seed.
ElliptopeVector perturb_to_generic(const ElliptopeVector& a, double epsilon, std::uint64_t seed,
                                   int max_retries = 200);

/// True when a admits a positive definite completion (Slater probe margin
/// above tol).
bool has_positive_definite_completion(const PartialMatrix& a, double tol = 1e-7);

}  // namespace gramdim
