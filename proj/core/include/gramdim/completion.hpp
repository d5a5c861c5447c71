#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gramdim/clique_sum.hpp"
#include "gramdim/numeric.hpp"
#include "gramdim/partial_matrix.hpp"
#include "gramdim/stress.hpp"
#include "gramdim/treewidth.hpp"

namespace gramdim {

struct TrailStep {
  std::string step;    // flatten, fold, contract, align, treewidth, chordal, fallback, ...
  std::string detail;
  std::optional<Matrix> stress;
};

struct CompletionResult {
  Configuration configuration;
  /// Host vertex per configuration row.
  std::vector<int> vertices;
  int rank = 0;
  double residual = 0;
  std::vector<TrailStep> certificate_trail;
  /// True when the low-rank factor search produced (part of) the witness.
  bool used_fallback = false;

  Matrix gram() const { return configuration.gram(); }
};

/// Recomputes rank and residual of r against a (rows of r in a's order).
void refresh(CompletionResult& r, const PartialMatrix& a, double rank_tol = kDefaultRankTol);

/// Clique-tree gluing of clique factors. Throws InfeasibleInstance when a
/// clique submatrix is not psd and InvalidInput when the graph is not chordal.
CompletionResult complete_chordal(const PartialMatrix& a, double tol = 1e-8);

/// Glues r1 (rows r1.vertices) and r2 along their shared vertices, which
/// must carry the same Gram matrix in both. Rows of the result are the
/// sorted union.
CompletionResult glue_clique_sum(const CompletionResult& r1, const CompletionResult& r2, double tol = 1e-6);

/// Some psd completion of a of maximal rank (interior of the face of
/// completions); nullopt when none exists.
std::optional<Matrix> central_completion(const PartialMatrix& a);

/// Completion of rank <= width + 1: bags are filled from the central
/// completion and the chordal supergraph is completed clique by clique.
CompletionResult complete_treewidth(const PartialMatrix& a, const TreeDecomposition& td, double tol = 1e-8);

struct CycleWitness {
  std::vector<int> signs;  // +1 / -1
  int k = 0;
};
/// Sign vector and integer k with |sum signs_i angles_i - 2 k pi| <= tol.
std::optional<CycleWitness> cycle_gd2_decide(const std::vector<double>& angles, double tol = 1e-9);

struct FoldPlan {
  VertexSet stable_set = 0;
  VertexSet kept_set = 0;
  int target_dimension = 0;
};
/// Rotates every stable-set vector about the span of its neighbours so the
/// whole configuration fits in R^k. Throws InvalidInput on a plan violation.
Configuration fold_stable_set(const Configuration& c, const FoldPlan& plan, double tol = kDefaultRankTol);

struct Contraction {
  Graph graph;
  Configuration configuration;
  Matrix stress;
  std::vector<int> kept;  // old index of each remaining vertex
};
/// Removes a 2-node i of the stress; the Schur complement carries the stress
/// and the two stressed neighbours become adjacent.
Contraction contract_2node(const Graph& h, const Configuration& c, const Matrix& omega, int i,
                           double rel = kStressZero);

/// Bound on the span of the stressed nodes: s - 1 when they form a clique in
/// the stressed graph, else s - 2, where s counts stressed nodes. Throws
/// InvalidInput when the equilibrium residual exceeds eq_tol.
int bound_dimension(const Matrix& omega, const Configuration& c, double eq_tol = 1e-6, double rel = kStressZero);

struct UniquenessReport {
  bool unique = true;
  Matrix completion;
  std::optional<Matrix> other;  // when not unique: differs from completion by > tol somewhere
  struct Range {
    Edge pair;
    double low = 0;
    double high = 0;
  };
  std::vector<Range> ranges;
};
/// Minimizes and maximizes every unspecified entry over the completions.
UniquenessReport uniqueness_probe(const PartialMatrix& a, double tol = 1e-6);

/// Low-rank factor search on the specified entries; result iff the
/// objective reaches 1e-12.
std::optional<CompletionResult> low_rank_factor_search(const PartialMatrix& a, int k, int restarts,
                                                       std::uint64_t seed,
                                                       const std::optional<Matrix>& warm_start = std::nullopt);

struct FlattenFoldOptions {
  std::uint64_t seed = 0;
  double tol = 1e-8;
  double rank_tol = kDefaultRankTol;
  int restarts = 100;
  int step_budget = 50;
  /// Replace the instance by a nearby generic one before folding.
  bool perturb = false;
  double perturb_epsilon = 1e-6;
};

/// Thrown when no rank-k completion was found (never a proof of absence).
class NotFound : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Clique-sum split, per-component completion (tree-width route or the
/// stress-guided fold search), gluing, final polish at fixed rank.
/// Throws InfeasibleInstance or NotFound.
CompletionResult flatten_and_fold(const PartialMatrix& a, int target_k, const FlattenFoldOptions& options = {});

}  // namespace gramdim
