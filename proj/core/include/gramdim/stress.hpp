#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gramdim/numeric.hpp"
#include "gramdim/partial_matrix.hpp"
#include "gramdim/sdp.hpp"

namespace gramdim {

/// Psd matrix supported on the diagonal, the host edges and the stretched
/// pair, in equilibrium with a configuration.
struct StressMatrix {
  Matrix matrix;
  Graph host;
  std::optional<Edge> stretched_pair;
};

inline constexpr double kStressZero = 1e-6;

/// Off-diagonal support of omega at |w_ij| > rel * max|w|.
Graph stressed_graph(const Matrix& omega, double rel = kStressZero);
/// Stressed degree per vertex (0-, 1-, 2-nodes have degree 0, 1, 2).
std::vector<int> stressed_degrees(const Matrix& omega, double rel = kStressZero);
/// max_i || sum_j w_ij p_j ||.
double equilibrium_residual(const Matrix& omega, const Matrix& vectors);
/// Largest |w_ij| over pairs outside V u E u {stretched pair}.
double support_violation(const StressMatrix& s);

struct StressCheck {
  double support_violation = 0;
  double min_eigenvalue = 0;
  double equilibrium = 0;
  int rank_x = 0;
  int rank_omega = 0;
  int n = 0;
  bool nonzero = false;

  bool ok(double eig_tol = 1e-8, double eq_tol = 1e-6) const {
    return support_violation == 0.0 && min_eigenvalue >= -eig_tol && equilibrium <= eq_tol &&
           rank_x + rank_omega <= n && nonzero;
  }
};
StressCheck check_stress(const StressMatrix& s, const Configuration& c, double rank_tol = kDefaultRankTol);

/// Result of maximizing X_{e0} over the completions of a.
struct FlattenResult {
  Matrix x;
  Configuration configuration;
  StressMatrix stress;
  double value = 0;
  bool strictly_feasible = true;
  /// False when the Farkas route found no certificate (stress is then zero).
  bool certified = true;
};

/// Throws InfeasibleInstance when a has no psd completion and InvalidInput
/// when e0 is an edge.
FlattenResult flatten(const PartialMatrix& a, Edge e0, double tol = 1e-8);

/// Constraint system X_ii = a_ii, X_ij = a_ij of a partial matrix.
SdpProblem completion_problem(const PartialMatrix& a);

struct PinnedFlattenResult {
  Configuration configuration;  // rows in a's numbering; V1 rows are (p_i, 0)
  /// Rows and columns of V2: the V2 x V2 block of the dual slack, plus
  /// symmetric V1 x V2 entries supported on E[V1,V2] and the stretch pair.
  StressMatrix stress;
  Matrix z;      // primal block matrix [[I, Y], [Y^T, X]]
  Matrix slack;  // its dual slack
  std::vector<int> free_vertices;
  bool strictly_feasible = true;
  bool certified = true;
};

/// Keeps the vectors of `pinned_vertices` fixed (rows of `pinned`) and
/// maximizes the inner product along `stretch` over placements of the
/// remaining vertices. Throws InvalidInput when nothing is free or the pinned
/// data disagree with a.
PinnedFlattenResult pinned_flatten(const Configuration& pinned, const std::vector<int>& pinned_vertices,
                                   const PartialMatrix& a, Edge stretch, double tol = 1e-8);

/// Support of the V2-row stress, psd-ness of the dual slack, equilibrium at
/// every free vertex and rank(Z) + rank(slack) <= size of Z.
StressCheck check_pinned(const PinnedFlattenResult& r, double rank_tol = kDefaultRankTol);

/// Moves along directions of the face of x that keep every <A_j, X> fixed
/// until no such direction is left; the final rank r satisfies
/// r(r+1)/2 <= number of independent constraints.
Matrix rank_reduce(const Matrix& x, const std::vector<Matrix>& constraints, double tol = 1e-9);

}  // namespace gramdim
