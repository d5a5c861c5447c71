#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gramdim/numeric.hpp"

namespace gramdim {

/// maximize <objective, X> subject to <constraints[j], X> = rhs[j], X psd.
/// Dual: minimize rhs^T y subject to sum_j y_j A_j - objective = S psd.
struct SdpProblem {
  int n = 0;
  Matrix objective;
  std::vector<Matrix> constraints;
  std::vector<double> rhs;

  int m() const { return static_cast<int>(constraints.size()); }
  void add(Matrix a, double b) {
    constraints.push_back(std::move(a));
    rhs.push_back(b);
  }
};

/// Symmetric matrix with <E, X> = X_ij.
Matrix entry_selector(int n, int i, int j);

enum class SdpStatus { Optimal, InfeasibleCertificate, Unbounded, NumericalFailure };
std::string to_string(SdpStatus s);

struct SdpSolution {
  SdpStatus status = SdpStatus::NumericalFailure;
  Matrix x;
  /// Dual multipliers, one per original constraint (0 for removed ones).
  /// For InfeasibleCertificate: sum y_j A_j psd and rhs^T y < 0.
  Vector y;
  /// sum y_j A_j - objective, rebuilt from y so its sparsity is exact.
  Matrix s;
  double primal_objective = 0;
  double dual_objective = 0;
  double gap = 0;
  double primal_residual = 0;
  double dual_residual = 0;
  int iterations = 0;
};

struct SdpOptions {
  double tol = 1e-10;
  // A stalled run still counts as optimal when its best iterate got this far.
  double acceptable = 1e-8;
  int max_iterations = 200;
};

/// Dense infeasible primal-dual path following (HKM direction, Mehrotra
/// predictor-corrector). Linearly dependent constraints are removed first.
SdpSolution solve(const SdpProblem& p, const SdpOptions& options = {});

/// Largest t such that some feasible X has X - tI psd.
struct SlaterProbe {
  bool feasible = false;
  bool unbounded = false;
  double margin = 0;
  Matrix x;  // feasible point attaining the margin
  /// When infeasible: y with sum y_j A_j psd and rhs^T y < 0.
  Vector certificate;
};
SlaterProbe slater_probe(const SdpProblem& p, const SdpOptions& options = {});

/// Solution after facial reduction: when the problem is feasible but not
/// strictly feasible, the search is restricted to X = V W V^T where the
/// columns of V span the minimal face found by repeated Slater probes.
struct FaceSolution {
  SdpSolution solution;  // in the original coordinates
  bool strictly_feasible = true;
  Matrix face_basis;  // V, n x r with orthonormal columns
  /// First-round exposing matrix when one was certified: psd, a combination
  /// of the constraint matrices, and orthogonal to every feasible X.
  std::optional<Matrix> exposing;
};
FaceSolution solve_on_face(const SdpProblem& p, const SdpOptions& options = {});

/// Gauss-Newton on the optimality system at the numerical rank of x:
/// <A_j, P P^T> = b_j and (sum y_j A_j - objective) P = 0. Replaces x, y and
/// s when the residual drops and s stays psd; returns whether it did.
bool polish_optimal(const SdpProblem& p, SdpSolution& s, double rank_tol = 1e-7, int iterations = 20);

/// Psd nonzero Omega in span(constraints) with <Omega, X> = 0 for the known
/// feasible X; nullopt when none exists (X positive definite or no psd
/// matrix of the constraint span vanishes on the range of X). The returned
/// multipliers satisfy Omega = sum_j y_j A_j exactly.
struct FarkasCertificate {
  Matrix omega;
  Vector y;
};
std::optional<FarkasCertificate> farkas_certificate(const SdpProblem& p, const Matrix& known_feasible,
                                                    double rank_tol = kDefaultRankTol,
                                                    const SdpOptions& options = {});
/// Same, with the null space of the feasible set supplied as orthonormal
/// columns.
std::optional<FarkasCertificate> farkas_certificate_on(const SdpProblem& p, const Matrix& null_basis,
                                                       const SdpOptions& options = {});

/// Plain-text canonical form: "n m", then per constraint "b k" and k lines
/// "i j v" (upper triangle, 0-based), then the objective as "k" plus triplets.
std::string dump_problem(const SdpProblem& p);
SdpProblem load_problem(const std::string& text);

}  // namespace gramdim
