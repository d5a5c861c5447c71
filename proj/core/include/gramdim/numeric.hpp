#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gramdim/graph.hpp"

namespace gramdim {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Vectors p_i stored as the rows of an n x d matrix.
struct Configuration {
  Matrix vectors;
  Graph host;

  int size() const { return static_cast<int>(vectors.rows()); }
  int dimension() const { return static_cast<int>(vectors.cols()); }
  Matrix gram() const { return vectors * vectors.transpose(); }
  Vector point(int i) const { return vectors.row(i).transpose(); }
};

inline constexpr double kDefaultRankTol = 1e-7;

/// Count of singular values above tol * max(1, sigma_max).
int numerical_rank(const Matrix& x, double tol = kDefaultRankTol);

/// Factor of a psd matrix with d = numerical rank. Computed from the
/// eigendecomposition, then rotated into lower-trapezoidal form (row i uses
/// only the first i+1 coordinates), each column's first nonzero entry made
/// positive. Throws InvalidInput when x is indefinite beyond tol.
Configuration gram_factor(const Matrix& x, double tol = kDefaultRankTol, Graph host = {});

/// Orthogonally transforms `moving` so the vectors listed in `shared`
/// (pairs moving index -> fixed index) coincide with those of `fixed`.
/// The output ambient dimension is max of the two. Directions outside the
/// shared span are matched in order: principal residual directions of the
/// moving set go to those of the fixed set, each signed so its largest
/// projection is positive. Throws InvalidInput on a shared Gram mismatch.
Configuration align(const Configuration& moving, const Configuration& fixed,
                    const std::vector<std::pair<int, int>>& shared, double tol = 1e-6);

/// Same-index convenience overload.
Configuration align(const Configuration& moving, const Configuration& fixed,
                    const std::vector<int>& shared, double tol = 1e-6);

/// Schur complement of m with respect to its (i,i) entry.
Matrix schur_complement(const Matrix& m, int i);

double max_abs(const Matrix& m);
double min_eigenvalue(const Matrix& m);
Matrix symmetrize(const Matrix& m);
/// Orthonormal basis (columns) of the null space of a, thresholded at
/// tol * max(1, sigma_max).
Matrix null_space(const Matrix& a, double tol = 1e-10);
/// Orthonormal basis of the column space of a.
Matrix column_space(const Matrix& a, double tol = 1e-10);
/// Nearest psd matrix in Frobenius norm (negative eigenvalues clipped).
Matrix psd_projection(const Matrix& m);
/// Eigenvalues below tol * max(1, lambda_max) truncated to zero.
Matrix truncate_spectrum(const Matrix& m, double tol);
/// Embeds v into a larger ambient dimension by zero padding of the columns.
Matrix pad_columns(const Matrix& v, int d);

}  // namespace gramdim
