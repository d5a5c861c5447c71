#include "gramdim/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace gramdim {

namespace {

// Orthonormal columns extending `basis` (D x r, orthonormal) to R^D using
// the standard basis in order.
Matrix extend_basis(const Matrix& basis, int dim) {
  Matrix out(dim, dim);
  int filled = static_cast<int>(basis.cols());
  out.leftCols(filled) = basis;
  for (int e = 0; e < dim && filled < dim; ++e) {
    Vector v = Vector::Unit(dim, e);
    for (int pass = 0; pass < 2; ++pass) v -= out.leftCols(filled) * (out.leftCols(filled).transpose() * v);
    const double nv = v.norm();
    if (nv < 1e-6) continue;
    out.col(filled++) = v / nv;
  }
  return out;
}

// Orthonormal directions of the rows of `rows` after removing `span`, in
// decreasing singular value, signed so the largest projection is positive.
Matrix residual_directions(const Matrix& rows, const Matrix& span, double tol) {
  Matrix r = rows;
  if (span.cols() > 0) r -= (r * span) * span.transpose();
  if (r.rows() == 0) return Matrix(rows.cols(), 0);
  Eigen::JacobiSVD<Matrix> svd(r, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double scale = std::max(1.0, rows.cwiseAbs().maxCoeff());
  int k = 0;
  while (k < s.size() && s(k) > tol * scale) ++k;
  Matrix dirs = svd.matrixV().leftCols(k);
  for (int j = 0; j < k; ++j) {
    const Vector proj = r * dirs.col(j);
    Eigen::Index at = 0;
    proj.cwiseAbs().maxCoeff(&at);
    if (proj(at) < 0) dirs.col(j) = -dirs.col(j);
  }
  return dirs;
}

}  // namespace

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

Matrix symmetrize(const Matrix& m) { return 0.5 * (m + m.transpose()); }

double min_eigenvalue(const Matrix& m) {
  if (m.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(m), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

int numerical_rank(const Matrix& x, double tol) {
  if (x.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(x);
  const auto& s = svd.singularValues();
  const double cut = tol * std::max(1.0, s(0));
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cut) ++r;
  return r;
}

Matrix null_space(const Matrix& a, double tol) {
  const int cols = static_cast<int>(a.cols());
  if (a.rows() == 0) return Matrix::Identity(cols, cols);
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double cut = tol * std::max(1.0, s.size() ? s(0) : 0.0);
  int r = 0;
  while (r < s.size() && s(r) > cut) ++r;
  return svd.matrixV().rightCols(cols - r);
}

Matrix column_space(const Matrix& a, double tol) {
  if (a.cols() == 0) return Matrix(a.rows(), 0);
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU);
  const auto& s = svd.singularValues();
  const double cut = tol * std::max(1.0, s.size() ? s(0) : 0.0);
  int r = 0;
  while (r < s.size() && s(r) > cut) ++r;
  return svd.matrixU().leftCols(r);
}

Matrix psd_projection(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(m));
  Vector l = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * l.asDiagonal() * es.eigenvectors().transpose();
}

Matrix truncate_spectrum(const Matrix& m, double tol) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(m));
  Vector l = es.eigenvalues();
  const double cut = tol * std::max(1.0, l.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < l.size(); ++i)
    if (l(i) <= cut) l(i) = 0.0;
  return es.eigenvectors() * l.asDiagonal() * es.eigenvectors().transpose();
}

Matrix pad_columns(const Matrix& v, int d) {
  Matrix out = Matrix::Zero(v.rows(), std::max<Eigen::Index>(d, v.cols()));
  out.leftCols(v.cols()) = v;
  return out;
}

Configuration gram_factor(const Matrix& x, double tol, Graph host) {
  if (x.rows() != x.cols()) throw InvalidInput("gram_factor: matrix is not square");
  const int n = static_cast<int>(x.rows());
  Configuration c;
  c.host = std::move(host);
  if (n == 0) {
    c.vectors = Matrix(0, 0);
    return c;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(x));
  const Vector& l = es.eigenvalues();
  const double top = std::max(1.0, l.cwiseAbs().maxCoeff());
  if (l(0) < -tol * top) {
    throw InvalidInput("gram_factor: matrix is indefinite (min eigenvalue " + std::to_string(l(0)) + ")");
  }
  std::vector<int> keep;
  for (int i = n - 1; i >= 0; --i)
    if (l(i) > tol * top) keep.push_back(i);
  const int d = static_cast<int>(keep.size());
  Matrix f(n, d);
  for (int j = 0; j < d; ++j) f.col(j) = es.eigenvectors().col(keep[j]) * std::sqrt(l(keep[j]));
  if (d > 0) {
    // Canonical frame: F^T = Q R, so F Q = R^T is lower trapezoidal.
    Eigen::HouseholderQR<Matrix> qr(f.transpose());
    Matrix q = qr.householderQ() * Matrix::Identity(d, d);
    f = f * q;
    for (int j = 0; j < d; ++j) {
      const double scale = std::max(1e-12, f.col(j).cwiseAbs().maxCoeff() * 1e-9);
      for (int i = 0; i < n; ++i) {
        if (std::abs(f(i, j)) > scale) {
          if (f(i, j) < 0) f.col(j) = -f.col(j);
          break;
        }
      }
    }
  }
  c.vectors = f;
  return c;
}

Configuration align(const Configuration& moving, const Configuration& fixed,
                    const std::vector<std::pair<int, int>>& shared, double tol) {
  const int dim = std::max(moving.dimension(), fixed.dimension());
  const Matrix mv = pad_columns(moving.vectors, dim);
  const Matrix fv = pad_columns(fixed.vectors, dim);
  const int s = static_cast<int>(shared.size());
  Matrix a(s, dim), b(s, dim);
  for (int k = 0; k < s; ++k) {
    a.row(k) = mv.row(shared[k].first);
    b.row(k) = fv.row(shared[k].second);
  }
  const Matrix ga = a * a.transpose(), gb = b * b.transpose();
  const double scale = std::max(1.0, std::max(max_abs(ga), max_abs(gb)));
  if (s > 0 && max_abs(ga - gb) > tol * scale) {
    throw InvalidInput("align: shared Gram matrices differ by " + std::to_string(max_abs(ga - gb)));
  }
  Configuration out;
  out.host = moving.host;
  if (dim == 0) {
    out.vectors = mv;
    return out;
  }
  // Shared span: row space of a, and its image as seen from b.
  Matrix wm1(dim, 0), wf1(dim, 0);
  if (s > 0) {
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    int r = 0;
    const double cut = 1e-9 * std::max(1.0, sv.size() ? sv(0) : 0.0);
    while (r < sv.size() && sv(r) > cut) ++r;
    wm1 = svd.matrixV().leftCols(r);
    wf1 = b.transpose() * svd.matrixU().leftCols(r) * sv.head(r).cwiseInverse().asDiagonal();
    // Re-orthonormalize against rounding.
    if (r > 0) {
      Eigen::JacobiSVD<Matrix> polar(wf1, Eigen::ComputeThinU | Eigen::ComputeThinV);
      wf1 = polar.matrixU() * polar.matrixV().transpose();
    }
  }
  const Matrix rm = residual_directions(mv, wm1, 1e-9);
  const Matrix rf = residual_directions(fv, wf1, 1e-9);
  Matrix wm(dim, wm1.cols() + rm.cols()), wf(dim, wf1.cols() + rf.cols());
  wm << wm1, rm;
  wf << wf1, rf;
  const Matrix full_m = extend_basis(wm, dim);
  const Matrix full_f = extend_basis(wf, dim);
  out.vectors = mv * full_m * full_f.transpose();
  return out;
}

Configuration align(const Configuration& moving, const Configuration& fixed,
                    const std::vector<int>& shared, double tol) {
  std::vector<std::pair<int, int>> pairs;
  for (int v : shared) pairs.emplace_back(v, v);
  return align(moving, fixed, pairs, tol);
}

Matrix schur_complement(const Matrix& m, int i) {
  const int n = static_cast<int>(m.rows());
  if (i < 0 || i >= n) throw InvalidInput("schur_complement: index out of range");
  const double pivot = m(i, i);
  if (std::abs(pivot) <= 1e-14 * std::max(1.0, max_abs(m))) {
    throw InvalidInput("schur_complement: zero pivot");
  }
  Matrix out(n - 1, n - 1);
  for (int r = 0, rr = 0; r < n; ++r) {
    if (r == i) continue;
    for (int c = 0, cc = 0; c < n; ++c) {
      if (c == i) continue;
      out(rr, cc) = m(r, c) - m(r, i) * m(i, c) / pivot;
      ++cc;
    }
    ++rr;
  }
  return out;
}

}  // namespace gramdim
