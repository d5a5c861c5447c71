#include "gramdim/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace gramdim {

Matrix entry_selector(int n, int i, int j) {
  Matrix e = Matrix::Zero(n, n);
  if (i == j) {
    e(i, i) = 1.0;
  } else {
    e(i, j) = 0.5;
    e(j, i) = 0.5;
  }
  return e;
}

std::string to_string(SdpStatus s) {
  switch (s) {
    case SdpStatus::Optimal: return "optimal";
    case SdpStatus::InfeasibleCertificate: return "infeasible_certificate";
    case SdpStatus::Unbounded: return "unbounded";
    case SdpStatus::NumericalFailure: return "numerical_failure";
  }
  return "?";
}

namespace {

double inner(const Matrix& a, const Matrix& b) { return a.cwiseProduct(b).sum(); }

Matrix combine(const std::vector<Matrix>& as, const Vector& y, int n) {
  Matrix out = Matrix::Zero(n, n);
  for (std::size_t j = 0; j < as.size(); ++j)
    if (y(j) != 0.0) out += y(j) * as[j];
  return out;
}

// Largest step alpha with x + alpha dx psd (infinity when unrestricted).
double max_step(const Matrix& x, const Matrix& dx) {
  Eigen::LLT<Matrix> llt(x);
  if (llt.info() != Eigen::Success) return 0.0;
  const Matrix l = llt.matrixL();
  Matrix t = l.triangularView<Eigen::Lower>().solve(dx);
  t = l.triangularView<Eigen::Lower>().solve(t.transpose()).transpose();
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(t), Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues()(0);
  if (lo >= 0) return std::numeric_limits<double>::infinity();
  return -1.0 / lo;
}

struct Reduced {
  std::vector<int> kept;
  std::optional<Vector> inconsistency;  // certificate over all constraints
};

// Keeps a maximal linearly independent prefix-greedy subset of constraints.
Reduced independent_constraints(const SdpProblem& p) {
  Reduced r;
  const int n = p.n;
  std::vector<Vector> basis;    // orthonormalized vec(A)
  std::vector<Vector> coeffs;   // basis[k] = sum coeffs[k](j) vec(A_kept[j])
  const int m = p.m();
  for (int j = 0; j < m; ++j) {
    Vector v = Eigen::Map<const Vector>(p.constraints[j].data(), n * n);
    const double norm0 = v.norm();
    if (norm0 == 0.0) {
      if (std::abs(p.rhs[j]) > 1e-12) {
        Vector y = Vector::Zero(m);
        y(j) = p.rhs[j] > 0 ? -1.0 : 1.0;
        r.inconsistency = y;
        return r;
      }
      continue;
    }
    Vector c = Vector::Zero(static_cast<int>(r.kept.size()) + 1);
    Vector w = v;
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < basis.size(); ++k) {
        const double proj = basis[k].dot(w);
        w -= proj * basis[k];
        c.head(coeffs[k].size()) -= proj * coeffs[k];
      }
    }
    const double nw = w.norm();
    if (nw > 1e-10 * norm0) {
      c(c.size() - 1) = 1.0;
      basis.push_back(w / nw);
      coeffs.push_back(c / nw);
      r.kept.push_back(j);
      continue;
    }
    // A_j = -sum c(k) A_kept[k]; consistency of right-hand sides.
    double combo = 0;
    for (std::size_t k = 0; k < r.kept.size(); ++k) combo -= c(k) * p.rhs[r.kept[k]];
    const double miss = p.rhs[j] - combo;
    if (std::abs(miss) > 1e-9 * (1.0 + std::abs(p.rhs[j]))) {
      Vector y = Vector::Zero(m);
      y(j) = 1.0;
      for (std::size_t k = 0; k < r.kept.size(); ++k) y(r.kept[k]) = c(k);
      // sum y A = 0 and b^T y = miss; make it negative.
      if (miss > 0) y = -y;
      r.inconsistency = y;
      return r;
    }
  }
  return r;
}

void finish(const SdpProblem& p, SdpSolution& sol) {
  sol.x = symmetrize(sol.x);
  sol.s = combine(p.constraints, sol.y, p.n);
  if (sol.status != SdpStatus::InfeasibleCertificate) sol.s -= p.objective;
  double pres = 0;
  for (int j = 0; j < p.m(); ++j) pres = std::max(pres, std::abs(inner(p.constraints[j], sol.x) - p.rhs[j]));
  sol.primal_residual = pres;
  sol.primal_objective = inner(p.objective, sol.x);
  double dobj = 0;
  for (int j = 0; j < p.m(); ++j) dobj += p.rhs[j] * sol.y(j);
  sol.dual_objective = dobj;
  sol.gap = dobj - sol.primal_objective;
  sol.dual_residual = std::max(0.0, -min_eigenvalue(sol.s));
}


struct Exposing {
  Matrix omega;      // psd, in span(A), orthogonal to every feasible X
  Matrix face;       // orthonormal basis of the null space of omega
};

Vector svec_of(const Matrix& s) {
  const int n = static_cast<int>(s.rows());
  Vector v(n * (n + 1) / 2);
  int idx = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) v(idx++) = (i == j) ? s(i, i) : std::sqrt(2.0) * 0.5 * (s(i, j) + s(j, i));
  return v;
}

Matrix smat_of(const Vector& v, int n) {
  Matrix s(n, n);
  int idx = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      s(i, j) = s(j, i) = (i == j) ? v(idx) : v(idx) / std::sqrt(2.0);
      ++idx;
    }
  return s;
}

// Exposing matrix for a feasible problem without interior points, seeded
// from the near-null eigenvectors of a probe point and refined by
// Gauss-Newton on W with omega = W W^T.
std::optional<Exposing> exposing_certificate(const SdpProblem& q, const Matrix& probe_x) {
  const int n = q.n;
  const int dim = n * (n + 1) / 2;
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(probe_x));
  const double top = std::max(es.eigenvalues().maxCoeff(), 0.0);
  int k = 0;
  while (k < n && es.eigenvalues()(k) <= 1e-4 * top) ++k;
  if (k == 0 || k == n) return std::nullopt;
  const Matrix near_null = es.eigenvectors().leftCols(k);

  // Conditions <C, omega> = 0: the complement of span(A), plus a particular
  // solution X0 of A(X0) = b (so that b^T y = <omega, X0> vanishes).
  Matrix span(q.m(), dim);
  for (int j = 0; j < q.m(); ++j) span.row(j) = svec_of(q.constraints[j]).transpose();
  Vector rhs(q.m());
  for (int j = 0; j < q.m(); ++j) rhs(j) = q.rhs[j];
  const Eigen::CompleteOrthogonalDecomposition<Matrix> span_cod(span);
  std::vector<Matrix> conds;
  const Matrix perp = null_space(span, 1e-10);
  for (int c = 0; c < perp.cols(); ++c) conds.push_back(smat_of(perp.col(c), n));
  const Matrix x0 = smat_of(span_cod.solve(rhs), n);
  conds.push_back(x0 / std::max(1.0, max_abs(x0)));

  // Seed: omega = N S N^T with S in the numerical null space of the conditions.
  const int kd = k * (k + 1) / 2;
  Matrix rows(conds.size(), kd);
  for (std::size_t c = 0; c < conds.size(); ++c) {
    const Matrix b = near_null.transpose() * conds[c] * near_null;
    rows.row(c) = svec_of(b / std::max(1.0, max_abs(conds[c]))).transpose();
  }
  Eigen::JacobiSVD<Matrix> svd(rows, Eigen::ComputeFullV);
  const Vector& sv = svd.singularValues();
  int rank = 0;
  while (rank < sv.size() && sv(rank) > 1e-3 * std::max(1.0, sv.size() ? sv(0) : 0.0)) ++rank;
  if (rank == kd) return std::nullopt;
  Matrix block;
  if (kd - rank == 1) {
    block = smat_of(svd.matrixV().col(kd - 1), k);
    if (block.trace() < 0) block = -block;
  } else {
    SdpProblem f;
    f.n = k;
    f.objective = Matrix::Zero(k, k);
    f.add(Matrix::Identity(k, k), 1.0);
    for (int c = 0; c < rank; ++c) f.add(smat_of(svd.matrixV().col(c), k), 0.0);
    SdpOptions loose;
    loose.acceptable = 1e-6;
    const SdpSolution s = solve(f, loose);
    if (s.status != SdpStatus::Optimal) return std::nullopt;
    block = s.x;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> bs(symmetrize(block));
  const double btop = bs.eigenvalues().maxCoeff();
  if (btop <= 0) return std::nullopt;
  std::vector<int> keep;
  for (int i = 0; i < k; ++i)
    if (bs.eigenvalues()(i) > 1e-6 * btop) keep.push_back(i);
  const int r = static_cast<int>(keep.size());
  Matrix w(n, r);
  for (int c = 0; c < r; ++c)
    w.col(c) = near_null * bs.eigenvectors().col(keep[c]) * std::sqrt(bs.eigenvalues()(keep[c]));
  w /= std::sqrt((w * w.transpose()).trace());

  const int nc = static_cast<int>(conds.size());
  auto residual = [&](const Matrix& ww) {
    const Matrix om = ww * ww.transpose();
    Vector out(nc + 1);
    for (int c = 0; c < nc; ++c) out(c) = conds[c].cwiseProduct(om).sum();
    out(nc) = om.trace() - 1.0;
    return out;
  };
  Vector res = residual(w);
  for (int it = 0; it < 60 && res.cwiseAbs().maxCoeff() > 1e-15; ++it) {
    Matrix jac(nc + 1, n * r);
    for (int c = 0; c <= nc; ++c) {
      const Matrix g = 2.0 * (c < nc ? conds[c] : Matrix::Identity(n, n)) * w;
      jac.row(c) = Eigen::Map<const Vector>(g.data(), n * r).transpose();
    }
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod;
    cod.setThreshold(1e-13);
    cod.compute(jac);
    const Vector step = cod.solve(-res);
    bool moved = false;
    for (double t = 1.0; t > 1e-4 && !moved; t *= 0.5) {
      Matrix w2 = w + t * Eigen::Map<const Matrix>(step.data(), n, r);
      const Vector res2 = residual(w2);
      if (res2.norm() < res.norm()) {
        w = w2, res = res2;
        moved = true;
      }
    }
    if (!moved) break;
  }
  if (res.cwiseAbs().maxCoeff() > 1e-12) return std::nullopt;
  // Rebuild omega exactly inside span(A).
  const Vector y = span.transpose().completeOrthogonalDecomposition().solve(svec_of(w * w.transpose()));
  Exposing out;
  out.omega = Matrix::Zero(n, n);
  for (int j = 0; j < q.m(); ++j) out.omega += y(j) * q.constraints[j];
  out.omega = symmetrize(out.omega);
  if (max_abs(out.omega - w * w.transpose()) > 1e-10) return std::nullopt;
  out.face = null_space(w.transpose(), 1e-8);
  return out;
}

}  // namespace

SdpSolution solve(const SdpProblem& p, const SdpOptions& options) {
  const int n = p.n;
  SdpSolution sol;
  sol.x = Matrix::Zero(n, n);
  sol.y = Vector::Zero(p.m());
  if (static_cast<int>(p.rhs.size()) != p.m()) throw InvalidInput("solve: rhs size mismatch");
  if (p.objective.rows() != n || p.objective.cols() != n) throw InvalidInput("solve: objective size mismatch");
  for (const auto& a : p.constraints)
    if (a.rows() != n || a.cols() != n) throw InvalidInput("solve: constraint size mismatch");

  const Reduced red = independent_constraints(p);
  if (red.inconsistency) {
    sol.status = SdpStatus::InfeasibleCertificate;
    sol.y = *red.inconsistency;
    finish(p, sol);
    return sol;
  }
  if (n == 0) {
    sol.status = SdpStatus::Optimal;
    finish(p, sol);
    return sol;
  }
  const int m = static_cast<int>(red.kept.size());
  std::vector<Matrix> a;
  Vector b(m);
  for (int k = 0; k < m; ++k) {
    a.push_back(symmetrize(p.constraints[red.kept[k]]));
    b(k) = p.rhs[red.kept[k]];
  }
  // Internal minimization form: min <c, X>, c = -objective.
  const Matrix c = -symmetrize(p.objective);
  auto op = [&](const Matrix& x) {
    Vector out(m);
    for (int k = 0; k < m; ++k) out(k) = inner(a[k], x);
    return out;
  };
  auto adj = [&](const Vector& y) {
    Matrix out = Matrix::Zero(n, n);
    for (int k = 0; k < m; ++k) out += y(k) * a[k];
    return out;
  };

  double xi = std::max(10.0, std::sqrt(static_cast<double>(n)));
  double eta = std::max(10.0, std::sqrt(static_cast<double>(n)));
  for (int k = 0; k < m; ++k) {
    xi = std::max(xi, n * (1.0 + std::abs(b(k))) / (1.0 + a[k].norm()));
    eta = std::max(eta, a[k].norm());
  }
  eta = std::max(eta, c.norm());
  eta = (1.0 + eta) / std::sqrt(static_cast<double>(n));
  Matrix x = xi * Matrix::Identity(n, n);
  Matrix z = eta * Matrix::Identity(n, n);
  Vector y = Vector::Zero(m);

  const double bnorm = 1.0 + b.norm();
  const double cnorm = 1.0 + c.norm();
  double anorm = 0;
  for (const auto& ak : a) anorm = std::max(anorm, ak.norm());
  anorm = std::max(1.0, anorm);

  SdpStatus status = SdpStatus::NumericalFailure;
  double best_merit = std::numeric_limits<double>::infinity();
  int since_best = 0;
  Matrix best_x = x, best_z = z;
  Vector best_y = y;
  int it = 0;
  int stalls = 0;
  for (; it < options.max_iterations; ++it) {
    const Vector rp = b - op(x);
    const Matrix rd = c - z - adj(y);
    const double pobj = inner(c, x);
    const double dobj = b.dot(y);
    const double xz = inner(x, z);
    const double mu = xz / n;
    const double relp = rp.norm() / bnorm;
    const double reld = rd.norm() / cnorm;
    const double relgap = std::max(std::abs(pobj - dobj), std::abs(xz)) / (1.0 + std::abs(pobj) + std::abs(dobj));
    const double merit = std::max({relp, reld, relgap});
    if (merit < best_merit) {
      if (merit < 0.9 * best_merit) since_best = 0;
      best_merit = merit;
      best_x = x;
      best_y = y;
      best_z = z;
    } else if (++since_best > 5 && best_merit <= options.acceptable) {
      break;
    }
    if (merit <= options.tol) {
      status = SdpStatus::Optimal;
      break;
    }
    // Primal infeasibility: y with -A*y psd and b^T y > 0.
    if (dobj > 0 && it > 5) {
      const Vector yh = y / dobj;
      const double lo = min_eigenvalue(-adj(yh));
      if (lo > -1e-9 * anorm && dobj > 1e4 * cnorm) {
        status = SdpStatus::InfeasibleCertificate;
        y = yh;
        break;
      }
    }
    // Dual infeasibility: X psd with A(X) = 0 and <c, X> < 0.
    if (pobj < 0 && it > 5) {
      const Matrix xh = x / (-pobj);
      if (op(xh).norm() < 1e-9 * anorm && -pobj > 1e4 * bnorm) {
        status = SdpStatus::Unbounded;
        break;
      }
    }

    Eigen::LLT<Matrix> zl(z);
    if (zl.info() != Eigen::Success) break;
    const Matrix zinv = zl.solve(Matrix::Identity(n, n));
    Matrix schur(m, m);
    std::vector<Matrix> g(m);
    for (int k = 0; k < m; ++k) g[k] = x * a[k] * zinv;
    for (int i = 0; i < m; ++i)
      for (int k = i; k < m; ++k) schur(i, k) = schur(k, i) = inner(a[i], g[k]);
    Eigen::LDLT<Matrix> ml(schur);
    if (ml.info() != Eigen::Success) break;
    const Matrix xrdz = x * rd * zinv;

    auto direction = [&](const Matrix& rc, Matrix& dx, Vector& dy, Matrix& dz) {
      const Matrix rcz = rc * zinv;
      const Vector rhs = rp - op(symmetrize(rcz)) + op(symmetrize(xrdz));
      dy = ml.solve(rhs);
      dy += ml.solve(rhs - schur * dy);
      dz = rd - adj(dy);
      dx = symmetrize(rcz - x * dz * zinv);
    };

    Matrix dxa, dza;
    Vector dya;
    direction(-x * z, dxa, dya, dza);
    const double ap = std::min(1.0, max_step(x, dxa));
    const double ad = std::min(1.0, max_step(z, dza));
    const double mu_aff = inner(x + ap * dxa, z + ad * dza) / n;
    double sigma = std::pow(std::max(0.0, mu_aff) / mu, 3);
    sigma = std::clamp(sigma, 0.0, 1.0);

    Matrix dx, dz;
    Vector dy;
    const Matrix rc = sigma * mu * Matrix::Identity(n, n) - x * z - dxa * dza;
    direction(rc, dx, dy, dz);
    const double sp = max_step(x, dx);
    const double sd = max_step(z, dz);
    const double gamma = 0.9 + 0.09 * std::min({1.0, ap, ad});
    const double alpha_p = std::min(1.0, gamma * sp);
    const double alpha_d = std::min(1.0, gamma * sd);
    if (alpha_p < 1e-12 && alpha_d < 1e-12) {
      if (++stalls > 3) break;
    } else {
      stalls = 0;
    }
    x += alpha_p * dx;
    y += alpha_d * dy;
    z += alpha_d * dz;
    x = symmetrize(x);
    z = symmetrize(z);
  }
  if (status == SdpStatus::NumericalFailure && best_merit <= options.acceptable) {
    x = best_x;
    y = best_y;
    z = best_z;
    status = SdpStatus::Optimal;
  }
  if (status == SdpStatus::Optimal && m > 0) {
    // Least-norm correction of the equality residual, kept only if X stays psd.
    Matrix gram(m, m);
    for (int i = 0; i < m; ++i)
      for (int k = i; k < m; ++k) gram(i, k) = gram(k, i) = inner(a[i], a[k]);
    const Vector rp = b - op(x);
    const Matrix fixed = symmetrize(x + adj(gram.ldlt().solve(rp)));
    if ((b - op(fixed)).norm() < rp.norm() && Eigen::LLT<Matrix>(fixed).info() == Eigen::Success) x = fixed;
  }
  sol.status = status;
  sol.iterations = it;
  sol.x = x;
  // Report multipliers in the maximization convention over all constraints.
  Vector full = Vector::Zero(p.m());
  for (int k = 0; k < m; ++k) full(red.kept[k]) = -y(k);
  sol.y = full;
  if (status == SdpStatus::InfeasibleCertificate) {
    // Certificate: sum y_j A_j psd with b^T y = -1.
    sol.x = Matrix::Zero(n, n);
  }
  finish(p, sol);
  if (status == SdpStatus::InfeasibleCertificate) sol.s = combine(p.constraints, sol.y, n);
  return sol;
}

SlaterProbe slater_probe(const SdpProblem& p, const SdpOptions& options) {
  const int n = p.n;
  SdpProblem q;
  q.n = n + 1;
  q.objective = Matrix::Zero(n + 1, n + 1);
  q.objective(n, n) = 1.0;
  for (int j = 0; j < p.m(); ++j) {
    Matrix big = Matrix::Zero(n + 1, n + 1);
    big.topLeftCorner(n, n) = p.constraints[j];
    const double tr = p.constraints[j].trace();
    big(n, n) = tr;
    q.add(big, p.rhs[j] + tr);
  }
  const SdpSolution s = solve(q, options);
  SlaterProbe out;
  if (s.status == SdpStatus::InfeasibleCertificate) {
    out.certificate = s.y;
    return out;
  }
  if (s.status == SdpStatus::Unbounded) {
    out.feasible = true;
    out.unbounded = true;
    out.margin = std::numeric_limits<double>::infinity();
    return out;
  }
  out.feasible = s.status == SdpStatus::Optimal || s.primal_residual < 1e-6;
  const double t = s.x(n, n) - 1.0;
  out.margin = t;
  out.x = s.x.topLeftCorner(n, n) + t * Matrix::Identity(n, n);
  if (out.margin < -1e-6 * std::max(1.0, max_abs(out.x))) out.feasible = false;
  return out;
}

FaceSolution solve_on_face(const SdpProblem& p, const SdpOptions& options) {
  const int n = p.n;
  FaceSolution out;
  Matrix basis = Matrix::Identity(n, n);
  for (int round = 0; round <= n; ++round) {
    const int r = static_cast<int>(basis.cols());
    SdpProblem q;
    q.n = r;
    q.objective = basis.transpose() * p.objective * basis;
    for (int j = 0; j < p.m(); ++j) q.add(basis.transpose() * p.constraints[j] * basis, p.rhs[j]);
    if (r == 0) break;
    const SlaterProbe probe = slater_probe(q, options);
    if (!probe.feasible) {
      out.solution = solve(p, options);
      if (out.solution.status != SdpStatus::InfeasibleCertificate && round == 0 &&
          probe.certificate.size() == p.m()) {
        out.solution.status = SdpStatus::InfeasibleCertificate;
        out.solution.y = probe.certificate;
        out.solution.x = Matrix::Zero(n, n);
        out.solution.s = combine(p.constraints, probe.certificate, n);
      }
      out.strictly_feasible = false;
      out.face_basis = basis;
      return out;
    }
    const double scale = std::max(1.0, max_abs(probe.x));
    if (probe.unbounded || probe.margin > 1e-6 * scale) break;
    out.strictly_feasible = false;
    if (const auto ex = exposing_certificate(q, probe.x)) {
      if (round == 0) out.exposing = ex->omega;
      basis = basis * ex->face;
      continue;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(probe.x));
    const double top = std::max(es.eigenvalues().maxCoeff(), 0.0);
    std::vector<int> keep;
    for (int i = r - 1; i >= 0; --i)
      if (es.eigenvalues()(i) > 1e-4 * top) keep.push_back(i);
    if (static_cast<int>(keep.size()) == r) break;
    Matrix u(r, keep.size());
    for (std::size_t k = 0; k < keep.size(); ++k) u.col(k) = es.eigenvectors().col(keep[k]);
    basis = basis * u;
  }
  const int r = static_cast<int>(basis.cols());
  SdpProblem q;
  q.n = r;
  q.objective = basis.transpose() * p.objective * basis;
  for (int j = 0; j < p.m(); ++j) q.add(basis.transpose() * p.constraints[j] * basis, p.rhs[j]);
  SdpSolution s = solve(q, options);
  SdpSolution lifted;
  lifted.status = s.status;
  lifted.iterations = s.iterations;
  lifted.x = basis * s.x * basis.transpose();
  lifted.y = s.y;
  finish(p, lifted);
  out.solution = lifted;
  out.face_basis = basis;
  return out;
}

std::optional<FarkasCertificate> farkas_certificate_on(const SdpProblem& p, const Matrix& null_basis,
                                                       const SdpOptions& options) {
  const int n = p.n;
  const int k = static_cast<int>(null_basis.cols());
  if (k == 0) return std::nullopt;
  // Orthogonal complement of span(A) among symmetric matrices, via svec.
  const int dim = n * (n + 1) / 2;
  auto svec = [&](const Matrix& s) {
    Vector v(dim);
    int idx = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) v(idx++) = (i == j) ? s(i, i) : std::sqrt(2.0) * 0.5 * (s(i, j) + s(j, i));
    return v;
  };
  auto smat = [&](const Vector& v) {
    Matrix s(n, n);
    int idx = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        const double val = (i == j) ? v(idx) : v(idx) / std::sqrt(2.0);
        s(i, j) = s(j, i) = val;
        ++idx;
      }
    return s;
  };
  Matrix span(p.m(), dim);
  for (int j = 0; j < p.m(); ++j) span.row(j) = svec(p.constraints[j]).transpose();
  const Matrix perp = null_space(span, 1e-10);

  // Conditions on the k x k block S, reduced to their numerically significant
  // row space so that noise in null_basis cannot make them inconsistent.
  const int kdim = k * (k + 1) / 2;
  auto svec_k = [&](const Matrix& m) {
    Vector v(kdim);
    int idx = 0;
    for (int i = 0; i < k; ++i)
      for (int j = i; j < k; ++j) v(idx++) = (i == j) ? m(i, i) : std::sqrt(2.0) * m(i, j);
    return v;
  };
  auto smat_k = [&](const Vector& v) {
    Matrix m(k, k);
    int idx = 0;
    for (int i = 0; i < k; ++i)
      for (int j = i; j < k; ++j) {
        m(i, j) = m(j, i) = (i == j) ? v(idx) : v(idx) / std::sqrt(2.0);
        ++idx;
      }
    return m;
  };
  Matrix rows(perp.cols(), kdim);
  for (int c = 0; c < perp.cols(); ++c)
    rows.row(c) = svec_k(symmetrize(null_basis.transpose() * smat(perp.col(c)) * null_basis)).transpose();
  Matrix block;
  Matrix free = Matrix::Identity(kdim, kdim);
  std::vector<Vector> conditions;
  if (rows.rows() > 0) {
    Eigen::JacobiSVD<Matrix> svd(rows, Eigen::ComputeFullV);
    const Vector& sv = svd.singularValues();
    const double top = sv.size() ? sv(0) : 0.0;
    int rank = 0;
    while (rank < sv.size() && sv(rank) > 1e-7 * std::max(top, 1.0)) ++rank;
    for (int c = 0; c < rank; ++c) conditions.push_back(svd.matrixV().col(c));
    free = svd.matrixV().rightCols(kdim - rank);
  }
  if (free.cols() == 0) return std::nullopt;
  if (free.cols() == 1) {
    block = smat_k(free.col(0));
    if (block.trace() < 0) block = -block;
    if (min_eigenvalue(block) < -1e-8 * max_abs(block)) return std::nullopt;
    block /= block.trace();
  } else {
    SdpProblem f;
    f.n = k;
    f.objective = Matrix::Zero(k, k);
    f.add(Matrix::Identity(k, k), 1.0);
    for (const Vector& v : conditions) f.add(smat_k(v), 0.0);
    const SdpSolution s = solve(f, options);
    if (s.status == SdpStatus::InfeasibleCertificate) return std::nullopt;
    if (s.status != SdpStatus::Optimal && s.primal_residual > 1e-7) return std::nullopt;
    block = s.x;
  }
  const Matrix omega = null_basis * truncate_spectrum(block, 1e-9) * null_basis.transpose();
  // Express omega in the constraint span and rebuild it exactly from y.
  const Vector target = svec(omega);
  const Vector y = span.transpose().completeOrthogonalDecomposition().solve(target);
  FarkasCertificate cert;
  cert.y = y;
  cert.omega = Matrix::Zero(n, n);
  for (int j = 0; j < p.m(); ++j) cert.omega += y(j) * p.constraints[j];
  cert.omega = symmetrize(cert.omega);
  const double scale = std::max(1e-300, max_abs(omega));
  if (max_abs(cert.omega - omega) > 1e-6 * scale) return std::nullopt;
  if (max_abs(cert.omega) < 1e-12) return std::nullopt;
  return cert;
}

std::optional<FarkasCertificate> farkas_certificate(const SdpProblem& p, const Matrix& known_feasible,
                                                    double rank_tol, const SdpOptions& options) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(known_feasible));
  const double top = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  std::vector<int> idx;
  for (int i = 0; i < p.n; ++i)
    if (es.eigenvalues()(i) <= rank_tol * top) idx.push_back(i);
  Matrix nb(p.n, idx.size());
  for (std::size_t c = 0; c < idx.size(); ++c) nb.col(c) = es.eigenvectors().col(idx[c]);
  return farkas_certificate_on(p, nb, options);
}

std::string dump_problem(const SdpProblem& p) {
  std::ostringstream os;
  os.precision(17);
  auto triplets = [&](const Matrix& a) {
    std::vector<std::tuple<int, int, double>> t;
    for (int i = 0; i < p.n; ++i)
      for (int j = i; j < p.n; ++j)
        if (a(i, j) != 0.0) t.emplace_back(i, j, a(i, j));
    return t;
  };
  os << p.n << ' ' << p.m() << '\n';
  for (int j = 0; j < p.m(); ++j) {
    const auto t = triplets(p.constraints[j]);
    os << p.rhs[j] << ' ' << t.size() << '\n';
    for (auto [i, k, v] : t) os << i << ' ' << k << ' ' << v << '\n';
  }
  const auto t = triplets(p.objective);
  os << t.size() << '\n';
  for (auto [i, k, v] : t) os << i << ' ' << k << ' ' << v << '\n';
  return os.str();
}

SdpProblem load_problem(const std::string& text) {
  std::istringstream is(text);
  SdpProblem p;
  int m = 0;
  if (!(is >> p.n >> m) || p.n < 0 || m < 0) throw InvalidInput("load_problem: bad header");
  auto read_matrix = [&](int count) {
    Matrix a = Matrix::Zero(p.n, p.n);
    for (int c = 0; c < count; ++c) {
      int i = 0, j = 0;
      double v = 0;
      if (!(is >> i >> j >> v) || i < 0 || j < 0 || i >= p.n || j >= p.n) {
        throw InvalidInput("load_problem: bad triplet");
      }
      a(i, j) = v;
      a(j, i) = v;
    }
    return a;
  };
  for (int j = 0; j < m; ++j) {
    double b = 0;
    int count = 0;
    if (!(is >> b >> count)) throw InvalidInput("load_problem: bad constraint header");
    p.add(read_matrix(count), b);
  }
  int count = 0;
  if (!(is >> count)) throw InvalidInput("load_problem: missing objective");
  p.objective = read_matrix(count);
  return p;
}

bool polish_optimal(const SdpProblem& p, SdpSolution& sol, double rank_tol, int iterations) {
  const int n = p.n;
  const int m = p.m();
  if (n == 0 || sol.x.rows() != n || sol.y.size() != m) return false;
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(sol.x));
  const double top = std::max(es.eigenvalues().maxCoeff(), 0.0);
  if (top == 0.0) return false;
  std::vector<int> keep;
  for (int i = 0; i < n; ++i)
    if (es.eigenvalues()(i) > rank_tol * top) keep.push_back(i);
  const int r = static_cast<int>(keep.size());
  Matrix f(n, r);
  for (int c = 0; c < r; ++c) f.col(c) = es.eigenvectors().col(keep[c]) * std::sqrt(es.eigenvalues()(keep[c]));
  Vector y = sol.y;

  auto slack = [&](const Vector& yy) {
    Matrix s = -p.objective;
    for (int j = 0; j < m; ++j) s += yy(j) * p.constraints[j];
    return s;
  };
  auto residual = [&](const Matrix& ff, const Vector& yy) {
    Vector out(m + n * r);
    const Matrix x = ff * ff.transpose();
    for (int j = 0; j < m; ++j) out(j) = p.constraints[j].cwiseProduct(x).sum() - p.rhs[j];
    const Matrix eq = slack(yy) * ff;
    for (int a = 0; a < n; ++a)
      for (int k = 0; k < r; ++k) out(m + a * r + k) = eq(a, k);
    return out;
  };
  Vector res = residual(f, y);
  const double start = res.cwiseAbs().maxCoeff();
  double norm = res.norm();
  for (int it = 0; it < iterations && res.cwiseAbs().maxCoeff() > 1e-15 * std::max(1.0, top); ++it) {
    const Matrix s = slack(y);
    Matrix jac = Matrix::Zero(m + n * r, n * r + m);
    for (int j = 0; j < m; ++j) {
      const Matrix ap = p.constraints[j] * f;
      for (int a = 0; a < n; ++a)
        for (int k = 0; k < r; ++k) {
          jac(j, a * r + k) = 2 * ap(a, k);
          jac(m + a * r + k, n * r + j) = ap(a, k);
        }
    }
    for (int i = 0; i < n; ++i)
      for (int a = 0; a < n; ++a)
        if (s(i, a) != 0.0)
          for (int k = 0; k < r; ++k) jac(m + i * r + k, a * r + k) = s(i, a);
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod;
    cod.setThreshold(1e-8);
    cod.compute(jac);
    const Vector step = cod.solve(-res);
    bool moved = false;
    for (double t = 1.0; t > 1e-4 && !moved; t *= 0.5) {
      Matrix f2 = f;
      for (int a = 0; a < n; ++a)
        for (int k = 0; k < r; ++k) f2(a, k) += t * step(a * r + k);
      const Vector y2 = y + t * step.tail(m);
      const Vector res2 = residual(f2, y2);
      if (res2.norm() < norm) {
        f = f2, y = y2, res = res2, norm = res2.norm();
        moved = true;
      }
    }
    if (!moved) break;
  }
  const Matrix s = symmetrize(slack(y));
  if (!(res.cwiseAbs().maxCoeff() < start)) return false;
  if (min_eigenvalue(s) < -1e-10 * std::max(1.0, max_abs(s))) return false;
  sol.x = f * f.transpose();
  sol.y = y;
  sol.s = s;
  return true;
}

}  // namespace gramdim
