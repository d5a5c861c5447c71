#include "gramdim/stress.hpp"

#include <algorithm>
#include <cmath>

namespace gramdim {

Graph stressed_graph(const Matrix& omega, double rel) {
  const int n = static_cast<int>(omega.rows());
  Graph g(n);
  const double cut = rel * max_abs(omega);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(omega(i, j)) > cut) g.add_edge(i, j);
  return g;
}

std::vector<int> stressed_degrees(const Matrix& omega, double rel) {
  const Graph g = stressed_graph(omega, rel);
  std::vector<int> out;
  for (int v = 0; v < g.vertex_count(); ++v) out.push_back(g.degree(v));
  return out;
}

double equilibrium_residual(const Matrix& omega, const Matrix& vectors) {
  if (omega.rows() == 0) return 0.0;
  const Matrix r = omega * vectors;
  double worst = 0;
  for (Eigen::Index i = 0; i < r.rows(); ++i) worst = std::max(worst, r.row(i).norm());
  return worst;
}

double support_violation(const StressMatrix& s) {
  double worst = 0;
  const int n = static_cast<int>(s.matrix.rows());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j || s.host.has_edge(i, j)) continue;
      if (s.stretched_pair && Edge(i, j) == *s.stretched_pair) continue;
      worst = std::max(worst, std::abs(s.matrix(i, j)));
    }
  return worst;
}

StressCheck check_stress(const StressMatrix& s, const Configuration& c, double rank_tol) {
  StressCheck out;
  out.n = static_cast<int>(s.matrix.rows());
  out.support_violation = support_violation(s);
  out.min_eigenvalue = min_eigenvalue(s.matrix);
  out.equilibrium = equilibrium_residual(s.matrix, c.vectors);
  out.rank_x = numerical_rank(c.gram(), rank_tol);
  out.rank_omega = numerical_rank(s.matrix, rank_tol);
  out.nonzero = max_abs(s.matrix) > 0.0;
  return out;
}

SdpProblem completion_problem(const PartialMatrix& a) {
  SdpProblem p;
  p.n = a.size();
  p.objective = Matrix::Zero(p.n, p.n);
  for (int i = 0; i < p.n; ++i) p.add(entry_selector(p.n, i, i), a.diagonal(i));
  const auto es = a.graph.edges();
  for (std::size_t k = 0; k < es.size(); ++k) p.add(entry_selector(p.n, es[k].u, es[k].v), a.off_diagonal[k]);
  return p;
}

namespace {

// Orthonormal complement of the columns of `basis` in R^n.
Matrix complement_of(const Matrix& basis, int n) {
  if (basis.cols() == 0) return Matrix::Identity(n, n);
  return null_space(basis.transpose(), 1e-10);
}

}  // namespace

FlattenResult flatten(const PartialMatrix& a, Edge e0, double tol) {
  const int n = a.size();
  if (e0.u < 0 || e0.v >= n || e0.u == e0.v) throw InvalidInput("flatten: stretched pair out of range");
  if (a.graph.has_edge(e0)) throw InvalidInput("flatten: stretched pair is an edge");
  SdpProblem p = completion_problem(a);
  p.objective = entry_selector(n, e0.u, e0.v);
  const FaceSolution fs = solve_on_face(p, {std::min(1e-10, tol), 200});
  if (fs.solution.status == SdpStatus::InfeasibleCertificate) {
    throw InfeasibleInstance("flatten: instance has no psd completion");
  }
  SdpSolution sol = fs.solution;
  if (fs.strictly_feasible) polish_optimal(p, sol);
  FlattenResult out;
  out.strictly_feasible = fs.strictly_feasible;
  out.stress.host = a.graph;
  out.stress.stretched_pair = e0;
  if (fs.strictly_feasible) {
    out.stress.matrix = sol.s;
  } else if (fs.exposing) {
    out.stress.matrix = *fs.exposing;
  } else {
    auto cert = farkas_certificate_on(p, complement_of(fs.face_basis, n));
    if (cert) {
      out.stress.matrix = cert->omega;
    } else {
      out.stress.matrix = Matrix::Zero(n, n);
      out.certified = false;
    }
  }
  out.x = truncate_spectrum(sol.x, 1e-10);
  out.value = out.x(e0.u, e0.v);
  out.configuration = gram_factor(out.x, kDefaultRankTol, a.graph);
  return out;
}

PinnedFlattenResult pinned_flatten(const Configuration& pinned, const std::vector<int>& pinned_vertices,
                                   const PartialMatrix& a, Edge stretch, double tol) {
  const int n = a.size();
  if (pinned.size() != static_cast<int>(pinned_vertices.size())) {
    throw InvalidInput("pinned_flatten: pinned rows and vertex list differ in length");
  }
  std::vector<int> role(n, -1);  // index within V1, or -2 - index within V2
  for (std::size_t k = 0; k < pinned_vertices.size(); ++k) {
    const int v = pinned_vertices[k];
    if (v < 0 || v >= n || role[v] != -1) throw InvalidInput("pinned_flatten: bad pinned vertex list");
    role[v] = static_cast<int>(k);
  }
  std::vector<int> free;
  for (int v = 0; v < n; ++v)
    if (role[v] == -1) {
      role[v] = -2 - static_cast<int>(free.size());
      free.push_back(v);
    }
  if (free.empty()) throw InvalidInput("pinned_flatten: nothing to solve (no free vertices)");
  int su = stretch.u, sv = stretch.v;
  if (role[su] < 0) std::swap(su, sv);
  if (role[su] < 0 || role[sv] >= 0) throw InvalidInput("pinned_flatten: stretch must join a pinned and a free vertex");
  if (a.graph.has_edge(su, sv)) throw InvalidInput("pinned_flatten: stretch pair is an edge");

  const Matrix& pv = pinned.vectors;
  const Matrix pg = pv * pv.transpose();
  const double scale = std::max(1.0, max_abs(pg));
  for (std::size_t i = 0; i < pinned_vertices.size(); ++i)
    for (std::size_t j = i; j < pinned_vertices.size(); ++j) {
      const int u = pinned_vertices[i], v = pinned_vertices[j];
      if (!a.specified(u, v)) continue;
      if (std::abs(pg(i, j) - a.entry(u, v)) > 1e-6 * scale) {
        throw InvalidInput("pinned_flatten: pinned vectors disagree with the instance");
      }
    }

  const int d1 = pinned.dimension();
  const int n2 = static_cast<int>(free.size());
  const int dim = d1 + n2;
  auto col = [&](int v) { return d1 + (-2 - role[v]); };
  SdpProblem p;
  p.n = dim;
  for (int i = 0; i < d1; ++i)
    for (int j = i; j < d1; ++j) p.add(entry_selector(dim, i, j), i == j ? 1.0 : 0.0);
  auto cross = [&](int pinned_vertex, int free_vertex) {
    Matrix m = Matrix::Zero(dim, dim);
    const int c = col(free_vertex);
    for (int r = 0; r < d1; ++r) {
      m(r, c) = 0.5 * pv(role[pinned_vertex], r);
      m(c, r) = m(r, c);
    }
    return m;
  };
  for (int v : free) {
    p.add(entry_selector(dim, col(v), col(v)), a.entry(v, v));
    for (int w : members(a.graph.neighbors(v))) {
      if (role[w] >= 0) {
        p.add(cross(w, v), a.entry(v, w));
      } else if (w > v) {
        p.add(entry_selector(dim, col(v), col(w)), a.entry(v, w));
      }
    }
  }
  p.objective = cross(su, sv);
  const FaceSolution fs = solve_on_face(p, {std::min(1e-10, tol), 200});
  if (fs.solution.status == SdpStatus::InfeasibleCertificate) {
    throw InfeasibleInstance("pinned_flatten: no extension of the pinned vectors");
  }
  SdpSolution sol = fs.solution;
  if (fs.strictly_feasible) polish_optimal(p, sol);
  PinnedFlattenResult out;
  out.free_vertices = free;
  out.strictly_feasible = fs.strictly_feasible;
  out.z = truncate_spectrum(sol.x, 1e-10);
  if (fs.strictly_feasible) {
    out.slack = sol.s;
  } else {
    auto cert = farkas_certificate_on(p, complement_of(fs.face_basis, dim));
    if (cert) {
      out.slack = cert->omega;
    } else {
      out.slack = Matrix::Zero(dim, dim);
      out.certified = false;
    }
  }
  // p'_j = (y_j, z_j) with z factoring X - Y^T Y.
  const Matrix y = out.z.topRightCorner(d1, n2);
  const Matrix x = out.z.bottomRightCorner(n2, n2);
  const Configuration rest = gram_factor(psd_projection(x - y.transpose() * y), kDefaultRankTol);
  const int d2 = rest.dimension();
  Matrix vecs = Matrix::Zero(n, d1 + d2);
  for (std::size_t k = 0; k < pinned_vertices.size(); ++k) vecs.row(pinned_vertices[k]).head(d1) = pv.row(k);
  for (int j = 0; j < n2; ++j) {
    vecs.row(free[j]).head(d1) = y.col(j).transpose();
    if (d2 > 0) vecs.row(free[j]).tail(d2) = rest.vectors.row(j);
  }
  out.configuration.vectors = vecs;
  out.configuration.host = a.graph;

  // Stress on the V2 rows: w'_jk from the V2 block, w'_ij (i in V1) from the
  // cross block S12 = P1^T W12, read off constraint by constraint.
  Matrix w = Matrix::Zero(n, n);
  const Matrix& s = out.slack;
  for (int j = 0; j < n2; ++j)
    for (int k = 0; k < n2; ++k) w(free[j], free[k]) = s(d1 + j, d1 + k);
  // Recover W12 from the dual multipliers: the cross constraints in order.
  {
    const Vector yv = fs.strictly_feasible ? sol.y : Vector();
    Vector mult;
    if (fs.strictly_feasible) {
      mult = yv;
    } else {
      auto cert = farkas_certificate_on(p, complement_of(fs.face_basis, dim));
      mult = cert ? cert->y : Vector::Zero(p.m());
    }
    int idx = d1 * (d1 + 1) / 2;
    for (int v : free) {
      ++idx;  // diagonal
      for (int wv : members(a.graph.neighbors(v))) {
        if (role[wv] >= 0) {
          const double c = 0.5 * mult(idx);
          w(wv, v) += c;
          w(v, wv) += c;
          ++idx;
        } else if (wv > v) {
          ++idx;
        }
      }
    }
    if (fs.strictly_feasible) {
      w(su, sv) -= 0.5;
      w(sv, su) -= 0.5;
    }
  }
  out.stress.matrix = w;
  out.stress.host = a.graph;
  out.stress.stretched_pair = Edge(su, sv);
  return out;
}

StressCheck check_pinned(const PinnedFlattenResult& r, double rank_tol) {
  StressCheck out;
  out.n = static_cast<int>(r.z.rows());
  out.support_violation = support_violation(r.stress);
  out.min_eigenvalue = min_eigenvalue(r.slack);
  const Matrix rows = r.stress.matrix * r.configuration.vectors;
  for (int v : r.free_vertices) out.equilibrium = std::max(out.equilibrium, rows.row(v).norm());
  out.rank_x = numerical_rank(r.z, rank_tol);
  out.rank_omega = numerical_rank(r.slack, rank_tol);
  out.nonzero = max_abs(r.stress.matrix) > 0.0;
  return out;
}

Matrix rank_reduce(const Matrix& x, const std::vector<Matrix>& constraints, double tol) {
  Matrix cur = symmetrize(x);
  const int n = static_cast<int>(x.rows());
  for (int round = 0; round < n + 1; ++round) {
    const Configuration f = gram_factor(cur, tol);
    const int r = f.dimension();
    if (r <= 1) break;
    const int unknowns = r * (r + 1) / 2;
    Matrix sys(constraints.size(), unknowns);
    for (std::size_t j = 0; j < constraints.size(); ++j) {
      const Matrix red = f.vectors.transpose() * constraints[j] * f.vectors;
      int idx = 0;
      for (int a = 0; a < r; ++a)
        for (int b = a; b < r; ++b) sys(j, idx++) = (a == b) ? red(a, a) : red(a, b) + red(b, a);
    }
    const Matrix ns = null_space(sys, 1e-10);
    if (ns.cols() == 0) break;
    Matrix delta(r, r);
    int idx = 0;
    for (int a = 0; a < r; ++a)
      for (int b = a; b < r; ++b) delta(a, b) = delta(b, a) = ns(idx++, 0);
    Eigen::SelfAdjointEigenSolver<Matrix> es(delta, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues()(0), hi = es.eigenvalues()(r - 1);
    // Step until I + alpha * delta becomes singular, taking the shorter side.
    const double alpha = (std::abs(lo) >= std::abs(hi)) ? -1.0 / lo : -1.0 / hi;
    Matrix inner = Matrix::Identity(r, r) + alpha * delta;
    inner = psd_projection(inner);
    cur = symmetrize(f.vectors * inner * f.vectors.transpose());
  }
  return cur;
}

}  // namespace gramdim
