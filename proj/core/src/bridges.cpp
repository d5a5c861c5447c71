#include "gramdim/bridges.hpp"

#include <algorithm>
#include <cmath>

#include "gramdim/completion.hpp"
#include "gramdim/factor_search.hpp"
#include "gramdim/minors.hpp"
#include "gramdim/sdp.hpp"
#include "gramdim/stress.hpp"

namespace gramdim {

EdmInstance::EdmInstance(Graph g, std::vector<double> d, std::optional<int> apex_vertex)
    : graph(std::move(g)), distances(std::move(d)), apex(apex_vertex) {
  if (distances.size() != static_cast<std::size_t>(graph.edge_count())) {
    throw InvalidInput("EdmInstance: one distance per edge expected");
  }
  for (double v : distances)
    if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidInput("EdmInstance: distances must be finite and nonnegative");
  if (apex && (*apex < 0 || *apex >= graph.vertex_count())) throw InvalidInput("EdmInstance: apex out of range");
}

double EdmInstance::distance(int i, int j) const {
  const Edge e(i, j);
  const auto es = graph.edges();
  const auto it = std::lower_bound(es.begin(), es.end(), e);
  if (it == es.end() || *it != e) throw InvalidInput("EdmInstance: pair is not an edge");
  return distances[it - es.begin()];
}

double EdmInstance::residual(const Matrix& points) const {
  if (points.rows() != size()) throw InvalidInput("EdmInstance: one point per vertex expected");
  double worst = 0;
  const auto es = graph.edges();
  for (std::size_t k = 0; k < es.size(); ++k) {
    const double got = (points.row(es[k].u) - points.row(es[k].v)).squaredNorm();
    worst = std::max(worst, std::abs(got - distances[k]));
  }
  return worst;
}

EdmInstance phi(const PartialMatrix& a) {
  const int n = a.size();
  const Graph s = suspension(a.graph);
  std::vector<double> d;
  for (const auto& e : s.edges()) {
    if (e.v == n) {
      d.push_back(a.diagonal(e.u));
    } else {
      d.push_back(a.diagonal(e.u) + a.diagonal(e.v) - 2 * a.entry(e.u, e.v));
    }
  }
  for (double& v : d) v = std::max(v, 0.0);
  return EdmInstance(s, d, n);
}

namespace {

std::vector<int> non_apex(const EdmInstance& d) {
  if (!d.apex) throw InvalidInput("phi_inverse: apex missing");
  const int apex = *d.apex;
  std::vector<int> rest;
  for (int v = 0; v < d.size(); ++v) {
    if (v == apex) continue;
    if (!d.graph.has_edge(v, apex)) throw InvalidInput("phi_inverse: apex is not adjacent to every vertex");
    rest.push_back(v);
  }
  return rest;
}

}  // namespace

PartialMatrix phi_inverse(const EdmInstance& d) {
  const auto rest = non_apex(d);
  const int apex = *d.apex;
  const Graph g = d.graph.induced(rest);
  Vector diag(rest.size());
  for (std::size_t i = 0; i < rest.size(); ++i) diag(i) = d.distance(rest[i], apex);
  std::vector<double> off;
  for (const auto& e : g.edges()) off.push_back((diag(e.u) + diag(e.v) - d.distance(rest[e.u], rest[e.v])) / 2);
  return PartialMatrix(g, diag, off);
}

Matrix euclidean_from_gram(const Configuration& c) {
  Matrix out = Matrix::Zero(c.size() + 1, c.dimension());
  out.topRows(c.size()) = c.vectors;
  return out;
}

Configuration gram_from_euclidean(const EdmInstance& d, const Matrix& points) {
  const auto rest = non_apex(d);
  Configuration c;
  c.vectors = Matrix(rest.size(), points.cols());
  for (std::size_t i = 0; i < rest.size(); ++i) c.vectors.row(i) = points.row(rest[i]) - points.row(*d.apex);
  c.host = d.graph.induced(rest);
  return c;
}

PartialMatrix zero_extension(const ElliptopeVector& x) {
  const int n = x.graph.vertex_count();
  const Graph s = suspension(x.graph);
  const auto base = x.graph.edges();
  std::vector<double> off;
  for (const auto& e : s.edges()) {
    if (e.v == n) {
      off.push_back(0.0);
    } else {
      off.push_back(x.values[std::lower_bound(base.begin(), base.end(), e) - base.begin()]);
    }
  }
  return PartialMatrix(s, Vector::Ones(n + 1), off);
}

std::optional<Matrix> realize_edm(const EdmInstance& d, int dim, int restarts, std::uint64_t seed) {
  if (dim < 1) throw InvalidInput("realize_edm: dimension must be positive");
  std::vector<Measurement> data;
  const auto es = d.graph.edges();
  for (std::size_t k = 0; k < es.size(); ++k) data.push_back({es[k].u, es[k].v, d.distances[k], true});
  FitOptions opts;
  opts.restarts = restarts;
  opts.seed = seed;
  opts.success = 1e-18;
  const auto fit = fit_factor(d.size(), dim, data, opts);
  if (!fit) return std::nullopt;
  Matrix points = fit->factor;
  if (d.apex) {
    const Vector origin = points.row(*d.apex).transpose();
    points.rowwise() -= origin.transpose();
  }
  return points;
}

std::optional<int> ed_oracle(const EdmInstance& d, int max_dim, int restarts, std::uint64_t seed) {
  for (int k = 1; k <= max_dim; ++k)
    if (realize_edm(d, k, restarts, seed)) return k;
  return std::nullopt;
}

std::optional<int> gd_oracle(const PartialMatrix& a, int max_k, int restarts, std::uint64_t seed) {
  for (int k = 1; k <= max_k; ++k)
    if (low_rank_factor_search(a, k, restarts, seed)) return k;
  return std::nullopt;
}

ArnoldReport check_strong_arnold(const Matrix& m, const Graph& g, double tol) {
  const int n = g.vertex_count();
  if (m.rows() != n || m.cols() != n) throw InvalidInput("check_strong_arnold: size mismatch");
  const double scale = std::max(1.0, max_abs(m));
  std::vector<Edge> free;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (g.has_edge(i, j)) continue;
      if (std::abs(m(i, j)) > 1e-9 * scale) throw InvalidInput("check_strong_arnold: matrix has weight on a non-edge");
      free.emplace_back(i, j);
    }
  ArnoldReport out;
  if (free.empty()) return out;
  // Column e holds vec(M (E_ij + E_ji)).
  Matrix op = Matrix::Zero(n * n, free.size());
  for (std::size_t e = 0; e < free.size(); ++e) {
    const int i = free[e].u;
    const int j = free[e].v;
    for (int r = 0; r < n; ++r) {
      op(r + j * n, e) += m(r, i);
      op(r + i * n, e) += m(r, j);
    }
  }
  Eigen::JacobiSVD<Matrix> svd(op, Eigen::ComputeFullV);
  const Vector& sv = svd.singularValues();
  const double top = sv.size() ? sv(0) : 0.0;
  const int q = static_cast<int>(free.size());
  int rank = 0;
  for (int k = 0; k < sv.size(); ++k)
    if (top > 0 && sv(k) > tol * top) ++rank;
  out.nullity = q - rank;
  if (out.nullity == 0) return out;
  out.holds = false;
  const Vector v = svd.matrixV().col(q - 1);
  Matrix x = Matrix::Zero(n, n);
  for (int e = 0; e < q; ++e) {
    x(free[e].u, free[e].v) = v(e);
    x(free[e].v, free[e].u) = v(e);
  }
  out.witness = x;
  return out;
}

PartialMatrix nu_lower_bound_instance(const Matrix& m, const Graph& g, double tol) {
  const ArnoldReport sap = check_strong_arnold(m, g, tol);
  if (!sap.holds) throw InvalidInput("nu_lower_bound_instance: strong Arnold property fails");
  const Matrix kernel = null_space(symmetrize(m), 1e-10);
  return project(kernel * kernel.transpose(), g);
}

Matrix laplacian(const Graph& g) {
  const int n = g.vertex_count();
  Matrix l = Matrix::Zero(n, n);
  for (const auto& e : g.edges()) {
    l(e.u, e.u) += 1;
    l(e.v, e.v) += 1;
    l(e.u, e.v) -= 1;
    l(e.v, e.u) -= 1;
  }
  return l;
}

MaxCutReport maxcut_demo(const Graph& g, double tol) {
  const int n = g.vertex_count();
  if (n == 0) throw InvalidInput("maxcut_demo: empty graph");
  SdpProblem p;
  p.n = n;
  p.objective = 0.25 * laplacian(g);
  for (int i = 0; i < n; ++i) p.add(entry_selector(n, i, i), 1.0);
  const SdpSolution sol = solve(p);
  if (sol.status != SdpStatus::Optimal) {
    throw std::runtime_error("maxcut_demo: solver returned " + to_string(sol.status));
  }
  MaxCutReport out;
  out.gd_band = classify_gram_dimension(g).bound();
  out.sdp_value = sol.primal_objective;
  out.sdp_rank = numerical_rank(sol.x, tol);
  std::vector<Matrix> keep;
  for (int i = 0; i < n; ++i) keep.push_back(entry_selector(n, i, i));
  keep.push_back(p.objective);
  out.x = rank_reduce(sol.x, keep);
  out.reduced_rank = numerical_rank(out.x, tol);
  out.route = "rank_reduce";
  if (out.reduced_rank > 4 && out.gd_band <= 4) {
    const PartialMatrix a = project(out.x, g);
    FlattenFoldOptions opts;
    opts.rank_tol = tol;
    const CompletionResult r = flatten_and_fold(a, 4, opts);
    out.x = r.gram();
    out.reduced_rank = numerical_rank(out.x, tol);
    out.route = "completion";
  }
  out.sdp_value = 0.25 * (laplacian(g).cwiseProduct(out.x)).sum();
  return out;
}

}  // namespace gramdim
