#include "gramdim/completion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <sstream>

#include "gramdim/factor_search.hpp"
#include "gramdim/sdp.hpp"

namespace gramdim {

namespace {

Matrix principal(const Matrix& m, const std::vector<int>& vs) {
  Matrix out(vs.size(), vs.size());
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t j = 0; j < vs.size(); ++j) out(i, j) = m(vs[i], vs[j]);
  return out;
}

// First standard-basis direction orthogonal to the rows of b, normalized.
Vector orthogonal_direction(const Matrix& rows, int dim) {
  const Matrix span = column_space(rows.transpose(), 1e-10);
  for (int e = 0; e < dim; ++e) {
    Vector v = Vector::Unit(dim, e);
    for (int pass = 0; pass < 2; ++pass) v -= span * (span.transpose() * v);
    if (v.norm() > 1e-6) return v.normalized();
  }
  return Vector::Zero(dim);
}

std::vector<int> iota_vector(int n) {
  std::vector<int> v(n);
  for (int i = 0; i < n; ++i) v[i] = i;
  return v;
}

}  // namespace

void refresh(CompletionResult& r, const PartialMatrix& a, double rank_tol) {
  const Matrix g = r.gram();
  r.rank = numerical_rank(g, rank_tol);
  r.residual = a.residual(g);
}

CompletionResult complete_chordal(const PartialMatrix& a, double tol) {
  const ValidationReport rep = validate(a, std::max(tol, 1e-12));
  if (!rep.feasible_necessary) throw InfeasibleInstance("complete_chordal: " + rep.detail, rep);
  const auto cs = chordal_structure(a.graph);
  if (!cs) throw InvalidInput("complete_chordal: graph is not chordal");
  const int n = a.size();
  CompletionResult out;
  out.vertices = iota_vector(n);
  out.configuration.host = a.graph;
  out.configuration.vectors = Matrix::Zero(n, 0);
  if (n == 0) return out;

  const Matrix known = a.known();
  const int c = static_cast<int>(cs->cliques.size());
  std::vector<std::vector<int>> adj(c);
  for (auto [x, y] : cs->clique_tree) {
    adj[x].push_back(y);
    adj[y].push_back(x);
  }
  Matrix vecs = Matrix::Zero(n, 0);
  VertexSet placed = 0;
  std::vector<bool> seen(c, false);
  int max_rank = 0;
  for (int root = 0; root < c; ++root) {
    if (seen[root]) continue;
    std::queue<int> q;
    q.push(root);
    seen[root] = true;
    while (!q.empty()) {
      const int cl = q.front();
      q.pop();
      for (int nb : adj[cl])
        if (!seen[nb]) seen[nb] = true, q.push(nb);
      const auto vs = members(cs->cliques[cl]);
      const Configuration f = gram_factor(principal(known, vs), kDefaultRankTol);
      max_rank = std::max(max_rank, f.dimension());
      std::vector<std::pair<int, int>> shared;
      for (std::size_t k = 0; k < vs.size(); ++k)
        if ((placed >> vs[k]) & 1U) shared.emplace_back(static_cast<int>(k), vs[k]);
      Configuration fixed;
      fixed.vectors = vecs;
      const Configuration moved = align(f, fixed, shared, 1e-6);
      if (moved.dimension() > vecs.cols()) vecs = pad_columns(vecs, moved.dimension());
      for (std::size_t k = 0; k < vs.size(); ++k) {
        if ((placed >> vs[k]) & 1U) continue;
        vecs.row(vs[k]).setZero();
        vecs.row(vs[k]).head(moved.dimension()) = moved.vectors.row(k);
        placed |= bit(vs[k]);
      }
    }
  }
  out.configuration.vectors = vecs;
  refresh(out, a);
  std::ostringstream os;
  os << c << " maximal cliques, largest clique rank " << max_rank;
  out.certificate_trail.push_back({"chordal", os.str(), std::nullopt});
  return out;
}

CompletionResult glue_clique_sum(const CompletionResult& r1, const CompletionResult& r2, double tol) {
  std::vector<std::pair<int, int>> shared;  // r2 row -> r1 row
  for (std::size_t j = 0; j < r2.vertices.size(); ++j) {
    auto it = std::find(r1.vertices.begin(), r1.vertices.end(), r2.vertices[j]);
    if (it != r1.vertices.end()) shared.emplace_back(static_cast<int>(j), static_cast<int>(it - r1.vertices.begin()));
  }
  const Configuration moved = align(r2.configuration, r1.configuration, shared, tol);
  const int dim = std::max(moved.dimension(), r1.configuration.dimension());
  std::vector<int> all = r1.vertices;
  all.insert(all.end(), r2.vertices.begin(), r2.vertices.end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  CompletionResult out;
  out.vertices = all;
  out.configuration.vectors = Matrix::Zero(all.size(), dim);
  for (std::size_t k = 0; k < all.size(); ++k) {
    auto it1 = std::find(r1.vertices.begin(), r1.vertices.end(), all[k]);
    if (it1 != r1.vertices.end()) {
      const auto row = r1.configuration.vectors.row(it1 - r1.vertices.begin());
      out.configuration.vectors.row(k).head(row.size()) = row;
      continue;
    }
    auto it2 = std::find(r2.vertices.begin(), r2.vertices.end(), all[k]);
    const auto row = moved.vectors.row(it2 - r2.vertices.begin());
    out.configuration.vectors.row(k).head(row.size()) = row;
  }
  out.certificate_trail = r1.certificate_trail;
  out.certificate_trail.insert(out.certificate_trail.end(), r2.certificate_trail.begin(), r2.certificate_trail.end());
  out.certificate_trail.push_back({"align", std::to_string(shared.size()) + " shared vertices", std::nullopt});
  out.used_fallback = r1.used_fallback || r2.used_fallback;
  out.rank = numerical_rank(out.gram());
  out.residual = std::max(r1.residual, r2.residual);
  return out;
}

std::optional<Matrix> central_completion(const PartialMatrix& a) {
  if (a.size() == 0) return Matrix(0, 0);
  const SdpProblem p = completion_problem(a);
  const FaceSolution fs = solve_on_face(p);
  if (fs.solution.status == SdpStatus::InfeasibleCertificate) return std::nullopt;
  return symmetrize(fs.solution.x);
}

CompletionResult complete_treewidth(const PartialMatrix& a, const TreeDecomposition& td, double tol) {
  if (auto why = check_tree_decomposition(a.graph, td); !why.empty()) {
    throw InvalidInput("complete_treewidth: " + why);
  }
  const ValidationReport rep = validate(a, std::max(tol, 1e-12));
  if (!rep.feasible_necessary) throw InfeasibleInstance("complete_treewidth: " + rep.detail, rep);
  const auto center = central_completion(a);
  if (!center) throw InfeasibleInstance("complete_treewidth: no psd completion");
  const int n = a.size();
  Graph filled(n, a.graph.edges(), a.graph.labels());
  for (auto bag : td.bags) {
    const auto vs = members(bag);
    for (std::size_t i = 0; i < vs.size(); ++i)
      for (std::size_t j = i + 1; j < vs.size(); ++j)
        if (!filled.has_edge(vs[i], vs[j])) filled.add_edge(vs[i], vs[j]);
  }
  std::vector<double> off;
  for (const auto& e : filled.edges()) off.push_back(a.graph.has_edge(e) ? a.entry(e.u, e.v) : (*center)(e.u, e.v));
  Vector diag = a.diagonal;
  const PartialMatrix b(filled, diag, off);
  CompletionResult out = complete_chordal(b, 1e-7);
  out.configuration.host = a.graph;
  refresh(out, a);
  out.certificate_trail.insert(out.certificate_trail.begin(),
                               {"treewidth", "bags filled from the central completion, width " + std::to_string(td.width),
                                std::nullopt});
  return out;
}

std::optional<CycleWitness> cycle_gd2_decide(const std::vector<double>& angles, double tol) {
  const int n = static_cast<int>(angles.size());
  if (n > 30) throw InvalidInput("cycle_gd2_decide: too many angles");
  for (double t : angles)
    if (!(t >= -1e-12 && t <= std::numbers::pi + 1e-12)) throw InvalidInput("cycle_gd2_decide: angle outside [0, pi]");
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    double sum = 0;
    for (int i = 0; i < n; ++i) sum += ((mask >> i) & 1U) ? -angles[i] : angles[i];
    const double k = std::round(sum / (2 * std::numbers::pi));
    if (std::abs(sum - 2 * std::numbers::pi * k) <= tol) {
      CycleWitness w;
      for (int i = 0; i < n; ++i) w.signs.push_back(((mask >> i) & 1U) ? -1 : 1);
      w.k = static_cast<int>(k);
      return w;
    }
  }
  return std::nullopt;
}

Configuration fold_stable_set(const Configuration& c, const FoldPlan& plan, double tol) {
  const Graph& g = c.host;
  const int n = c.size();
  const int k = plan.target_dimension;
  if (g.vertex_count() != n) throw InvalidInput("fold_stable_set: configuration host does not match");
  if (k < 1) throw InvalidInput("fold_stable_set: target dimension must be positive");
  if ((plan.stable_set & plan.kept_set) != 0 || (plan.stable_set | plan.kept_set) != g.all_vertices()) {
    throw InvalidInput("fold_stable_set: stable and kept sets must partition the vertices");
  }
  if (!g.is_stable(plan.stable_set)) throw InvalidInput("fold_stable_set: set is not stable");
  for (int s : members(plan.stable_set))
    if (g.degree(s) > k - 1) throw InvalidInput("fold_stable_set: vertex of degree >= k in the stable set");
  const auto kept = members(plan.kept_set);
  Matrix pt(kept.size(), c.dimension());
  for (std::size_t i = 0; i < kept.size(); ++i) pt.row(i) = c.vectors.row(kept[i]);
  if (numerical_rank(pt * pt.transpose(), tol) > k) throw InvalidInput("fold_stable_set: kept vectors span more than k");

  const int dim = std::max(c.dimension(), k);
  const Matrix p = pad_columns(c.vectors, dim);
  // Basis of span(p_T) extended to k directions.
  Matrix basis = column_space(pad_columns(pt, dim).transpose(), 1e-9);
  if (basis.cols() > k) basis = basis.leftCols(k).eval();
  while (basis.cols() < k) {
    const Vector u = orthogonal_direction(basis.transpose(), dim);
    Matrix grown(dim, basis.cols() + 1);
    grown << basis, u;
    basis = grown;
  }
  Configuration out;
  out.host = g;
  out.vectors = Matrix::Zero(n, k);
  for (int t : kept) out.vectors.row(t) = p.row(t) * basis;
  for (int s : members(plan.stable_set)) {
    const auto nb = members(g.neighbors(s));
    Matrix b(nb.size(), k);
    Vector rhs(nb.size());
    for (std::size_t j = 0; j < nb.size(); ++j) {
      b.row(j) = out.vectors.row(nb[j]);
      rhs(j) = p.row(s).dot(p.row(nb[j]));
    }
    Vector w = Vector::Zero(k);
    if (!nb.empty()) w = b.completeOrthogonalDecomposition().solve(rhs);
    const double rest = std::max(0.0, p.row(s).squaredNorm() - w.squaredNorm());
    const Vector u = orthogonal_direction(b, k);
    out.vectors.row(s) = (w + std::sqrt(rest) * u).transpose();
  }
  return out;
}

Contraction contract_2node(const Graph& h, const Configuration& c, const Matrix& omega, int i, double rel) {
  const int n = h.vertex_count();
  if (omega.rows() != n || c.size() != n) throw InvalidInput("contract_2node: size mismatch");
  if (i < 0 || i >= n) throw InvalidInput("contract_2node: vertex out of range");
  const Graph sg = stressed_graph(omega, rel);
  if (sg.degree(i) != 2) throw InvalidInput("contract_2node: vertex is not a 2-node");
  const auto nb = members(sg.neighbors(i));
  const VertexSet closed = sg.neighbors(i) | bit(i);
  bool only_triangle = sg.has_edge(nb[0], nb[1]);
  for (const auto& e : sg.edges())
    if (((closed >> e.u) & 1U) == 0 || ((closed >> e.v) & 1U) == 0) only_triangle = false;
  if (only_triangle) throw InvalidInput("contract_2node: stressed graph is the triangle on N[i]");
  Contraction out;
  out.stress = schur_complement(omega, i);
  if (max_abs(out.stress) <= 1e-14 * std::max(1.0, max_abs(omega))) {
    throw InvalidInput("contract_2node: contracted stress vanishes");
  }
  for (int v = 0; v < n; ++v)
    if (v != i) out.kept.push_back(v);
  out.graph = h.induced(out.kept);
  const int a = nb[0] - (nb[0] > i ? 1 : 0);
  const int b = nb[1] - (nb[1] > i ? 1 : 0);
  if (!out.graph.has_edge(a, b)) out.graph.add_edge(a, b);
  out.configuration.host = out.graph;
  out.configuration.vectors = Matrix(n - 1, c.dimension());
  for (int k = 0; k < n - 1; ++k) out.configuration.vectors.row(k) = c.vectors.row(out.kept[k]);
  return out;
}

int bound_dimension(const Matrix& omega, const Configuration& c, double eq_tol, double rel) {
  const int n = static_cast<int>(omega.rows());
  if (c.size() != n) throw InvalidInput("bound_dimension: size mismatch");
  double pnorm = 0;
  for (int i = 0; i < n; ++i) pnorm = std::max(pnorm, c.vectors.row(i).norm());
  const double scale = std::max(1e-300, max_abs(omega) * std::max(1.0, pnorm));
  if (max_abs(omega) == 0.0) throw InvalidInput("bound_dimension: zero stress");
  if (equilibrium_residual(omega, c.vectors) > eq_tol * scale) {
    throw InvalidInput("bound_dimension: equilibrium violated");
  }
  const Graph sg = stressed_graph(omega, rel);
  VertexSet stressed = 0;
  for (int i = 0; i < n; ++i)
    if (omega.row(i).cwiseAbs().maxCoeff() > rel * max_abs(omega)) stressed |= bit(i);
  const int count = popcount(stressed);
  return sg.is_clique(stressed) ? count - 1 : count - 2;
}

UniquenessReport uniqueness_probe(const PartialMatrix& a, double tol) {
  const int n = a.size();
  UniquenessReport out;
  const auto center = central_completion(a);
  if (!center) throw InfeasibleInstance("uniqueness_probe: no psd completion");
  out.completion = *center;
  SdpProblem p = completion_problem(a);
  double widest = -1;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (a.graph.has_edge(i, j)) continue;
      p.objective = entry_selector(n, i, j);
      const FaceSolution hi = solve_on_face(p);
      p.objective = -entry_selector(n, i, j);
      const FaceSolution lo = solve_on_face(p);
      UniquenessReport::Range r{Edge(i, j), lo.solution.x(i, j), hi.solution.x(i, j)};
      out.ranges.push_back(r);
      const double width = r.high - r.low;
      if (width > tol) {
        out.unique = false;
        if (width > widest) {
          widest = width;
          out.completion = symmetrize(hi.solution.x);
          out.other = symmetrize(lo.solution.x);
        }
      }
    }
  return out;
}

std::optional<CompletionResult> low_rank_factor_search(const PartialMatrix& a, int k, int restarts, std::uint64_t seed,
                                                       const std::optional<Matrix>& warm_start) {
  const int n = a.size();
  std::vector<Measurement> data;
  for (int i = 0; i < n; ++i) data.push_back({i, i, a.diagonal(i), false});
  const auto es = a.graph.edges();
  for (std::size_t e = 0; e < es.size(); ++e) data.push_back({es[e].u, es[e].v, a.off_diagonal[e], false});
  FitOptions opts;
  opts.restarts = restarts;
  opts.seed = seed;
  opts.warm_start = warm_start;
  double best = 0;
  const auto fit = fit_factor(n, k, data, opts, &best);
  if (!fit) return std::nullopt;
  CompletionResult out;
  out.vertices = iota_vector(n);
  out.configuration.host = a.graph;
  out.configuration.vectors = fit->factor;
  out.used_fallback = true;
  refresh(out, a);
  std::ostringstream os;
  os << "rank-" << k << " factor search, restart " << fit->restart << ", objective " << fit->objective;
  out.certificate_trail.push_back({"factor_search", os.str(), std::nullopt});
  return out;
}

}  // namespace gramdim
