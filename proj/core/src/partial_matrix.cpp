#include "gramdim/partial_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "gramdim/completion.hpp"
#include "gramdim/sdp.hpp"

namespace gramdim {

namespace {

int edge_index(const Graph& g, int i, int j) {
  const Edge e(i, j);
  const auto es = g.edges();
  auto it = std::lower_bound(es.begin(), es.end(), e);
  if (it == es.end() || !(*it == e)) return -1;
  return static_cast<int>(it - es.begin());
}

}  // namespace

PartialMatrix::PartialMatrix(Graph g, Vector diag, std::vector<double> off)
    : graph(std::move(g)), diagonal(std::move(diag)), off_diagonal(std::move(off)) {
  if (diagonal.size() != graph.vertex_count()) {
    throw InvalidInput("PartialMatrix: diagonal has " + std::to_string(diagonal.size()) + " values for " +
                       std::to_string(graph.vertex_count()) + " vertices");
  }
  if (static_cast<int>(off_diagonal.size()) != graph.edge_count()) {
    throw InvalidInput("PartialMatrix: " + std::to_string(off_diagonal.size()) + " edge values for " +
                       std::to_string(graph.edge_count()) + " edges");
  }
}

double PartialMatrix::entry(int i, int j) const {
  if (i < 0 || j < 0 || i >= size() || j >= size()) throw InvalidInput("entry: index out of range");
  if (i == j) return diagonal(i);
  const int k = edge_index(graph, i, j);
  if (k < 0) throw InvalidInput("entry: (" + std::to_string(i) + "," + std::to_string(j) + ") is not specified");
  return off_diagonal[k];
}

void PartialMatrix::set(int i, int j, double v) {
  if (i == j) {
    diagonal(i) = v;
    return;
  }
  const int k = edge_index(graph, i, j);
  if (k < 0) throw InvalidInput("set: pair is not an edge");
  off_diagonal[k] = v;
}

Matrix PartialMatrix::known() const {
  Matrix out = Matrix::Zero(size(), size());
  for (int i = 0; i < size(); ++i) out(i, i) = diagonal(i);
  const auto es = graph.edges();
  for (std::size_t k = 0; k < es.size(); ++k) out(es[k].u, es[k].v) = out(es[k].v, es[k].u) = off_diagonal[k];
  return out;
}

double PartialMatrix::residual(const Matrix& x) const {
  if (x.rows() != size() || x.cols() != size()) throw InvalidInput("residual: size mismatch");
  double r = 0;
  for (int i = 0; i < size(); ++i) r = std::max(r, std::abs(x(i, i) - diagonal(i)));
  const auto es = graph.edges();
  for (std::size_t k = 0; k < es.size(); ++k) r = std::max(r, std::abs(x(es[k].u, es[k].v) - off_diagonal[k]));
  return r;
}

PartialMatrix ElliptopeVector::to_partial() const {
  return PartialMatrix(graph, Vector::Ones(graph.vertex_count()), values);
}

ElliptopeVector to_elliptope(const PartialMatrix& a) {
  for (int i = 0; i < a.size(); ++i)
    if (std::abs(a.diagonal(i) - 1.0) > 1e-12) throw InvalidInput("to_elliptope: diagonal is not all ones");
  return {a.graph, a.off_diagonal};
}

std::vector<VertexSet> maximal_cliques(const Graph& g) {
  std::vector<VertexSet> out;
  std::function<void(VertexSet, VertexSet, VertexSet)> bk = [&](VertexSet r, VertexSet p, VertexSet x) {
    if (p == 0 && x == 0) {
      out.push_back(r);
      return;
    }
    int pivot = -1, best = -1;
    for (int u : members(p | x)) {
      const int c = popcount(p & g.neighbors(u));
      if (c > best) best = c, pivot = u;
    }
    for (int v : members(p & ~g.neighbors(pivot))) {
      bk(r | bit(v), p & g.neighbors(v), x & g.neighbors(v));
      p &= ~bit(v);
      x |= bit(v);
    }
  };
  if (g.vertex_count() > 0) bk(0, g.all_vertices(), 0);
  std::sort(out.begin(), out.end());
  return out;
}

ValidationReport validate(const PartialMatrix& a, double tol) {
  if (tol <= 0) throw InvalidInput("validate: tol must be positive");
  if (a.diagonal.size() != a.size() || static_cast<int>(a.off_diagonal.size()) != a.graph.edge_count()) {
    throw InvalidInput("validate: values do not match the graph");
  }
  ValidationReport rep;
  const Matrix k = a.known();
  double worst = 0;
  for (auto c : maximal_cliques(a.graph)) {
    const auto vs = members(c);
    Matrix sub(vs.size(), vs.size());
    for (std::size_t i = 0; i < vs.size(); ++i)
      for (std::size_t j = 0; j < vs.size(); ++j) sub(i, j) = k(vs[i], vs[j]);
    const double lo = min_eigenvalue(sub);
    if (lo < worst) {
      worst = lo;
      if (lo < -tol) {
        rep.feasible_necessary = false;
        rep.violated_clique = c;
        rep.min_eigenvalue = lo;
      }
    }
  }
  if (!rep.feasible_necessary) {
    std::ostringstream os;
    os << "clique {";
    bool first = true;
    for (int v : members(rep.violated_clique)) {
      os << (first ? "" : ",") << a.graph.label(v);
      first = false;
    }
    os << "} has min eigenvalue " << rep.min_eigenvalue;
    rep.detail = os.str();
  } else {
    rep.min_eigenvalue = worst;
  }
  return rep;
}

PartialMatrix project(const Matrix& x, const Graph& g) {
  if (x.rows() != g.vertex_count() || x.cols() != g.vertex_count()) throw InvalidInput("project: size mismatch");
  std::vector<double> off;
  for (const auto& e : g.edges()) off.push_back(0.5 * (x(e.u, e.v) + x(e.v, e.u)));
  return PartialMatrix(g, x.diagonal(), off);
}

std::vector<std::vector<int>> circuits(const Graph& g, int max_length) {
  std::vector<std::vector<int>> out;
  const int n = g.vertex_count();
  std::vector<int> path;
  std::function<void(int, VertexSet)> extend = [&](int start, VertexSet used) {
    const int last = path.back();
    for (int w : members(g.neighbors(last))) {
      if (w == start && path.size() >= 3 && path[1] < path.back()) out.push_back(path);
      if (w <= start || ((used >> w) & 1U)) continue;
      if (static_cast<int>(path.size()) >= max_length) continue;
      path.push_back(w);
      extend(start, used | bit(w));
      path.pop_back();
    }
  };
  for (int s = 0; s < n; ++s) {
    path = {s};
    extend(s, bit(s));
  }
  return out;
}

GenericityReport check_genericity(const ElliptopeVector& a, double delta, int max_length) {
  GenericityReport rep;
  const auto es = a.graph.edges();
  for (std::size_t k = 0; k < es.size(); ++k) {
    if (std::abs(a.values[k]) >= 1.0 - 1e-12) {
      rep.generic = false;
      rep.circuit = {es[k].u, es[k].v};
      return rep;
    }
  }
  const PartialMatrix pm = a.to_partial();
  for (const auto& c : circuits(a.graph, max_length)) {
    std::vector<double> angles;
    for (std::size_t i = 0; i < c.size(); ++i) {
      const double v = std::clamp(pm.entry(c[i], c[(i + 1) % c.size()]), -1.0, 1.0);
      angles.push_back(std::acos(v));
    }
    if (cycle_gd2_decide(angles, delta)) {
      rep.generic = false;
      rep.circuit = c;
      return rep;
    }
  }
  return rep;
}

bool has_positive_definite_completion(const PartialMatrix& a, double tol) {
  SdpProblem p;
  p.n = a.size();
  p.objective = Matrix::Zero(p.n, p.n);
  for (int i = 0; i < p.n; ++i) p.add(entry_selector(p.n, i, i), a.diagonal(i));
  const auto es = a.graph.edges();
  for (std::size_t k = 0; k < es.size(); ++k) p.add(entry_selector(p.n, es[k].u, es[k].v), a.off_diagonal[k]);
  const SlaterProbe probe = slater_probe(p);
  return probe.feasible && (probe.unbounded || probe.margin > tol);
}

ElliptopeVector perturb_to_generic(const ElliptopeVector& a, double epsilon, std::uint64_t seed, int max_retries) {
  if (epsilon <= 0) throw InvalidInput("perturb_to_generic: epsilon must be positive");
  if (static_cast<int>(a.values.size()) != a.graph.edge_count()) {
    throw InvalidInput("perturb_to_generic: values do not match the graph");
  }
  if (!validate(a.to_partial()).feasible_necessary) throw InvalidInput("perturb_to_generic: infeasible input");
  auto qualifies = [&](const ElliptopeVector& c) {
    return check_genericity(c).generic && has_positive_definite_completion(c.to_partial());
  };
  if (qualifies(a)) return a;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  // Pull towards the identity completion, which is positive definite, then jitter.
  const double bound = 1.0 - 1e-9;
  GenericityReport last;
  for (int attempt = 0; attempt < max_retries; ++attempt) {
    ElliptopeVector c = a;
    const double shrink = std::min(0.5 * epsilon, 0.5 * epsilon * (1.0 + attempt) / max_retries + 0.1 * epsilon);
    for (auto& v : c.values) {
      double moved = v * (1.0 - shrink) + 0.4 * epsilon * unit(rng);
      if (std::abs(moved - v) > epsilon) moved = v + std::copysign(epsilon, moved - v);
      v = std::clamp(moved, -bound, bound);
    }
    last = check_genericity(c);
    if (last.generic && has_positive_definite_completion(c.to_partial())) return c;
  }
  std::ostringstream os;
  os << "perturb_to_generic: no generic perturbation within " << epsilon << " after " << max_retries
     << " retries; circuit";
  for (int v : last.circuit) os << ' ' << a.graph.label(v);
  throw GenericityFailure(os.str(), last.circuit);
}

}  // namespace gramdim
