#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

#include "gramdim/completion.hpp"
#include "gramdim/factor_search.hpp"
#include "gramdim/minors.hpp"

namespace gramdim {

namespace {

std::string set_text(VertexSet s) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (int v : members(s)) {
    os << (first ? "" : ",") << v;
    first = false;
  }
  os << '}';
  return os.str();
}

std::string pair_text(const Edge& e) { return "(" + std::to_string(e.u) + "," + std::to_string(e.v) + ")"; }

// Rows of the top-k eigenvectors scaled by sqrt(eigenvalue).
Matrix leading_factor(const Matrix& x, int k) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(x));
  const int n = static_cast<int>(x.rows());
  Matrix f = Matrix::Zero(n, k);
  for (int c = 0; c < std::min(k, n); ++c) {
    const int idx = n - 1 - c;
    f.col(c) = es.eigenvectors().col(idx) * std::sqrt(std::max(0.0, es.eigenvalues()(idx)));
  }
  return f;
}

PartialMatrix piece_instance(const PartialMatrix& a, const Matrix& fill, const SumComponent& c) {
  const auto& vs = c.vertices;
  Vector diag(vs.size());
  for (std::size_t i = 0; i < vs.size(); ++i) diag(i) = a.diagonal(vs[i]);
  std::vector<double> off;
  for (const auto& e : c.torso.edges()) {
    const int u = vs[e.u];
    const int v = vs[e.v];
    off.push_back(a.graph.has_edge(u, v) ? a.entry(u, v) : fill(u, v));
  }
  return PartialMatrix(c.torso, diag, off);
}

CompletionResult from_configuration(const PartialMatrix& a, const Configuration& c) {
  CompletionResult r;
  r.configuration = c;
  r.configuration.host = a.graph;
  r.vertices.resize(a.size());
  for (int i = 0; i < a.size(); ++i) r.vertices[i] = i;
  refresh(r, a);
  return r;
}

double entry_scale(const PartialMatrix& a) { return std::max(1.0, a.diagonal.size() ? a.diagonal.maxCoeff() : 1.0); }

class Search {
 public:
  Search(int k, const FlattenFoldOptions& o, int depth) : k_(k), opt_(o), depth_(depth) {}

  CompletionResult run(const PartialMatrix& a) {
    const auto center = central_completion(a);
    if (!center) throw InfeasibleInstance("flatten_and_fold: no psd completion");
    const CliqueSumSplit split = clique_sum_split(a.graph);
    {
      std::ostringstream os;
      os << split.components.size() << " component(s):";
      for (const auto& c : split.components) os << ' ' << to_string(c.kind) << set_text(c.mask());
      trail_.push_back({"split", os.str(), std::nullopt});
    }
    std::vector<CompletionResult> parts;
    for (const auto& comp : split.components) {
      const PartialMatrix b = piece_instance(a, *center, comp);
      CompletionResult r = complete_piece(b, comp, *center);
      for (auto& v : r.vertices) v = comp.vertices[v];
      parts.push_back(std::move(r));
    }
    CompletionResult out = glue(split, parts);
    out.configuration.host = a.graph;
    out.certificate_trail.insert(out.certificate_trail.begin(), trail_.begin(), trail_.end());
    out.used_fallback = out.used_fallback || fallback_;
    // Rows back in instance order.
    Matrix rows = Matrix::Zero(a.size(), out.configuration.dimension());
    for (std::size_t i = 0; i < out.vertices.size(); ++i) rows.row(out.vertices[i]) = out.configuration.vectors.row(i);
    out.configuration.vectors = rows;
    out.vertices.resize(a.size());
    for (int i = 0; i < a.size(); ++i) out.vertices[i] = i;
    refresh(out, a, opt_.rank_tol);
    return out;
  }

 private:
  CompletionResult complete_piece(const PartialMatrix& b, const SumComponent& comp, const Matrix& center) {
    std::vector<int> sub(comp.vertices.size());
    for (std::size_t i = 0; i < sub.size(); ++i) sub[i] = comp.vertices[i];
    Matrix local_center(sub.size(), sub.size());
    for (std::size_t i = 0; i < sub.size(); ++i)
      for (std::size_t j = 0; j < sub.size(); ++j) local_center(i, j) = center(sub[i], sub[j]);

    if (comp.kind == ComponentKind::Treewidth3 && comp.decomposition) {
      CompletionResult r = complete_treewidth(b, *comp.decomposition, opt_.tol);
      if (r.rank <= k_) return r;
      trail_.push_back({"treewidth", "rank " + std::to_string(r.rank) + " exceeds target", std::nullopt});
      return fallback(b, {leading_factor(r.gram(), k_)});
    }
    if ((comp.kind == ComponentKind::V8Type || comp.kind == ComponentKind::C5xC2Type) && comp.template_map) {
      return fold_search(b, comp);
    }
    trail_.push_back({"component", "no fold route for " + to_string(comp.kind) + " piece", std::nullopt});
    return fallback(b, {leading_factor(local_center, k_)});
  }

  bool spend() { return steps_++ < opt_.step_budget; }

  bool accept(const PartialMatrix& b, const Configuration& c, const std::string& step, const std::string& detail,
              CompletionResult& out) {
    CompletionResult r = from_configuration(b, c);
    if (r.rank > k_ || r.residual > 1e-7 * entry_scale(b)) return false;
    std::ostringstream os;
    os << detail << "; rank " << r.rank << ", residual " << r.residual;
    r.certificate_trail.push_back({step, os.str(), std::nullopt});
    out = std::move(r);
    return true;
  }

  void log_stress(const PartialMatrix& b, const FlattenResult& f) {
    if (!f.certified || max_abs(f.stress.matrix) == 0.0) {
      trail_.push_back({"stress", "no nonzero stress certified", std::nullopt});
      return;
    }
    const auto deg = stressed_degrees(f.stress.matrix);
    int zero = 0, one = 0, two = 0;
    for (int d : deg) zero += d == 0, one += d == 1, two += d == 2;
    std::ostringstream os;
    os << "stressed degrees: " << zero << " 0-node(s), " << one << " 1-node(s), " << two << " 2-node(s)";
    trail_.push_back({"stress", os.str(), f.stress.matrix});
    // Contract 2-nodes while the stressed graph allows it and bound the dimension.
    Graph h = b.graph;
    h.add_edge(f.stress.stretched_pair->u, f.stress.stretched_pair->v);
    Configuration c = f.configuration;
    Matrix omega = f.stress.matrix;
    for (int round = 0; round < b.size() && spend(); ++round) {
      const auto d = stressed_degrees(omega);
      int node = -1;
      for (int i = 0; i < static_cast<int>(d.size()) && node < 0; ++i)
        if (d[i] == 2) node = i;
      if (node < 0) break;
      try {
        const Contraction con = contract_2node(h, c, omega, node);
        h = con.graph;
        c = con.configuration;
        c.host = h;
        omega = con.stress;
        trail_.push_back({"contract", "2-node " + std::to_string(node) + " removed", std::nullopt});
      } catch (const InvalidInput& e) {
        trail_.push_back({"contract", e.what(), std::nullopt});
        break;
      }
    }
    try {
      const int bound = bound_dimension(omega, c, 1e-5);
      trail_.push_back({"bound", "dimension of the stressed framework <= " + std::to_string(bound), std::nullopt});
    } catch (const InvalidInput& e) {
      trail_.push_back({"bound", e.what(), std::nullopt});
    }
  }

  // Maximal stable sets among vertices of degree <= k-1, largest first.
  std::vector<VertexSet> stable_sets(const Graph& g) const {
    VertexSet eligible = 0;
    for (int v = 0; v < g.vertex_count(); ++v)
      if (g.degree(v) <= k_ - 1) eligible |= bit(v);
    const auto ev = members(eligible);
    std::vector<VertexSet> out;
    for (std::uint64_t m = 1; m < (std::uint64_t{1} << ev.size()); ++m) {
      VertexSet s = 0;
      for (std::size_t i = 0; i < ev.size(); ++i)
        if ((m >> i) & 1U) s |= bit(ev[i]);
      if (!g.is_stable(s)) continue;
      bool maximal = true;
      for (int v : ev)
        if (((s >> v) & 1U) == 0 && g.is_stable(s | bit(v))) maximal = false;
      if (maximal) out.push_back(s);
    }
    std::stable_sort(out.begin(), out.end(), [](VertexSet x, VertexSet y) { return popcount(x) > popcount(y); });
    return out;
  }

  bool try_fold(const PartialMatrix& b, const Configuration& c, const std::string& origin, CompletionResult& out) {
    Configuration host_c = c;
    host_c.host = b.graph;
    if (accept(b, host_c, "flatten", origin + " already in dimension " + std::to_string(k_), out)) return true;
    for (VertexSet s : stable_sets(b.graph)) {
      FoldPlan plan{s, b.graph.all_vertices() & ~s, k_};
      const auto kept = members(plan.kept_set);
      Matrix pt(kept.size(), c.dimension());
      for (std::size_t i = 0; i < kept.size(); ++i) pt.row(i) = c.vectors.row(kept[i]);
      if (numerical_rank(pt * pt.transpose(), opt_.rank_tol) > k_) continue;
      if (!spend()) return false;
      try {
        const Configuration folded = fold_stable_set(host_c, plan, opt_.rank_tol);
        if (accept(b, folded, "fold", origin + ", stable set " + set_text(s), out)) return true;
      } catch (const InvalidInput&) {
      }
    }
    return false;
  }

  bool try_identify(const PartialMatrix& b, const Configuration& c, CompletionResult& out) {
    if (depth_ >= 3) return false;
    const int n = b.size();
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        Matrix g2(2, 2);
        g2 << c.vectors.row(i).squaredNorm(), c.vectors.row(i).dot(c.vectors.row(j)), g2(0, 1),
            c.vectors.row(j).squaredNorm();
        g2(1, 0) = g2(0, 1);
        if (numerical_rank(g2, opt_.rank_tol) > 1 || b.diagonal(i) <= 0 || b.diagonal(j) <= 0) continue;
        if (!spend()) return false;
        const double lambda = (g2(0, 1) >= 0 ? 1.0 : -1.0) * std::sqrt(b.diagonal(j) / b.diagonal(i));
        // Merge j into i.
        std::vector<int> to(n);
        for (int v = 0; v < n; ++v) to[v] = v < j ? v : (v == j ? i : v - 1);
        Graph merged(n - 1);
        std::vector<std::vector<double>> values(n - 1, std::vector<double>(n - 1, 0.0));
        std::vector<std::vector<int>> counts(n - 1, std::vector<int>(n - 1, 0));
        for (const auto& e : b.graph.edges()) {
          if ((e.u == i && e.v == j)) continue;
          const int u = to[e.u];
          const int v = to[e.v];
          double val = b.entry(e.u, e.v);
          if (e.u == j || e.v == j) val /= lambda;
          if (!merged.has_edge(u, v)) merged.add_edge(u, v);
          values[u][v] += val, values[v][u] += val;
          counts[u][v] += 1, counts[v][u] += 1;
        }
        if (classify_gram_dimension(merged).bound() > k_) continue;
        Vector diag(n - 1);
        for (int v = 0; v < n; ++v)
          if (v != j) diag(to[v]) = b.diagonal(v);
        std::vector<double> off;
        for (const auto& e : merged.edges()) off.push_back(values[e.u][e.v] / counts[e.u][e.v]);
        const PartialMatrix reduced(merged, diag, off);
        try {
          FlattenFoldOptions inner = opt_;
          inner.step_budget = std::max(0, opt_.step_budget - steps_);
          Search sub(k_, inner, depth_ + 1);
          CompletionResult r = sub.run(reduced);
          if (r.used_fallback) continue;
          Configuration full;
          full.vectors = Matrix(n, r.configuration.dimension());
          for (int v = 0; v < n; ++v) full.vectors.row(v) = r.configuration.vectors.row(to[v]);
          full.vectors.row(j) *= lambda;
          std::ostringstream os;
          os << "p" << j << " parallel to p" << i << " (factor " << lambda << "), merged graph completed in R^" << k_;
          if (accept(b, full, "identify", os.str(), out)) {
            out.certificate_trail.insert(out.certificate_trail.begin(), r.certificate_trail.begin(),
                                         r.certificate_trail.end());
            return true;
          }
        } catch (const std::exception&) {
        }
      }
    return false;
  }

  bool try_pinned(const PartialMatrix& b, const FlattenResult& f, Edge stretch, CompletionResult& out) {
    if (!f.certified) return false;
    const auto deg = stressed_degrees(f.stress.matrix);
    std::vector<int> pinned;
    VertexSet free = 0;
    for (int v = 0; v < b.size(); ++v) {
      if (deg[v] == 0) {
        free |= bit(v);
      } else {
        pinned.push_back(v);
      }
    }
    if (free == 0 || pinned.empty()) return false;
    // Stretch along a non-edge touching the free vertices, other than the one just used.
    for (int u = 0; u < b.size(); ++u)
      for (int v = u + 1; v < b.size(); ++v) {
        if (b.graph.has_edge(u, v) || Edge(u, v) == stretch) continue;
        if ((((free >> u) | (free >> v)) & 1U) == 0) continue;
        if (!spend()) return false;
        Configuration pin;
        pin.vectors = Matrix(pinned.size(), f.configuration.dimension());
        for (std::size_t r = 0; r < pinned.size(); ++r) pin.vectors.row(r) = f.configuration.vectors.row(pinned[r]);
        try {
          const PinnedFlattenResult p = pinned_flatten(pin, pinned, b, Edge(u, v), opt_.tol);
          Configuration c = p.configuration;
          const Configuration compact = gram_factor(c.gram(), opt_.rank_tol);
          if (try_fold(b, compact, "pinned reflatten along " + pair_text(Edge(u, v)) + " with free set " + set_text(free),
                       out))
            return true;
        } catch (const std::exception&) {
        }
      }
    return false;
  }

  CompletionResult fold_search(const PartialMatrix& b, const SumComponent& comp) {
    const Edge canonical = comp.kind == ComponentKind::V8Type ? Edge(0, 3) : Edge(2, 7);
    const auto& tm = *comp.template_map;
    const Edge first(tm[canonical.u], tm[canonical.v]);
    {
      const ElliptopeVector ev = to_elliptope(normalized(b));
      const GenericityReport gr = check_genericity(ev);
      std::string detail = gr.generic ? "generic" : "non-generic on circuit";
      for (int v : gr.circuit) detail += " " + std::to_string(v);
      trail_.push_back({"genericity", detail, std::nullopt});
    }
    std::vector<Edge> pairs{first};
    for (int u = 0; u < b.size(); ++u)
      for (int v = u + 1; v < b.size(); ++v)
        if (!b.graph.has_edge(u, v) && Edge(u, v) != first) pairs.emplace_back(u, v);

    std::vector<Matrix> warm;
    CompletionResult out;
    for (std::size_t p = 0; p < pairs.size() && steps_ < opt_.step_budget; ++p) {
      if (!spend()) break;
      FlattenResult f;
      try {
        f = flatten(b, pairs[p], opt_.tol);
      } catch (const InvalidInput&) {
        continue;
      }
      std::ostringstream os;
      os << "maximized entry " << pair_text(pairs[p]) << " to " << f.value << ", rank " << f.configuration.dimension()
         << (f.strictly_feasible ? "" : " (boundary face)");
      trail_.push_back({"flatten", os.str(), std::nullopt});
      warm.push_back(leading_factor(f.x, k_));
      if (p == 0) log_stress(b, f);
      const std::string origin = "flatten along " + pair_text(pairs[p]);
      if (try_fold(b, f.configuration, origin, out)) return finish(out);
      if (p == 0 && try_identify(b, f.configuration, out)) return finish(out);
      if (p == 0 && try_pinned(b, f, pairs[p], out)) return finish(out);
    }
    trail_.push_back({"budget", "toolkit did not certify rank " + std::to_string(k_) + " within " +
                                    std::to_string(opt_.step_budget) + " steps",
                      std::nullopt});
    return fallback(b, warm);
  }

  CompletionResult finish(CompletionResult r) {
    trail_.insert(trail_.end(), r.certificate_trail.begin(), r.certificate_trail.end());
    r.certificate_trail.clear();
    return r;
  }

  PartialMatrix normalized(const PartialMatrix& b) const {
    PartialMatrix out = b;
    for (int i = 0; i < b.size(); ++i) out.diagonal(i) = 1.0;
    const auto es = b.graph.edges();
    for (std::size_t e = 0; e < es.size(); ++e)
      out.off_diagonal[e] = b.off_diagonal[e] / std::sqrt(b.diagonal(es[e].u) * b.diagonal(es[e].v));
    return out;
  }

  CompletionResult fallback(const PartialMatrix& b, const std::vector<Matrix>& warm) {
    fallback_ = true;
    std::optional<Matrix> start;
    if (!warm.empty()) start = warm.front();
    auto r = low_rank_factor_search(b, k_, opt_.restarts, derive_seed(opt_.seed, counter_++), start);
    for (std::size_t w = 1; !r && w < warm.size() && w < 4; ++w)
      r = low_rank_factor_search(b, k_, std::max(2, opt_.restarts / 10), derive_seed(opt_.seed, counter_++), warm[w]);
    if (!r) throw NotFound("no rank-" + std::to_string(k_) + " completion found");
    trail_.push_back({"fallback", r->certificate_trail.back().detail, std::nullopt});
    r->certificate_trail.clear();
    return *r;
  }

  CompletionResult glue(const CliqueSumSplit& split, std::vector<CompletionResult>& parts) {
    const int m = static_cast<int>(parts.size());
    std::vector<std::vector<int>> adj(m);
    for (const auto& ad : split.adhesions) {
      adj[ad.a].push_back(ad.b);
      adj[ad.b].push_back(ad.a);
    }
    std::vector<bool> seen(m, false);
    std::optional<CompletionResult> acc;
    for (int root = 0; root < m; ++root) {
      if (seen[root]) continue;
      std::queue<int> q;
      q.push(root);
      seen[root] = true;
      while (!q.empty()) {
        const int c = q.front();
        q.pop();
        for (int nb : adj[c])
          if (!seen[nb]) seen[nb] = true, q.push(nb);
        if (!acc) {
          acc = parts[c];
        } else {
          acc = glue_clique_sum(*acc, parts[c]);
        }
      }
    }
    if (!acc) return CompletionResult{};
    if (m == 1) acc->certificate_trail.erase(
                    std::remove_if(acc->certificate_trail.begin(), acc->certificate_trail.end(),
                                   [](const TrailStep& s) { return s.step == "align"; }),
                    acc->certificate_trail.end());
    return *acc;
  }

  int k_;
  FlattenFoldOptions opt_;
  int depth_;
  int steps_ = 0;
  std::uint64_t counter_ = 0;
  bool fallback_ = false;
  std::vector<TrailStep> trail_;
};

// Fixed-rank Gauss-Newton refinement; returns the input when it does not help.
CompletionResult polish(const PartialMatrix& a, CompletionResult r, double rank_tol) {
  if (r.rank == 0) return r;
  const Matrix start = leading_factor(r.gram(), r.rank);
  std::vector<Measurement> data;
  for (int i = 0; i < a.size(); ++i) data.push_back({i, i, a.diagonal(i), false});
  const auto es = a.graph.edges();
  for (std::size_t e = 0; e < es.size(); ++e) data.push_back({es[e].u, es[e].v, a.off_diagonal[e], false});
  FitOptions fo;
  fo.restarts = 1;
  fo.warm_start = start;
  fo.max_iterations = 50;
  fo.success = std::numeric_limits<double>::infinity();
  const auto fit = fit_factor(a.size(), r.rank, data, fo);
  if (!fit) return r;
  CompletionResult p = r;
  p.configuration.vectors = fit->factor;
  refresh(p, a, rank_tol);
  if (p.residual < r.residual && p.rank <= r.rank) {
    std::ostringstream os;
    os << "rank-" << p.rank << " refinement, residual " << r.residual << " -> " << p.residual;
    p.certificate_trail.push_back({"polish", os.str(), std::nullopt});
    return p;
  }
  return r;
}

}  // namespace

CompletionResult flatten_and_fold(const PartialMatrix& a, int target_k, const FlattenFoldOptions& options) {
  if (target_k < 1) throw InvalidInput("flatten_and_fold: target_k must be at least 1");
  const ValidationReport rep = validate(a, std::max(options.tol, 1e-12));
  if (!rep.feasible_necessary) throw InfeasibleInstance("flatten_and_fold: " + rep.detail, rep);
  const int n = a.size();
  for (int i = 0; i < n; ++i)
    if (a.diagonal(i) < 0) throw InfeasibleInstance("flatten_and_fold: negative diagonal entry");

  // Zero-diagonal vertices carry the zero vector; the rest is scaled to unit diagonal.
  std::vector<int> live;
  for (int i = 0; i < n; ++i)
    if (a.diagonal(i) > 0) live.push_back(i);
  const Graph g = a.graph.induced(live);
  Vector diag = Vector::Ones(live.size());
  std::vector<double> off;
  for (const auto& e : g.edges()) {
    const int u = live[e.u];
    const int v = live[e.v];
    off.push_back(a.entry(u, v) / std::sqrt(a.diagonal(u) * a.diagonal(v)));
  }
  PartialMatrix unit(g, diag, off);
  std::vector<TrailStep> head;
  if (live.size() < static_cast<std::size_t>(n)) {
    head.push_back({"zero", std::to_string(n - live.size()) + " zero-diagonal vertex(es) set to the zero vector",
                    std::nullopt});
  }
  if (options.perturb) {
    const ElliptopeVector moved = perturb_to_generic(to_elliptope(unit), options.perturb_epsilon, options.seed);
    std::ostringstream os;
    os << "instance perturbed within " << options.perturb_epsilon << " to a generic one";
    head.push_back({"perturb", os.str(), std::nullopt});
    unit = moved.to_partial();
  }

  Search search(target_k, options, 0);
  CompletionResult inner = search.run(unit);

  CompletionResult out;
  out.configuration.host = a.graph;
  out.configuration.vectors = Matrix::Zero(n, inner.configuration.dimension());
  for (std::size_t i = 0; i < live.size(); ++i)
    out.configuration.vectors.row(live[i]) = inner.configuration.vectors.row(i) * std::sqrt(a.diagonal(live[i]));
  out.vertices.resize(n);
  for (int i = 0; i < n; ++i) out.vertices[i] = i;
  out.certificate_trail = head;
  out.certificate_trail.insert(out.certificate_trail.end(), inner.certificate_trail.begin(),
                               inner.certificate_trail.end());
  out.used_fallback = inner.used_fallback;
  refresh(out, a, options.rank_tol);
  out = polish(a, out, options.rank_tol);
  if (out.rank > target_k || out.residual > 1e-6) {
    throw NotFound("no rank-" + std::to_string(target_k) + " completion found");
  }
  // Compact to exactly rank columns.
  out.configuration = gram_factor(out.gram(), options.rank_tol, a.graph);
  refresh(out, a, options.rank_tol);
  return out;
}

}  // namespace gramdim
