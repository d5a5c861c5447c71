#include "gramdim/clique_sum.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

namespace gramdim {

std::string to_string(ComponentKind k) {
  switch (k) {
    case ComponentKind::Treewidth3: return "treewidth<=3";
    case ComponentKind::V8Type: return "V8-type";
    case ComponentKind::C5xC2Type: return "C5xC2-type";
    case ComponentKind::Irreducible: return "irreducible";
  }
  return "?";
}

namespace {

// A piece in host numbering; virtual edges are host pairs that are not
// necessarily edges of g.
struct RawPiece {
  VertexSet verts = 0;
  std::vector<Edge> virt;
};

struct RawAdhesion {
  int a;
  int b;
  VertexSet sep;
};

Graph make_torso(const Graph& g, const RawPiece& p, std::vector<Edge>* torso_virtual) {
  const auto vs = members(p.verts);
  Graph t = g.induced(vs);
  std::vector<int> index(g.vertex_count(), -1);
  for (std::size_t i = 0; i < vs.size(); ++i) index[vs[i]] = static_cast<int>(i);
  for (const auto& e : p.virt) {
    const int a = index[e.u], b = index[e.v];
    if (a < 0 || b < 0) continue;
    if (g.has_edge(e)) continue;
    if (!t.has_edge(a, b)) t.add_edge(a, b);
    if (torso_virtual) torso_virtual->emplace_back(a, b);
  }
  if (torso_virtual) {
    std::sort(torso_virtual->begin(), torso_virtual->end());
    torso_virtual->erase(std::unique(torso_virtual->begin(), torso_virtual->end()),
                         torso_virtual->end());
  }
  return t;
}

// Separator (host numbering) of size <= 2 splitting the torso, or nullopt.
// Smallest separators first so cut structure is peeled before 2-cuts.
std::optional<VertexSet> small_separator(const Graph& t, const std::vector<int>& vs) {
  const int n = t.vertex_count();
  if (n <= 3) return std::nullopt;
  const VertexSet all = t.all_vertices();
  if (t.components(all).size() > 1) return VertexSet{0};
  for (int a = 0; a < n; ++a) {
    if (t.components(all & ~bit(a)).size() > 1) return bit(vs[a]);
  }
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (t.components(all & ~bit(a) & ~bit(b)).size() > 1) return bit(vs[a]) | bit(vs[b]);
  return std::nullopt;
}

std::optional<VertexSet> clique_separator(const Graph& t, const std::vector<int>& vs) {
  const int n = t.vertex_count();
  const VertexSet all = t.all_vertices();
  for (int size : {3, 4}) {
    if (n <= size + 1) continue;
    std::optional<VertexSet> found;
    std::function<void(int, VertexSet)> rec = [&](int from, VertexSet s) {
      if (found) return;
      if (popcount(s) == size) {
        if (t.components(all & ~s).size() > 1) {
          VertexSet host = 0;
          for (int x : members(s)) host |= bit(vs[x]);
          found = host;
        }
        return;
      }
      for (int x = from; x < n && !found; ++x) {
        if ((t.neighbors(x) & s) != s) continue;
        rec(x + 1, s | bit(x));
      }
    };
    rec(0, 0);
    if (found) return found;
  }
  return std::nullopt;
}

// Splits every piece along separators chosen by `finder` until none is
// left, keeping the adhesion tree consistent.
template <class Finder>
void split_all(const Graph& g, std::vector<RawPiece>& pieces, std::vector<RawAdhesion>& adhesions,
               bool add_virtual, Finder finder) {
  for (std::size_t i = 0; i < pieces.size();) {
    const auto vs = members(pieces[i].verts);
    const Graph t = make_torso(g, pieces[i], nullptr);
    auto sep = finder(t, vs);
    if (!sep) {
      ++i;
      continue;
    }
    VertexSet local_sep = 0;
    for (std::size_t x = 0; x < vs.size(); ++x)
      if ((*sep >> vs[x]) & 1U) local_sep |= bit(static_cast<int>(x));
    const auto comps = t.components(t.all_vertices() & ~local_sep);
    std::vector<RawPiece> subs;
    for (auto c : comps) {
      RawPiece p;
      for (int x : members(c)) p.verts |= bit(vs[x]);
      p.verts |= *sep;
      for (const auto& e : pieces[i].virt)
        if (((p.verts >> e.u) & 1U) && ((p.verts >> e.v) & 1U)) p.virt.push_back(e);
      if (add_virtual && popcount(*sep) == 2) {
        const auto s = members(*sep);
        p.virt.emplace_back(s[0], s[1]);
      }
      subs.push_back(std::move(p));
    }
    std::vector<int> ids{static_cast<int>(i)};
    for (std::size_t k = 1; k < subs.size(); ++k) ids.push_back(static_cast<int>(pieces.size() + k - 1));
    for (auto& adh : adhesions) {
      for (int* end : {&adh.a, &adh.b}) {
        if (*end != static_cast<int>(i)) continue;
        for (std::size_t k = 0; k < subs.size(); ++k) {
          if ((adh.sep & ~subs[k].verts) == 0) {
            *end = ids[k];
            break;
          }
        }
      }
    }
    for (std::size_t k = 1; k < subs.size(); ++k) adhesions.push_back({ids[0], ids[k], *sep});
    pieces[i] = std::move(subs[0]);
    for (std::size_t k = 1; k < subs.size(); ++k) pieces.push_back(std::move(subs[k]));
  }
}

std::vector<Edge> dedup(std::vector<Edge> es) {
  std::sort(es.begin(), es.end());
  es.erase(std::unique(es.begin(), es.end()), es.end());
  return es;
}

}  // namespace

std::vector<TorsoPiece> two_separation_pieces(const Graph& g) {
  std::vector<RawPiece> pieces;
  std::vector<RawAdhesion> adhesions;
  if (g.vertex_count() == 0) return {};
  pieces.push_back({g.all_vertices(), {}});
  split_all(g, pieces, adhesions, true, small_separator);
  std::vector<TorsoPiece> out;
  for (const auto& p : pieces) {
    TorsoPiece tp;
    tp.vertices = members(p.verts);
    tp.torso = make_torso(g, p, &tp.virtual_edges);
    out.push_back(std::move(tp));
  }
  return out;
}

CliqueSumSplit clique_sum_split(const Graph& g, const SplitOptions& options) {
  CliqueSumSplit out;
  if (g.vertex_count() == 0) return out;
  std::vector<RawPiece> pieces{{g.all_vertices(), {}}};
  std::vector<RawAdhesion> adhesions;
  split_all(g, pieces, adhesions, true, small_separator);
  if (options.split_clique_separators) split_all(g, pieces, adhesions, false, clique_separator);

  const Graph v8 = builtin::v8();
  const Graph prism = builtin::c5xc2();
  std::vector<SumComponent> atoms;
  for (const auto& p : pieces) {
    SumComponent c;
    c.vertices = members(p.verts);
    std::vector<Edge> tv;
    c.torso = make_torso(g, p, &tv);
    c.virtual_edges = tv;
    if (auto td = min_width_decomposition(c.torso, 3)) {
      c.kind = ComponentKind::Treewidth3;
      c.decomposition = std::move(td);
    } else if (auto m = spanning_subgraph_embedding(c.torso, v8)) {
      c.kind = ComponentKind::V8Type;
      c.template_map = std::move(m);
    } else if (auto m2 = spanning_subgraph_embedding(c.torso, prism)) {
      c.kind = ComponentKind::C5xC2Type;
      c.template_map = std::move(m2);
    }
    atoms.push_back(std::move(c));
  }

  const int na = static_cast<int>(atoms.size());
  std::vector<int> group(na);
  std::iota(group.begin(), group.end(), 0);
  auto find = [&](int x) {
    while (group[x] != x) x = group[x] = group[group[x]];
    return x;
  };
  if (options.merge_treewidth_pieces) {
    for (const auto& adh : adhesions) {
      if (atoms[adh.a].kind == ComponentKind::Treewidth3 &&
          atoms[adh.b].kind == ComponentKind::Treewidth3) {
        group[find(adh.a)] = find(adh.b);
      }
    }
  }
  std::map<int, int> slot;
  std::vector<std::vector<int>> members_of;
  for (int i = 0; i < na; ++i) {
    const int r = find(i);
    if (!slot.contains(r)) {
      slot[r] = static_cast<int>(members_of.size());
      members_of.emplace_back();
    }
    members_of[slot[r]].push_back(i);
  }

  for (const auto& ids : members_of) {
    if (ids.size() == 1) {
      out.components.push_back(atoms[ids[0]]);
      continue;
    }
    RawPiece merged;
    for (int i : ids) {
      merged.verts |= atoms[i].mask();
      for (const auto& e : atoms[i].virtual_edges)
        merged.virt.emplace_back(atoms[i].vertices[e.u], atoms[i].vertices[e.v]);
    }
    merged.virt = dedup(merged.virt);
    SumComponent c;
    c.vertices = members(merged.verts);
    std::vector<Edge> tv;
    c.torso = make_torso(g, merged, &tv);
    c.virtual_edges = tv;
    c.kind = ComponentKind::Treewidth3;
    // Join the atoms' decompositions at bags holding each internal separator.
    std::vector<int> index(g.vertex_count(), -1);
    for (std::size_t k = 0; k < c.vertices.size(); ++k) index[c.vertices[k]] = static_cast<int>(k);
    TreeDecomposition td;
    std::map<int, int> offset;
    for (int i : ids) {
      offset[i] = static_cast<int>(td.bags.size());
      const auto& d = *atoms[i].decomposition;
      for (auto bag : d.bags) {
        VertexSet mapped = 0;
        for (int x : members(bag)) mapped |= bit(index[atoms[i].vertices[x]]);
        td.bags.push_back(mapped);
      }
      for (auto [x, y] : d.tree_edges) td.tree_edges.emplace_back(x + offset[i], y + offset[i]);
      if (d.bags.empty()) {
        // Atoms always have at least one vertex; keep a singleton bag.
        VertexSet mapped = 0;
        for (int v : atoms[i].vertices) mapped |= bit(index[v]);
        td.bags.push_back(mapped);
      }
    }
    auto bag_holding = [&](int atom, VertexSet host_sep) {
      VertexSet local = 0;
      for (int x : members(host_sep)) local |= bit(index[x]);
      const int lo = offset[atom];
      const int hi = lo + static_cast<int>(std::max<std::size_t>(1, atoms[atom].decomposition->bags.size()));
      for (int b = lo; b < hi; ++b)
        if ((local & ~td.bags[b]) == 0) return b;
      return lo;
    };
    for (const auto& adh : adhesions) {
      if (find(adh.a) != find(ids[0]) || find(adh.b) != find(ids[0])) continue;
      td.tree_edges.emplace_back(bag_holding(adh.a, adh.sep), bag_holding(adh.b, adh.sep));
    }
    td.width = -1;
    for (auto bag : td.bags) td.width = std::max(td.width, popcount(bag) - 1);
    c.decomposition = std::move(td);
    out.components.push_back(std::move(c));
  }
  for (const auto& adh : adhesions) {
    const int a = slot[find(adh.a)], b = slot[find(adh.b)];
    if (a == b) continue;
    out.adhesions.push_back({a, b, adh.sep});
  }
  return out;
}

}  // namespace gramdim
