#include "gramdim/io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"

namespace gramdim {

using nlohmann::json;

void RunConfig::validate() const {
  if (!(tol > 0) || !(rank_tol > 0)) throw InvalidInput("tolerances must be positive");
  if (restarts < 1) throw InvalidInput("restarts must be at least 1");
  if (step_budget < 0) throw InvalidInput("step budget must be nonnegative");
}

FlattenFoldOptions RunConfig::fold_options() const {
  FlattenFoldOptions o;
  o.seed = seed;
  o.tol = tol;
  o.rank_tol = rank_tol;
  o.restarts = restarts;
  o.step_budget = step_budget;
  return o;
}

namespace {

std::string dump(const json& j, bool pretty) { return pretty ? j.dump(2) : j.dump(); }

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

const json& field(const json& j, const char* name, const std::string& where) {
  if (!j.is_object() || !j.contains(name)) throw ParseError(where + ": missing field '" + name + "'");
  return j.at(name);
}

int as_index(const json& j, int n, const std::string& where) {
  if (!j.is_number_integer()) throw ParseError(where + ": vertex index must be an integer");
  const auto v = j.get<long long>();
  if (v < 0 || v >= n) throw ParseError(where + ": vertex index " + std::to_string(v) + " out of range");
  return static_cast<int>(v);
}

double as_number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ParseError(where + ": number expected");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ParseError(where + ": value is not finite");
  return v;
}

Graph graph_of(const json& j, const std::string& where) {
  if (j.is_string()) {
    auto g = builtin::by_name(j.get<std::string>());
    if (!g) throw ParseError(where + ": unknown built-in graph '" + j.get<std::string>() + "'");
    return *g;
  }
  const json& nj = field(j, "n", where);
  if (!nj.is_number_integer() || nj.get<long long>() < 0 || nj.get<long long>() > kMaxVertices) {
    throw ParseError(where + ".n: integer in [0, " + std::to_string(kMaxVertices) + "] expected");
  }
  const int n = nj.get<int>();
  const json& ej = field(j, "edges", where);
  if (!ej.is_array()) throw ParseError(where + ".edges: array expected");
  Graph g(n);
  for (std::size_t k = 0; k < ej.size(); ++k) {
    const std::string at = where + ".edges[" + std::to_string(k) + "]";
    if (!ej[k].is_array() || ej[k].size() != 2) throw ParseError(at + ": pair [i, j] expected");
    const int u = as_index(ej[k][0], n, at);
    const int v = as_index(ej[k][1], n, at);
    if (u == v) throw ParseError(at + ": loops are not allowed");
    if (g.has_edge(u, v)) throw ParseError(at + ": duplicate edge");
    g.add_edge(u, v);
  }
  if (j.contains("labels")) {
    const json& lj = j.at("labels");
    if (!lj.is_array() || lj.size() != static_cast<std::size_t>(n)) {
      throw ParseError(where + ".labels: one string per vertex expected");
    }
    std::vector<std::string> labels;
    for (const auto& l : lj) {
      if (!l.is_string()) throw ParseError(where + ".labels: strings expected");
      labels.push_back(l.get<std::string>());
    }
    g = Graph(n, g.edges(), labels);
  }
  return g;
}

json graph_json(const Graph& g) {
  json edges = json::array();
  for (const auto& e : g.edges()) edges.push_back({e.u, e.v});
  return json{{"n", g.vertex_count()}, {"edges", edges}, {"labels", g.labels()}};
}

// Entry list over the edges of g, parallel to g.edges().
std::vector<double> edge_values(const json& j, const Graph& g, const std::string& where) {
  const auto es = g.edges();
  std::vector<double> vals(es.size(), 0.0);
  std::vector<bool> seen(es.size(), false);
  if (!j.is_array()) throw ParseError(where + ": array expected");
  for (std::size_t k = 0; k < j.size(); ++k) {
    const std::string at = where + "[" + std::to_string(k) + "]";
    const int u = as_index(field(j[k], "i", at), g.vertex_count(), at);
    const int v = as_index(field(j[k], "j", at), g.vertex_count(), at);
    const Edge e(u, v);
    const auto it = std::lower_bound(es.begin(), es.end(), e);
    if (u == v || it == es.end() || *it != e) {
      throw ParseError(at + ": pair (" + std::to_string(u) + "," + std::to_string(v) + ") is not an edge");
    }
    const auto idx = it - es.begin();
    if (seen[idx]) throw ParseError(at + ": duplicate entry");
    seen[idx] = true;
    vals[idx] = as_number(field(j[k], "v", at), at + ".v");
  }
  for (std::size_t k = 0; k < es.size(); ++k)
    if (!seen[k]) {
      throw ParseError(where + ": no entry for edge (" + std::to_string(es[k].u) + "," + std::to_string(es[k].v) + ")");
    }
  return vals;
}

json entries_json(const Graph& g, const std::vector<double>& vals) {
  json out = json::array();
  const auto es = g.edges();
  for (std::size_t k = 0; k < es.size(); ++k) out.push_back({{"i", es[k].u}, {"j", es[k].v}, {"v", vals[k]}});
  return out;
}

json matrix_rows(const Matrix& m) {
  json rows = json::array();
  const double floor = 1e-14 * std::max(1.0, max_abs(m));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(std::abs(m(i, c)) <= floor ? 0.0 : m(i, c));
    rows.push_back(row);
  }
  return rows;
}

std::optional<std::string> read_file(const std::string& source) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(source, ec)) return std::nullopt;
  std::ifstream in(source);
  if (!in) throw ParseError("cannot read " + source);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

bool looks_like_json(const std::string& s) {
  const auto pos = s.find_first_not_of(" \t\r\n");
  return pos != std::string::npos && (s[pos] == '{' || s[pos] == '[');
}

}  // namespace

Graph graph_from_json(const std::string& text) { return graph_of(parse_text(text), "graph"); }

std::string graph_to_json(const Graph& g, bool pretty) { return dump(graph_json(g), pretty); }

PartialMatrix instance_from_json(const std::string& text) {
  const json j = parse_text(text);
  const Graph g = graph_of(field(j, "graph", "instance"), "instance.graph");
  Vector diag = Vector::Ones(g.vertex_count());
  if (j.contains("diag")) {
    const json& dj = j.at("diag");
    if (!dj.is_array() || dj.size() != static_cast<std::size_t>(g.vertex_count())) {
      throw ParseError("instance.diag: one value per vertex expected");
    }
    for (std::size_t i = 0; i < dj.size(); ++i) diag(i) = as_number(dj[i], "instance.diag[" + std::to_string(i) + "]");
  }
  const json empty = json::array();
  const json& ej = j.contains("entries") ? j.at("entries") : empty;
  return PartialMatrix(g, diag, edge_values(ej, g, "instance.entries"));
}

std::string instance_to_json(const PartialMatrix& a, bool pretty) {
  std::vector<double> diag(a.diagonal.data(), a.diagonal.data() + a.diagonal.size());
  json j{{"graph", graph_json(a.graph)}, {"diag", diag}, {"entries", entries_json(a.graph, a.off_diagonal)}};
  return dump(j, pretty);
}

EdmInstance edm_from_json(const std::string& text) {
  const json j = parse_text(text);
  const Graph g = graph_of(field(j, "graph", "edm"), "edm.graph");
  const json empty = json::array();
  const json& ej = j.contains("entries") ? j.at("entries") : empty;
  std::optional<int> apex;
  if (j.contains("apex") && !j.at("apex").is_null()) apex = as_index(j.at("apex"), g.vertex_count(), "edm.apex");
  const auto vals = edge_values(ej, g, "edm.entries");
  for (std::size_t k = 0; k < vals.size(); ++k)
    if (vals[k] < 0) throw ParseError("edm.entries: squared distances must be nonnegative");
  return EdmInstance(g, vals, apex);
}

std::string edm_to_json(const EdmInstance& d, bool pretty) {
  json j{{"graph", graph_json(d.graph)}, {"entries", entries_json(d.graph, d.distances)}};
  j["apex"] = d.apex ? json(*d.apex) : json(nullptr);
  return dump(j, pretty);
}

std::string completion_to_json(const CompletionResult& r, bool pretty) {
  json trail = json::array();
  for (const auto& s : r.certificate_trail) trail.push_back({{"step", s.step}, {"detail", s.detail}});
  json j{{"factor", matrix_rows(r.configuration.vectors)},
         {"rank", r.rank},
         {"residual", r.residual},
         {"trail", trail},
         {"fallback", r.used_fallback}};
  return dump(j, pretty);
}

std::string points_to_json(const Matrix& points, double residual, bool pretty) {
  json j{{"dim", points.cols()}, {"points", matrix_rows(points)}, {"residual", residual}};
  return dump(j, pretty);
}

PartialMatrix canonical_k222_instance() {
  Matrix p = Matrix::Zero(6, 5);
  for (int i = 0; i < 5; ++i) p(i, i) = 1.0;
  p(5, 0) = p(5, 1) = 1.0 / std::sqrt(2.0);
  return project(p * p.transpose(), builtin::k222());
}

PartialMatrix random_instance(const Graph& g, std::uint64_t seed, int rank) {
  const int n = g.vertex_count();
  const int r = rank <= 0 ? n : rank;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix w(n, r);
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < r; ++c) w(i, c) = normal(rng);
  return project(w * w.transpose(), g);
}

Graph load_graph(const std::string& source) {
  if (auto text = read_file(source)) return graph_from_json(*text);
  if (looks_like_json(source)) return graph_from_json(source);
  auto g = builtin::by_name(source);
  if (!g) throw ParseError("graph: '" + source + "' is neither a file nor a built-in name");
  return *g;
}

PartialMatrix load_instance(const std::string& source) {
  if (auto text = read_file(source)) return instance_from_json(*text);
  if (looks_like_json(source)) return instance_from_json(source);
  if (source == "K222") return canonical_k222_instance();
  const auto colon = source.rfind(':');
  if (colon != std::string::npos) {
    auto g = builtin::by_name(source.substr(0, colon));
    const std::string seed = source.substr(colon + 1);
    if (g && !seed.empty() && seed.find_first_not_of("0123456789") == std::string::npos) {
      return random_instance(*g, std::stoull(seed));
    }
  }
  throw ParseError("instance: '" + source + "' is neither a file nor a built-in instance");
}

EdmInstance load_edm(const std::string& source) {
  if (auto text = read_file(source)) return edm_from_json(*text);
  if (looks_like_json(source)) return edm_from_json(source);
  throw ParseError("edm: '" + source + "' is not a file or JSON text");
}

}  // namespace gramdim
