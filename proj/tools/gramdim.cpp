#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "gramdim/bridges.hpp"
#include "gramdim/completion.hpp"
#include "gramdim/io.hpp"
#include "gramdim/minors.hpp"
#include "gramdim/treewidth.hpp"

namespace {

using nlohmann::json;
using namespace gramdim;

constexpr int kOk = 0;
constexpr int kInfeasible = 2;
constexpr int kNotFound = 3;
constexpr int kParse = 4;

struct Output {
  bool as_json = false;
  bool pretty = false;
  std::string path;

  // JSON goes to --output when given; stdout gets the report or the JSON.
  void emit(const json& j, const std::string& report) const {
    const std::string text = pretty ? j.dump(2) : j.dump();
    if (!path.empty()) {
      std::ofstream out(path);
      if (!out) throw std::runtime_error("cannot write " + path);
      out << text << '\n';
    }
    if (as_json || pretty) {
      std::cout << text << '\n';
    } else {
      std::cout << report;
    }
  }
};

std::string band_text(int bound) { return bound >= 5 ? ">=5" : "<=" + std::to_string(bound); }

json witness_json(const MinorWitness& w) {
  json sets = json::array();
  for (auto s : w.branch_sets) sets.push_back(members(s));
  json edges = json::array();
  for (const auto& e : w.connecting_edges) edges.push_back({e.u, e.v});
  return json{{"pattern", to_string(w.pattern)}, {"branch_sets", sets}, {"connecting_edges", edges}};
}

int run_classify(const std::string& source, const Output& out) {
  const Graph g = load_graph(source);
  const GramClassification c = classify_gram_dimension(g);
  std::optional<int> width;
  if (auto td = min_width_decomposition(g, 4)) width = td->width;
  json j{{"n", g.vertex_count()},
         {"m", g.edge_count()},
         {"gd_band", band_text(c.bound())},
         {"gd_bound", c.bound()},
         {"treewidth_band", width ? "=" + std::to_string(*width) : std::string(">4")},
         {"barvinok_bound", barvinok_bound(g)}};
  if (c.witness) j["witness"] = witness_json(*c.witness);
  std::ostringstream os;
  os << "graph: " << g.vertex_count() << " vertices, " << g.edge_count() << " edges\n"
     << "Gram dimension: " << band_text(c.bound()) << '\n';
  if (c.witness) {
    os << "witness: " << to_string(c.witness->pattern) << " minor, branch sets";
    for (auto s : c.witness->branch_sets) {
      os << " {";
      bool first = true;
      for (int v : members(s)) os << (first ? "" : ",") << v, first = false;
      os << '}';
    }
    os << '\n';
  }
  os << "tree-width: " << (width ? std::to_string(*width) : std::string("> 4")) << '\n'
     << "Barvinok bound: " << barvinok_bound(g) << '\n';
  out.emit(j, os.str());
  return kOk;
}

int run_complete(const std::string& source, std::optional<int> target, const RunConfig& cfg, const Output& out) {
  const PartialMatrix a = load_instance(source);
  const int k = target ? *target : classify_gram_dimension(a.graph).bound();
  if (k < 1) throw InvalidInput("--target-k must be at least 1");
  try {
    const CompletionResult r = flatten_and_fold(a, k, cfg.fold_options());
    json j = json::parse(completion_to_json(r));
    j["status"] = "found";
    j["target_k"] = k;
    if (a.size() <= 12) j["unique"] = uniqueness_probe(a).unique;
    std::ostringstream os;
    os << "rank " << r.rank << " completion (target " << k << "), residual " << r.residual
       << (r.used_fallback ? ", via factor-search fallback" : ", certified by the fold toolkit") << '\n';
    if (j.contains("unique")) os << "unique completion: " << (j["unique"].get<bool>() ? "yes" : "no") << '\n';
    for (const auto& s : r.certificate_trail) os << "  " << s.step << ": " << s.detail << '\n';
    out.emit(j, os.str());
    return kOk;
  } catch (const NotFound& e) {
    json j{{"status", "not_found"}, {"target_k", k}, {"detail", e.what()}};
    out.emit(j, std::string(e.what()) + " (not a proof that none exists)\n");
    return kNotFound;
  }
}

int run_realize(const std::string& source, int dim, const RunConfig& cfg, const Output& out) {
  const EdmInstance d = load_edm(source);
  const auto points = realize_edm(d, dim, cfg.restarts, cfg.seed);
  if (!points) {
    json j{{"status", "not_found"}, {"dim", dim}};
    out.emit(j, "no realization found in dimension " + std::to_string(dim) + '\n');
    return kNotFound;
  }
  const double res = d.residual(*points);
  json j = json::parse(points_to_json(*points, res));
  j["status"] = "found";
  std::ostringstream os;
  os << "realization in R^" << dim << ", squared-distance residual " << res << '\n';
  for (Eigen::Index i = 0; i < points->rows(); ++i) {
    os << "  " << i << ":";
    for (Eigen::Index c = 0; c < points->cols(); ++c) os << ' ' << (*points)(i, c);
    os << '\n';
  }
  out.emit(j, os.str());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gram dimension classification and low-rank psd completion"};
  app.require_subcommand(1);
  RunConfig cfg;
  Output out;
  std::string graph_src, instance_src;
  std::optional<int> target_k;
  int dim = 3;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "Master seed");
    sub->add_option("--tol", cfg.tol, "Feasibility tolerance");
    sub->add_option("--restarts", cfg.restarts, "Factor-search restarts");
    sub->add_option("--output", out.path, "Also write the JSON result here");
    sub->add_flag("--json", out.as_json, "Print JSON instead of a report");
    sub->add_flag("--pretty", out.pretty, "Print indented JSON");
  };
  auto* classify = app.add_subcommand("classify", "Gram dimension band of a graph");
  classify->add_option("--graph", graph_src, "JSON file, inline JSON or built-in name")->required();
  common(classify);
  auto* complete = app.add_subcommand("complete", "Low-rank psd completion of a partial matrix");
  complete->add_option("--instance,--graph", instance_src, "JSON file, inline JSON, K222 or <graph>:<seed>")
      ->required();
  complete->add_option("--target-k", target_k, "Target rank (default: classifier bound)");
  common(complete);
  auto* realize = app.add_subcommand("realize-edm", "Euclidean realization of squared distances");
  realize->add_option("--instance,--graph", instance_src, "EDM JSON file or inline JSON")->required();
  realize->add_option("--dim", dim, "Target dimension")->check(CLI::PositiveNumber);
  common(realize);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kParse;
  }
  try {
    cfg.validate();
    if (*classify) return run_classify(graph_src, out);
    if (*complete) return run_complete(instance_src, target_k, cfg, out);
    return run_realize(instance_src, dim, cfg, out);
  } catch (const InfeasibleInstance& e) {
    json j{{"status", "infeasible"}, {"detail", e.what()}};
    if (e.report.violated_clique) j["violated_clique"] = members(e.report.violated_clique);
    std::cerr << "infeasible: " << e.what() << '\n';
    if (out.as_json || out.pretty) std::cout << (out.pretty ? j.dump(2) : j.dump()) << '\n';
    return kInfeasible;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kParse;
  } catch (const InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kParse;
  }
}
