#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gramdim/io.hpp"
#include "json.hpp"
#include "support.hpp"

using namespace gramdim;
using namespace gramdim::testing;
using nlohmann::json;

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

fs::path scratch() {
  const fs::path dir = fs::temp_directory_path() / ("gramdim_cli_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir;
}

Run cli(const std::string& args) {
  static int counter = 0;
  const fs::path out = scratch() / ("out" + std::to_string(counter++) + ".txt");
  const std::string cmd = std::string(GRAMDIM_CLI) + " " + args + " > " + out.string() + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(out);
  std::ostringstream os;
  os << in.rdbuf();
  r.out = os.str();
  return r;
}

std::string write_file(const std::string& name, const std::string& text) {
  const fs::path p = scratch() / name;
  std::ofstream(p) << text;
  return p.string();
}

}  // namespace

TEST(Json, GraphRoundTrip) {
  const Graph g = builtin::v8();
  const Graph h = graph_from_json(graph_to_json(g));
  EXPECT_EQ(h, g);
  EXPECT_EQ(h.labels(), g.labels());
  EXPECT_EQ(graph_from_json(R"({"n":3,"edges":[[0,1],[1,2]]})"), builtin::path(3));
  EXPECT_EQ(graph_from_json(R"("petersen")"), builtin::petersen());
}

TEST(Json, InstanceRoundTrip) {
  Rng rng(1);
  const auto a = project(random_psd(8, 8, rng), builtin::v8());
  const auto b = instance_from_json(instance_to_json(a, true));
  EXPECT_EQ(b.graph, a.graph);
  EXPECT_EQ(b.diagonal, a.diagonal);
  EXPECT_EQ(b.off_diagonal, a.off_diagonal);
}

TEST(Json, ElliptopeShorthand) {
  const auto a = instance_from_json(R"({"graph":"path3","entries":[{"i":0,"j":1,"v":0.5},{"i":2,"j":1,"v":0.25}]})");
  EXPECT_EQ(a.diagonal, Vector::Ones(3));
  EXPECT_EQ(a.entry(1, 2), 0.25);
}

TEST(Json, EdmRoundTrip) {
  const auto d = phi(PartialMatrix(builtin::path(2), Vector::Ones(2), {0.0}));
  const auto e = edm_from_json(edm_to_json(d));
  EXPECT_EQ(e.distances, d.distances);
  EXPECT_EQ(e.apex, d.apex);
}

TEST(Json, ParseErrorsNameTheField) {
  const auto message = [](const std::string& text) {
    try {
      instance_from_json(text);
    } catch (const ParseError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_NE(message("{").find("invalid JSON"), std::string::npos);
  EXPECT_NE(message(R"({"entries":[]})").find("graph"), std::string::npos);
  EXPECT_NE(message(R"({"graph":"path3","entries":[{"i":0,"j":1,"v":0.5}]})").find("no entry for edge (1,2)"),
            std::string::npos);
  EXPECT_NE(message(R"({"graph":"path3","entries":[{"i":0,"j":2,"v":0.5}]})").find("entries[0]"),
            std::string::npos);
  EXPECT_NE(message(R"({"graph":{"n":2,"edges":[[0,0]]}})").find("edges[0]"), std::string::npos);
  EXPECT_NE(message(R"({"graph":"path2","diag":[1],"entries":[{"i":0,"j":1,"v":0}]})").find("diag"),
            std::string::npos);
  EXPECT_NE(message(R"({"graph":"nope"})").find("nope"), std::string::npos);
  EXPECT_THROW(graph_from_json(R"({"n":2,"edges":[[0,1]],"labels":["a"]})"), ParseError);
}

TEST(Json, CompletionShape) {
  const auto r = complete_chordal(PartialMatrix(builtin::path(3), Vector::Ones(3), {0.0, 0.0}));
  const json j = json::parse(completion_to_json(r));
  EXPECT_EQ(j.at("rank"), 2);
  EXPECT_EQ(j.at("factor").size(), 3u);
  EXPECT_TRUE(j.at("trail").is_array());
  EXPECT_TRUE(j.contains("residual"));
}

TEST(Loaders, BuiltinsAndSeeds) {
  EXPECT_EQ(load_graph("C5xC2"), builtin::c5xc2());
  const auto k = load_instance("K222");
  EXPECT_EQ(k.graph, builtin::k222());
  const auto a = load_instance("V8:5");
  const auto b = load_instance("V8:5");
  EXPECT_EQ(a.off_diagonal, b.off_diagonal);
  EXPECT_NE(load_instance("V8:6").off_diagonal, a.off_diagonal);
  EXPECT_THROW(load_instance("V8:x"), ParseError);
  EXPECT_THROW(load_graph("no-such-graph"), ParseError);
  const std::string path = write_file("g.json", graph_to_json(builtin::cycle(5)));
  EXPECT_EQ(load_graph(path), builtin::cycle(5));
}

TEST(RunConfig, DefaultsAndValidation) {
  RunConfig c;
  EXPECT_EQ(c.tol, 1e-8);
  EXPECT_EQ(c.rank_tol, 1e-7);
  EXPECT_EQ(c.restarts, 100);
  EXPECT_EQ(c.step_budget, 50);
  EXPECT_NO_THROW(c.validate());
  c.tol = 0;
  EXPECT_THROW(c.validate(), InvalidInput);
  c = RunConfig{};
  c.restarts = 0;
  EXPECT_THROW(c.validate(), InvalidInput);
  c = RunConfig{};
  c.seed = 9;
  EXPECT_EQ(c.fold_options().seed, 9u);
}

TEST(Cli, Classify) {
  auto r = cli("classify --graph K5 --json");
  ASSERT_EQ(r.code, 0);
  json j = json::parse(r.out);
  EXPECT_EQ(j.at("gd_band"), ">=5");
  EXPECT_EQ(j.at("witness").at("pattern"), "K5");
  r = cli("classify --graph V8 --json");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(json::parse(r.out).at("gd_band"), "<=4");
  r = cli("classify --graph path3");
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("<=2"), std::string::npos);
}

TEST(Cli, CompleteK222) {
  auto r = cli("complete --instance K222 --target-k 5 --json");
  ASSERT_EQ(r.code, 0);
  const json j = json::parse(r.out);
  EXPECT_EQ(j.at("rank"), 5);
  EXPECT_EQ(j.at("unique"), true);
  EXPECT_EQ(cli("complete --instance K222 --target-k 4 --json").code, 3);
}

TEST(Cli, CompleteV8) {
  const auto r = cli("complete --instance V8:3 --target-k 4 --seed 1 --json");
  ASSERT_EQ(r.code, 0);
  const json j = json::parse(r.out);
  EXPECT_LE(j.at("rank").get<int>(), 4);
  EXPECT_LE(j.at("residual").get<double>(), 1e-6);
  EXPECT_FALSE(j.at("trail").empty());
}

TEST(Cli, InfeasibleExitCode) {
  const std::string path = write_file(
      "bad.json", R"({"graph":"K3","entries":[{"i":0,"j":1,"v":-1},{"i":0,"j":2,"v":-1},{"i":1,"j":2,"v":-1}]})");
  const auto r = cli("complete --instance " + path + " --json");
  EXPECT_EQ(r.code, 2);
  const json j = json::parse(r.out);
  EXPECT_EQ(j.at("violated_clique"), json({0, 1, 2}));
}

TEST(Cli, ParseErrorExitCode) {
  const std::string path = write_file("missing.json", R"({"graph":"path3","entries":[{"i":0,"j":1,"v":0.5}]})");
  EXPECT_EQ(cli("complete --instance " + path).code, 4);
  EXPECT_EQ(cli("classify --graph nonsense").code, 4);
  EXPECT_EQ(cli("classify").code, 4);
  EXPECT_EQ(cli("complete --instance K222 --tol -1").code, 4);
}

TEST(Cli, ByteIdenticalOutput) {
  const auto a = cli("complete --instance C5xC2:11 --seed 4 --json");
  const auto b = cli("complete --instance C5xC2:11 --seed 4 --json");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  const std::string file = (scratch() / "written.json").string();
  const auto c = cli("complete --instance C5xC2:11 --seed 4 --json --output " + file);
  std::ifstream in(file);
  std::ostringstream os;
  os << in.rdbuf();
  EXPECT_EQ(c.out, a.out);
  EXPECT_FALSE(os.str().empty());
}

TEST(Cli, RealizeEdm) {
  const std::string square = write_file(
      "square.json",
      R"({"graph":"C4","entries":[{"i":0,"j":1,"v":1},{"i":1,"j":2,"v":1},{"i":2,"j":3,"v":1},{"i":0,"j":3,"v":1}]})");
  auto r = cli("realize-edm --instance " + square + " --dim 2 --json");
  ASSERT_EQ(r.code, 0);
  const json j = json::parse(r.out);
  EXPECT_EQ(j.at("dim"), 2);
  EXPECT_LE(j.at("residual").get<double>(), 1e-8);
  const std::string tri = write_file(
      "tri.json", R"({"graph":"K3","entries":[{"i":0,"j":1,"v":1},{"i":1,"j":2,"v":1},{"i":0,"j":2,"v":1}]})");
  r = cli("realize-edm --instance " + tri + " --dim 1 --json");
  EXPECT_EQ(r.code, 3);
  EXPECT_EQ(json::parse(r.out).at("status"), "not_found");
}

TEST(Cli, RealizeMinorFreeInThree) {
  Rng rng(2);
  const Graph g = random_partial_3tree(8, 0.8, rng);
  const Matrix pts = random_factor(8, 6, rng);
  std::vector<double> d;
  for (const auto& e : g.edges()) d.push_back((pts.row(e.u) - pts.row(e.v)).squaredNorm());
  const std::string path = write_file("minor_free.json", edm_to_json(EdmInstance(g, d)));
  const auto r = cli("realize-edm --instance " + path + " --dim 3 --json");
  ASSERT_EQ(r.code, 0);
  EXPECT_LE(json::parse(r.out).at("residual").get<double>(), 1e-8);
}
