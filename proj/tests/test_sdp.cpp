#include <gtest/gtest.h>

#include <cmath>

#include "gramdim/completion.hpp"
#include "gramdim/io.hpp"
#include "gramdim/sdp.hpp"
#include "gramdim/stress.hpp"
#include "support.hpp"

using namespace gramdim;
using namespace gramdim::testing;

namespace {

SdpProblem unit_diagonal(int n) {
  SdpProblem p;
  p.n = n;
  p.objective = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) p.add(entry_selector(n, i, i), 1.0);
  return p;
}

}  // namespace

TEST(Solve, TwoByTwoCorrelation) {
  SdpProblem p = unit_diagonal(2);
  p.objective = entry_selector(2, 0, 1);
  const auto s = solve(p);
  ASSERT_EQ(s.status, SdpStatus::Optimal);
  EXPECT_NEAR(s.primal_objective, 1.0, 1e-8);
  EXPECT_LE((s.x - Matrix::Ones(2, 2)).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(Solve, MaxCutTriangle) {
  SdpProblem p = unit_diagonal(3);
  Matrix l = 2 * Matrix::Identity(3, 3) - (Matrix::Ones(3, 3) - Matrix::Identity(3, 3));
  p.objective = 0.25 * l;
  const auto s = solve(p);
  ASSERT_EQ(s.status, SdpStatus::Optimal);
  EXPECT_NEAR(s.primal_objective, 9.0 / 4.0, 1e-8);
  EXPECT_NEAR(s.x(0, 1), -0.5, 1e-6);
}

TEST(Solve, InfeasibleToy) {
  SdpProblem p;
  p.n = 1;
  p.objective = Matrix::Zero(1, 1);
  p.add(Matrix::Ones(1, 1), -1.0);
  const auto s = solve(p);
  EXPECT_EQ(s.status, SdpStatus::InfeasibleCertificate);
  ASSERT_EQ(s.y.size(), 1);
  EXPECT_LT(s.y(0) * -1.0, 0.0);
  EXPECT_GE(s.y(0), 0.0);
}

TEST(Solve, RandomStrictlyFeasible) {
  Rng rng(100);
  for (int t = 0; t < 200; ++t) {
    const int n = uniform_int(rng, 2, 10);
    const int m = uniform_int(rng, 1, std::min(20, n * (n + 1) / 2));
    const Matrix x0 = random_psd(n, n, rng) + 0.1 * Matrix::Identity(n, n);
    SdpProblem p;
    p.n = n;
    Vector y0(m);
    for (int j = 0; j < m; ++j) {
      const Matrix a = random_symmetric(n, rng);
      p.add(a, (a.cwiseProduct(x0)).sum());
      y0(j) = uniform_real(rng, -1, 1);
    }
    Matrix c = -random_psd(n, n, rng) - 0.1 * Matrix::Identity(n, n);
    for (int j = 0; j < m; ++j) c += y0(j) * p.constraints[j];
    p.objective = c;
    const auto s = solve(p);
    ASSERT_EQ(s.status, SdpStatus::Optimal) << "trial " << t;
    double bmax = 0;
    for (double v : p.rhs) bmax = std::max(bmax, std::abs(v));
    EXPECT_LE(s.primal_residual, 1e-8 * (1 + bmax)) << "trial " << t;
    EXPECT_LE(s.dual_residual, 1e-8 * (1 + max_abs(c))) << "trial " << t;
    EXPECT_LE(std::abs(s.gap), 1e-8 * (1 + std::abs(s.primal_objective) + std::abs(s.dual_objective))) << "trial " << t;
  }
}

TEST(Flatten, PathCollinear) {
  PartialMatrix a(builtin::path(3), Vector::Ones(3), {1.0, 1.0});
  const auto f = flatten(a, Edge(0, 2));
  EXPECT_NEAR(f.value, 1.0, 1e-8);
  EXPECT_EQ(f.configuration.dimension(), 1);
}

TEST(Flatten, CanonicalK222) {
  const auto f = flatten(canonical_k222_instance(), Edge(0, 3));
  EXPECT_EQ(numerical_rank(f.x, 1e-7), 5);
  EXPECT_NEAR(f.x(0, 3), 0.0, 1e-7);
  EXPECT_FALSE(f.strictly_feasible);
  EXPECT_TRUE(check_stress(f.stress, f.configuration).ok());
}

TEST(Flatten, SquareOfOrthogonalVectors) {
  PartialMatrix a(builtin::cycle(4), Vector::Ones(4), {0, 0, 0, 0});
  const auto f = flatten(a, Edge(0, 2));
  EXPECT_NEAR(f.value, 1.0, 1e-7);
  EXPECT_TRUE(check_stress(f.stress, f.configuration).ok());
}

TEST(Flatten, Errors) {
  PartialMatrix a(builtin::path(3), Vector::Ones(3), {0.5, 0.5});
  EXPECT_THROW(flatten(a, Edge(0, 1)), InvalidInput);
  PartialMatrix bad_path(builtin::path(4), Vector::Ones(4), {1.5, 0.0, 0.0});
  EXPECT_THROW(flatten(bad_path, Edge(0, 3)), InfeasibleInstance);
}

TEST(Flatten, StressCertificatesOnRandomInstances) {
  Rng rng(12);
  const std::vector<Graph> graphs = {builtin::v8(), builtin::c5xc2(), builtin::cycle(5), builtin::wheel(5)};
  for (const auto& g : graphs)
    for (int t = 0; t < 4; ++t) {
      const int n = g.vertex_count();
      const auto a = project(random_psd(n, uniform_int(rng, 2, n), rng), g);
      Edge e0;
      do {
        e0 = Edge(uniform_int(rng, 0, n - 1), uniform_int(rng, 0, n - 1));
      } while (e0.u == e0.v || g.has_edge(e0));
      const auto f = flatten(a, e0);
      const auto chk = check_stress(f.stress, f.configuration);
      EXPECT_TRUE(chk.ok()) << "eq " << chk.equilibrium << " eig " << chk.min_eigenvalue;
      EXPECT_EQ(chk.support_violation, 0.0);
      EXPECT_LE(chk.rank_x + chk.rank_omega, n);
      EXPECT_LE(a.residual(f.configuration.gram()), 1e-8 * std::max(1.0, max_abs(a.known())));
    }
}

TEST(Farkas, FixedAllOnes) {
  SdpProblem p = unit_diagonal(2);
  p.add(entry_selector(2, 0, 1), 1.0);
  const auto cert = farkas_certificate(p, Matrix::Ones(2, 2));
  ASSERT_TRUE(cert);
  const Matrix& w = cert->omega;
  EXPECT_NEAR(w(0, 0), w(1, 1), 1e-8 * max_abs(w));
  EXPECT_NEAR(w(0, 1), -w(0, 0), 1e-8 * max_abs(w));
  EXPECT_GT(w(0, 0), 0.0);
}

TEST(Farkas, CanonicalK222) {
  const auto a = canonical_k222_instance();
  const SdpProblem p = completion_problem(a);
  const Matrix x = uniqueness_probe(a).completion;
  const auto cert = farkas_certificate(p, x);
  ASSERT_TRUE(cert);
  EXPECT_LE((x * cert->omega).cwiseAbs().maxCoeff(), 1e-6 * max_abs(cert->omega));
  EXPECT_LE(numerical_rank(cert->omega / max_abs(cert->omega), 1e-7), 1);
}

TEST(Farkas, StrictlyFeasibleHasNone) {
  EXPECT_FALSE(farkas_certificate(unit_diagonal(3), Matrix::Identity(3, 3)));
}

TEST(PinnedFlatten, NothingFree) {
  const auto a = PartialMatrix(builtin::path(2), Vector::Ones(2), {0.5});
  const auto c = gram_factor(a.known());
  EXPECT_THROW(pinned_flatten(c, {0, 1}, a, Edge(0, 1)), InvalidInput);
}

TEST(PinnedFlatten, TriangleAndOneFreeVertex) {
  // Pinned p0 = (1,0), p1 = (2,0), p2 = (0,1); vertex 3 sees 0 and 1 and
  // stretches towards 2, so p3 = (0.6, 0.8).
  Graph g(4, {{0, 1}, {0, 2}, {1, 2}, {0, 3}, {1, 3}});
  Vector diag(4);
  diag << 1, 4, 1, 1;
  Configuration pinned;
  pinned.vectors = Matrix(3, 2);
  pinned.vectors << 1, 0, 2, 0, 0, 1;
  // edges sorted: (0,1) (0,2) (0,3) (1,2) (1,3)
  const PartialMatrix b(g, diag, {2.0, 0.0, 0.6, 0.0, 1.2});
  const auto r = pinned_flatten(pinned, {0, 1, 2}, b, Edge(2, 3));
  EXPECT_NEAR(r.configuration.vectors.row(3).dot(r.configuration.vectors.row(2)), 0.8, 1e-7);
  EXPECT_LE(b.residual(r.configuration.gram()), 1e-7);
  EXPECT_TRUE(check_pinned(r).ok());
}

TEST(PinnedFlatten, PrismExceptionalCase) {
  const Graph g = builtin::c5xc2();
  Rng rng(31);
  const auto a = project(random_psd(10, 10, rng), g);
  const Matrix x = *central_completion(a);
  const std::vector<int> v1 = {2, 3, 4, 5, 6, 7};
  Configuration full = gram_factor(x);
  Configuration pinned;
  pinned.vectors = Matrix(v1.size(), full.dimension());
  for (std::size_t k = 0; k < v1.size(); ++k) pinned.vectors.row(k) = full.vectors.row(v1[k]);
  const auto r = pinned_flatten(pinned, v1, a, Edge(3, 8));
  EXPECT_TRUE(check_pinned(r).ok());
  EXPECT_LE(a.residual(r.configuration.gram()), 1e-6);
  const std::vector<int> v2 = {0, 1, 8, 9};
  ASSERT_EQ(r.free_vertices, v2);
  double inner = 0;
  for (std::size_t i = 0; i < v2.size(); ++i)
    for (std::size_t j = i; j < v2.size(); ++j)
      if (i == j || g.has_edge(v2[i], v2[j])) inner = std::max(inner, std::abs(r.stress.matrix(v2[i], v2[j])));
  EXPECT_GT(inner, 1e-6 * max_abs(r.stress.matrix));
}

TEST(RankReduce, TraceOne) {
  const Matrix x = Matrix::Identity(3, 3) / 3.0;
  const Matrix y = rank_reduce(x, {Matrix::Identity(3, 3)});
  EXPECT_EQ(numerical_rank(y), 1);
  EXPECT_NEAR(y.trace(), 1.0, 1e-10);
  EXPECT_GE(min_eigenvalue(y), -1e-10);
}

TEST(RankReduce, RankOneUnchanged) {
  Vector v(3);
  v << 1, 2, 3;
  const Matrix x = v * v.transpose();
  EXPECT_LE((rank_reduce(x, {Matrix::Identity(3, 3)}) - x).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(RankReduce, UniqueFeasiblePoint) {
  std::vector<Matrix> cons;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) cons.push_back(entry_selector(3, i, j));
  const Matrix y = rank_reduce(Matrix::Ones(3, 3), cons);
  EXPECT_LE((y - Matrix::Ones(3, 3)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(RankReduce, BarvinokBoundAndResiduals) {
  Rng rng(44);
  for (int t = 0; t < 100; ++t) {
    const int n = uniform_int(rng, 2, 9);
    const int m = uniform_int(rng, 1, n * (n + 1) / 2);
    const Matrix x = random_psd(n, n, rng);
    std::vector<Matrix> cons;
    for (int j = 0; j < m; ++j) cons.push_back(random_symmetric(n, rng));
    const Matrix y = rank_reduce(x, cons);
    EXPECT_LE(numerical_rank(y), barvinok_rank(m));
    EXPECT_GE(min_eigenvalue(y), -1e-8 * max_abs(x));
    for (const auto& a : cons) {
      EXPECT_LE(std::abs(a.cwiseProduct(y).sum() - a.cwiseProduct(x).sum()), 1e-8 * (1 + max_abs(x)) * n);
    }
  }
}

TEST(ProblemText, RoundTrip) {
  SdpProblem p = unit_diagonal(3);
  p.objective = entry_selector(3, 0, 2);
  p.add(entry_selector(3, 1, 2), 0.25);
  const SdpProblem q = load_problem(dump_problem(p));
  ASSERT_EQ(q.n, 3);
  ASSERT_EQ(q.m(), p.m());
  for (int j = 0; j < p.m(); ++j) {
    EXPECT_EQ(q.rhs[j], p.rhs[j]);
    EXPECT_EQ(q.constraints[j], p.constraints[j]);
  }
  EXPECT_EQ(q.objective, p.objective);
  EXPECT_THROW(load_problem("2 1\n1.0"), InvalidInput);
}

TEST(Flatten, DegenerateDataStillCarriesStress) {
  Rng rng(31);
  for (int found = 0; found < 5;) {
    const auto a = project(random_psd(8, 2, rng), builtin::v8());
    const auto f = flatten(a, Edge(0, 3));
    if (f.strictly_feasible) continue;
    ++found;
    ASSERT_TRUE(f.certified);
    const auto c = check_stress(f.stress, f.configuration);
    EXPECT_TRUE(c.nonzero);
    EXPECT_EQ(c.support_violation, 0.0);
    EXPECT_GE(c.min_eigenvalue, -1e-12);
    EXPECT_LE(c.rank_x + c.rank_omega, 8);
    EXPECT_LE(a.residual(f.x), 1e-8 * max_abs(a.known()));
  }
}

TEST(SolveOnFace, ExposingMatrixAnnihilatesFeasiblePoints) {
  Rng rng(32);
  PartialMatrix a;
  FaceSolution fs;
  do {
    a = project(random_psd(8, 2, rng), builtin::v8());
    fs = solve_on_face(completion_problem(a));
  } while (fs.strictly_feasible);
  ASSERT_TRUE(fs.exposing);
  const Matrix& om = *fs.exposing;
  EXPECT_GE(min_eigenvalue(om), -1e-12);
  EXPECT_LE(max_abs(om * fs.face_basis), 1e-12);
  EXPECT_LE(std::abs(om.cwiseProduct(a.known()).sum()), 1e-12);
}
