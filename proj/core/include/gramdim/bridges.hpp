#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gramdim/graph.hpp"
#include "gramdim/numeric.hpp"
#include "gramdim/partial_matrix.hpp"

namespace gramdim {

/// Squared distances on the edges of a graph, parallel to graph.edges().
struct EdmInstance {
  Graph graph;
  std::vector<double> distances;
  /// Vertex playing the origin of the covariance map, when there is one.
  std::optional<int> apex;

  EdmInstance() = default;
  EdmInstance(Graph g, std::vector<double> d, std::optional<int> apex_vertex = std::nullopt);

  int size() const { return graph.vertex_count(); }
  double distance(int i, int j) const;
  /// Max error of the squared distances realized by the rows of `points`.
  double residual(const Matrix& points) const;
};

/// Covariance map onto the suspension: d(apex, i) = x_ii and
/// d(i, j) = x_ii + x_jj - 2 x_ij. The apex is the last vertex.
EdmInstance phi(const PartialMatrix& a);
/// Inverse of phi. Throws InvalidInput without an apex adjacent to every vertex.
PartialMatrix phi_inverse(const EdmInstance& d);

/// Points for phi(a) from a Gram configuration of a: the apex sits at 0.
Matrix euclidean_from_gram(const Configuration& c);
/// Gram configuration of phi_inverse(d) from points: translate the apex to 0.
Configuration gram_from_euclidean(const EdmInstance& d, const Matrix& points);

/// Appends an apex with unit diagonal orthogonal to every vertex.
PartialMatrix zero_extension(const ElliptopeVector& x);

/// Realization in R^dim by factor search on squared distances; nullopt when
/// none is found. With an apex, it is translated to the origin.
std::optional<Matrix> realize_edm(const EdmInstance& d, int dim, int restarts = 100, std::uint64_t seed = 0);

/// Smallest dimension <= max_dim with a realization found, else nullopt.
std::optional<int> ed_oracle(const EdmInstance& d, int max_dim, int restarts = 50, std::uint64_t seed = 0);

/// Smallest k <= max_k with a rank-k completion found by factor search.
std::optional<int> gd_oracle(const PartialMatrix& a, int max_k, int restarts = 50, std::uint64_t seed = 0);

struct ArnoldReport {
  bool holds = true;
  int nullity = 0;
  /// Symmetric, zero on the diagonal and the edges, with M X = 0.
  std::optional<Matrix> witness;
};

/// Strong Arnold property of M with respect to g: the only symmetric X
/// supported on the non-edges with M X = 0 is zero. Singular values below
/// tol * sigma_max count as zero. Throws InvalidInput when M has weight on a
/// non-edge.
ArnoldReport check_strong_arnold(const Matrix& m, const Graph& g, double tol = 1e-8);

/// Projection onto g of the projector on ker M. Throws InvalidInput when
/// the strong Arnold property fails.
PartialMatrix nu_lower_bound_instance(const Matrix& m, const Graph& g, double tol = 1e-8);

struct MaxCutReport {
  double sdp_value = 0;
  int sdp_rank = 0;
  int reduced_rank = 0;
  int gd_band = 0;
  Matrix x;
  /// "rank_reduce" or "completion".
  std::string route;
};

/// Solves max 1/4 <L, X> with unit diagonal, then lowers the rank over the
/// optimal face: by rank reduction, or by a rank-4 completion of the
/// diagonal and edge entries when the graph is K5- and K222-minor free and
/// the reduction stops above 4.
MaxCutReport maxcut_demo(const Graph& g, double tol = 1e-7);

/// Graph Laplacian.
Matrix laplacian(const Graph& g);

}  // namespace gramdim
