#include "gramdim/factor_search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace gramdim {

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

class Problem {
 public:
  Problem(int n, int k, const std::vector<Measurement>& data) : n_(n), k_(k), data_(data) {}

  Vector residuals(const Matrix& p) const {
    Vector r(data_.size());
    for (std::size_t m = 0; m < data_.size(); ++m) {
      const auto& d = data_[m];
      if (d.distance) {
        r(m) = (p.row(d.i) - p.row(d.j)).squaredNorm() - d.target;
      } else {
        r(m) = p.row(d.i).dot(p.row(d.j)) - d.target;
      }
    }
    return r;
  }

  Matrix jacobian(const Matrix& p) const {
    Matrix jac = Matrix::Zero(data_.size(), n_ * k_);
    for (std::size_t m = 0; m < data_.size(); ++m) {
      const auto& d = data_[m];
      for (int c = 0; c < k_; ++c) {
        if (d.distance) {
          const double diff = 2.0 * (p(d.i, c) - p(d.j, c));
          jac(m, d.i * k_ + c) += diff;
          jac(m, d.j * k_ + c) -= diff;
        } else {
          jac(m, d.i * k_ + c) += p(d.j, c);
          jac(m, d.j * k_ + c) += p(d.i, c);
        }
      }
    }
    return jac;
  }

  // Levenberg-Marquardt from p; returns final objective and updates p.
  double minimize(Matrix& p, int max_iterations, double stop) const {
    Vector r = residuals(p);
    double f = r.squaredNorm();
    double lambda = 1e-3;
    int flat = 0;
    for (int it = 0; it < max_iterations && f > stop; ++it) {
      const Matrix jac = jacobian(p);
      const Matrix jtj = jac.transpose() * jac;
      const Vector g = jac.transpose() * r;
      bool improved = false;
      for (int tries = 0; tries < 12 && !improved; ++tries) {
        Matrix a = jtj;
        a.diagonal().array() += lambda * (jtj.diagonal().array() + 1e-12);
        a.diagonal().array() += 1e-14;
        const Vector step = a.ldlt().solve(-g);
        Matrix cand = p;
        for (int i = 0; i < n_; ++i)
          for (int c = 0; c < k_; ++c) cand(i, c) += step(i * k_ + c);
        const Vector rc = residuals(cand);
        const double fc = rc.squaredNorm();
        if (std::isfinite(fc) && fc < f) {
          flat = (f - fc < 1e-10 * f) ? flat + 1 : 0;
          p = cand;
          r = rc;
          f = fc;
          lambda = std::max(lambda / 3.0, 1e-15);
          improved = true;
        } else {
          lambda *= 4.0;
        }
      }
      if (!improved || lambda > 1e14 || flat > 20) break;
    }
    return f;
  }

 private:
  int n_;
  int k_;
  const std::vector<Measurement>& data_;
};

Matrix fit_columns(const Matrix& m, int k) {
  Matrix out = Matrix::Zero(m.rows(), k);
  const int c = static_cast<int>(std::min<Eigen::Index>(k, m.cols()));
  out.leftCols(c) = m.leftCols(c);
  return out;
}

}  // namespace

std::optional<FitResult> fit_factor(int n, int k, const std::vector<Measurement>& data, const FitOptions& options,
                                    double* best) {
  if (k < 1) throw InvalidInput("fit_factor: k must be at least 1");
  for (const auto& d : data)
    if (d.i < 0 || d.j < 0 || d.i >= n || d.j >= n) throw InvalidInput("fit_factor: measurement index out of range");
  const Problem prob(n, k, data);
  double scale = 0;
  for (const auto& d : data) scale += std::abs(d.target);
  scale = data.empty() ? 1.0 : std::max(1e-6, scale / data.size());
  const double sigma = std::sqrt(scale / k);
  double best_seen = std::numeric_limits<double>::infinity();
  const int warm_tries = options.warm_start ? std::max(1, options.restarts / 2) : 0;
  for (int r = 0; r < std::max(1, options.restarts); ++r) {
    std::mt19937_64 rng(derive_seed(options.seed, r));
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix p(n, k);
    if (r < warm_tries) {
      p = fit_columns(*options.warm_start, k);
      const double noise = (r == 0) ? 0.0 : sigma * 1e-3 * std::pow(4.0, std::min(r - 1, 8));
      for (int i = 0; i < n; ++i)
        for (int c = 0; c < k; ++c) p(i, c) += noise * normal(rng);
    } else {
      for (int i = 0; i < n; ++i)
        for (int c = 0; c < k; ++c) p(i, c) = sigma * normal(rng);
    }
    const double f = prob.minimize(p, options.max_iterations, options.success * 1e-4);
    best_seen = std::min(best_seen, f);
    if (f <= options.success) {
      if (best) *best = f;
      return FitResult{p, f, r};
    }
  }
  if (best) *best = best_seen;
  return std::nullopt;
}

}  // namespace gramdim
