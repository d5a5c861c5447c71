#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gramdim/numeric.hpp"

namespace gramdim {

/// One target value: p_i . p_j, or |p_i - p_j|^2 when `distance` is set.
struct Measurement {
  int i = 0;
  int j = 0;
  double target = 0;
  bool distance = false;
};

struct FitOptions {
  int restarts = 100;
  std::uint64_t seed = 0;
  int max_iterations = 400;
  /// Success threshold on the sum of squared residuals.
  double success = 1e-12;
  /// Optional starting factor (n x any); restart 0 uses it truncated or
  /// padded to k columns, later restarts perturb it before going random.
  std::optional<Matrix> warm_start;
};

struct FitResult {
  Matrix factor;  // n x k
  double objective = 0;
  int restart = 0;
};

/// Levenberg-Marquardt over n x k factors with seeded random restarts.
/// Returns the first factor whose objective is <= options.success, or
/// nullopt; the best objective seen is written to *best when given.
std::optional<FitResult> fit_factor(int n, int k, const std::vector<Measurement>& data,
                                    const FitOptions& options, double* best = nullptr);

/// Seed for restart r derived from a master seed (splitmix64).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

}  // namespace gramdim
