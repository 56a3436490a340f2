#pragma once

#include <span>
#include <utility>
#include <vector>

#include "minkowski/ifs.hpp"

namespace minkowski {

/// Root tolerance for every Moran-type solve.
inline constexpr double kMoranTolerance = 1e-12;

struct BetaSequence {
  std::vector<double> betas;
  /// Partial sums alpha_j = beta_1 + ... + beta_j.
  std::vector<double> alphas;
  double tolerance = kMoranTolerance;

  double box_dimension() const { return alphas.empty() ? 0.0 : alphas.back(); }
};

struct DimensionFit {
  std::vector<std::pair<double, double>> samples;  // (delta, count)
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;
};

/// Unique s >= 0 with sum r_i^s = 1, by bisection.
double solve_similarity_dimension(std::span<const double> ratios);

/// Solves the level-by-level Moran equations over the projected IFSs.
/// Throws ValidationError when coordinate ordering or neat projection fails.
BetaSequence solve_beta_sequence(const SpongeSystem& sponge);

/// Left-hand side of the level-j equation at the given exponents
/// (betas[0..j-1] are used). Returns the sum, which is 1 at the solution.
double moran_level_sum(const SpongeSystem& sponge, std::size_t j, std::span<const double> betas);

double box_dimension_sponge(const SpongeSystem& sponge);

/// log_m s + log_n (N/s), s = number of distinct second coordinates.
double symbolic_beta(int n, int m, std::span<const std::pair<int, int>> digits);

/// Least-squares slope of log count against -log delta.
DimensionFit fit_box_dimension(std::span<const std::pair<double, double>> samples);

}  // namespace minkowski
