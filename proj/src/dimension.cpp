#include "minkowski/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <tuple>

#include <fmt/format.h>

#include "minkowski/errors.hpp"

namespace minkowski {

namespace {

constexpr int kMaxBisections = 200;

// Bisection for a strictly decreasing f with f(lo) >= 1 >= f(hi).
double bisect_decreasing(const std::function<double(double)>& f, double lo, double hi) {
  for (int i = 0; i < kMaxBisections && hi - lo > kMoranTolerance; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) > 1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Canonical ordering so sums are independent of digit order.
using PrefixKey = std::vector<std::tuple<double, double, int>>;

PrefixKey key_of(const std::vector<IntervalMap>& prefix) {
  PrefixKey key;
  for (const auto& map : prefix) key.emplace_back(map.ratio.value(), map.offset.value(), map.orientation);
  return key;
}

std::vector<std::vector<double>> sorted_prefix_ratios(const SpongeSystem& sponge, std::size_t j) {
  auto prefixes = project_ifs(sponge, j);
  std::sort(prefixes.begin(), prefixes.end(),
            [](const auto& a, const auto& b) { return key_of(a) < key_of(b); });
  std::vector<std::vector<double>> out;
  out.reserve(prefixes.size());
  for (const auto& prefix : prefixes) {
    std::vector<double> ratios;
    for (const auto& map : prefix) ratios.push_back(map.ratio.value());
    out.push_back(std::move(ratios));
  }
  return out;
}

double level_sum(const std::vector<std::vector<double>>& prefixes, std::span<const double> fixed, double last) {
  double sum = 0.0;
  for (const auto& ratios : prefixes) {
    double term = std::pow(ratios.back(), last);
    for (std::size_t k = 0; k < fixed.size(); ++k) term *= std::pow(ratios[k], fixed[k]);
    sum += term;
  }
  return sum;
}

}  // namespace

double solve_similarity_dimension(std::span<const double> ratios) {
  if (ratios.empty()) throw InvalidArgument("solve_similarity_dimension: ratio list is empty");
  double r_max = 0.0;
  for (double r : ratios) {
    if (!(r > 0.0 && r < 1.0)) {
      throw InvalidArgument(fmt::format("solve_similarity_dimension: ratio {} not in (0,1)", r));
    }
    r_max = std::max(r_max, r);
  }
  std::vector<double> sorted(ratios.begin(), ratios.end());
  std::sort(sorted.begin(), sorted.end());
  const double upper = std::log(static_cast<double>(sorted.size())) / std::log(1.0 / r_max);
  if (upper <= 0.0) return 0.0;
  // Equal ratios: the bound is the root.
  if (sorted.front() == sorted.back()) return upper;
  auto f = [&](double s) {
    double sum = 0.0;
    for (double r : sorted) sum += std::pow(r, s);
    return sum;
  };
  return bisect_decreasing(f, 0.0, upper);
}

double moran_level_sum(const SpongeSystem& sponge, std::size_t j, std::span<const double> betas) {
  if (betas.size() < j) throw InvalidArgument("moran_level_sum: not enough exponents");
  const auto prefixes = sorted_prefix_ratios(sponge, j);
  return level_sum(prefixes, betas.first(j - 1), betas[j - 1]);
}

BetaSequence solve_beta_sequence(const SpongeSystem& sponge) {
  if (!validate_coordinate_ordering(sponge)) {
    throw ValidationError(
        "solve_beta_sequence: coordinate ordering condition fails (need |phi'_{a,1}| > ... > |phi'_{a,d}| "
        "for every digit)");
  }
  if (!validate_neat_projection(sponge)) {
    throw ValidationError("solve_beta_sequence: neat projection condition fails (projected IFSs must satisfy the open set "
        "condition with (0,1)^j)");
  }
  BetaSequence out;
  double alpha = 0.0;
  for (std::size_t j = 1; j <= sponge.dimension(); ++j) {
    const auto prefixes = sorted_prefix_ratios(sponge, j);
    double beta = 0.0;
    if (prefixes.size() > 1) {
      double r_max = 0.0;
      for (const auto& ratios : prefixes) r_max = std::max(r_max, ratios.back());
      const double upper = std::log(static_cast<double>(prefixes.size())) / std::log(1.0 / r_max);
      const std::span<const double> fixed(out.betas);
      const bool uniform = std::all_of(prefixes.begin(), prefixes.end(),
                                       [&](const auto& ratios) { return ratios == prefixes.front(); });
      if (uniform) {
        // N * c * r^beta = 1 with c the common weight of the first j-1 levels.
        const double c = level_sum({prefixes.front()}, fixed, 0.0);
        beta = std::max(0.0, std::log(static_cast<double>(prefixes.size()) * c) / std::log(1.0 / prefixes.front().back()));
      } else {
        beta = bisect_decreasing([&](double b) { return level_sum(prefixes, fixed, b); }, 0.0, upper);
      }
    }
    out.betas.push_back(beta);
    alpha += beta;
    out.alphas.push_back(alpha);
  }
  return out;
}

double box_dimension_sponge(const SpongeSystem& sponge) { return solve_beta_sequence(sponge).box_dimension(); }

double symbolic_beta(int n, int m, std::span<const std::pair<int, int>> digits) {
  if (n < 2 || m < 2 || m > n) {
    throw InvalidArgument(fmt::format("symbolic_beta: need 2 <= m <= n, got n = {}, m = {}", n, m));
  }
  if (digits.empty()) throw InvalidArgument("symbolic_beta: digit set is empty");
  std::set<std::pair<int, int>> distinct;
  std::set<int> second;
  for (const auto& [x, y] : digits) {
    if (y < 0 || y >= m) {
      throw InvalidArgument(fmt::format("symbolic_beta: second coordinate {} outside 0..{}", y, m - 1));
    }
    distinct.emplace(x, y);
    second.insert(y);
  }
  if (distinct.size() != digits.size()) throw InvalidArgument("symbolic_beta: repeated digit");
  const double s = static_cast<double>(second.size());
  const double total = static_cast<double>(digits.size());
  return std::log(s) / std::log(static_cast<double>(m)) + std::log(total / s) / std::log(static_cast<double>(n));
}

DimensionFit fit_box_dimension(std::span<const std::pair<double, double>> samples) {
  std::set<double> deltas;
  for (const auto& [delta, count] : samples) {
    if (!(delta > 0.0)) throw InvalidArgument(fmt::format("fit_box_dimension: delta {} not positive", delta));
    if (!(count >= 1.0)) throw InvalidArgument(fmt::format("fit_box_dimension: count {} below 1", count));
    deltas.insert(delta);
  }
  if (deltas.size() < 2) throw InvalidArgument("fit_box_dimension: need at least 2 distinct deltas");

  DimensionFit fit;
  fit.samples.assign(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double sx = 0.0, sy = 0.0;
  for (const auto& [delta, count] : samples) {
    sx += -std::log(delta);
    sy += std::log(count);
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [delta, count] : samples) {
    const double x = -std::log(delta) - mx;
    sxx += x * x;
    sxy += x * (std::log(count) - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  for (const auto& [delta, count] : samples) {
    const double r = std::log(count) - (fit.intercept + fit.slope * -std::log(delta));
    fit.residual += r * r;
  }
  return fit;
}

}  // namespace minkowski
