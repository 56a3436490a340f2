#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "minkowski/geometry.hpp"
#include "minkowski/ifs.hpp"

namespace minkowski {

enum class SymbolicFlavor { Full, Half };

/// The digit space D^infinity with D a finite subset of Z x {0..m-1},
/// metrized by lambda (full) or rho (half).
class SymbolicSystem {
 public:
  SymbolicSystem(int n, int m, std::vector<std::pair<int, int>> digits, SymbolicFlavor flavor);

  int n() const { return n_; }
  int m() const { return m_; }
  SymbolicFlavor flavor() const { return flavor_; }
  Metric metric() const { return flavor_ == SymbolicFlavor::Full ? Metric::FullSymbolic : Metric::HalfSymbolic; }
  std::size_t size() const { return digits_.size(); }
  const std::vector<std::pair<int, int>>& digits() const { return digits_; }
  int x_of(std::uint32_t letter) const { return digits_[letter].first; }
  int y_of(std::uint32_t letter) const { return digits_[letter].second; }

  /// Diameter of a rank-k cylinder in the system's metric.
  double cylinder_diameter(std::size_t rank) const;
  /// Upper bound used by the depth rule: m^-k.
  double max_cylinder_diameter(std::size_t rank) const;

 private:
  int n_;
  int m_;
  std::vector<std::pair<int, int>> digits_;
  SymbolicFlavor flavor_;
};

/// A depth-K truncated point; letters index the digit list. The truncation
/// stands for the continuation by the first digit forever.
using SymbolicPoint = CylinderWord;

/// lambda = max(n^-a, m^-b) with a, b the common prefix lengths of the
/// first- and second-coordinate strings; a coordinate that agrees on all K
/// letters contributes 0.
double metric_full(const SymbolicSystem& system, const SymbolicPoint& p, const SymbolicPoint& q);

/// rho = max(n^-a, |sum y_i m^-i - sum y'_i m^-i|), sums truncated at K.
double metric_half(const SymbolicSystem& system, const SymbolicPoint& p, const SymbolicPoint& q);

/// Distance in the system's own metric.
double symbolic_distance(const SymbolicSystem& system, const SymbolicPoint& p, const SymbolicPoint& q);

struct NonOverlapResult {
  bool non_overlapping = true;
  /// Two distinct depth-K words with equal first coordinates whose
  /// continuations (b, m-1)^inf and (b, 0)^inf give rho = 0.
  std::optional<std::pair<SymbolicPoint, SymbolicPoint>> witness;
};

/// Searches depth-K words for a carry collision. Throws InvalidArgument on
/// a full-flavor system.
NonOverlapResult check_nonoverlapping(const SymbolicSystem& system, std::size_t depth,
                                      std::uint64_t budget = kDefaultBudget);

std::vector<CylinderWord> enumerate_cylinders(const SymbolicSystem& system, std::size_t rank,
                                              std::uint64_t budget = kDefaultBudget);

/// All depth-K truncated points in lexicographic order; point i is the word
/// with lexicographic index i.
struct SymbolicCloud {
  SymbolicSystem system;
  std::size_t depth = 0;
  Metric metric = Metric::FullSymbolic;
  std::vector<std::uint32_t> letters;  // depth letters per point

  std::size_t size() const { return depth == 0 ? 1 : letters.size() / depth; }
  SymbolicPoint point(std::size_t i) const;
};

SymbolicCloud symbolic_point_cloud(const SymbolicSystem& system, std::size_t depth,
                                   std::uint64_t budget = kDefaultBudget);

/// Smallest K with m^-K <= delta/4; for the half flavor also m^-K < delta/100.
std::size_t depth_for_delta(const SymbolicSystem& system, double delta);

PackingResult greedy_packing(const SymbolicCloud& cloud, double delta);
PackingResult greedy_packing(const SymbolicCloud& cloud, std::span<const std::size_t> subset, double delta);

/// Components of the depth-K cylinders under "cylinder distance <= epsilon".
ComponentPartition epsilon_components(const SymbolicCloud& cloud, double epsilon);
/// Throws InvalidArgument when m^-depth > epsilon/4.
ComponentPartition epsilon_components(const SymbolicSystem& system, double epsilon, std::size_t depth,
                                      std::uint64_t budget = kDefaultBudget);

/// Distance between the rank-K cylinders of two words in the system's metric.
double cylinder_distance(const SymbolicSystem& system, const SymbolicPoint& p, const SymbolicPoint& q);

}  // namespace minkowski
