#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "minkowski/ifs.hpp"
#include "minkowski/measures.hpp"

namespace minkowski {

enum class Metric { Euclidean, MaxNorm, FullSymbolic, HalfSymbolic };

const char* metric_name(Metric metric);

using Point = std::vector<double>;

/// Representative points of the rank-`depth` cylinders, in lexicographic
/// word order. When `alphabet` is nonzero, point i stands for the word with
/// lexicographic index i. `half_extents` (same layout as `coords`, may be
/// empty) gives the half side lengths of each cylinder's bounding box,
/// centred on the point.
struct PointCloud {
  std::size_t dim = 0;
  std::size_t depth = 0;
  std::size_t alphabet = 0;
  std::vector<double> coords;
  std::vector<double> half_extents;

  std::size_t size() const { return dim == 0 ? 0 : coords.size() / dim; }
  std::span<const double> point(std::size_t i) const { return {coords.data() + i * dim, dim}; }
  CylinderWord source_word(std::size_t i) const;
  bool has_boxes() const { return !half_extents.empty(); }
  Box cylinder_box(std::size_t i) const;

  static PointCloud from_points(std::span<const Point> points);
};

struct PackingResult {
  double delta = 0.0;
  std::size_t count = 0;
  std::vector<std::size_t> centers;
};

/// epsilon-components of the depth-k cylinder cover.
struct ComponentPartition {
  double epsilon = 0.0;
  std::size_t depth = 0;
  std::vector<MeasurableSet> classes;
  /// Class of every depth-k word, by lexicographic index.
  std::vector<std::uint32_t> labels;

  std::size_t size() const { return classes.size(); }
  /// Indices of the depth-k words in class c, ascending.
  std::vector<std::size_t> members(std::uint32_t c) const;
  /// members(c) for every class at once.
  std::vector<std::vector<std::size_t>> member_lists() const;
};

double point_distance(std::span<const double> a, std::span<const double> b, Metric metric);

/// Distance between two boxes given as centre +- half extent.
double box_distance(std::span<const double> center_a, std::span<const double> half_a,
                    std::span<const double> center_b, std::span<const double> half_b, Metric metric);

/// Smallest depth whose cylinders have diameter <= delta/4.
std::size_t depth_for_delta(const SpongeSystem& sponge, double delta);
std::size_t depth_for_delta(const SimilarIFS& ifs, double delta);

/// Image of the cube centre under every rank-`depth` composition.
PointCloud sample_attractor(const SpongeSystem& sponge, std::size_t depth, std::uint64_t budget = kDefaultBudget);
PointCloud sample_attractor(const SimilarIFS& ifs, std::size_t depth, std::uint64_t budget = kDefaultBudget);

/// Scans points in order and keeps a point iff it is farther than 2*delta
/// from every kept point. Only Euclidean and max-norm metrics apply here.
PackingResult greedy_packing(const PointCloud& cloud, double delta, Metric metric = Metric::Euclidean);
/// Same, restricted to the ascending index list `subset`.
PackingResult greedy_packing(const PointCloud& cloud, std::span<const std::size_t> subset, double delta,
                             Metric metric = Metric::Euclidean);

/// Components of the cylinder boxes of `cloud` under "box distance <= epsilon".
ComponentPartition epsilon_components(const PointCloud& cloud, double epsilon, Metric metric = Metric::Euclidean);
/// Throws InvalidArgument when rank-`depth` cylinders are wider than epsilon/4.
ComponentPartition epsilon_components(const SpongeSystem& sponge, double epsilon, std::size_t depth,
                                      std::uint64_t budget = kDefaultBudget);
ComponentPartition epsilon_components(const SimilarIFS& ifs, double epsilon, std::size_t depth,
                                      std::uint64_t budget = kDefaultBudget);

double hausdorff_distance(const PointCloud& a, const PointCloud& b, Metric metric = Metric::Euclidean);

/// Lebesgue measure of the (open) delta-neighbourhood of the cloud, on a
/// grid of cells of side `grid_step` over [-delta, 1+delta]^n, divided by
/// delta^n.
double minkowski_content_estimate(const PointCloud& cloud, double delta, double grid_step);

/// Writes each class of a labelling of all rank-`depth` words as a minimal
/// cylinder union.
std::vector<MeasurableSet> classes_from_labels(std::span<const std::uint32_t> labels, std::size_t class_count,
                                               std::size_t alphabet, std::size_t depth);

}  // namespace minkowski
