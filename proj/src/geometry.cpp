#include "minkowski/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include <fmt/format.h>

#include "minkowski/errors.hpp"
#include "minkowski/union_find.hpp"

namespace minkowski {

namespace {

constexpr std::size_t kGridMaxDim = 4;
constexpr std::size_t kMaxDepth = 200;
// Grid cells are made slightly larger than the interaction radius so that
// round-off in the cell index cannot hide a neighbour.
constexpr double kCellSlack = 1.0 + 1e-9;

using CellKey = std::array<std::int64_t, kGridMaxDim>;

struct CellHash {
  std::size_t operator()(const CellKey& key) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (auto v : key) {
      h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

CellKey cell_of(std::span<const double> p, double side) {
  CellKey key{};
  for (std::size_t i = 0; i < p.size(); ++i) key[i] = static_cast<std::int64_t>(std::floor(p[i] / side));
  return key;
}

// Calls f(neighbour) for every cell within `reach` cells per axis.
template <typename F>
void for_each_neighbor(const CellKey& base, std::size_t dim, std::int64_t reach, F&& f) {
  CellKey offset{};
  for (std::size_t i = 0; i < dim; ++i) offset[i] = -reach;
  while (true) {
    CellKey cell = base;
    for (std::size_t i = 0; i < dim; ++i) cell[i] += offset[i];
    f(cell);
    std::size_t axis = 0;
    while (axis < dim && offset[axis] == reach) offset[axis++] = -reach;
    if (axis == dim) return;
    ++offset[axis];
  }
}

void require_euclidean_like(Metric metric, const char* operation) {
  if (metric != Metric::Euclidean && metric != Metric::MaxNorm) {
    throw InvalidArgument(fmt::format("{}: metric '{}' needs a symbolic point set", operation, metric_name(metric)));
  }
}

double combine(double acc, double gap, Metric metric) {
  return metric == Metric::MaxNorm ? std::max(acc, gap) : acc + gap * gap;
}

double finish(double acc, Metric metric) { return metric == Metric::MaxNorm ? acc : std::sqrt(acc); }

}  // namespace

const char* metric_name(Metric metric) {
  switch (metric) {
    case Metric::Euclidean: return "euclidean";
    case Metric::MaxNorm: return "max";
    case Metric::FullSymbolic: return "full-symbolic";
    case Metric::HalfSymbolic: return "half-symbolic";
  }
  return "unknown";
}

CylinderWord PointCloud::source_word(std::size_t i) const {
  if (alphabet == 0) throw InvalidArgument("point cloud: points are not indexed by words");
  return word_from_index(i, depth, alphabet);
}

Box PointCloud::cylinder_box(std::size_t i) const {
  Box box;
  box.lo.resize(dim);
  box.hi.resize(dim);
  for (std::size_t k = 0; k < dim; ++k) {
    const double half = has_boxes() ? half_extents[i * dim + k] : 0.0;
    box.lo[k] = coords[i * dim + k] - half;
    box.hi[k] = coords[i * dim + k] + half;
  }
  return box;
}

PointCloud PointCloud::from_points(std::span<const Point> points) {
  PointCloud cloud;
  if (points.empty()) return cloud;
  cloud.dim = points.front().size();
  cloud.depth = 1;
  cloud.alphabet = points.size();
  for (const auto& p : points) {
    if (p.size() != cloud.dim) throw InvalidArgument("point cloud: points of different dimensions");
    cloud.coords.insert(cloud.coords.end(), p.begin(), p.end());
  }
  return cloud;
}

std::vector<std::size_t> ComponentPartition::members(std::uint32_t c) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == c) out.push_back(i);
  }
  return out;
}

std::vector<std::vector<std::size_t>> ComponentPartition::member_lists() const {
  std::vector<std::vector<std::size_t>> out(classes.size());
  for (std::size_t i = 0; i < labels.size(); ++i) out[labels[i]].push_back(i);
  return out;
}

double point_distance(std::span<const double> a, std::span<const double> b, Metric metric) {
  require_euclidean_like(metric, "point_distance");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc = combine(acc, std::abs(a[i] - b[i]), metric);
  return finish(acc, metric);
}

double box_distance(std::span<const double> center_a, std::span<const double> half_a,
                    std::span<const double> center_b, std::span<const double> half_b, Metric metric) {
  require_euclidean_like(metric, "box_distance");
  double acc = 0.0;
  for (std::size_t i = 0; i < center_a.size(); ++i) {
    const double ha = half_a.empty() ? 0.0 : half_a[i];
    const double hb = half_b.empty() ? 0.0 : half_b[i];
    const double gap = std::max(0.0, std::abs(center_a[i] - center_b[i]) - ha - hb);
    acc = combine(acc, gap, metric);
  }
  return finish(acc, metric);
}

std::size_t depth_for_delta(const SpongeSystem& sponge, double delta) {
  if (!(delta > 0.0)) throw InvalidArgument(fmt::format("depth_for_delta: delta {} not positive", delta));
  for (std::size_t k = 0; k < kMaxDepth; ++k) {
    if (sponge.max_pillar_diameter(k) <= delta / 4.0) return k;
  }
  throw InvalidArgument(fmt::format("depth_for_delta: delta {} too small", delta));
}

std::size_t depth_for_delta(const SimilarIFS& ifs, double delta) {
  if (!(delta > 0.0)) throw InvalidArgument(fmt::format("depth_for_delta: delta {} not positive", delta));
  for (std::size_t k = 0; k < kMaxDepth; ++k) {
    if (ifs.max_cylinder_diameter(k) <= delta / 4.0) return k;
  }
  throw InvalidArgument(fmt::format("depth_for_delta: delta {} too small", delta));
}

PointCloud sample_attractor(const SpongeSystem& sponge, std::size_t depth, std::uint64_t budget) {
  const std::size_t d = sponge.dimension();
  const std::size_t n = sponge.size();
  const auto count = checked_word_count(n, depth, budget, "sample_attractor");

  // Composed map of each word, per axis: x -> intercept + slope * x.
  std::vector<double> slopes(d, 1.0);
  std::vector<double> intercepts(d, 0.0);
  for (std::size_t level = 0; level < depth; ++level) {
    const std::size_t parents = slopes.size() / d;
    std::vector<double> next_slopes(parents * n * d);
    std::vector<double> next_intercepts(parents * n * d);
    for (std::size_t p = 0; p < parents; ++p) {
      for (std::size_t a = 0; a < n; ++a) {
        const auto& maps = sponge.digit(a).components;
        const std::size_t child = p * n + a;
        for (std::size_t axis = 0; axis < d; ++axis) {
          const double s = slopes[p * d + axis];
          next_slopes[child * d + axis] = s * maps[axis].slope();
          next_intercepts[child * d + axis] = s * maps[axis].intercept() + intercepts[p * d + axis];
        }
      }
    }
    slopes = std::move(next_slopes);
    intercepts = std::move(next_intercepts);
  }

  PointCloud cloud;
  cloud.dim = d;
  cloud.depth = depth;
  cloud.alphabet = n;
  cloud.coords.resize(count * d);
  cloud.half_extents.resize(count * d);
  for (std::size_t i = 0; i < count * d; ++i) {
    cloud.coords[i] = intercepts[i] + 0.5 * slopes[i];
    cloud.half_extents[i] = 0.5 * std::abs(slopes[i]);
  }
  return cloud;
}

PointCloud sample_attractor(const SimilarIFS& ifs, std::size_t depth, std::uint64_t budget) {
  const std::size_t d = ifs.dimension();
  const std::size_t n = ifs.size();
  const auto count = checked_word_count(n, depth, budget, "sample_attractor");

  // Composed map of each word: x -> A x + t, A row-major.
  std::vector<double> linear(d * d, 0.0);
  for (std::size_t k = 0; k < d; ++k) linear[k * d + k] = 1.0;
  std::vector<double> shift(d, 0.0);
  for (std::size_t level = 0; level < depth; ++level) {
    const std::size_t parents = shift.size() / d;
    std::vector<double> next_linear(parents * n * d * d);
    std::vector<double> next_shift(parents * n * d);
    for (std::size_t p = 0; p < parents; ++p) {
      const double* A = linear.data() + p * d * d;
      const double* t = shift.data() + p * d;
      for (std::size_t a = 0; a < n; ++a) {
        const auto& map = ifs.maps()[a];
        double* B = next_linear.data() + (p * n + a) * d * d;
        double* u = next_shift.data() + (p * n + a) * d;
        for (std::size_t r = 0; r < d; ++r) {
          u[r] = t[r];
          for (std::size_t c = 0; c < d; ++c) {
            double acc = 0.0;
            for (std::size_t k = 0; k < d; ++k) acc += A[r * d + k] * map.linear[k * d + c];
            B[r * d + c] = map.ratio * acc;
            u[r] += A[r * d + c] * map.translation[c];
          }
        }
      }
    }
    linear = std::move(next_linear);
    shift = std::move(next_shift);
  }

  PointCloud cloud;
  cloud.dim = d;
  cloud.depth = depth;
  cloud.alphabet = n;
  cloud.coords.resize(count * d);
  cloud.half_extents.resize(count * d);
  for (std::size_t i = 0; i < count; ++i) {
    const double* A = linear.data() + i * d * d;
    for (std::size_t r = 0; r < d; ++r) {
      double center = shift[i * d + r];
      double half = 0.0;
      for (std::size_t c = 0; c < d; ++c) {
        center += 0.5 * A[r * d + c];
        half += 0.5 * std::abs(A[r * d + c]);
      }
      cloud.coords[i * d + r] = center;
      cloud.half_extents[i * d + r] = half;
    }
  }
  return cloud;
}

PackingResult greedy_packing(const PointCloud& cloud, double delta, Metric metric) {
  std::vector<std::size_t> all(cloud.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return greedy_packing(cloud, all, delta, metric);
}

PackingResult greedy_packing(const PointCloud& cloud, std::span<const std::size_t> subset, double delta,
                             Metric metric) {
  require_euclidean_like(metric, "greedy_packing");
  if (cloud.size() == 0 || subset.empty()) throw InvalidArgument("greedy_packing: empty point set");
  if (!(delta > 0.0)) throw InvalidArgument(fmt::format("greedy_packing: delta {} not positive", delta));

  PackingResult result;
  result.delta = delta;
  const double reach = 2.0 * delta;
  auto far_from = [&](std::size_t i, std::size_t j) {
    return point_distance(cloud.point(i), cloud.point(j), metric) > reach;
  };

  if (cloud.dim > kGridMaxDim) {
    for (auto i : subset) {
      const bool ok = std::all_of(result.centers.begin(), result.centers.end(),
                                  [&](std::size_t c) { return far_from(i, c); });
      if (ok) result.centers.push_back(i);
    }
    result.count = result.centers.size();
    return result;
  }

  const double side = reach * kCellSlack;
  std::unordered_map<CellKey, std::vector<std::size_t>, CellHash> grid;
  for (auto i : subset) {
    const auto cell = cell_of(cloud.point(i), side);
    bool ok = true;
    for_each_neighbor(cell, cloud.dim, 1, [&](const CellKey& neighbor) {
      if (!ok) return;
      auto it = grid.find(neighbor);
      if (it == grid.end()) return;
      for (auto c : it->second) {
        if (!far_from(i, c)) {
          ok = false;
          return;
        }
      }
    });
    if (ok) {
      grid[cell].push_back(i);
      result.centers.push_back(i);
    }
  }
  result.count = result.centers.size();
  return result;
}

ComponentPartition epsilon_components(const PointCloud& cloud, double epsilon, Metric metric) {
  require_euclidean_like(metric, "epsilon_components");
  if (!(epsilon > 0.0)) throw InvalidArgument(fmt::format("epsilon_components: epsilon {} not positive", epsilon));
  if (cloud.size() == 0) throw InvalidArgument("epsilon_components: empty point set");
  const std::size_t n = cloud.size();
  const std::size_t d = cloud.dim;
  auto half = [&](std::size_t i) {
    return cloud.has_boxes() ? std::span<const double>(cloud.half_extents.data() + i * d, d)
                             : std::span<const double>();
  };
  auto near = [&](std::size_t i, std::size_t j) {
    return box_distance(cloud.point(i), half(i), cloud.point(j), half(j), metric) <= epsilon;
  };

  UnionFind sets(n);
  if (d > kGridMaxDim) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (!sets.joined(i, j) && near(i, j)) sets.join(i, j);
      }
    }
  } else {
    // Centres sharing a cell of this side are within epsilon of each other.
    const double side = (metric == Metric::MaxNorm ? epsilon : epsilon / std::sqrt(static_cast<double>(d))) / kCellSlack;
    double max_half = 0.0;
    for (double h : cloud.half_extents) max_half = std::max(max_half, h);
    const auto reach = static_cast<std::int64_t>(std::ceil((epsilon + 2.0 * max_half) * kCellSlack / side));

    struct Cell {
      std::vector<std::size_t> members;
      std::vector<double> lo, hi;  // bounding box of member boxes
    };
    std::map<CellKey, Cell> cells;
    for (std::size_t i = 0; i < n; ++i) {
      auto& cell = cells[cell_of(cloud.point(i), side)];
      const auto box = cloud.cylinder_box(i);
      if (cell.members.empty()) {
        cell.lo = box.lo;
        cell.hi = box.hi;
      } else {
        for (std::size_t k = 0; k < d; ++k) {
          cell.lo[k] = std::min(cell.lo[k], box.lo[k]);
          cell.hi[k] = std::max(cell.hi[k], box.hi[k]);
        }
      }
      cell.members.push_back(i);
    }
    for (auto& [key, cell] : cells) {
      for (std::size_t m = 1; m < cell.members.size(); ++m) sets.join(cell.members[0], cell.members[m]);
    }

    auto bbox_gap = [&](std::size_t i, const Cell& other) {
      const auto box = cloud.cylinder_box(i);
      double acc = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        const double gap = std::max({0.0, other.lo[k] - box.hi[k], box.lo[k] - other.hi[k]});
        acc = combine(acc, gap, metric);
      }
      return finish(acc, metric);
    };

    for (const auto& [key, cell] : cells) {
      for_each_neighbor(key, d, reach, [&](const CellKey& other_key) {
        if (!(key < other_key)) return;
        auto it = cells.find(other_key);
        if (it == cells.end()) return;
        const Cell& other = it->second;
        if (sets.joined(cell.members[0], other.members[0])) return;
        std::vector<std::size_t> left, right;
        for (auto i : cell.members) {
          if (bbox_gap(i, other) <= epsilon) left.push_back(i);
        }
        if (left.empty()) return;
        for (auto j : other.members) {
          if (bbox_gap(j, cell) <= epsilon) right.push_back(j);
        }
        for (auto i : left) {
          for (auto j : right) {
            if (near(i, j)) {
              sets.join(i, j);
              return;
            }
          }
        }
      });
    }
  }

  ComponentPartition partition;
  partition.epsilon = epsilon;
  partition.depth = cloud.depth;
  std::size_t count = 0;
  partition.labels = sets.labels(&count);
  if (cloud.alphabet > 0) {
    partition.classes = classes_from_labels(partition.labels, count, cloud.alphabet, cloud.depth);
  } else {
    partition.classes.resize(count);
  }
  return partition;
}

namespace {

template <typename System>
ComponentPartition components_of(const System& system, double diameter, double epsilon, std::size_t depth,
                                 std::uint64_t budget) {
  if (!(epsilon > 0.0)) throw InvalidArgument(fmt::format("epsilon_components: epsilon {} not positive", epsilon));
  if (diameter > epsilon / 4.0) {
    throw InvalidArgument(fmt::format(
        "epsilon_components: depth {} too shallow for epsilon {} (cylinder diameter {} exceeds epsilon/4)", depth,
        epsilon, diameter));
  }
  return epsilon_components(sample_attractor(system, depth, budget), epsilon, Metric::Euclidean);
}

}  // namespace

ComponentPartition epsilon_components(const SpongeSystem& sponge, double epsilon, std::size_t depth,
                                      std::uint64_t budget) {
  return components_of(sponge, sponge.max_pillar_diameter(depth), epsilon, depth, budget);
}

ComponentPartition epsilon_components(const SimilarIFS& ifs, double epsilon, std::size_t depth, std::uint64_t budget) {
  return components_of(ifs, ifs.max_cylinder_diameter(depth), epsilon, depth, budget);
}

double hausdorff_distance(const PointCloud& a, const PointCloud& b, Metric metric) {
  if (a.size() == 0 || b.size() == 0) throw InvalidArgument("hausdorff_distance: empty input");
  if (a.dim != b.dim) throw InvalidArgument("hausdorff_distance: dimension mismatch");
  auto directed = [&](const PointCloud& from, const PointCloud& to) {
    double worst = 0.0;
    for (std::size_t i = 0; i < from.size(); ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < to.size() && best > worst; ++j) {
        best = std::min(best, point_distance(from.point(i), to.point(j), metric));
      }
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

double minkowski_content_estimate(const PointCloud& cloud, double delta, double grid_step) {
  if (!(delta > 0.0) || !(grid_step > 0.0)) {
    throw InvalidArgument(
        fmt::format("minkowski_content_estimate: delta {} and grid_step {} must be positive", delta, grid_step));
  }
  if (grid_step > delta / 8.0 * (1.0 + 1e-12)) {
    throw InvalidArgument(
        fmt::format("minkowski_content_estimate: grid_step {} exceeds delta/8 = {}", grid_step, delta / 8.0));
  }
  if (cloud.size() == 0) throw InvalidArgument("minkowski_content_estimate: empty point set");
  const std::size_t d = cloud.dim;
  const double origin = -delta;
  const auto per_axis = static_cast<std::int64_t>(std::ceil((1.0 + 2.0 * delta) / grid_step));
  const double delta_sq = delta * delta;

  // Cell c (per axis) has centre origin + (c + 1/2) * grid_step.
  std::unordered_set<std::uint64_t> marked;
  std::vector<std::int64_t> lo(d), hi(d), idx(d);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto p = cloud.point(i);
    bool outside = false;
    for (std::size_t k = 0; k < d; ++k) {
      lo[k] = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor((p[k] - delta - origin) / grid_step)));
      hi[k] = std::min<std::int64_t>(per_axis - 1,
                                     static_cast<std::int64_t>(std::floor((p[k] + delta - origin) / grid_step)));
      outside = outside || lo[k] > hi[k];
      idx[k] = lo[k];
    }
    while (!outside) {
      double dist_sq = 0.0;
      std::uint64_t key = 0;
      for (std::size_t k = 0; k < d; ++k) {
        const double c = origin + (static_cast<double>(idx[k]) + 0.5) * grid_step;
        dist_sq += (c - p[k]) * (c - p[k]);
        key = key * static_cast<std::uint64_t>(per_axis) + static_cast<std::uint64_t>(idx[k]);
      }
      if (dist_sq < delta_sq) marked.insert(key);
      std::size_t axis = 0;
      while (axis < d && idx[axis] == hi[axis]) {
        idx[axis] = lo[axis];
        ++axis;
      }
      if (axis == d) break;
      ++idx[axis];
    }
  }
  return static_cast<double>(marked.size()) * std::pow(grid_step / delta, static_cast<double>(d));
}

std::vector<MeasurableSet> classes_from_labels(std::span<const std::uint32_t> labels, std::size_t class_count,
                                               std::size_t alphabet, std::size_t depth) {
  constexpr std::uint32_t kMixed = UINT32_MAX;
  // uniform[r][i]: class shared by every descendant of rank-r word i, or kMixed.
  std::vector<std::vector<std::uint32_t>> uniform(depth + 1);
  uniform[depth].assign(labels.begin(), labels.end());
  for (std::size_t r = depth; r-- > 0;) {
    const auto& below = uniform[r + 1];
    auto& level = uniform[r];
    level.resize(below.size() / alphabet);
    for (std::size_t i = 0; i < level.size(); ++i) {
      std::uint32_t label = below[i * alphabet];
      for (std::size_t a = 1; a < alphabet && label != kMixed; ++a) {
        if (below[i * alphabet + a] != label) label = kMixed;
      }
      level[i] = label;
    }
  }
  std::vector<std::vector<CylinderWord>> words(class_count);
  for (std::size_t r = 0; r <= depth; ++r) {
    for (std::size_t i = 0; i < uniform[r].size(); ++i) {
      const auto label = uniform[r][i];
      if (label == kMixed) continue;
      if (r > 0 && uniform[r - 1][i / alphabet] != kMixed) continue;
      words[label].push_back(word_from_index(i, r, alphabet));
    }
  }
  std::vector<MeasurableSet> out;
  out.reserve(class_count);
  for (auto& w : words) out.emplace_back(std::move(w));
  return out;
}

}  // namespace minkowski
