#include "minkowski/symbolic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <fmt/format.h>

#include "minkowski/errors.hpp"
#include "minkowski/union_find.hpp"

namespace minkowski {

namespace {

double ipow(int base, std::size_t exponent) { return std::pow(static_cast<double>(base), -static_cast<double>(exponent)); }

std::size_t common_x(const SymbolicSystem& s, const SymbolicPoint& p, const SymbolicPoint& q) {
  std::size_t a = 0;
  while (a < p.rank() && s.x_of(p.letters[a]) == s.x_of(q.letters[a])) ++a;
  return a;
}

std::size_t common_y(const SymbolicSystem& s, const SymbolicPoint& p, const SymbolicPoint& q) {
  std::size_t b = 0;
  while (b < p.rank() && s.y_of(p.letters[b]) == s.y_of(q.letters[b])) ++b;
  return b;
}

void check_pair(const SymbolicSystem& s, const SymbolicPoint& p, const SymbolicPoint& q, const char* operation) {
  if (p.rank() != q.rank()) {
    throw InvalidArgument(fmt::format("{}: truncation depths differ ({} vs {})", operation, p.rank(), q.rank()));
  }
  validate_word(p, s.size(), operation);
  validate_word(q, s.size(), operation);
}

// n^-a, or 0 when the strings agree on every letter.
double prefix_part(int base, std::size_t common, std::size_t depth) {
  return common >= depth ? 0.0 : ipow(base, common);
}

// Smallest prefix length L <= depth with base^-L <= radius; depth if none.
std::size_t prefix_length_within(int base, double radius, std::size_t depth) {
  std::size_t length = 0;
  while (length < depth && ipow(base, length) > radius) ++length;
  return length;
}

std::uint64_t checked_power(int base, std::size_t exponent, const char* operation) {
  std::uint64_t value = 1;
  for (std::size_t i = 0; i < exponent; ++i) {
    if (value > (UINT64_MAX >> 2) / static_cast<std::uint64_t>(base)) {
      throw InvalidArgument(fmt::format("{}: {}^{} overflows the exact y-value range", operation, base, exponent));
    }
    value *= static_cast<std::uint64_t>(base);
  }
  return value;
}

// Integer m-adic value sum y_i m^(K-i) of the second coordinates.
std::uint64_t y_value(const SymbolicSystem& s, std::span<const std::uint32_t> letters) {
  std::uint64_t value = 0;
  for (auto letter : letters) value = value * static_cast<std::uint64_t>(s.m()) + static_cast<std::uint64_t>(s.y_of(letter));
  return value;
}

struct PrefixKey {
  std::vector<int> x;
  std::vector<int> y;
  friend auto operator<=>(const PrefixKey&, const PrefixKey&) = default;
};

PrefixKey prefix_key(const SymbolicSystem& s, std::span<const std::uint32_t> letters, std::size_t x_len,
                     std::size_t y_len) {
  PrefixKey key;
  for (std::size_t i = 0; i < x_len; ++i) key.x.push_back(s.x_of(letters[i]));
  for (std::size_t i = 0; i < y_len; ++i) key.y.push_back(s.y_of(letters[i]));
  return key;
}

}  // namespace

SymbolicSystem::SymbolicSystem(int n, int m, std::vector<std::pair<int, int>> digits, SymbolicFlavor flavor)
    : n_(n), m_(m), digits_(std::move(digits)), flavor_(flavor) {
  if (n_ < 2 || m_ < 2 || m_ > n_) {
    throw InvalidArgument(fmt::format("symbolic system: need 2 <= m <= n, got n = {}, m = {}", n_, m_));
  }
  if (digits_.empty()) throw InvalidArgument("symbolic system: digit set is empty");
  std::set<std::pair<int, int>> seen;
  for (const auto& digit : digits_) {
    if (digit.second < 0 || digit.second >= m_) {
      throw InvalidArgument(fmt::format("symbolic system: second coordinate {} outside 0..{}", digit.second, m_ - 1));
    }
    if (!seen.insert(digit).second) {
      throw InvalidArgument(fmt::format("symbolic system: repeated digit ({}, {})", digit.first, digit.second));
    }
  }
}

double SymbolicSystem::cylinder_diameter(std::size_t rank) const {
  std::set<int> xs, ys;
  int y_min = m_, y_max = -1;
  for (const auto& [x, y] : digits_) {
    xs.insert(x);
    ys.insert(y);
    y_min = std::min(y_min, y);
    y_max = std::max(y_max, y);
  }
  const double x_part = xs.size() > 1 ? ipow(n_, rank) : 0.0;
  double y_part = 0.0;
  if (ys.size() > 1) {
    y_part = flavor_ == SymbolicFlavor::Full
                 ? ipow(m_, rank)
                 : static_cast<double>(y_max - y_min) / static_cast<double>(m_ - 1) * ipow(m_, rank);
  }
  return std::max(x_part, y_part);
}

double SymbolicSystem::max_cylinder_diameter(std::size_t rank) const { return ipow(m_, rank); }

double metric_full(const SymbolicSystem& system, const SymbolicPoint& p, const SymbolicPoint& q) {
  check_pair(system, p, q, "metric_full");
  const std::size_t depth = p.rank();
  return std::max(prefix_part(system.n(), common_x(system, p, q), depth),
                  prefix_part(system.m(), common_y(system, p, q), depth));
}

double metric_half(const SymbolicSystem& system, const SymbolicPoint& p, const SymbolicPoint& q) {
  check_pair(system, p, q, "metric_half");
  const std::size_t depth = p.rank();
  double vp = 0.0, vq = 0.0;
  double scale = 1.0;
  for (std::size_t i = 0; i < depth; ++i) {
    scale /= system.m();
    vp += system.y_of(p.letters[i]) * scale;
    vq += system.y_of(q.letters[i]) * scale;
  }
  return std::max(prefix_part(system.n(), common_x(system, p, q), depth), std::abs(vp - vq));
}

double symbolic_distance(const SymbolicSystem& system, const SymbolicPoint& p, const SymbolicPoint& q) {
  return system.flavor() == SymbolicFlavor::Full ? metric_full(system, p, q) : metric_half(system, p, q);
}

double cylinder_distance(const SymbolicSystem& system, const SymbolicPoint& p, const SymbolicPoint& q) {
  if (system.flavor() == SymbolicFlavor::Full) return metric_full(system, p, q);
  check_pair(system, p, q, "cylinder_distance");
  const std::size_t depth = p.rank();
  int y_min = system.m(), y_max = -1;
  for (const auto& [x, y] : system.digits()) {
    y_min = std::min(y_min, y);
    y_max = std::max(y_max, y);
  }
  const double tail = ipow(system.m(), depth) / static_cast<double>(system.m() - 1);
  const double scale = ipow(system.m(), depth);
  const double vp = static_cast<double>(y_value(system, p.letters)) * scale;
  const double vq = static_cast<double>(y_value(system, q.letters)) * scale;
  // Each cylinder's y-values fill [v + y_min*tail, v + y_max*tail].
  const double lo = std::min(vp, vq), hi = std::max(vp, vq);
  const double gap = std::max(0.0, (hi + y_min * tail) - (lo + y_max * tail));
  return std::max(prefix_part(system.n(), common_x(system, p, q), depth), gap);
}

NonOverlapResult check_nonoverlapping(const SymbolicSystem& system, std::size_t depth, std::uint64_t budget) {
  if (system.flavor() != SymbolicFlavor::Half) {
    throw InvalidArgument("check_nonoverlapping: only defined for the half-symbolic flavor");
  }
  NonOverlapResult result;
  const std::size_t count = system.size();
  if (count == 1 || depth == 0) return result;

  // Tails (b, m-1)^inf and (b, 0)^inf have equal first coordinates and
  // y-values differing by exactly m^-K.
  std::optional<std::uint32_t> tail_letter_low, tail_letter_high;
  for (std::uint32_t lo = 0; lo < count && !tail_letter_low; ++lo) {
    for (std::uint32_t hi = 0; hi < count; ++hi) {
      if (system.x_of(lo) == system.x_of(hi) && system.y_of(lo) == system.m() - 1 && system.y_of(hi) == 0) {
        tail_letter_low = lo;
        tail_letter_high = hi;
        break;
      }
    }
  }
  if (!tail_letter_low) return result;

  checked_power(system.m(), depth, "check_nonoverlapping");
  const auto total = checked_word_count(count, depth, budget, "check_nonoverlapping");
  std::map<std::vector<int>, std::vector<std::pair<std::uint64_t, std::uint64_t>>> by_x;
  for (std::uint64_t i = 0; i < total; ++i) {
    const auto word = word_from_index(i, depth, count);
    std::vector<int> xs;
    for (auto letter : word.letters) xs.push_back(system.x_of(letter));
    by_x[xs].emplace_back(y_value(system, word.letters), i);
  }
  std::optional<std::pair<std::uint64_t, std::uint64_t>> best;
  for (auto& [xs, entries] : by_x) {
    std::sort(entries.begin(), entries.end());
    for (std::size_t k = 1; k < entries.size(); ++k) {
      if (entries[k].first == entries[k - 1].first + 1) {
        const std::pair<std::uint64_t, std::uint64_t> candidate{entries[k - 1].second, entries[k].second};
        if (!best || candidate < *best) best = candidate;
      }
    }
  }
  if (!best) return result;
  result.non_overlapping = false;
  result.witness = std::make_pair(word_from_index(best->first, depth, count), word_from_index(best->second, depth, count));
  return result;
}

std::vector<CylinderWord> enumerate_cylinders(const SymbolicSystem& system, std::size_t rank, std::uint64_t budget) {
  const auto total = checked_word_count(system.size(), rank, budget, "enumerate_cylinders");
  std::vector<CylinderWord> out;
  out.reserve(total);
  for (std::uint64_t i = 0; i < total; ++i) out.push_back(word_from_index(i, rank, system.size()));
  return out;
}

SymbolicPoint SymbolicCloud::point(std::size_t i) const {
  SymbolicPoint p;
  p.letters.assign(letters.begin() + static_cast<std::ptrdiff_t>(i * depth),
                   letters.begin() + static_cast<std::ptrdiff_t>((i + 1) * depth));
  return p;
}

SymbolicCloud symbolic_point_cloud(const SymbolicSystem& system, std::size_t depth, std::uint64_t budget) {
  const auto total = checked_word_count(system.size(), depth, budget, "symbolic_point_cloud");
  if (system.flavor() == SymbolicFlavor::Half) checked_power(system.m(), depth, "symbolic_point_cloud");
  SymbolicCloud cloud{system, depth, system.metric(), {}};
  cloud.letters.resize(total * depth);
  for (std::uint64_t i = 0; i < total; ++i) {
    std::uint64_t index = i;
    for (std::size_t k = depth; k-- > 0;) {
      cloud.letters[i * depth + k] = static_cast<std::uint32_t>(index % system.size());
      index /= system.size();
    }
  }
  return cloud;
}

std::size_t depth_for_delta(const SymbolicSystem& system, double delta) {
  if (!(delta > 0.0)) throw InvalidArgument(fmt::format("depth_for_delta: delta {} not positive", delta));
  std::size_t depth = 0;
  while (system.max_cylinder_diameter(depth) > delta / 4.0 ||
         (system.flavor() == SymbolicFlavor::Half && !(ipow(system.m(), depth) < delta / 100.0))) {
    if (++depth > 60) throw InvalidArgument(fmt::format("depth_for_delta: delta {} too small", delta));
  }
  return depth;
}

PackingResult greedy_packing(const SymbolicCloud& cloud, double delta) {
  std::vector<std::size_t> all(cloud.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return greedy_packing(cloud, all, delta);
}

PackingResult greedy_packing(const SymbolicCloud& cloud, std::span<const std::size_t> subset, double delta) {
  if (subset.empty()) throw InvalidArgument("greedy_packing: empty point set");
  if (!(delta > 0.0)) throw InvalidArgument(fmt::format("greedy_packing: delta {} not positive", delta));
  const auto& system = cloud.system;
  const std::size_t depth = cloud.depth;
  const double reach = 2.0 * delta;
  auto letters_of = [&](std::size_t i) {
    return std::span<const std::uint32_t>(cloud.letters.data() + i * depth, depth);
  };
  // Two points are within `reach` in the first coordinate iff their x-strings
  // share a prefix of this length.
  const std::size_t x_len = prefix_length_within(system.n(), reach, depth);

  PackingResult result;
  result.delta = delta;
  if (cloud.metric == Metric::FullSymbolic) {
    const std::size_t y_len = prefix_length_within(system.m(), reach, depth);
    std::set<PrefixKey> taken;
    for (auto i : subset) {
      if (taken.insert(prefix_key(system, letters_of(i), x_len, y_len)).second) result.centers.push_back(i);
    }
  } else {
    const double scaled_reach = reach * static_cast<double>(checked_power(system.m(), depth, "greedy_packing"));
    std::map<PrefixKey, std::set<std::uint64_t>> taken;
    for (auto i : subset) {
      const auto letters = letters_of(i);
      auto& values = taken[prefix_key(system, letters, x_len, 0)];
      const auto v = y_value(system, letters);
      bool ok = true;
      auto it = values.lower_bound(v);
      if (it != values.end() && static_cast<double>(*it - v) <= scaled_reach) ok = false;
      if (ok && it != values.begin() && static_cast<double>(v - *std::prev(it)) <= scaled_reach) ok = false;
      if (ok) {
        values.insert(v);
        result.centers.push_back(i);
      }
    }
  }
  result.count = result.centers.size();
  return result;
}

ComponentPartition epsilon_components(const SymbolicCloud& cloud, double epsilon) {
  if (!(epsilon > 0.0)) throw InvalidArgument(fmt::format("epsilon_components: epsilon {} not positive", epsilon));
  const auto& system = cloud.system;
  const std::size_t depth = cloud.depth;
  const std::size_t total = cloud.size();
  auto letters_of = [&](std::size_t i) {
    return std::span<const std::uint32_t>(cloud.letters.data() + i * depth, depth);
  };
  const std::size_t x_len = prefix_length_within(system.n(), epsilon, depth);

  UnionFind sets(total);
  if (cloud.metric == Metric::FullSymbolic) {
    // lambda is an ultrametric: "distance <= epsilon" is already transitive.
    const std::size_t y_len = prefix_length_within(system.m(), epsilon, depth);
    std::map<PrefixKey, std::size_t> first;
    for (std::size_t i = 0; i < total; ++i) {
      auto [it, inserted] = first.emplace(prefix_key(system, letters_of(i), x_len, y_len), i);
      if (!inserted) sets.join(it->second, i);
    }
  } else {
    int y_min = system.m(), y_max = -1;
    for (const auto& [x, y] : system.digits()) {
      y_min = std::min(y_min, y);
      y_max = std::max(y_max, y);
    }
    const double unit = ipow(system.m(), depth);
    const double tail = unit / static_cast<double>(system.m() - 1);
    std::map<PrefixKey, std::vector<std::pair<std::uint64_t, std::size_t>>> groups;
    for (std::size_t i = 0; i < total; ++i) {
      groups[prefix_key(system, letters_of(i), x_len, 0)].emplace_back(y_value(system, letters_of(i)), i);
    }
    for (auto& [key, entries] : groups) {
      std::sort(entries.begin(), entries.end());
      double reach_hi = -1.0;
      std::size_t anchor = entries.front().second;
      for (const auto& [value, index] : entries) {
        const double lo = static_cast<double>(value) * unit + y_min * tail;
        const double hi = static_cast<double>(value) * unit + y_max * tail;
        if (reach_hi >= 0.0 && lo - reach_hi <= epsilon) sets.join(anchor, index);
        anchor = index;
        reach_hi = std::max(reach_hi, hi);
      }
    }
  }
  ComponentPartition partition;
  partition.epsilon = epsilon;
  partition.depth = depth;
  std::size_t count = 0;
  partition.labels = sets.labels(&count);
  partition.classes = classes_from_labels(partition.labels, count, system.size(), depth);
  return partition;
}

ComponentPartition epsilon_components(const SymbolicSystem& system, double epsilon, std::size_t depth,
                                      std::uint64_t budget) {
  if (!(epsilon > 0.0)) throw InvalidArgument(fmt::format("epsilon_components: epsilon {} not positive", epsilon));
  if (system.max_cylinder_diameter(depth) > epsilon / 4.0) {
    throw InvalidArgument(fmt::format("epsilon_components: depth {} too shallow for epsilon {}", depth, epsilon));
  }
  return epsilon_components(symbolic_point_cloud(system, depth, budget), epsilon);
}

}  // namespace minkowski
