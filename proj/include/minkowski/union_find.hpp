#pragma once

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

namespace minkowski {

/// Disjoint sets with path halving and union by rank.
class UnionFind {
 public:
  explicit UnionFind(std::size_t size) : parents_(size), ranks_(size, 0) {
    std::iota(parents_.begin(), parents_.end(), std::size_t{0});
  }

  std::size_t size() const { return parents_.size(); }

  std::size_t find(std::size_t x) {
    while (parents_[x] != x) {
      parents_[x] = parents_[parents_[x]];
      x = parents_[x];
    }
    return x;
  }

  /// Returns true if x and y were in different sets.
  bool join(std::size_t x, std::size_t y) {
    std::size_t a = find(x);
    std::size_t b = find(y);
    if (a == b) return false;
    if (ranks_[a] < ranks_[b]) std::swap(a, b);
    parents_[b] = a;
    if (ranks_[a] == ranks_[b]) ++ranks_[a];
    return true;
  }

  bool joined(std::size_t x, std::size_t y) { return find(x) == find(y); }

  /// Dense labels 0..k-1, numbered by the smallest element of each set.
  std::vector<std::uint32_t> labels(std::size_t* count = nullptr) {
    std::vector<std::uint32_t> root_label(parents_.size(), UINT32_MAX);
    std::vector<std::uint32_t> out(parents_.size());
    std::uint32_t next = 0;
    for (std::size_t i = 0; i < parents_.size(); ++i) {
      const auto root = find(i);
      if (root_label[root] == UINT32_MAX) root_label[root] = next++;
      out[i] = root_label[root];
    }
    if (count) *count = next;
    return out;
  }

 private:
  std::vector<std::size_t> parents_;
  std::vector<std::uint8_t> ranks_;
};

}  // namespace minkowski
