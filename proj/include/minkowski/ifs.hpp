#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "minkowski/number.hpp"

namespace minkowski {

/// Finite word over a digit alphabet; letters are digit indices.
struct CylinderWord {
  std::vector<std::uint32_t> letters;

  std::size_t rank() const { return letters.size(); }
  bool is_prefix_of(const CylinderWord& other) const;

  friend auto operator<=>(const CylinderWord&, const CylinderWord&) = default;
};

/// Encodes a word of fixed rank as its position in lexicographic order.
std::uint64_t word_index(const CylinderWord& word, std::size_t alphabet);
CylinderWord word_from_index(std::uint64_t index, std::size_t rank, std::size_t alphabet);

/// alphabet^rank, or throws BudgetExceeded when it exceeds `budget`.
std::uint64_t checked_word_count(std::size_t alphabet, std::size_t rank, std::uint64_t budget,
                                 const char* operation);

inline constexpr std::uint64_t kDefaultBudget = 5'000'000;

/// Product of closed intervals.
struct Box {
  std::vector<double> lo;
  std::vector<double> hi;

  std::size_t dim() const { return lo.size(); }
  double side(std::size_t axis) const { return hi[axis] - lo[axis]; }
  double diameter() const;
  bool contains(const Box& inner, double tol = 0.0) const;
  bool contains_point(std::span<const double> p, double tol = 0.0) const;
};

/// Contracting similitude of [0,1]: x -> offset + ratio*x, or
/// x -> offset + ratio*(1-x) when orientation is -1. The image is always
/// [offset, offset + ratio].
struct IntervalMap {
  Number ratio;
  Number offset;
  int orientation = 1;

  double apply(double x) const;
  /// Signed slope and intercept of the affine form.
  double slope() const { return orientation > 0 ? ratio.value() : -ratio.value(); }
  double intercept() const {
    return orientation > 0 ? offset.value() : offset.value() + ratio.value();
  }
  Number image_lo() const { return offset; }
  Number image_hi() const { return offset + ratio; }

  /// Exact parameter equality (rational when both sides are rational).
  friend bool same_parameters(const IntervalMap& a, const IntervalMap& b);
};

/// Throws InvalidArgument unless 0 < ratio < 1 and the image lies in [0,1].
void validate_interval_map(const IntervalMap& map);

struct DiagonalMap {
  std::vector<IntervalMap> components;
  std::string digit;
};

/// Diagonal IFS on [0,1]^d.
class SpongeSystem {
 public:
  SpongeSystem(std::size_t dimension, std::vector<DiagonalMap> digits);

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return digits_.size(); }
  const std::vector<DiagonalMap>& digits() const { return digits_; }
  const DiagonalMap& digit(std::size_t i) const { return digits_[i]; }

  /// min over digits of |phi'_{a,d}|.
  double r_star() const { return r_star_; }
  /// max over digits of |phi'_{a,1}|.
  double r_upper() const { return r_upper_; }

  /// Upper bound on the Euclidean diameter of any rank-k pillar.
  double max_pillar_diameter(std::size_t rank) const;

 private:
  std::size_t dimension_;
  std::vector<DiagonalMap> digits_;
  double r_star_ = 0.0;
  double r_upper_ = 0.0;
};

/// Reorders coordinates so that every digit has strictly decreasing ratios
/// along the axes, when a single permutation achieves that. Returns the
/// permutation used (new axis i is old axis perm[i]) or nullopt.
std::optional<std::vector<std::size_t>> normalize_coordinate_order(SpongeSystem& sponge);

struct Pillar {
  Box box;
  CylinderWord word;
  /// Per-axis products of the component ratios; box.side() recovers these
  /// only up to the round-off of hi - lo.
  std::vector<double> sides;
  double shortest_side = 1.0;
};

/// x -> ratio * linear * x + translation, with `linear` orthogonal
/// (row-major, n x n).
struct Similitude {
  double ratio = 0.5;
  std::vector<double> linear;
  std::vector<double> translation;
};

class SimilarIFS {
 public:
  SimilarIFS(std::size_t dimension, std::vector<Similitude> maps,
             std::optional<Box> osc_open_set = std::nullopt);

  /// 1-D convenience: each map given as an IntervalMap on [0,1].
  static SimilarIFS from_interval_maps(std::span<const IntervalMap> maps);

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return maps_.size(); }
  const std::vector<Similitude>& maps() const { return maps_; }
  const std::optional<Box>& osc_open_set() const { return osc_open_set_; }
  std::vector<double> ratios() const;
  double max_ratio() const;
  double min_ratio() const;

  /// Upper bound on the diameter of any rank-k cylinder image of the unit cube.
  double max_cylinder_diameter(std::size_t rank) const;

  /// Interval maps of a 1-D system (offsets are image left endpoints).
  std::vector<IntervalMap> as_interval_maps() const;

 private:
  std::size_t dimension_;
  std::vector<Similitude> maps_;
  std::optional<Box> osc_open_set_;
};

// ---------------------------------------------------------------------------
// Operations

/// True iff |phi'_{a,1}| > ... > |phi'_{a,d}| for every digit.
bool validate_coordinate_ordering(const SpongeSystem& sponge);

/// Distinct j-prefixes (phi_{a,1}, ..., phi_{a,j}) in order of first
/// appearance. Equality is exact parameter equality. `j` is 1-based.
std::vector<std::vector<IntervalMap>> project_ifs(const SpongeSystem& sponge, std::size_t j);

/// Open set condition with (0,1)^j for every projected IFS. At j = d every
/// digit counts separately, so repeated digit maps fail.
bool validate_neat_projection(const SpongeSystem& sponge);

Pillar pillar(const SpongeSystem& sponge, const CylinderWord& word);

std::vector<CylinderWord> children(const SpongeSystem& sponge, const CylinderWord& word);

/// True iff the open images of (0,1) are pairwise disjoint.
bool check_osc_intervals(std::span<const IntervalMap> maps);

/// Throws InvalidArgument naming `operation` if a letter is not a digit index.
void validate_word(const CylinderWord& word, std::size_t alphabet, const char* operation);

}  // namespace minkowski
