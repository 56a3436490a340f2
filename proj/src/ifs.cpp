#include "minkowski/ifs.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "minkowski/errors.hpp"

namespace minkowski {

std::string Number::to_string() const {
  if (exact_) return fmt::format("{}/{}", exact_->numerator(), exact_->denominator());
  return fmt::format("{:.17g}", value_);
}

bool CylinderWord::is_prefix_of(const CylinderWord& other) const {
  return letters.size() <= other.letters.size() &&
         std::equal(letters.begin(), letters.end(), other.letters.begin());
}

std::uint64_t word_index(const CylinderWord& word, std::size_t alphabet) {
  std::uint64_t index = 0;
  for (auto letter : word.letters) index = index * alphabet + letter;
  return index;
}

CylinderWord word_from_index(std::uint64_t index, std::size_t rank, std::size_t alphabet) {
  CylinderWord word;
  word.letters.resize(rank);
  for (std::size_t i = rank; i-- > 0;) {
    word.letters[i] = static_cast<std::uint32_t>(index % alphabet);
    index /= alphabet;
  }
  return word;
}

std::uint64_t checked_word_count(std::size_t alphabet, std::size_t rank, std::uint64_t budget,
                                 const char* operation) {
  std::uint64_t count = 1;
  for (std::size_t i = 0; i < rank; ++i) {
    if (alphabet != 0 && count > budget / alphabet) {
      throw BudgetExceeded(fmt::format("{}: {}^{} words exceed the budget of {}", operation,
                                       alphabet, rank, budget));
    }
    count *= alphabet;
  }
  if (count > budget) {
    throw BudgetExceeded(fmt::format("{}: {}^{} words exceed the budget of {}", operation,
                                     alphabet, rank, budget));
  }
  return count;
}

double Box::diameter() const {
  double sum = 0.0;
  for (std::size_t i = 0; i < dim(); ++i) sum += side(i) * side(i);
  return std::sqrt(sum);
}

bool Box::contains(const Box& inner, double tol) const {
  for (std::size_t i = 0; i < dim(); ++i) {
    if (inner.lo[i] < lo[i] - tol || inner.hi[i] > hi[i] + tol) return false;
  }
  return true;
}

bool Box::contains_point(std::span<const double> p, double tol) const {
  for (std::size_t i = 0; i < dim(); ++i) {
    if (p[i] < lo[i] - tol || p[i] > hi[i] + tol) return false;
  }
  return true;
}

double IntervalMap::apply(double x) const { return intercept() + slope() * x; }

bool same_parameters(const IntervalMap& a, const IntervalMap& b) {
  return a.orientation == b.orientation && a.ratio == b.ratio && a.offset == b.offset;
}

void validate_interval_map(const IntervalMap& map) {
  if (!(map.ratio > Number(0.0)) || !(map.ratio < Number(1.0))) {
    throw InvalidArgument(fmt::format("interval map: ratio {} not in (0,1)", map.ratio.to_string()));
  }
  if (map.orientation != 1 && map.orientation != -1) {
    throw InvalidArgument(fmt::format("interval map: orientation {} not +1 or -1", map.orientation));
  }
  if (map.image_lo() < Number(0.0) || map.image_hi() > Number(1.0)) {
    throw InvalidArgument(fmt::format("interval map: image [{}, {}] not inside [0,1]",
                                      map.image_lo().to_string(), map.image_hi().to_string()));
  }
}

SpongeSystem::SpongeSystem(std::size_t dimension, std::vector<DiagonalMap> digits)
    : dimension_(dimension), digits_(std::move(digits)) {
  if (dimension_ == 0) throw InvalidArgument("sponge: dimension must be positive");
  if (digits_.empty()) throw InvalidArgument("sponge: digit set is empty");
  for (std::size_t i = 0; i < digits_.size(); ++i) {
    auto& digit = digits_[i];
    if (digit.digit.empty()) digit.digit = std::to_string(i);
    if (digit.components.size() != dimension_) {
      throw InvalidArgument(fmt::format("sponge: digit '{}' has {} components, expected {}",
                                        digit.digit, digit.components.size(), dimension_));
    }
    for (const auto& component : digit.components) validate_interval_map(component);
  }
  for (std::size_t i = 0; i < digits_.size(); ++i) {
    for (std::size_t j = i + 1; j < digits_.size(); ++j) {
      if (digits_[i].digit == digits_[j].digit) {
        throw InvalidArgument(fmt::format("sponge: duplicate digit identifier '{}'", digits_[i].digit));
      }
    }
  }
  r_star_ = 1.0;
  r_upper_ = 0.0;
  for (const auto& digit : digits_) {
    r_star_ = std::min(r_star_, digit.components.back().ratio.value());
    r_upper_ = std::max(r_upper_, digit.components.front().ratio.value());
  }
}

double SpongeSystem::max_pillar_diameter(std::size_t rank) const {
  double sum = 0.0;
  for (std::size_t axis = 0; axis < dimension_; ++axis) {
    double worst = 0.0;
    for (const auto& digit : digits_) worst = std::max(worst, digit.components[axis].ratio.value());
    const double side = std::pow(worst, static_cast<double>(rank));
    sum += side * side;
  }
  return std::sqrt(sum);
}

std::optional<std::vector<std::size_t>> normalize_coordinate_order(SpongeSystem& sponge) {
  const std::size_t d = sponge.dimension();
  std::vector<std::size_t> perm(d);
  std::iota(perm.begin(), perm.end(), 0);
  const auto& first = sponge.digit(0).components;
  std::stable_sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
    return first[a].ratio > first[b].ratio;
  });
  std::vector<DiagonalMap> digits = sponge.digits();
  for (auto& digit : digits) {
    std::vector<IntervalMap> reordered;
    reordered.reserve(d);
    for (auto axis : perm) reordered.push_back(digit.components[axis]);
    digit.components = std::move(reordered);
  }
  SpongeSystem candidate(d, std::move(digits));
  if (!validate_coordinate_ordering(candidate)) return std::nullopt;
  sponge = std::move(candidate);
  return perm;
}

SimilarIFS::SimilarIFS(std::size_t dimension, std::vector<Similitude> maps, std::optional<Box> osc_open_set)
    : dimension_(dimension), maps_(std::move(maps)), osc_open_set_(std::move(osc_open_set)) {
  if (dimension_ == 0) throw InvalidArgument("similar IFS: dimension must be positive");
  if (maps_.empty()) throw InvalidArgument("similar IFS: map list is empty");
  for (std::size_t i = 0; i < maps_.size(); ++i) {
    auto& map = maps_[i];
    if (!(map.ratio > 0.0 && map.ratio < 1.0)) {
      throw InvalidArgument(fmt::format("similar IFS: map {} ratio {} not in (0,1)", i, map.ratio));
    }
    if (map.linear.empty()) {
      map.linear.assign(dimension_ * dimension_, 0.0);
      for (std::size_t k = 0; k < dimension_; ++k) map.linear[k * dimension_ + k] = 1.0;
    }
    if (map.linear.size() != dimension_ * dimension_ || map.translation.size() != dimension_) {
      throw InvalidArgument(fmt::format("similar IFS: map {} has wrong linear/translation size", i));
    }
    // Q Q^T = I
    for (std::size_t r = 0; r < dimension_; ++r) {
      for (std::size_t c = 0; c < dimension_; ++c) {
        double dot = 0.0;
        for (std::size_t k = 0; k < dimension_; ++k) {
          dot += map.linear[r * dimension_ + k] * map.linear[c * dimension_ + k];
        }
        if (std::abs(dot - (r == c ? 1.0 : 0.0)) > 1e-9) {
          throw InvalidArgument(fmt::format("similar IFS: map {} linear part is not orthogonal", i));
        }
      }
    }
  }
  if (osc_open_set_ && osc_open_set_->dim() != dimension_) {
    throw InvalidArgument("similar IFS: open set dimension mismatch");
  }
}

SimilarIFS SimilarIFS::from_interval_maps(std::span<const IntervalMap> maps) {
  std::vector<Similitude> sims;
  sims.reserve(maps.size());
  for (const auto& map : maps) {
    validate_interval_map(map);
    sims.push_back({map.ratio.value(), {map.orientation > 0 ? 1.0 : -1.0}, {map.intercept()}});
  }
  return SimilarIFS(1, std::move(sims));
}

std::vector<double> SimilarIFS::ratios() const {
  std::vector<double> out;
  out.reserve(maps_.size());
  for (const auto& map : maps_) out.push_back(map.ratio);
  return out;
}

double SimilarIFS::max_ratio() const {
  double r = 0.0;
  for (const auto& map : maps_) r = std::max(r, map.ratio);
  return r;
}

double SimilarIFS::min_ratio() const {
  double r = 1.0;
  for (const auto& map : maps_) r = std::min(r, map.ratio);
  return r;
}

double SimilarIFS::max_cylinder_diameter(std::size_t rank) const {
  return std::pow(max_ratio(), static_cast<double>(rank)) * std::sqrt(static_cast<double>(dimension_));
}

std::vector<IntervalMap> SimilarIFS::as_interval_maps() const {
  if (dimension_ != 1) throw InvalidArgument("similar IFS: interval maps need dimension 1");
  std::vector<IntervalMap> out;
  for (const auto& map : maps_) {
    const int orientation = map.linear[0] > 0 ? 1 : -1;
    const double offset = orientation > 0 ? map.translation[0] : map.translation[0] - map.ratio;
    out.push_back({Number(map.ratio), Number(offset), orientation});
  }
  return out;
}

bool validate_coordinate_ordering(const SpongeSystem& sponge) {
  for (const auto& digit : sponge.digits()) {
    for (std::size_t i = 0; i + 1 < digit.components.size(); ++i) {
      if (!(digit.components[i].ratio > digit.components[i + 1].ratio)) return false;
    }
  }
  return true;
}

namespace {

bool same_prefix(const std::vector<IntervalMap>& a, const std::vector<IntervalMap>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!same_parameters(a[i], b[i])) return false;
  }
  return true;
}

// Open boxes prod (lo_i, hi_i) are disjoint iff some axis separates them.
bool open_boxes_disjoint(const std::vector<IntervalMap>& a, const std::vector<IntervalMap>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].image_hi() <= b[i].image_lo() || b[i].image_hi() <= a[i].image_lo()) return true;
  }
  return false;
}

}  // namespace

std::vector<std::vector<IntervalMap>> project_ifs(const SpongeSystem& sponge, std::size_t j) {
  if (j < 1 || j > sponge.dimension()) {
    throw InvalidArgument(fmt::format("project_ifs: j = {} outside 1..{}", j, sponge.dimension()));
  }
  std::vector<std::vector<IntervalMap>> out;
  for (const auto& digit : sponge.digits()) {
    std::vector<IntervalMap> prefix(digit.components.begin(), digit.components.begin() + j);
    const bool seen = std::any_of(out.begin(), out.end(),
                                  [&](const auto& existing) { return same_prefix(existing, prefix); });
    if (!seen) out.push_back(std::move(prefix));
  }
  return out;
}

bool validate_neat_projection(const SpongeSystem& sponge) {
  const std::size_t d = sponge.dimension();
  for (std::size_t j = 1; j <= d; ++j) {
    std::vector<std::vector<IntervalMap>> maps;
    if (j < d) {
      maps = project_ifs(sponge, j);
    } else {
      for (const auto& digit : sponge.digits()) maps.push_back(digit.components);
    }
    for (std::size_t a = 0; a < maps.size(); ++a) {
      for (std::size_t b = a + 1; b < maps.size(); ++b) {
        if (!open_boxes_disjoint(maps[a], maps[b])) return false;
      }
    }
  }
  return true;
}

void validate_word(const CylinderWord& word, std::size_t alphabet, const char* operation) {
  for (std::size_t i = 0; i < word.letters.size(); ++i) {
    if (word.letters[i] >= alphabet) {
      throw InvalidArgument(fmt::format("{}: letter {} at position {} is not a digit (alphabet size {})",
                                        operation, word.letters[i], i, alphabet));
    }
  }
}

Pillar pillar(const SpongeSystem& sponge, const CylinderWord& word) {
  validate_word(word, sponge.size(), "pillar");
  const std::size_t d = sponge.dimension();
  Pillar out;
  out.word = word;
  out.box.lo.assign(d, 0.0);
  out.box.hi.assign(d, 1.0);
  out.sides.assign(d, 1.0);
  out.shortest_side = 1.0;
  for (std::size_t axis = 0; axis < d; ++axis) {
    double lo = 0.0;
    double hi = 1.0;
    double side = 1.0;
    for (std::size_t i = word.rank(); i-- > 0;) {
      const auto& map = sponge.digit(word.letters[i]).components[axis];
      const double a = map.apply(lo);
      const double b = map.apply(hi);
      lo = std::min(a, b);
      hi = std::max(a, b);
      side *= map.ratio.value();
    }
    out.box.lo[axis] = lo;
    // Exact product of ratios for the side, independent of round-off in lo.
    out.box.hi[axis] = lo + side;
    out.sides[axis] = side;
    out.shortest_side = std::min(out.shortest_side, side);
  }
  return out;
}

std::vector<CylinderWord> children(const SpongeSystem& sponge, const CylinderWord& word) {
  validate_word(word, sponge.size(), "children");
  std::vector<CylinderWord> out;
  out.reserve(sponge.size());
  for (std::uint32_t a = 0; a < sponge.size(); ++a) {
    CylinderWord child = word;
    child.letters.push_back(a);
    out.push_back(std::move(child));
  }
  return out;
}

bool check_osc_intervals(std::span<const IntervalMap> maps) {
  if (maps.empty()) throw InvalidArgument("check_osc_intervals: map list is empty");
  for (std::size_t a = 0; a < maps.size(); ++a) {
    for (std::size_t b = a + 1; b < maps.size(); ++b) {
      if (!(maps[a].image_hi() <= maps[b].image_lo() || maps[b].image_hi() <= maps[a].image_lo())) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace minkowski
