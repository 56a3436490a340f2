#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "minkowski/ifs.hpp"
#include "minkowski/symbolic.hpp"

namespace fixtures {

using minkowski::DiagonalMap;
using minkowski::IntervalMap;
using minkowski::Number;

inline IntervalMap imap(std::int64_t rp, std::int64_t rq, std::int64_t op, std::int64_t oq, int orientation = 1) {
  return {Number(rp, rq), Number(op, oq), orientation};
}

/// Column ratio 1/2 with offsets {0, 1/2, 0}; row ratio 1/3 with offsets {0, 1/3, 2/3}.
inline minkowski::SpongeSystem mcmullen() {
  return minkowski::SpongeSystem(2, {{{imap(1, 2, 0, 1), imap(1, 3, 0, 1)}, "a"},
                                     {{imap(1, 2, 1, 2), imap(1, 3, 1, 3)}, "b"},
                                     {{imap(1, 2, 0, 1), imap(1, 3, 2, 3)}, "c"}});
}

/// Product of the middle-third Cantor set and the quarter Cantor set.
inline minkowski::SpongeSystem dust() {
  std::vector<DiagonalMap> digits;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) digits.push_back({{imap(1, 3, 2 * i, 3), imap(1, 4, 3 * j, 4)}, {}});
  }
  for (std::size_t k = 0; k < digits.size(); ++k) digits[k].digit = std::to_string(k);
  return minkowski::SpongeSystem(2, digits);
}

/// All n1*n2 grid cells with ratios 1/n1 > 1/n2.
inline minkowski::SpongeSystem full_grid(int n1, int n2) {
  std::vector<DiagonalMap> digits;
  for (int i = 0; i < n1; ++i) {
    for (int j = 0; j < n2; ++j) {
      digits.push_back({{imap(1, n1, i, n1), imap(1, n2, j, n2)}, std::to_string(i * n2 + j)});
    }
  }
  return minkowski::SpongeSystem(2, digits);
}

inline std::vector<IntervalMap> cantor_maps() { return {imap(1, 3, 0, 1), imap(1, 3, 2, 3)}; }

inline minkowski::SimilarIFS cantor() {
  const auto maps = cantor_maps();
  return minkowski::SimilarIFS::from_interval_maps(maps);
}

inline std::vector<IntervalMap> kenyon_maps() {
  const double lambda = std::sqrt(2.0) / 2.0;
  return {imap(1, 3, 0, 1), imap(1, 3, 1, 3), {Number(1, 3), Number(lambda / 3.0), 1}};
}

inline minkowski::SimilarIFS kenyon() {
  const auto maps = kenyon_maps();
  return minkowski::SimilarIFS::from_interval_maps(maps);
}

/// Four maps of ratio 1/2 tiling the unit square.
inline minkowski::SimilarIFS unit_square() {
  std::vector<minkowski::Similitude> maps;
  for (double x : {0.0, 0.5}) {
    for (double y : {0.0, 0.5}) maps.push_back({0.5, {}, {x, y}});
  }
  return minkowski::SimilarIFS(2, maps);
}

inline minkowski::SymbolicSystem symbolic(minkowski::SymbolicFlavor flavor = minkowski::SymbolicFlavor::Full) {
  return minkowski::SymbolicSystem(3, 2, {{0, 0}, {1, 1}, {2, 0}}, flavor);
}

/// A sponge with d <= 3 axes and at most 8 digits that satisfies coordinate
/// ordering and neat projection: each axis is cut into consecutive cells
/// whose rational lengths are all shorter than every cell of the previous
/// axis, and digits pick distinct cell tuples.
inline minkowski::SpongeSystem random_sponge(std::mt19937& rng) {
  // Cell lengths per axis: denominators strictly increase from axis to axis.
  static const std::vector<std::vector<int>> kDenominators = {{2, 3, 4}, {5, 6, 7}, {8, 9, 10}};
  std::uniform_int_distribution<int> dim_pick(1, 3);
  const int d = dim_pick(rng);
  std::vector<std::vector<IntervalMap>> cells(d);
  for (int j = 0; j < d; ++j) {
    const auto& dens = kDenominators[j];
    Number used(0, 1);
    while (true) {
      const int q = dens[std::uniform_int_distribution<std::size_t>(0, dens.size() - 1)(rng)];
      const Number len(1, q);
      if (used + len > Number(1, 1)) break;
      const int orientation = std::uniform_int_distribution<int>(0, 3)(rng) == 0 ? -1 : 1;
      cells[j].push_back({len, used, orientation});
      used = used + len;
      if (cells[j].size() >= 6) break;
    }
  }
  std::size_t total = 1;
  for (const auto& c : cells) total *= c.size();
  const std::size_t count = std::uniform_int_distribution<std::size_t>(1, std::min<std::size_t>(8, total))(rng);
  std::vector<std::size_t> tuples(total);
  for (std::size_t i = 0; i < total; ++i) tuples[i] = i;
  std::shuffle(tuples.begin(), tuples.end(), rng);
  std::vector<DiagonalMap> digits;
  for (std::size_t k = 0; k < count; ++k) {
    DiagonalMap digit;
    digit.digit = std::to_string(k);
    std::size_t code = tuples[k];
    for (int j = 0; j < d; ++j) {
      digit.components.push_back(cells[j][code % cells[j].size()]);
      code /= cells[j].size();
    }
    digits.push_back(std::move(digit));
  }
  return minkowski::SpongeSystem(static_cast<std::size_t>(d), digits);
}

}  // namespace fixtures
