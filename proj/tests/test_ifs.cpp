#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "minkowski/errors.hpp"
#include "minkowski/ifs.hpp"

using namespace minkowski;
using fixtures::imap;

TEST_CASE("coordinate ordering") {
  SpongeSystem ordered(2, {{{imap(1, 2, 0, 1), imap(1, 3, 0, 1)}, "a"}, {{imap(1, 2, 1, 2), imap(1, 3, 2, 3)}, "b"}});
  CHECK(validate_coordinate_ordering(ordered));

  SpongeSystem tied(2, {{{imap(1, 3, 0, 1), imap(1, 3, 0, 1)}, "a"}});
  CHECK_FALSE(validate_coordinate_ordering(tied));

  CHECK(validate_coordinate_ordering(fixtures::mcmullen()));
}

TEST_CASE("project_ifs") {
  const auto mc = fixtures::mcmullen();
  CHECK(project_ifs(mc, 1).size() == 2);
  CHECK(project_ifs(mc, 2).size() == 3);

  SpongeSystem single(2, {{{imap(1, 2, 0, 1), imap(1, 3, 0, 1)}, "a"}});
  CHECK(project_ifs(single, 1).size() == 1);
  CHECK(project_ifs(single, 2).size() == 1);

  CHECK_THROWS_AS(project_ifs(mc, 0), InvalidArgument);
  CHECK_THROWS_AS(project_ifs(mc, 3), InvalidArgument);
}

TEST_CASE("neat projection") {
  CHECK(validate_neat_projection(fixtures::mcmullen()));

  const DiagonalMap same{{imap(1, 2, 0, 1), imap(1, 3, 0, 1)}, "a"};
  SpongeSystem duplicated(2, {same, {same.components, "b"}});
  CHECK_FALSE(validate_neat_projection(duplicated));

  SpongeSystem single(2, {same});
  CHECK(validate_neat_projection(single));
}

TEST_CASE("pillar") {
  const auto mc = fixtures::mcmullen();
  const auto root = pillar(mc, CylinderWord{});
  CHECK(root.shortest_side == 1.0);
  CHECK(root.box.side(0) == 1.0);
  CHECK(root.box.side(1) == 1.0);

  const auto p = pillar(mc, CylinderWord{{1, 2}});
  CHECK(p.box.side(0) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(p.box.side(1) == doctest::Approx(1.0 / 9.0).epsilon(1e-14));
  CHECK(p.shortest_side == doctest::Approx(1.0 / 9.0).epsilon(1e-14));
  // Word (b, c): x in [1/2 + 0, 1/2 + 1/4], y in [1/3 + 2/9, 1/3 + 2/9 + 1/9].
  CHECK(p.box.lo[0] == doctest::Approx(0.5));
  CHECK(p.box.lo[1] == doctest::Approx(5.0 / 9.0));

  const auto grid = fixtures::full_grid(2, 3);
  const auto deep = pillar(grid, CylinderWord{{0, 5, 3, 1}});
  CHECK(deep.shortest_side == doctest::Approx(std::pow(1.0 / 3.0, 4)).epsilon(1e-14));
}

TEST_CASE("orientation-reversing maps give the same pillar extents") {
  SpongeSystem forward(1, {{{imap(1, 3, 0, 1)}, "a"}, {{imap(1, 3, 2, 3)}, "b"}});
  SpongeSystem flipped(1, {{{imap(1, 3, 0, 1, -1)}, "a"}, {{imap(1, 3, 2, 3, -1)}, "b"}});
  const auto a = pillar(forward, CylinderWord{{1}});
  const auto b = pillar(flipped, CylinderWord{{1}});
  CHECK(a.box.lo[0] == doctest::Approx(b.box.lo[0]).epsilon(1e-15));
  CHECK(a.box.hi[0] == doctest::Approx(b.box.hi[0]).epsilon(1e-15));
  // At rank 2 the flip exchanges which child lands left.
  const auto c = pillar(flipped, CylinderWord{{0, 0}});
  CHECK(c.box.lo[0] == doctest::Approx(2.0 / 9.0));
}

TEST_CASE("children") {
  const auto mc = fixtures::mcmullen();
  CHECK(children(mc, CylinderWord{}).size() == 3);
  const auto kids = children(mc, CylinderWord{{0, 1}});
  REQUIRE(kids.size() == 3);
  for (const auto& k : kids) CHECK(k.rank() == 3);
  std::size_t grand = 0;
  for (const auto& k : children(mc, CylinderWord{})) grand += children(mc, k).size();
  CHECK(grand == 9);
}

TEST_CASE("interval open set condition") {
  CHECK(check_osc_intervals(fixtures::cantor_maps()));
  CHECK_FALSE(check_osc_intervals(fixtures::kenyon_maps()));
  const std::vector<IntervalMap> one{imap(1, 2, 0, 1)};
  CHECK(check_osc_intervals(one));
  // Touching closed images are still disjoint as open sets, exactly.
  const std::vector<IntervalMap> touching{imap(1, 3, 0, 1), imap(1, 3, 1, 3), imap(1, 3, 2, 3)};
  CHECK(check_osc_intervals(touching));
}

TEST_CASE("word index round trip") {
  for (std::uint64_t i = 0; i < 81; ++i) CHECK(word_index(word_from_index(i, 4, 3), 3) == i);
  CHECK(word_from_index(5, 2, 3).letters == std::vector<std::uint32_t>{1, 2});
  CHECK_THROWS_AS(checked_word_count(3, 20, 1000, "test"), BudgetExceeded);
}

TEST_CASE("coordinate normalization reorders axes") {
  SpongeSystem swapped(2, {{{imap(1, 3, 0, 1), imap(1, 2, 0, 1)}, "a"}, {{imap(1, 3, 2, 3), imap(1, 2, 1, 2)}, "b"}});
  CHECK_FALSE(validate_coordinate_ordering(swapped));
  const auto perm = normalize_coordinate_order(swapped);
  REQUIRE(perm);
  CHECK(*perm == std::vector<std::size_t>{1, 0});
  CHECK(validate_coordinate_ordering(swapped));

  SpongeSystem conflicting(2, {{{imap(1, 3, 0, 1), imap(1, 2, 0, 1)}, "a"},
                               {{imap(1, 2, 1, 2), imap(1, 3, 2, 3)}, "b"}});
  CHECK_FALSE(normalize_coordinate_order(conflicting));
}

TEST_CASE("invalid interval maps are rejected") {
  CHECK_THROWS_AS(validate_interval_map(imap(1, 1, 0, 1)), InvalidArgument);
  CHECK_THROWS_AS(validate_interval_map(imap(1, 2, 3, 4)), InvalidArgument);
  CHECK_THROWS_AS(SpongeSystem(2, {}), InvalidArgument);
}

TEST_CASE("pillar invariants on random sponges") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    const auto sponge = fixtures::random_sponge(rng);
    const auto d = sponge.dimension();
    REQUIRE(validate_coordinate_ordering(sponge));
    CHECK(project_ifs(sponge, d).size() == sponge.size());

    std::uniform_int_distribution<std::uint32_t> letter(0, static_cast<std::uint32_t>(sponge.size() - 1));
    CylinderWord word;
    for (int k = 0; k < 6; ++k) word.letters.push_back(letter(rng));
    const auto p = pillar(sponge, word);
    for (std::size_t j = 0; j < d; ++j) {
      double product = 1.0;
      for (auto a : word.letters) product *= sponge.digit(a).components[j].ratio.value();
      CHECK(std::abs(p.sides[j] - product) <= product * std::ldexp(1.0, -40));
      CHECK(std::abs(p.box.side(j) - product) <= 1e-15);
    }
    CHECK(p.shortest_side == p.sides[d - 1]);
    for (const auto& child : children(sponge, word)) CHECK(p.box.contains(pillar(sponge, child).box, 1e-15));
  }
}
