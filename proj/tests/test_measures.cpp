#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "minkowski/dimension.hpp"
#include "minkowski/errors.hpp"
#include "minkowski/measures.hpp"

using namespace minkowski;
using fixtures::imap;

namespace {
double total_mass(const BernoulliMeasure& mu, std::size_t rank) {
  double total = 0.0;
  const auto count = checked_word_count(mu.alphabet(), rank, kDefaultBudget, "test");
  for (std::uint64_t i = 0; i < count; ++i) total += measure_of_word(mu, word_from_index(i, rank, mu.alphabet()));
  return total;
}
}  // namespace

TEST_CASE("sponge weights") {
  const auto mc = fixtures::mcmullen();
  const auto mu = bernoulli_weights(mc, solve_beta_sequence(mc));
  for (double w : mu.weights()) CHECK(std::abs(w - 1.0 / 3.0) <= 1e-12);

  SpongeSystem single(2, {{{imap(1, 2, 0, 1), imap(1, 3, 0, 1)}, "a"}});
  CHECK(bernoulli_weights(single, solve_beta_sequence(single)).weights() == std::vector<double>{1.0});

  const auto cantor = natural_weights(fixtures::cantor());
  for (double w : cantor.weights()) CHECK(std::abs(w - 0.5) <= 1e-12);
}

TEST_CASE("measure of a word") {
  const auto uniform = BernoulliMeasure::uniform(3);
  CHECK(std::abs(measure_of_word(uniform, CylinderWord{{0, 2}}) - 1.0 / 9.0) <= 1e-15);
  CHECK(measure_of_word(uniform, CylinderWord{}) == 1.0);
  const auto mc = fixtures::mcmullen();
  const auto mu = bernoulli_weights(mc, solve_beta_sequence(mc));
  CHECK(std::abs(measure_of_word(mu, CylinderWord{{2, 0, 1}}) - 1.0 / 27.0) <= 1e-12);
  CHECK_THROWS_AS(measure_of_word(uniform, CylinderWord{{3}}), InvalidArgument);
}

TEST_CASE("projected measures") {
  const auto mc = fixtures::mcmullen();
  const auto betas = solve_beta_sequence(mc);
  CHECK(std::abs(projected_measure(mc, betas, 1, CylinderWord{{0}}) - 0.5) <= 1e-12);
  CHECK(std::abs(projected_measure(mc, betas, 1, CylinderWord{{1}}) - 0.5) <= 1e-12);
  const auto mu = bernoulli_weights(mc, betas);
  for (std::uint64_t i = 0; i < 27; ++i) {
    const auto w = word_from_index(i, 3, 3);
    CHECK(std::abs(projected_measure(mc, betas, 2, w) - measure_of_word(mu, w)) <= 1e-12);
  }
  SpongeSystem column(2, {{{imap(1, 2, 0, 1), imap(1, 3, 0, 1)}, "a"}, {{imap(1, 2, 0, 1), imap(1, 3, 2, 3)}, "b"}});
  CHECK(std::abs(projected_measure(column, solve_beta_sequence(column), 1, CylinderWord{{0, 0}}) - 1.0) <= 1e-12);
}

TEST_CASE("measure of a set") {
  const auto u3 = BernoulliMeasure::uniform(3);
  CHECK(std::abs(measure_of_set(u3, MeasurableSet::full(3, 4)) - 1.0) <= 1e-12);
  CHECK(measure_of_set(BernoulliMeasure::uniform(2), MeasurableSet({CylinderWord{{0}}})) == 0.5);
  CHECK(std::abs(measure_of_set(u3, MeasurableSet({CylinderWord{{0}}, CylinderWord{{2}}})) - 2.0 / 3.0) <= 1e-15);
  CHECK_THROWS_AS(MeasurableSet({CylinderWord{{0}}, CylinderWord{{0, 1}}}), InvalidArgument);
}

TEST_CASE("bernoulli measure validation") {
  CHECK_THROWS_AS(BernoulliMeasure({0.5, 0.4}), InvalidArgument);
  CHECK_THROWS_AS(BernoulliMeasure({1.0, 0.0}), InvalidArgument);
  CHECK_THROWS_AS(BernoulliMeasure({}), InvalidArgument);
}

TEST_CASE("pushforward") {
  const BernoulliMeasure mu({0.5, 0.25, 0.25});
  const MeasurableSet set({CylinderWord{{0, 1}}, CylinderWord{{2}}});
  CHECK(pushforward_measure(CodeMap::identity(3, 2), mu, set) == doctest::Approx(measure_of_set(mu, set)));

  const std::vector<std::uint32_t> swap{1, 0, 2};
  const auto code = CodeMap::from_digit_permutation(swap, 1);
  CHECK(pushforward_measure(code, mu, MeasurableSet({CylinderWord{{1}}})) == 0.5);
  CHECK(pushforward_measure(code, mu, MeasurableSet({CylinderWord{{0}}})) == 0.25);
  const auto pushed = pushforward_bernoulli(swap, mu);
  CHECK(pushed.weights() == std::vector<double>{0.25, 0.5, 0.25});

  const auto uniform = BernoulliMeasure::uniform(3);
  const std::vector<std::uint32_t> cycle{1, 2, 0};
  const auto rotate = CodeMap::from_digit_permutation(cycle, 3);
  for (std::uint64_t i = 0; i < 27; ++i) {
    const MeasurableSet single({word_from_index(i, 3, 3)});
    CHECK(pushforward_measure(rotate, uniform, single) == doctest::Approx(1.0 / 27.0));
  }
  CHECK(std::abs(pushforward_measure(rotate, mu, MeasurableSet::full(3, 3)) - 1.0) <= 1e-12);

  CHECK_THROWS_AS(CodeMap(2, 1, {0, 0}), InvalidArgument);
}

TEST_CASE("pushforward of the full space is 1 under random bijections") {
  std::mt19937 rng(11);
  const BernoulliMeasure mu({0.2, 0.3, 0.5});
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<std::uint64_t> table(27);
    for (std::uint64_t i = 0; i < 27; ++i) table[i] = i;
    std::shuffle(table.begin(), table.end(), rng);
    const CodeMap f(3, 3, table);
    CHECK(std::abs(pushforward_measure(f, mu, MeasurableSet::full(3, 3)) - 1.0) <= 1e-12);
    CHECK(std::abs(pushforward_measure(f, mu, MeasurableSet::full(3, 1)) - 1.0) <= 1e-12);
  }
}

TEST_CASE("equivalence test") {
  const BernoulliMeasure mu({0.5, 0.25, 0.25});
  std::vector<MeasurableSet> family;
  for (std::uint64_t i = 0; i < 9; ++i) family.emplace_back(std::vector<CylinderWord>{word_from_index(i, 2, 3)});
  auto [lo, hi] = equivalence_test(mu, mu, family);
  CHECK(lo == 1.0);
  CHECK(hi == 1.0);

  const SetFunction f = [&](const MeasurableSet& s) { return measure_of_set(mu, s); };
  const SetFunction twice = [&](const MeasurableSet& s) { return 2.0 * measure_of_set(mu, s); };
  std::tie(lo, hi) = equivalence_test(f, twice, family);
  CHECK(lo == doctest::Approx(2.0));
  CHECK(hi == doctest::Approx(2.0));

  const auto mc = fixtures::mcmullen();
  const auto weights = bernoulli_weights(mc, solve_beta_sequence(mc));
  std::vector<MeasurableSet> cylinders;
  for (std::uint64_t i = 0; i < 81; ++i) cylinders.emplace_back(std::vector<CylinderWord>{word_from_index(i, 4, 3)});
  std::tie(lo, hi) = equivalence_test(BernoulliMeasure::uniform(3), weights, cylinders);
  CHECK(lo == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(hi == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("normalization up to rank 12") {
  const BernoulliMeasure mu({0.2, 0.3, 0.5});
  for (std::size_t k = 0; k <= 12; ++k) CHECK(std::abs(total_mass(mu, k) - 1.0) <= 1e-9);
}

TEST_CASE("sponge weights sum to 1 on random sponges") {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 25; ++trial) {
    const auto sponge = fixtures::random_sponge(rng);
    const auto mu = bernoulli_weights(sponge, solve_beta_sequence(sponge));
    double sum = 0.0;
    for (double w : mu.weights()) sum += w;
    CHECK(std::abs(sum - 1.0) <= 1e-10);
  }
}
