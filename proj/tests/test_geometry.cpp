#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "minkowski/errors.hpp"
#include "minkowski/geometry.hpp"
#include "oracles.hpp"

using namespace minkowski;

namespace {
PointCloud line_cloud(std::vector<double> xs) {
  std::vector<Point> points;
  for (double x : xs) points.push_back({x});
  return PointCloud::from_points(points);
}

std::vector<oracles::Pt> points_of(const PointCloud& cloud) {
  std::vector<oracles::Pt> out;
  for (std::size_t i = 0; i < cloud.size(); ++i) out.emplace_back(cloud.point(i).begin(), cloud.point(i).end());
  return out;
}

void check_valid_packing(const PointCloud& cloud, const PackingResult& packing) {
  for (std::size_t a = 0; a < packing.centers.size(); ++a) {
    for (std::size_t b = a + 1; b < packing.centers.size(); ++b) {
      CHECK(point_distance(cloud.point(packing.centers[a]), cloud.point(packing.centers[b]), Metric::Euclidean) >
            2.0 * packing.delta);
    }
  }
}
}  // namespace

TEST_CASE("sample attractor") {
  const auto c1 = sample_attractor(fixtures::cantor(), 1);
  REQUIRE(c1.size() == 2);
  CHECK(c1.point(0)[0] == doctest::Approx(1.0 / 6.0));
  CHECK(c1.point(1)[0] == doctest::Approx(5.0 / 6.0));

  const auto c0 = sample_attractor(fixtures::mcmullen(), 0);
  REQUIRE(c0.size() == 1);
  CHECK(c0.point(0)[0] == 0.5);
  CHECK(c0.point(0)[1] == 0.5);

  const auto mc = fixtures::mcmullen();
  const auto c2 = sample_attractor(mc, 2);
  REQUIRE(c2.size() == 9);
  for (std::size_t i = 0; i < 9; ++i) CHECK(pillar(mc, c2.source_word(i)).box.contains_point(c2.point(i)));

  CHECK_THROWS_AS(sample_attractor(fixtures::cantor(), 30, 1000), BudgetExceeded);
}

TEST_CASE("greedy packing examples") {
  const auto three = line_cloud({0, 1, 2});
  const auto p = greedy_packing(three, 0.6);
  CHECK(p.count == 2);
  CHECK(p.centers == std::vector<std::size_t>{0, 2});
  CHECK(greedy_packing(line_cloud({0.3}), 5.0).count == 1);

  const auto cantor8 = sample_attractor(fixtures::cantor(), 8);
  CHECK(greedy_packing(cantor8, std::pow(3.0, -4)).count == 16);
  CHECK_THROWS_AS(greedy_packing(three, 0.0), InvalidArgument);
}

TEST_CASE("greedy packing against the exhaustive maximum") {
  // Cantor representatives: greedy attains the maximum.
  for (std::size_t depth = 1; depth <= 4; ++depth) {
    const auto cloud = sample_attractor(fixtures::cantor(), depth);
    const auto pts = points_of(cloud);
    for (int k = 0; k <= 5; ++k) {
      const double delta = std::pow(3.0, -k) * 0.999;
      CHECK(greedy_packing(cloud, delta).count == oracles::exhaustive_max_packing(pts, delta));
    }
  }
  // Random planar clouds: greedy is maximal, so at least half the maximum.
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<Point> pts(20);
    for (auto& p : pts) p = {unit(rng), unit(rng)};
    const auto cloud = PointCloud::from_points(pts);
    const double delta = 0.05 + 0.2 * unit(rng);
    const auto greedy = greedy_packing(cloud, delta);
    check_valid_packing(cloud, greedy);
    CHECK(2 * greedy.count >= oracles::exhaustive_max_packing(points_of(cloud), delta));
  }
}

TEST_CASE("packing validity, monotonicity and separated additivity") {
  const auto mc = sample_attractor(fixtures::mcmullen(), 6);
  std::size_t previous = 0;
  for (int k = 1; k <= 8; ++k) {
    const auto packing = greedy_packing(mc, std::pow(2.0, -k));
    check_valid_packing(mc, packing);
    CHECK(packing.count >= previous);
    previous = packing.count;
  }

  std::mt19937 rng(3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double delta = 0.02 + 0.05 * unit(rng);
    std::vector<Point> left, right, both;
    for (int i = 0; i < 30; ++i) left.push_back({unit(rng), unit(rng)});
    for (int i = 0; i < 30; ++i) right.push_back({1.0 + 4.0 * delta + 1e-9 + unit(rng), unit(rng)});
    both = left;
    both.insert(both.end(), right.begin(), right.end());
    const auto a = greedy_packing(PointCloud::from_points(left), delta).count;
    const auto b = greedy_packing(PointCloud::from_points(right), delta).count;
    CHECK(greedy_packing(PointCloud::from_points(both), delta).count == a + b);
  }
}

TEST_CASE("epsilon components") {
  CHECK(epsilon_components(fixtures::cantor(), 0.2, 5).size() == 2);
  CHECK(epsilon_components(fixtures::cantor(), 1.5, 5).size() == 1);
  CHECK(epsilon_components(fixtures::full_grid(2, 3), 0.1, 6).size() == 1);
  CHECK(epsilon_components(fixtures::unit_square(), 0.1, 6).size() == 1);
  CHECK_THROWS_AS(epsilon_components(fixtures::cantor(), 0.2, 1), InvalidArgument);

  const auto parts = epsilon_components(fixtures::cantor(), 0.2, 5);
  double total = 0.0;
  for (const auto& c : parts.classes) total += measure_of_set(BernoulliMeasure::uniform(2), c);
  CHECK(total == doctest::Approx(1.0));
  CHECK(parts.classes[0].words() == std::vector<CylinderWord>{CylinderWord{{0}}});
}

TEST_CASE("Cantor components match the chain oracle") {
  const auto intervals = oracles::cantor_intervals(8);
  for (double eps : {0.005, 0.02, 0.05, 0.08, 0.12, 0.2, 0.4}) {
    const auto parts = epsilon_components(fixtures::cantor(), eps, 8);
    const auto expected = oracles::chain_classes(intervals, eps);
    REQUIRE(parts.labels.size() == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) CHECK(parts.labels[i] == static_cast<std::uint32_t>(expected[i]));
  }
  // Between 3^-(j+1) and 3^-j the classes are exactly the rank-j cylinders.
  for (std::size_t j = 1; j <= 5; ++j) {
    const double eps = 0.5 * (std::pow(3.0, -static_cast<double>(j)) + std::pow(3.0, -static_cast<double>(j + 1)));
    const auto parts = epsilon_components(fixtures::cantor(), eps, 8);
    CHECK(parts.size() == (std::size_t{1} << j));
    for (const auto& c : parts.classes) {
      REQUIRE(c.words().size() == 1);
      CHECK(c.words()[0].rank() == j);
    }
  }
}

TEST_CASE("hausdorff distance") {
  const auto a = line_cloud({0, 1});
  CHECK(hausdorff_distance(a, a) == 0.0);
  CHECK(hausdorff_distance(line_cloud({0}), line_cloud({1})) == 1.0);
  CHECK(hausdorff_distance(a, line_cloud({0})) == 1.0);
  const auto deep = sample_attractor(fixtures::cantor(), 8);
  const auto shallow = sample_attractor(fixtures::cantor(), 3);
  CHECK(hausdorff_distance(deep, shallow) <= std::pow(3.0, -3));
}

TEST_CASE("minkowski content estimate") {
  std::vector<double> dense;
  for (int i = 0; i <= 1000; ++i) dense.push_back(i / 1000.0);
  CHECK(minkowski_content_estimate(line_cloud(dense), 0.1, 0.01) == doctest::Approx(12.0).epsilon(0.02));
  CHECK(minkowski_content_estimate(line_cloud({0.5}), 0.1, 0.01) == doctest::Approx(2.0).epsilon(0.1));
  CHECK_THROWS_AS(minkowski_content_estimate(line_cloud({0.5}), 0.1, 0.05), InvalidArgument);

  // Against the exact union length of the Cantor neighbourhood.
  const auto cloud = sample_attractor(fixtures::cantor(), 10);
  for (int k = 3; k <= 5; ++k) {
    const double delta = std::pow(3.0, -k);
    std::vector<double> xs;
    for (std::size_t i = 0; i < cloud.size(); ++i) xs.push_back(cloud.point(i)[0]);
    const double exact = oracles::union_length(xs, delta) / delta;
    CHECK(minkowski_content_estimate(cloud, delta, delta / 16) == doctest::Approx(exact).epsilon(0.1));
    const double count = static_cast<double>(greedy_packing(cloud, delta).count);
    const double content = minkowski_content_estimate(cloud, delta, delta / 16);
    CHECK(std::max(content / count, count / content) <= 8.0);
  }
}

TEST_CASE("bi-Lipschitz comparability of packing counts") {
  const auto cloud = sample_attractor(fixtures::dust(), 7);
  for (double scale : {0.5, 2.0}) {
    std::vector<Point> image;
    for (std::size_t i = 0; i < cloud.size(); ++i) image.push_back({cloud.point(i)[0], scale * cloud.point(i)[1]});
    const auto scaled = PointCloud::from_points(image);
    const double bound = std::pow(3.0 * 2.0, 2);
    for (int k = 2; k <= 7; ++k) {
      const double delta = std::pow(2.0, -k);
      const double a = static_cast<double>(greedy_packing(cloud, delta).count);
      const double b = static_cast<double>(greedy_packing(scaled, delta).count);
      CHECK(std::max(a / b, b / a) <= bound);
    }
  }
}
