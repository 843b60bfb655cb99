#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "kmeans_oracle.hpp"
#include "skinpal/error.hpp"
#include "skinpal/kmeans.hpp"

using namespace skinpal;

TEST_CASE("xoshiro256** is seeded through splitmix64") {
  // First splitmix64 output for seed 0 is the published test value.
  std::uint64_t x = 0;
  std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  CHECK((z ^ (z >> 31)) == 0xe220a8397b1dcdafULL);

  Xoshiro256 a(20), b(20), c(21);
  for (int i = 0; i < 100; ++i) {
    const auto va = a.next();
    CHECK(va == b.next());
    CHECK(va != c.next());
  }
  Xoshiro256 u(1);
  for (int i = 0; i < 1000; ++i) {
    const double v = u.uniform();
    CHECK(v >= 0.0);
    CHECK(v < 1.0);
    CHECK(u.below(7) < 7);
  }
}

TEST_CASE("k = 1 gives the mean") {
  const std::vector<Vec3> pts{{0, 0, 0}, {1, 2, 3}, {2, 1, 0.5}, {0.5, 0.25, 1}};
  const auto r = kmeans(pts, {1, 20, 1e-6, 300});
  REQUIRE(r.centroids.size() == 1);
  CHECK(r.centroids[0][0] == doctest::Approx(3.5 / 4));
  CHECK(r.centroids[0][1] == doctest::Approx(3.25 / 4));
  CHECK(r.centroids[0][2] == doctest::Approx(4.5 / 4));
  for (auto a : r.assignments) CHECK(a == 0);
}

TEST_CASE("three separated blobs") {
  Xoshiro256 rng(123);
  const std::vector<Vec3> means{{0.0, 0.0, 0.5}, {0.35, 0.1, 0.7}, {-0.1, 0.4, 0.8}};
  const std::vector<double> weights{0.5, 0.3, 0.2};
  std::vector<Vec3> pts;
  for (std::size_t g = 0; g < 3; ++g) {
    const int count = static_cast<int>(1000 * weights[g]);
    for (int i = 0; i < count; ++i) {
      pts.push_back({means[g][0] + 0.02 * rng.normal(), means[g][1] + 0.02 * rng.normal(),
                     means[g][2] + 0.02 * rng.normal()});
    }
  }
  const auto r = kmeans(pts, {3, 20, 1e-6, 300});
  CHECK(r.converged);
  std::vector<std::size_t> counts(3, 0);
  for (auto a : r.assignments) ++counts[a];
  std::vector<bool> used(3, false);
  for (std::size_t g = 0; g < 3; ++g) {
    const std::size_t j = nearest_centroid(means[g], r.centroids);
    CHECK_FALSE(used[j]);
    used[j] = true;
    CHECK(distance(r.centroids[j], means[g]) < 0.02);
    CHECK(std::abs(static_cast<double>(counts[j]) / pts.size() - weights[g]) < 0.05);
  }
}

TEST_CASE("matches the exhaustive optimum on a small instance") {
  // 5 distinct points, k = 2
  const std::vector<Vec3> pts{{0, 0, 0}, {0.1, 0, 0}, {0.05, 0.08, 0}, {1, 1, 0}, {0.9, 1.1, 0.1}};
  const auto r = kmeans(pts, {2, 20, 1e-9, 300});
  const double got = wcss(pts, r.centroids, r.assignments);
  CHECK(got == doctest::Approx(skinpal::testing::brute_force_wcss(pts, 2)).epsilon(1e-9));
}

TEST_CASE("objective never increases across iterations") {
  Xoshiro256 rng(77);
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<Vec3> pts(400);
    for (auto& p : pts) p = {rng.uniform(), rng.uniform(), rng.uniform()};
    const auto r = kmeans(pts, {8, static_cast<std::uint64_t>(trial), 1e-9, 300});
    for (std::size_t i = 1; i < r.wcss_trace.size(); ++i) {
      CHECK(r.wcss_trace[i] <= r.wcss_trace[i - 1] * (1.0 + 1e-12) + 1e-15);
    }
  }
}

TEST_CASE("permutation and run invariance") {
  Xoshiro256 rng(5);
  std::vector<Vec3> pts(300);
  for (auto& p : pts) p = {rng.uniform(), rng.uniform(), rng.uniform()};
  const auto first = kmeans(pts, {6, 20, 1e-6, 300});
  const auto second = kmeans(pts, {6, 20, 1e-6, 300});
  CHECK(first.centroids == second.centroids);
  CHECK(first.assignments == second.assignments);

  std::vector<std::size_t> perm(pts.size());
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t i = perm.size() - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
  std::vector<Vec3> shuffled(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) shuffled[i] = pts[perm[i]];
  const auto third = kmeans(shuffled, {6, 20, 1e-6, 300});
  CHECK(third.centroids == first.centroids);
  for (std::size_t i = 0; i < pts.size(); ++i) CHECK(third.assignments[i] == first.assignments[perm[i]]);
}

TEST_CASE("fewer distinct points than k") {
  const std::vector<Vec3> pts{{1, 0, 0}, {0, 1, 0}, {1, 0, 0}, {0, 1, 0}, {1, 0, 0}};
  const auto r = kmeans(pts, {4, 20, 1e-6, 300});
  CHECK(r.insufficient_distinct);
  REQUIRE(r.centroids.size() == 2);
  CHECK(r.assignments[0] == r.assignments[2]);
  CHECK(r.assignments[1] == r.assignments[3]);
  CHECK(r.assignments[0] != r.assignments[1]);

  const auto exact = kmeans(pts, {2, 20, 1e-6, 300});
  CHECK_FALSE(exact.insufficient_distinct);
  CHECK(wcss(pts, exact.centroids, exact.assignments) == 0.0);
}

TEST_CASE("nearest centroid ties go to the lowest index") {
  const std::vector<Vec3> c{{1, 0, 0}, {-1, 0, 0}};
  CHECK(nearest_centroid({0, 0, 0}, c) == 0);
  CHECK(nearest_centroid({-0.1, 0, 0}, c) == 1);
}

TEST_CASE("option validation") {
  const std::vector<Vec3> pts{{0, 0, 0}};
  CHECK_THROWS_AS(kmeans(pts, {0, 20, 1e-6, 300}), Error);
  CHECK_THROWS_AS(kmeans(pts, {1, 20, 0.0, 300}), Error);
  CHECK_THROWS_AS(kmeans({}, {1, 20, 1e-6, 300}), Error);
  CHECK_THROWS_AS(kmeans(pts, {1, 20, 1e-6, 300, 0}), Error);
}

TEST_CASE("restarts never do worse than the first start") {
  Xoshiro256 rng(77);
  for (int inst = 0; inst < 30; ++inst) {
    std::vector<Vec3> pts(8 + rng.below(20));
    for (auto& p : pts) p = {rng.uniform(), rng.uniform(), rng.uniform()};
    const KMeansResult one = kmeans(pts, {3, 5, 1e-9, 300, 1});
    const KMeansResult many = kmeans(pts, {3, 5, 1e-9, 300, 10});
    CHECK(wcss(pts, many.centroids, many.assignments) <= wcss(pts, one.centroids, one.assignments) + 1e-15);
  }
}

TEST_CASE("no single point transfer improves the result") {
  Xoshiro256 rng(78);
  for (int inst = 0; inst < 30; ++inst) {
    const std::size_t k = 2 + rng.below(3);
    std::vector<Vec3> pts(6 + rng.below(30));
    for (auto& p : pts) p = {rng.uniform(), rng.uniform(), rng.uniform()};
    const KMeansResult r = kmeans(pts, {k, static_cast<std::uint64_t>(inst), 1e-9, 300, 1});
    std::vector<double> counts(k, 0.0);
    for (std::size_t c : r.assignments) counts[c] += 1.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const std::size_t a = r.assignments[i];
      if (counts[a] < 2.0) continue;
      const double leave = counts[a] / (counts[a] - 1.0) * squared_distance(pts[i], r.centroids[a]);
      for (std::size_t b = 0; b < k; ++b) {
        if (b == a) continue;
        const double join = counts[b] / (counts[b] + 1.0) * squared_distance(pts[i], r.centroids[b]);
        CHECK(leave - join <= 1e-9);
      }
    }
  }
}
