#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "skinpal/color.hpp"

namespace skinpal {

/// xoshiro256** seeded through splitmix64. Every random draw in the library
/// comes from one of these, seeded from the user-visible seed.
class Xoshiro256 {
 public:
  explicit Xoshiro256(std::uint64_t seed);

  std::uint64_t next();
  /// Uniform double in [0,1) with 53 random bits.
  double uniform();
  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);
  /// Standard normal draw (Box-Muller, no cached second value).
  double normal();

 private:
  std::uint64_t state_[4];
};

struct KMeansOptions {
  std::size_t k = 20;
  std::uint64_t seed = 20;
  double tol = 1e-6;
  std::size_t max_iter = 300;
  /// Independent k-means++ starts drawn from one seeded stream; the run with
  /// the lowest final objective wins, ties going to the earliest.
  std::size_t n_init = 10;

  void validate() const;
};

struct KMeansResult {
  std::vector<Vec3> centroids;
  std::vector<std::size_t> assignments;  // parallel to the input order
  std::size_t iterations = 0;
  bool converged = false;
  /// Set when the input had fewer distinct points than k; centroids are then
  /// the distinct points themselves.
  bool insufficient_distinct = false;
  std::vector<double> wcss_trace;  // objective after each assignment step
};

/// Lloyd's algorithm with k-means++ seeding and `n_init` restarts. Input is canonicalized (sorted)
/// before seeding, so the result does not depend on the order of `points`.
KMeansResult kmeans(std::span<const Vec3> points, const KMeansOptions& options);

/// Within-cluster sum of squared distances.
double wcss(std::span<const Vec3> points, std::span<const Vec3> centroids, std::span<const std::size_t> assignments);

/// Index of the nearest centroid, ties resolved to the lowest index.
std::size_t nearest_centroid(const Vec3& p, std::span<const Vec3> centroids);

}  // namespace skinpal
