#include "skinpal/kmeans.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include <fmt/format.h>

#include "skinpal/error.hpp"

namespace skinpal {
namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

Xoshiro256::Xoshiro256(std::uint64_t seed) {
  for (auto& word : state_) word = splitmix64(seed);
}

std::uint64_t Xoshiro256::next() {
  const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double Xoshiro256::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::uint64_t Xoshiro256::below(std::uint64_t bound) {
  // Lemire-style rejection keeps the draw unbiased.
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = next();
    if (r >= threshold) return r % bound;
  }
}

double Xoshiro256::normal() {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

void KMeansOptions::validate() const {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be >= 1");
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, fmt::format("tol must be > 0, got {}", tol));
  if (max_iter < 1) throw Error(ErrorCode::InvalidArgument, "max_iter must be >= 1");
  if (n_init < 1) throw Error(ErrorCode::InvalidArgument, "n_init must be >= 1");
}

std::size_t nearest_centroid(const Vec3& p, std::span<const Vec3> centroids) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < centroids.size(); ++j) {
    const double d = squared_distance(p, centroids[j]);
    if (d < best_d) {
      best_d = d;
      best = j;
    }
  }
  return best;
}

double wcss(std::span<const Vec3> points, std::span<const Vec3> centroids, std::span<const std::size_t> assignments) {
  double total = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) total += squared_distance(points[i], centroids[assignments[i]]);
  return total;
}

namespace {

std::vector<Vec3> seed_plus_plus(std::span<const Vec3> points, std::size_t k, Xoshiro256& rng) {
  const std::size_t n = points.size();
  std::vector<Vec3> centroids;
  centroids.reserve(k);
  centroids.push_back(points[rng.below(n)]);

  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = squared_distance(points[i], centroids[0]);

  while (centroids.size() < k) {
    const double total = std::accumulate(d2.begin(), d2.end(), 0.0);
    std::size_t pick = 0;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double cumulative = 0.0;
      pick = n;
      for (std::size_t i = 0; i < n; ++i) {
        if (d2[i] <= 0.0) continue;
        cumulative += d2[i];
        if (cumulative > target) {
          pick = i;
          break;
        }
      }
      // Rounding can leave target >= cumulative; fall back to the last positive weight.
      if (pick == n) {
        for (std::size_t i = n; i-- > 0;) {
          if (d2[i] > 0.0) {
            pick = i;
            break;
          }
        }
      }
    }
    centroids.push_back(points[pick]);
    for (std::size_t i = 0; i < n; ++i) d2[i] = std::min(d2[i], squared_distance(points[i], centroids.back()));
  }
  return centroids;
}

void assign_all(std::span<const Vec3> points, std::span<const Vec3> centroids, std::vector<std::size_t>& assignments) {
  for (std::size_t i = 0; i < points.size(); ++i) assignments[i] = nearest_centroid(points[i], centroids);
}

std::vector<Vec3> update_centroids(std::span<const Vec3> points, std::span<const Vec3> previous,
                                   std::span<const std::size_t> assignments) {
  const std::size_t k = previous.size();
  std::vector<Vec3> sums(k, Vec3{0.0, 0.0, 0.0});
  std::vector<std::size_t> counts(k, 0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const std::size_t c = assignments[i];
    for (int d = 0; d < 3; ++d) sums[c][d] += points[i][d];
    ++counts[c];
  }

  std::vector<Vec3> next(k);
  std::vector<bool> reseeded(points.size(), false);
  for (std::size_t j = 0; j < k; ++j) {
    if (counts[j] > 0) {
      for (int d = 0; d < 3; ++d) next[j][d] = sums[j][d] / static_cast<double>(counts[j]);
      continue;
    }
    // Empty cluster: move it onto the point lying farthest from its own centroid.
    std::size_t far = 0;
    double far_d = -1.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (reseeded[i]) continue;
      const double d = squared_distance(points[i], previous[assignments[i]]);
      if (d > far_d) {
        far_d = d;
        far = i;
      }
    }
    reseeded[far] = true;
    next[j] = points[far];
  }
  return next;
}

struct Lloyd {
  std::vector<Vec3> centroids;
  std::vector<double> wcss_trace;
  std::size_t iterations = 0;
  bool converged = false;
};

Lloyd lloyd(std::span<const Vec3> sorted, std::vector<Vec3> centroids, const KMeansOptions& options,
            std::vector<std::size_t>& assign) {
  Lloyd out;
  for (std::size_t iter = 0; iter < options.max_iter; ++iter) {
    assign_all(sorted, centroids, assign);
    out.wcss_trace.push_back(wcss(sorted, centroids, assign));
    assert(out.wcss_trace.size() < 2 ||
           out.wcss_trace.back() <= out.wcss_trace[out.wcss_trace.size() - 2] * (1.0 + 1e-12) + 1e-15);
    std::vector<Vec3> next = update_centroids(sorted, centroids, assign);
    double movement = 0.0;
    for (std::size_t j = 0; j < centroids.size(); ++j) movement = std::max(movement, distance(centroids[j], next[j]));
    centroids = std::move(next);
    out.iterations = iter + 1;
    if (movement < options.tol) {
      out.converged = true;
      break;
    }
  }
  assign_all(sorted, centroids, assign);
  out.wcss_trace.push_back(wcss(sorted, centroids, assign));
  out.centroids = std::move(centroids);
  return out;
}

// Hartigan single-point transfers: move a point whenever doing so lowers the
// objective once both means are updated. Every Lloyd fixed point that admits
// such a move is left; the result is a fixed point of both procedures.
bool transfer_pass(std::span<const Vec3> sorted, std::vector<Vec3>& centroids, std::vector<std::size_t>& assign) {
  const std::size_t k = centroids.size();
  std::vector<double> counts(k, 0.0);
  std::vector<Vec3> sums(k, Vec3{0.0, 0.0, 0.0});
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    counts[assign[i]] += 1.0;
    for (int d = 0; d < 3; ++d) sums[assign[i]][d] += sorted[i][d];
  }
  for (std::size_t j = 0; j < k; ++j) {
    if (counts[j] > 0.0)
      for (int d = 0; d < 3; ++d) centroids[j][d] = sums[j][d] / counts[j];
  }
  bool moved_any = false;
  for (bool moved = true; moved;) {
    moved = false;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      const std::size_t a = assign[i];
      if (counts[a] < 2.0) continue;
      const double leave = counts[a] / (counts[a] - 1.0) * squared_distance(sorted[i], centroids[a]);
      std::size_t target = a;
      double best_gain = 1e-12 * (1.0 + leave);
      for (std::size_t b = 0; b < k; ++b) {
        if (b == a) continue;
        const double join = counts[b] / (counts[b] + 1.0) * squared_distance(sorted[i], centroids[b]);
        if (leave - join > best_gain) {
          best_gain = leave - join;
          target = b;
        }
      }
      if (target == a) continue;
      for (int d = 0; d < 3; ++d) {
        centroids[a][d] = (centroids[a][d] * counts[a] - sorted[i][d]) / (counts[a] - 1.0);
        centroids[target][d] = (centroids[target][d] * counts[target] + sorted[i][d]) / (counts[target] + 1.0);
      }
      counts[a] -= 1.0;
      counts[target] += 1.0;
      assign[i] = target;
      moved = moved_any = true;
    }
  }
  return moved_any;
}

// Lloyd, then alternate transfer passes and Lloyd until neither changes anything.
Lloyd refine(std::span<const Vec3> sorted, std::vector<Vec3> centroids, const KMeansOptions& options,
             std::vector<std::size_t>& assign) {
  Lloyd out = lloyd(sorted, std::move(centroids), options, assign);
  for (std::size_t round = 0; round < options.max_iter && transfer_pass(sorted, out.centroids, assign); ++round) {
    Lloyd again = lloyd(sorted, out.centroids, options, assign);
    out.wcss_trace.insert(out.wcss_trace.end(), again.wcss_trace.begin(), again.wcss_trace.end());
    out.iterations += again.iterations;
    out.converged = again.converged;
    out.centroids = std::move(again.centroids);
  }
  return out;
}

}  // namespace

KMeansResult kmeans(std::span<const Vec3> points, const KMeansOptions& options) {
  options.validate();
  if (points.empty()) throw Error(ErrorCode::InvalidArgument, "kmeans needs at least one point");

  const std::size_t n = points.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return points[a] < points[b]; });
  std::vector<Vec3> sorted(n);
  for (std::size_t i = 0; i < n; ++i) sorted[i] = points[order[i]];

  KMeansResult result;
  std::vector<std::size_t> sorted_assign(n, 0);

  std::vector<Vec3> distinct;
  for (const Vec3& p : sorted) {
    if (distinct.empty() || distinct.back() != p) distinct.push_back(p);
  }

  if (distinct.size() < options.k) {
    result.insufficient_distinct = true;
    result.centroids = distinct;
    result.converged = true;
    assign_all(sorted, result.centroids, sorted_assign);
    result.wcss_trace.push_back(0.0);
  } else {
    Xoshiro256 rng(options.seed);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t run = 0; run < options.n_init; ++run) {
      std::vector<std::size_t> assign(n, 0);
      Lloyd attempt = refine(sorted, seed_plus_plus(sorted, options.k, rng), options, assign);
      if (attempt.wcss_trace.back() < best) {
        best = attempt.wcss_trace.back();
        sorted_assign = std::move(assign);
        result.centroids = std::move(attempt.centroids);
        result.wcss_trace = std::move(attempt.wcss_trace);
        result.iterations = attempt.iterations;
        result.converged = attempt.converged;
      }
    }
  }

  result.assignments.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) result.assignments[order[i]] = sorted_assign[i];
  return result;
}

}  // namespace skinpal
