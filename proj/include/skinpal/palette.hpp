#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "skinpal/color.hpp"
#include "skinpal/kmeans.hpp"

namespace skinpal {

/// One gated cheek observation.
struct ColorSample {
  HslColor hsl;
  Vec3 embedded{};
  std::string image_id;
  std::string cohort_id;
  int segment_index = 0;
  int ordinal = 0;
};

ColorSample make_sample(HslColor hsl, std::string image_id, std::string cohort_id, int segment_index, int ordinal);

enum class ClusterSpace { Cylinder, Rgb };

struct PaletteOptions {
  std::size_t k = 20;
  std::uint64_t seed = 20;
  double tol = 1e-6;
  std::size_t max_iter = 300;
  ClusterSpace space = ClusterSpace::Cylinder;
  std::size_t n_init = 10;

  KMeansOptions kmeans() const { return {k, seed, tol, max_iter, n_init}; }
};

struct PaletteEntry {
  HslColor centroid_hsl;
  double proportion = 0.0;
  std::size_t member_count = 0;
};

struct Palette {
  std::string cohort_id;
  std::vector<PaletteEntry> entries;
  std::size_t k = 0;
  std::uint64_t seed = 0;
  std::size_t n_samples = 0;
  /// Fewer than k distinct samples existed, so entries.size() < k.
  bool limited_by_distinct = false;
  std::string config_hash;
};

/// Clusters the samples and maps centroids back to HSL. Samples are pooled
/// as given; their order does not affect the result.
Palette palette_from_samples(const std::string& cohort_id, std::span<const ColorSample> samples,
                             const PaletteOptions& options);

/// Descending proportion; ties by descending lightness, then ascending hue.
Palette sort_by_proportion(Palette p);
/// Descending lightness; ties by descending proportion.
Palette sort_by_lightness(Palette p);

/// Palette JSON with values fixed to 6 decimal places.
std::string palette_to_json(const Palette& p);
/// Throws ParseError on schema violations.
Palette palette_from_json(const std::string& text);
Palette load_palette(const std::filesystem::path& path);

}  // namespace skinpal
