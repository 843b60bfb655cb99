#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "skinpal/color.hpp"
#include "skinpal/geometry.hpp"
#include "skinpal/image.hpp"
#include "skinpal/palette.hpp"

namespace skinpal {

enum class HueMode {
  Circular,   // hue term is hue_diff, a fraction in [0, 0.5]
  LegacyRaw,  // hue term is the raw difference in degrees
};

enum class FaceRegion { BoundingBox, ConvexHull };

struct FaceTexture {
  std::string image_id;
  double delta_mean = 0.0;
  std::size_t n_deltas = 0;
};

struct FaceBrightness {
  std::string image_id;
  std::size_t bright_pixels = 0;
  std::size_t face_pixels = 0;
  double ratio = 0.0;
};

/// Per-face inputs to the cohort reduction.
struct FaceMetrics {
  std::string image_id;
  FaceTexture texture;
  FaceBrightness brightness;
  std::vector<double> gated_saturations;
};

struct CohortMetrics {
  std::string cohort_id;
  double texture_mean = 0.0;
  double brightness_mean = 0.0;
  double saturation_mean = 0.0;
  std::size_t n_faces = 0;
  std::size_t n_gated_samples = 0;
};

struct DistanceMatrix {
  std::vector<std::string> cohort_ids;
  std::vector<std::vector<double>> values;
};

/// Mean root-sum-square HSL step between consecutive samples, walked inside
/// each segment only. Throws TooFewSamples if a segment has fewer than 2.
FaceTexture texture_delta(std::span<const std::vector<HslColor>> segments, HueMode mode = HueMode::Circular,
                          std::string image_id = {});

/// Fraction of face-region pixels whose luma exceeds `threshold`.
/// Throws EmptyFaceBox when the clamped region holds no pixels.
FaceBrightness brightness_ratio(const PixelGrid& image, const LandmarkSet& landmarks, int threshold = 200,
                                FaceRegion region = FaceRegion::BoundingBox, std::string image_id = {});

/// Reduces faces in sorted image_id order so the sums are schedule independent.
/// Throws EmptyCohort when `faces` is empty.
CohortMetrics reduce_cohort_metrics(const std::string& cohort_id, std::span<const FaceMetrics> faces);

/// Proportion-weighted symmetric Chamfer distance in the cylinder embedding.
double palette_distance(const Palette& p, const Palette& q);

/// Throws InvalidArgument for fewer than 2 palettes, DuplicateCohort on repeated ids.
DistanceMatrix distance_matrix(std::span<const Palette> palettes);

std::string metrics_csv(std::span<const CohortMetrics> rows);
std::string distance_csv(const DistanceMatrix& matrix);

}  // namespace skinpal
