#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "skinpal/config.hpp"
#include "skinpal/corpus.hpp"
#include "skinpal/metrics.hpp"
#include "skinpal/palette.hpp"

namespace skinpal {

/// Everything measured on one face.
struct FaceAnalysis {
  std::string image_id;
  std::vector<HslColor> sampled;  // all 2n cheek samples, pre-gate
  std::vector<ColorSample> gated;
  FaceMetrics metrics;
};

struct SkippedImage {
  std::string image_id;
  std::string reason;
};

struct CohortAnalysis {
  std::string cohort_id;
  std::string display_name;
  std::vector<FaceAnalysis> faces;  // in scan order
  std::vector<SkippedImage> skipped;
  std::size_t orphan_images = 0;
  std::size_t total_samples = 0;
  std::size_t gated_samples = 0;
};

FaceAnalysis analyze_face(const PixelGrid& image, const LandmarkSet& landmarks, const std::string& image_id,
                          const std::string& cohort_id, const RunConfig& config);

/// Loads and measures every image of the cohort on `jobs` workers. Images
/// that fail to decode or whose landmarks are unusable are recorded as skipped.
CohortAnalysis analyze_cohort(const CohortManifest& manifest, const std::string& cohort_id, const RunConfig& config,
                              unsigned jobs = 1);

/// Pools gated samples in image order and clusters them.
/// Throws EmptyCohort (no usable faces) or AllSamplesGated.
Palette build_palette(const CohortAnalysis& analysis, const RunConfig& config);
Palette build_palette(const CohortManifest& manifest, const std::string& cohort_id, const RunConfig& config,
                      unsigned jobs = 1);

/// Throws EmptyCohort.
CohortMetrics cohort_metrics(const CohortAnalysis& analysis);
CohortMetrics cohort_metrics(const CohortManifest& manifest, const std::string& cohort_id, const RunConfig& config,
                             unsigned jobs = 1);

}  // namespace skinpal
