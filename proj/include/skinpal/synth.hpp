#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "skinpal/color.hpp"
#include "skinpal/geometry.hpp"
#include "skinpal/image.hpp"

namespace skinpal::synth {

/// Generator parameters for one synthetic cohort.
struct CohortSpec {
  std::string id;
  std::string name;
  HslColor base;
  double face_jitter = 0.008;   // per-face offset of the base color, embedded units
  double pixel_noise = 0.006;   // per-pixel noise, embedded units
  double highlight_radius = 3;  // forehead highlight disk, pixels
};

/// The four cohorts of the bundled mini-corpus. Their base colors sit at
/// well separated pairwise embedded distances.
std::vector<CohortSpec> mini_corpus_cohorts();

/// 68-point layout in a unit face frame, iBUG ordering.
std::vector<Point> landmark_template();

struct Face {
  PixelGrid image;
  LandmarkSet landmarks;
};

Face render_face(const CohortSpec& cohort, int image_size, std::uint64_t seed);

/// Writes `faces_per_cohort` image/sidecar pairs per cohort plus manifest.json.
void write_corpus(const std::filesystem::path& root, const std::vector<CohortSpec>& cohorts, int faces_per_cohort,
                  int image_size, std::uint64_t seed);

}  // namespace skinpal::synth
