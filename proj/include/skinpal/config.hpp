#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "skinpal/color.hpp"
#include "skinpal/geometry.hpp"
#include "skinpal/metrics.hpp"
#include "skinpal/palette.hpp"

namespace skinpal {

/// Full effective configuration of an analysis run. Defaults for k, the gate,
/// samples_per_segment and bright_threshold come from the published method.
struct RunConfig {
  std::filesystem::path manifest_path;
  std::filesystem::path out_dir = "out";
  std::filesystem::path reference_path;  // empty: no gamut comparison

  std::size_t k = 20;
  std::uint64_t seed = 20;
  double tol = 1e-6;
  std::size_t max_iter = 300;
  std::size_t n_init = 10;

  SkinGate gate;
  int samples_per_segment = 10;
  int patch = 3;
  SegmentIndices segments;

  int bright_threshold = 200;
  FaceRegion face_region = FaceRegion::BoundingBox;
  HueMode hue_mode = HueMode::Circular;
  ClusterSpace cluster_space = ClusterSpace::Cylinder;
  double epsilon = 0.05;

  /// Throws InvalidArgument/InvalidCount naming the offending field.
  void validate() const;

  SamplingOptions sampling() const { return {samples_per_segment, patch, segments}; }
  PaletteOptions palette() const { return {k, seed, tol, max_iter, cluster_space, n_init}; }

  nlohmann::ordered_json to_json() const;
  /// Hash of the parameters that shape results; paths and worker count are
  /// left out so the same analysis written elsewhere hashes the same.
  std::string analysis_hash() const;
};

/// "0:50,300:360" -> arcs. Throws InvalidArgument.
std::vector<HueArc> parse_hue_arcs(const std::string& text);
std::string format_hue_arcs(const std::vector<HueArc>& arcs);
/// "36:31" -> {36, 31}. Throws InvalidArgument.
std::pair<std::size_t, std::size_t> parse_index_pair(const std::string& text);

std::string_view to_string(HueMode mode);
std::string_view to_string(ClusterSpace space);
std::string_view to_string(FaceRegion region);

}  // namespace skinpal
