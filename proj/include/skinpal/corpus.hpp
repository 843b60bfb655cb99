#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "skinpal/geometry.hpp"
#include "skinpal/image.hpp"

namespace skinpal {

struct CohortEntry {
  std::string id;
  std::filesystem::path root;  // resolved against the manifest's directory
  std::string display_name;
};

struct CohortManifest {
  int version = 1;
  std::vector<CohortEntry> cohorts;
  std::filesystem::path source;

  const CohortEntry& cohort(const std::string& id) const;
};

struct ImageRecord {
  std::string cohort_id;
  std::filesystem::path image_path;
  std::filesystem::path landmark_path;
  std::string stable_id;  // "<cohort>/<file name>"
};

struct ScanResult {
  std::vector<ImageRecord> records;
  std::size_t orphan_images = 0;
};

/// Errors: MissingFile, ParseError, DuplicateCohortId.
CohortManifest load_manifest(const std::filesystem::path& path);
CohortManifest parse_manifest(const std::string& json_text, const std::filesystem::path& base_dir = {});

/// Images with a sidecar, sorted by path. Images without one are counted as orphans.
ScanResult scan_cohort(const CohortManifest& manifest, const std::string& cohort_id);

PixelGrid load_image(const ImageRecord& record);
LandmarkSet load_landmarks(const ImageRecord& record);

/// Parses either the JSON sidecar ({"points":[[x,y],...]}) or iBUG .pts text.
LandmarkSet load_landmarks_file(const std::filesystem::path& path);
LandmarkSet parse_landmarks_json(const std::string& text);
LandmarkSet parse_landmarks_pts(const std::string& text);

void write_landmarks_json(const std::filesystem::path& path, const LandmarkSet& landmarks);

}  // namespace skinpal
