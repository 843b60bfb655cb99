#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "skinpal/metrics.hpp"
#include "skinpal/palette.hpp"
#include "skinpal/refsys.hpp"

namespace skinpal {

enum class SortMode { Proportion, Lightness };

struct RenderSpec {
  int width = 800;
  int height = 120;
  int swatch_gap = 2;
  SortMode sort_mode = SortMode::Proportion;
  bool proportional_widths = true;

  void validate() const;
};

struct ScatterSpec {
  int width = 720;
  int height = 480;
  int margin = 60;
};

struct CohortReport {
  std::string cohort_id;
  std::string display_name;
  Palette palette;
  CohortMetrics metrics;
  std::optional<GamutReport> gamut;
};

struct EmitOptions {
  nlohmann::ordered_json config_echo;
  std::string config_hash;  // empty: hash of config_echo
  nlohmann::ordered_json inputs;
  const ReferenceSystem* reference = nullptr;
  RenderSpec strip;
  ScatterSpec scatter;
  std::string generated_at;  // only field allowed to differ between identical runs
};

/// One swatch rect per entry, left to right in the requested sort order.
/// Throws EmptyPalette.
std::string render_palette_strip(const Palette& p, const RenderSpec& spec);

/// Hue (x, 0..360) against lightness (y, 0..1). Cohort entries and reference
/// colors use distinct marker classes.
std::string render_scatter(std::span<const Palette> palettes, const ReferenceSystem* ref,
                           std::span<const std::string> display_names = {}, const ScatterSpec& spec = {});

/// Polar projection of the HSL cylinder: angle = hue, radius = saturation,
/// marker size grows with lightness.
std::string render_polar(std::span<const Palette> palettes, const ReferenceSystem* ref, const ScatterSpec& spec = {});

/// Writes the output tree under out_dir and returns the written paths,
/// relative to out_dir. On failure every file written so far is removed and
/// IoError is raised. Throws InvalidArgument for an empty report list.
std::vector<std::filesystem::path> emit_report(std::span<const CohortReport> reports, const DistanceMatrix& matrix,
                                               const std::filesystem::path& out_dir, const EmitOptions& options);

std::string fnv1a64_hex(std::string_view bytes);
std::string xml_escape(std::string_view text);

}  // namespace skinpal
