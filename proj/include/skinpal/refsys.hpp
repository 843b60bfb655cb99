#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "skinpal/color.hpp"
#include "skinpal/palette.hpp"

namespace skinpal {

struct ReferenceColor {
  std::string label;
  HslColor hsl;
};

struct ReferenceSystem {
  std::string name;
  std::vector<ReferenceColor> colors;
};

struct NearestReference {
  std::string label;
  double distance = 0.0;
};

struct GamutEntry {
  std::size_t entry_index = 0;
  std::string nearest_label;
  double distance = 0.0;
  bool in_gamut = false;
};

struct GamutReport {
  std::string cohort_id;
  std::string refsys_name;
  double epsilon = 0.0;
  std::vector<GamutEntry> per_entry;
  double out_fraction_weighted = 0.0;
};

/// CSV with a header of either label,h,s,l or label,r,g,b. Lines starting
/// with '#' are comments. The system name defaults to the file stem.
ReferenceSystem parse_reference(const std::string& csv_text, std::string name);
ReferenceSystem load_reference(const std::filesystem::path& path);

/// Nearest color in the cylinder embedding; equal distances go to the
/// lexicographically smaller label.
NearestReference nearest_reference(const HslColor& c, const ReferenceSystem& ref);

/// Throws InvalidArgument unless epsilon > 0, EmptyPalette on an empty palette.
GamutReport gamut_report(const Palette& p, const ReferenceSystem& ref, double epsilon);

std::string gamut_report_json(const GamutReport& report);

}  // namespace skinpal
