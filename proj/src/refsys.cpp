#include "skinpal/refsys.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "skinpal/error.hpp"

namespace skinpal {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_number(const std::string& text, int line_no, const char* column) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw Error(ErrorCode::ParseError, fmt::format("row {}: column {} is not a number: '{}'", line_no, column, text));
  }
  return value;
}

}  // namespace

ReferenceSystem parse_reference(const std::string& csv_text, std::string name) {
  std::istringstream in(csv_text);
  std::string line;
  int line_no = 0;
  bool rgb = false;
  bool have_header = false;
  std::set<std::string> labels;
  ReferenceSystem system;
  system.name = std::move(name);

  while (std::getline(in, line)) {
    ++line_no;
    const std::string trimmed = trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    const auto cells = split_row(trimmed);
    if (!have_header) {
      if (cells == std::vector<std::string>{"label", "h", "s", "l"}) {
        rgb = false;
      } else if (cells == std::vector<std::string>{"label", "r", "g", "b"}) {
        rgb = true;
      } else {
        throw Error(ErrorCode::ParseError,
                    fmt::format("row {}: header must be 'label,h,s,l' or 'label,r,g,b'", line_no));
      }
      have_header = true;
      continue;
    }
    if (cells.size() != 4) {
      throw Error(ErrorCode::ParseError, fmt::format("row {}: expected 4 columns, found {}", line_no, cells.size()));
    }
    if (cells[0].empty()) throw Error(ErrorCode::ParseError, fmt::format("row {}: empty label", line_no));

    ReferenceColor color;
    color.label = cells[0];
    if (rgb) {
      int channels[3];
      const char* names[3] = {"r", "g", "b"};
      for (int i = 0; i < 3; ++i) {
        const double v = parse_number(cells[i + 1], line_no, names[i]);
        if (v != static_cast<int>(v) || v < 0 || v > 255) {
          throw Error(ErrorCode::ParseError,
                      fmt::format("row {}: column {} must be an integer in 0..255", line_no, names[i]));
        }
        channels[i] = static_cast<int>(v);
      }
      color.hsl = rgb_to_hsl(RgbColor{static_cast<std::uint8_t>(channels[0]), static_cast<std::uint8_t>(channels[1]),
                                      static_cast<std::uint8_t>(channels[2])});
    } else {
      const double h = parse_number(cells[1], line_no, "h");
      const double s = parse_number(cells[2], line_no, "s");
      const double l = parse_number(cells[3], line_no, "l");
      if (!(h >= 0.0 && h <= 360.0)) throw Error(ErrorCode::ParseError, fmt::format("row {}: h={} outside [0,360]", line_no, h));
      if (!(s >= 0.0 && s <= 1.0)) throw Error(ErrorCode::ParseError, fmt::format("row {}: s={} outside [0,1]", line_no, s));
      if (!(l >= 0.0 && l <= 1.0)) throw Error(ErrorCode::ParseError, fmt::format("row {}: l={} outside [0,1]", line_no, l));
      color.hsl = canonicalize({h, s, l});
    }
    if (!labels.insert(color.label).second) {
      throw Error(ErrorCode::DuplicateLabel, fmt::format("row {}: label '{}' repeated", line_no, color.label));
    }
    system.colors.push_back(std::move(color));
  }
  if (!have_header) throw Error(ErrorCode::ParseError, "reference CSV has no header row");
  if (system.colors.empty()) throw Error(ErrorCode::EmptySystem, fmt::format("reference '{}' lists no colors", system.name));
  return system;
}

ReferenceSystem load_reference(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::MissingFile, path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_reference(ss.str(), path.stem().string());
  } catch (const Error& e) {
    throw Error(e.code(), fmt::format("{}: {}", path.string(), e.what()));
  }
}

NearestReference nearest_reference(const HslColor& c, const ReferenceSystem& ref) {
  if (ref.colors.empty()) throw Error(ErrorCode::EmptySystem, ref.name);
  const Vec3 v = embed(c);
  const ReferenceColor* best = nullptr;
  double best_d = 0.0;
  for (const auto& rc : ref.colors) {
    const double d = distance(v, embed(rc.hsl));
    if (!best || d < best_d || (d == best_d && rc.label < best->label)) {
      best = &rc;
      best_d = d;
    }
  }
  return {best->label, best_d};
}

GamutReport gamut_report(const Palette& p, const ReferenceSystem& ref, double epsilon) {
  if (!(epsilon > 0.0)) throw Error(ErrorCode::InvalidArgument, fmt::format("epsilon must be > 0, got {}", epsilon));
  if (p.entries.empty()) throw Error(ErrorCode::EmptyPalette, p.cohort_id);
  GamutReport report;
  report.cohort_id = p.cohort_id;
  report.refsys_name = ref.name;
  report.epsilon = epsilon;
  std::vector<double> outside;
  for (std::size_t i = 0; i < p.entries.size(); ++i) {
    const NearestReference nr = nearest_reference(p.entries[i].centroid_hsl, ref);
    const bool in_gamut = nr.distance <= epsilon;
    report.per_entry.push_back({i, nr.label, nr.distance, in_gamut});
    if (!in_gamut) outside.push_back(p.entries[i].proportion);
  }
  // Summing in value order makes the fraction independent of entry order.
  std::sort(outside.begin(), outside.end());
  for (double w : outside) report.out_fraction_weighted += w;
  report.out_fraction_weighted = std::clamp(report.out_fraction_weighted, 0.0, 1.0);
  return report;
}

std::string gamut_report_json(const GamutReport& report) {
  std::string out = fmt::format("{{\"cohort\":{},\"reference\":{},\"epsilon\":{:.6f},\"out_fraction_weighted\":{:.6f},\"entries\":[",
                                nlohmann::json(report.cohort_id).dump(), nlohmann::json(report.refsys_name).dump(),
                                report.epsilon, report.out_fraction_weighted);
  for (std::size_t i = 0; i < report.per_entry.size(); ++i) {
    const auto& e = report.per_entry[i];
    out += fmt::format("{}{{\"index\":{},\"nearest\":{},\"distance\":{:.6f},\"in_gamut\":{}}}", i ? "," : "",
                       e.entry_index, nlohmann::json(e.nearest_label).dump(), e.distance, e.in_gamut);
  }
  out += "]}\n";
  return out;
}

}  // namespace skinpal
