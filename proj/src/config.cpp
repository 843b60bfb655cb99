#include "skinpal/config.hpp"

#include <charconv>
#include <sstream>

#include <fmt/format.h>

#include "skinpal/error.hpp"
#include "skinpal/report.hpp"

namespace skinpal {
namespace {

double to_double(const std::string& text, const std::string& what) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::InvalidArgument, fmt::format("{}: '{}' is not a number", what, text));
  }
  return v;
}

}  // namespace

std::vector<HueArc> parse_hue_arcs(const std::string& text) {
  std::vector<HueArc> arcs;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      throw Error(ErrorCode::InvalidArgument, fmt::format("hue arc '{}' must look like lo:hi", item));
    }
    arcs.push_back({to_double(item.substr(0, colon), "hue arc"), to_double(item.substr(colon + 1), "hue arc")});
  }
  if (arcs.empty()) throw Error(ErrorCode::InvalidArgument, "at least one hue arc is required");
  SkinGate{0.0, arcs}.validate();
  return arcs;
}

std::string format_hue_arcs(const std::vector<HueArc>& arcs) {
  std::string out;
  for (std::size_t i = 0; i < arcs.size(); ++i) out += fmt::format("{}{}:{}", i ? "," : "", arcs[i].lo, arcs[i].hi);
  return out;
}

std::pair<std::size_t, std::size_t> parse_index_pair(const std::string& text) {
  const auto colon = text.find(':');
  std::size_t a = 0;
  std::size_t b = 0;
  bool ok = colon != std::string::npos;
  if (ok) {
    auto r1 = std::from_chars(text.data(), text.data() + colon, a);
    auto r2 = std::from_chars(text.data() + colon + 1, text.data() + text.size(), b);
    ok = r1.ec == std::errc() && r1.ptr == text.data() + colon && r2.ec == std::errc() &&
         r2.ptr == text.data() + text.size();
  }
  if (!ok || a >= kLandmarkCount || b >= kLandmarkCount) {
    throw Error(ErrorCode::InvalidArgument, fmt::format("landmark pair '{}' must be start:end with indices 0..67", text));
  }
  return {a, b};
}

std::string_view to_string(HueMode mode) { return mode == HueMode::Circular ? "circular" : "legacy_raw"; }
std::string_view to_string(ClusterSpace space) { return space == ClusterSpace::Cylinder ? "cylinder" : "rgb"; }
std::string_view to_string(FaceRegion region) { return region == FaceRegion::BoundingBox ? "bbox" : "hull"; }

void RunConfig::validate() const {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be >= 1");
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, fmt::format("tol must be > 0, got {}", tol));
  if (max_iter < 1) throw Error(ErrorCode::InvalidArgument, "max_iter must be >= 1");
  if (n_init < 1) throw Error(ErrorCode::InvalidArgument, "n_init must be >= 1");
  gate.validate();
  if (gate.hue_arcs.empty()) throw Error(ErrorCode::InvalidArgument, "at least one hue arc is required");
  sampling().validate();
  if (bright_threshold < 0 || bright_threshold > 255) {
    throw Error(ErrorCode::InvalidArgument, fmt::format("bright threshold must be in 0..255, got {}", bright_threshold));
  }
  if (!(epsilon > 0.0)) throw Error(ErrorCode::InvalidArgument, fmt::format("epsilon must be > 0, got {}", epsilon));
  if (manifest_path.empty()) throw Error(ErrorCode::InvalidArgument, "manifest path is required");
  if (out_dir.empty()) throw Error(ErrorCode::InvalidArgument, "output directory is required");
}

nlohmann::ordered_json RunConfig::to_json() const {
  nlohmann::ordered_json j;
  j["manifest"] = manifest_path.generic_string();
  j["out"] = out_dir.generic_string();
  j["reference"] = reference_path.generic_string();
  j["k"] = k;
  j["seed"] = seed;
  j["tol"] = fmt::format("{:g}", tol);
  j["max_iter"] = max_iter;
  j["n_init"] = n_init;
  j["min_lightness"] = fmt::format("{:.6f}", gate.min_lightness);
  j["hue_arcs"] = format_hue_arcs(gate.hue_arcs);
  j["samples_per_segment"] = samples_per_segment;
  j["patch"] = patch;
  j["segment_a"] = fmt::format("{}:{}", segments.a_start, segments.a_end);
  j["segment_b"] = fmt::format("{}:{}", segments.b_start, segments.b_end);
  j["bright_threshold"] = bright_threshold;
  j["face_region"] = to_string(face_region);
  j["hue_mode"] = to_string(hue_mode);
  j["cluster_space"] = to_string(cluster_space);
  j["epsilon"] = fmt::format("{:.6f}", epsilon);
  return j;
}

std::string RunConfig::analysis_hash() const {
  nlohmann::ordered_json j = to_json();
  j.erase("manifest");
  j.erase("out");
  j.erase("reference");
  return fnv1a64_hex(j.dump());
}

}  // namespace skinpal
