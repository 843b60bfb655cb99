#include "skinpal/palette.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "skinpal/error.hpp"

namespace skinpal {

ColorSample make_sample(HslColor hsl, std::string image_id, std::string cohort_id, int segment_index, int ordinal) {
  return {hsl, embed(hsl), std::move(image_id), std::move(cohort_id), segment_index, ordinal};
}

Palette palette_from_samples(const std::string& cohort_id, std::span<const ColorSample> samples,
                             const PaletteOptions& options) {
  if (samples.empty()) throw Error(ErrorCode::InvalidArgument, fmt::format("cohort {} has no samples to cluster", cohort_id));

  std::vector<Vec3> points;
  points.reserve(samples.size());
  for (const ColorSample& s : samples) {
    if (options.space == ClusterSpace::Cylinder) {
      points.push_back(s.embedded);
    } else {
      const RgbColor rgb = hsl_to_rgb(s.hsl);
      points.push_back({rgb.r / 255.0, rgb.g / 255.0, rgb.b / 255.0});
    }
  }

  const KMeansResult km = kmeans(points, options.kmeans());

  Palette palette;
  palette.cohort_id = cohort_id;
  palette.k = options.k;
  palette.seed = options.seed;
  palette.n_samples = samples.size();
  palette.limited_by_distinct = km.insufficient_distinct;

  std::vector<std::size_t> counts(km.centroids.size(), 0);
  for (std::size_t a : km.assignments) ++counts[a];

  for (std::size_t j = 0; j < km.centroids.size(); ++j) {
    const Vec3& c = km.centroids[j];
    const HslColor hsl = options.space == ClusterSpace::Cylinder
                             ? unembed(c)
                             : rgb_to_hsl(std::clamp(c[0], 0.0, 1.0), std::clamp(c[1], 0.0, 1.0),
                                          std::clamp(c[2], 0.0, 1.0));
    palette.entries.push_back(
        {hsl, static_cast<double>(counts[j]) / static_cast<double>(samples.size()), counts[j]});
  }
  return palette;
}

Palette sort_by_proportion(Palette p) {
  std::stable_sort(p.entries.begin(), p.entries.end(), [](const PaletteEntry& a, const PaletteEntry& b) {
    if (a.proportion != b.proportion) return a.proportion > b.proportion;
    if (a.centroid_hsl.l != b.centroid_hsl.l) return a.centroid_hsl.l > b.centroid_hsl.l;
    return a.centroid_hsl.h < b.centroid_hsl.h;
  });
  return p;
}

Palette sort_by_lightness(Palette p) {
  std::stable_sort(p.entries.begin(), p.entries.end(), [](const PaletteEntry& a, const PaletteEntry& b) {
    if (a.centroid_hsl.l != b.centroid_hsl.l) return a.centroid_hsl.l > b.centroid_hsl.l;
    return a.proportion > b.proportion;
  });
  return p;
}

std::string palette_to_json(const Palette& p) {
  std::string out = fmt::format("{{\"cohort\":{},\"k\":{},\"seed\":{},\"n_samples\":{}",
                                nlohmann::json(p.cohort_id).dump(), p.k, p.seed, p.n_samples);
  if (!p.config_hash.empty()) out += fmt::format(",\"config_hash\":\"{}\"", p.config_hash);
  if (p.limited_by_distinct) out += ",\"limited_by_distinct\":true";
  out += ",\"entries\":[";
  for (std::size_t i = 0; i < p.entries.size(); ++i) {
    const PaletteEntry& e = p.entries[i];
    out += fmt::format("{}{{\"h\":{:.6f},\"s\":{:.6f},\"l\":{:.6f},\"proportion\":{:.6f},\"count\":{}}}",
                       i ? "," : "", e.centroid_hsl.h, e.centroid_hsl.s, e.centroid_hsl.l, e.proportion,
                       e.member_count);
  }
  out += "]}\n";
  return out;
}

namespace {

template <typename T>
T field(const nlohmann::json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw Error(ErrorCode::ParseError, fmt::format("{}: missing '{}'", where, key));
  try {
    return it->get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorCode::ParseError, fmt::format("{}: field '{}' has the wrong type", where, key));
  }
}

}  // namespace

Palette palette_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ParseError, fmt::format("palette: {}", e.what()));
  }
  if (!doc.is_object()) throw Error(ErrorCode::ParseError, "palette root must be an object");

  Palette p;
  p.cohort_id = field<std::string>(doc, "cohort", "palette");
  p.k = field<std::size_t>(doc, "k", "palette");
  p.seed = field<std::uint64_t>(doc, "seed", "palette");
  p.n_samples = field<std::size_t>(doc, "n_samples", "palette");
  if (doc.contains("config_hash")) p.config_hash = field<std::string>(doc, "config_hash", "palette");
  if (doc.contains("limited_by_distinct")) p.limited_by_distinct = field<bool>(doc, "limited_by_distinct", "palette");
  auto entries = doc.find("entries");
  if (entries == doc.end() || !entries->is_array()) throw Error(ErrorCode::ParseError, "palette: 'entries' must be an array");
  for (std::size_t i = 0; i < entries->size(); ++i) {
    const auto& e = (*entries)[i];
    const std::string where = fmt::format("palette entries[{}]", i);
    if (!e.is_object()) throw Error(ErrorCode::ParseError, where + " must be an object");
    PaletteEntry entry;
    entry.centroid_hsl = {field<double>(e, "h", where), field<double>(e, "s", where), field<double>(e, "l", where)};
    entry.proportion = field<double>(e, "proportion", where);
    entry.member_count = field<std::size_t>(e, "count", where);
    const HslColor& c = entry.centroid_hsl;
    if (!(c.h >= 0.0 && c.h < 360.0 && c.s >= 0.0 && c.s <= 1.0 && c.l >= 0.0 && c.l <= 1.0) ||
        !(entry.proportion >= 0.0 && entry.proportion <= 1.0)) {
      throw Error(ErrorCode::ParseError, where + " has values out of range");
    }
    p.entries.push_back(entry);
  }
  return p;
}

Palette load_palette(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::MissingFile, path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return palette_from_json(ss.str());
  } catch (const Error& e) {
    throw Error(e.code(), fmt::format("{}: {}", path.string(), e.what()));
  }
}

}  // namespace skinpal
