#include "skinpal/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "skinpal/error.hpp"

namespace skinpal {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::MissingFile, path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

bool is_image_file(const fs::path& p) {
  const std::string ext = lower(p.extension().string());
  return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

std::string require_string(const json& obj, const char* key, std::size_t index) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) {
    throw Error(ErrorCode::ParseError, fmt::format("cohorts[{}].{} must be a string", index, key));
  }
  return it->get<std::string>();
}

}  // namespace

const CohortEntry& CohortManifest::cohort(const std::string& id) const {
  auto it = std::find_if(cohorts.begin(), cohorts.end(), [&](const CohortEntry& c) { return c.id == id; });
  if (it == cohorts.end()) throw Error(ErrorCode::UnknownCohort, id);
  return *it;
}

CohortManifest parse_manifest(const std::string& json_text, const fs::path& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, fmt::format("manifest: {}", e.what()));
  }
  if (!doc.is_object()) throw Error(ErrorCode::ParseError, "manifest root must be an object");

  CohortManifest manifest;
  auto version = doc.find("version");
  if (version == doc.end() || !version->is_number_integer()) {
    throw Error(ErrorCode::ParseError, "manifest field 'version' must be an integer");
  }
  manifest.version = version->get<int>();
  if (manifest.version != 1) {
    throw Error(ErrorCode::ParseError, fmt::format("unsupported manifest version {}", manifest.version));
  }

  auto cohorts = doc.find("cohorts");
  if (cohorts == doc.end() || !cohorts->is_array()) {
    throw Error(ErrorCode::ParseError, "manifest field 'cohorts' must be an array");
  }
  if (cohorts->empty()) throw Error(ErrorCode::ParseError, "manifest lists no cohorts");

  std::set<std::string> seen;
  for (std::size_t i = 0; i < cohorts->size(); ++i) {
    const json& c = (*cohorts)[i];
    if (!c.is_object()) throw Error(ErrorCode::ParseError, fmt::format("cohorts[{}] must be an object", i));
    CohortEntry entry;
    entry.id = require_string(c, "id", i);
    if (entry.id.empty()) throw Error(ErrorCode::ParseError, fmt::format("cohorts[{}].id is empty", i));
    entry.root = fs::path(require_string(c, "root", i));
    if (entry.root.is_relative()) entry.root = base_dir / entry.root;
    entry.display_name = c.contains("name") && c["name"].is_string() ? c["name"].get<std::string>() : "";
    if (entry.display_name.empty()) entry.display_name = entry.id;
    if (!seen.insert(entry.id).second) throw Error(ErrorCode::DuplicateCohortId, entry.id);
    manifest.cohorts.push_back(std::move(entry));
  }
  return manifest;
}

CohortManifest load_manifest(const fs::path& path) {
  CohortManifest manifest = parse_manifest(read_text(path), path.parent_path());
  manifest.source = path;
  return manifest;
}

ScanResult scan_cohort(const CohortManifest& manifest, const std::string& cohort_id) {
  const CohortEntry& cohort = manifest.cohort(cohort_id);
  ScanResult result;
  std::error_code ec;
  if (!fs::is_directory(cohort.root, ec)) return result;

  std::vector<fs::path> images;
  for (const auto& entry : fs::directory_iterator(cohort.root)) {
    if (entry.is_regular_file() && is_image_file(entry.path())) images.push_back(entry.path());
  }
  std::sort(images.begin(), images.end());

  for (const fs::path& image : images) {
    const fs::path stem = image.parent_path() / image.stem();
    fs::path sidecar = stem.string() + ".landmarks.json";
    if (!fs::is_regular_file(sidecar)) sidecar = stem.string() + ".pts";
    if (!fs::is_regular_file(sidecar)) {
      ++result.orphan_images;
      continue;
    }
    result.records.push_back({cohort.id, image, sidecar, cohort.id + "/" + image.filename().string()});
  }
  return result;
}

PixelGrid load_image(const ImageRecord& record) { return load_image_file(record.image_path); }

LandmarkSet load_landmarks(const ImageRecord& record) { return load_landmarks_file(record.landmark_path); }

LandmarkSet load_landmarks_file(const fs::path& path) {
  const std::string text = read_text(path);
  if (lower(path.extension().string()) == ".pts") return parse_landmarks_pts(text);
  return parse_landmarks_json(text);
}

LandmarkSet parse_landmarks_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, fmt::format("landmarks: {}", e.what()));
  }
  auto pts = doc.find("points");
  if (!doc.is_object() || pts == doc.end() || !pts->is_array()) {
    throw Error(ErrorCode::ParseError, "landmarks: expected object with 'points' array");
  }
  std::vector<Point> points;
  points.reserve(pts->size());
  for (std::size_t i = 0; i < pts->size(); ++i) {
    const json& p = (*pts)[i];
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
      throw Error(ErrorCode::ParseError, fmt::format("landmarks: points[{}] must be [x,y]", i));
    }
    points.push_back({p[0].get<double>(), p[1].get<double>()});
  }
  return LandmarkSet(std::move(points));
}

LandmarkSet parse_landmarks_pts(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t declared = 0;
  bool in_block = false;
  int line_no = 0;
  std::vector<Point> points;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    if (!in_block) {
      if (first == "version:") continue;
      if (first == "n_points:") {
        if (!(ls >> declared)) throw Error(ErrorCode::ParseError, fmt::format("pts line {}: bad n_points", line_no));
        continue;
      }
      if (first == "{") {
        in_block = true;
        continue;
      }
      throw Error(ErrorCode::ParseError, fmt::format("pts line {}: unexpected '{}'", line_no, first));
    }
    if (first == "}") {
      in_block = false;
      break;
    }
    Point p;
    std::istringstream coords(line);
    if (!(coords >> p.x >> p.y)) throw Error(ErrorCode::ParseError, fmt::format("pts line {}: bad point", line_no));
    points.push_back(p);
  }
  if (in_block) throw Error(ErrorCode::ParseError, "pts: missing closing brace");
  if (declared != 0 && declared != points.size()) {
    throw Error(ErrorCode::ParseError,
                fmt::format("pts: n_points says {} but block has {}", declared, points.size()));
  }
  return LandmarkSet(std::move(points));
}

void write_landmarks_json(const fs::path& path, const LandmarkSet& landmarks) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, path.string());
  out << "{\"points\":[";
  for (std::size_t i = 0; i < landmarks.points().size(); ++i) {
    const Point& p = landmarks.points()[i];
    out << (i ? "," : "") << fmt::format("[{:.3f},{:.3f}]", p.x, p.y);
  }
  out << "]}\n";
}

}  // namespace skinpal
