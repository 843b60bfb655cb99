#include "skinpal/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include <fmt/format.h>

#include "skinpal/error.hpp"

namespace skinpal {

FaceTexture texture_delta(std::span<const std::vector<HslColor>> segments, HueMode mode, std::string image_id) {
  FaceTexture out;
  out.image_id = std::move(image_id);
  if (segments.empty()) throw Error(ErrorCode::TooFewSamples, "texture needs at least one segment");
  double sum = 0.0;
  for (const auto& seg : segments) {
    if (seg.size() < 2) {
      throw Error(ErrorCode::TooFewSamples, fmt::format("segment has {} samples, need >= 2", seg.size()));
    }
    for (std::size_t i = 0; i + 1 < seg.size(); ++i) {
      const HslColor& a = seg[i];
      const HslColor& b = seg[i + 1];
      const double dh = mode == HueMode::Circular ? hue_diff(b.h, a.h) : b.h - a.h;
      const double ds = b.s - a.s;
      const double dl = b.l - a.l;
      sum += std::sqrt(dh * dh + ds * ds + dl * dl);
      ++out.n_deltas;
    }
  }
  out.delta_mean = sum / static_cast<double>(out.n_deltas);
  return out;
}

namespace {

using HullPoint = std::pair<long long, long long>;

long long cross(const HullPoint& o, const HullPoint& a, const HullPoint& b) {
  return (a.first - o.first) * (b.second - o.second) - (a.second - o.second) * (b.first - o.first);
}

// Andrew's monotone chain over landmarks scaled to 1/16 pixel, counter-clockwise.
std::vector<HullPoint> convex_hull(const std::vector<Point>& points) {
  std::vector<HullPoint> pts;
  for (const Point& p : points) pts.emplace_back(std::llround(p.x * 16.0), std::llround(p.y * 16.0));
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<HullPoint> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

bool inside_hull(const std::vector<HullPoint>& hull, const HullPoint& p) {
  if (hull.size() < 3) return false;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    if (cross(hull[i], hull[(i + 1) % hull.size()], p) < 0) return false;
  }
  return true;
}

}  // namespace

FaceBrightness brightness_ratio(const PixelGrid& image, const LandmarkSet& landmarks, int threshold,
                                FaceRegion region, std::string image_id) {
  double min_x = std::numeric_limits<double>::infinity();
  double min_y = min_x;
  double max_x = -min_x;
  double max_y = -min_x;
  for (const Point& p : landmarks.points()) {
    min_x = std::min(min_x, p.x);
    min_y = std::min(min_y, p.y);
    max_x = std::max(max_x, p.x);
    max_y = std::max(max_y, p.y);
  }
  const double w = image.width();
  const double h = image.height();
  const int x0 = static_cast<int>(std::max(std::floor(min_x), 0.0));
  const int y0 = static_cast<int>(std::max(std::floor(min_y), 0.0));
  const int x1 = static_cast<int>(std::min(std::floor(max_x), w - 1.0));
  const int y1 = static_cast<int>(std::min(std::floor(max_y), h - 1.0));

  FaceBrightness out;
  out.image_id = std::move(image_id);
  if (x0 <= x1 && y0 <= y1) {
    std::vector<HullPoint> hull;
    if (region == FaceRegion::ConvexHull) hull = convex_hull(landmarks.points());
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        if (region == FaceRegion::ConvexHull && !inside_hull(hull, {16LL * x, 16LL * y})) continue;
        ++out.face_pixels;
        if (luma(image.at(x, y)) > threshold) ++out.bright_pixels;
      }
    }
  }
  if (out.face_pixels == 0) {
    throw Error(ErrorCode::EmptyFaceBox, fmt::format("face region of '{}' has no pixels inside the image", out.image_id));
  }
  out.ratio = static_cast<double>(out.bright_pixels) / static_cast<double>(out.face_pixels);
  return out;
}

CohortMetrics reduce_cohort_metrics(const std::string& cohort_id, std::span<const FaceMetrics> faces) {
  if (faces.empty()) throw Error(ErrorCode::EmptyCohort, fmt::format("cohort {} has no usable faces", cohort_id));
  std::vector<std::size_t> order(faces.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return faces[a].image_id < faces[b].image_id; });

  CohortMetrics m;
  m.cohort_id = cohort_id;
  m.n_faces = faces.size();
  double texture = 0.0;
  double bright = 0.0;
  double sat = 0.0;
  for (std::size_t i : order) {
    texture += faces[i].texture.delta_mean;
    bright += faces[i].brightness.ratio;
    for (double s : faces[i].gated_saturations) sat += s;
    m.n_gated_samples += faces[i].gated_saturations.size();
  }
  const auto n = static_cast<double>(faces.size());
  m.texture_mean = texture / n;
  m.brightness_mean = bright / n;
  m.saturation_mean = m.n_gated_samples ? sat / static_cast<double>(m.n_gated_samples) : 0.0;
  return m;
}

namespace {

double directed_chamfer(const Palette& from, const Palette& to) {
  std::vector<Vec3> targets;
  targets.reserve(to.entries.size());
  for (const auto& e : to.entries) targets.push_back(embed(e.centroid_hsl));
  double sum = 0.0;
  for (const auto& e : from.entries) {
    const Vec3 v = embed(e.centroid_hsl);
    double best = std::numeric_limits<double>::infinity();
    for (const Vec3& t : targets) best = std::min(best, distance(v, t));
    sum += e.proportion * best;
  }
  return sum;
}

}  // namespace

double palette_distance(const Palette& p, const Palette& q) {
  if (p.entries.empty() || q.entries.empty()) {
    throw Error(ErrorCode::EmptyPalette, fmt::format("cannot compare empty palette ({} vs {})", p.cohort_id, q.cohort_id));
  }
  return 0.5 * directed_chamfer(p, q) + 0.5 * directed_chamfer(q, p);
}

DistanceMatrix distance_matrix(std::span<const Palette> palettes) {
  if (palettes.size() < 2) throw Error(ErrorCode::InvalidArgument, "distance matrix needs at least 2 palettes");
  std::set<std::string> seen;
  DistanceMatrix m;
  for (const Palette& p : palettes) {
    if (!seen.insert(p.cohort_id).second) throw Error(ErrorCode::DuplicateCohort, p.cohort_id);
    m.cohort_ids.push_back(p.cohort_id);
  }
  const std::size_t n = palettes.size();
  m.values.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = palette_distance(palettes[i], palettes[j]);
      m.values[i][j] = d;
      m.values[j][i] = d;
    }
  }
  return m;
}

std::string metrics_csv(std::span<const CohortMetrics> rows) {
  std::string out = "cohort_id,n_faces,texture_mean,brightness_mean,saturation_mean\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{},{:.6f},{:.6f},{:.6f}\n", r.cohort_id, r.n_faces, r.texture_mean, r.brightness_mean,
                       r.saturation_mean);
  }
  return out;
}

std::string distance_csv(const DistanceMatrix& matrix) {
  std::string out = "cohort";
  for (const auto& id : matrix.cohort_ids) out += "," + id;
  out += "\n";
  for (std::size_t i = 0; i < matrix.cohort_ids.size(); ++i) {
    out += matrix.cohort_ids[i];
    for (double v : matrix.values[i]) out += fmt::format(",{:.6f}", v);
    out += "\n";
  }
  return out;
}

}  // namespace skinpal
