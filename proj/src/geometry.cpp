#include "skinpal/geometry.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "skinpal/error.hpp"

namespace skinpal {

LandmarkSet::LandmarkSet(std::vector<Point> points) : points_(std::move(points)) {
  if (points_.size() != kLandmarkCount) {
    throw Error(ErrorCode::WrongPointCount,
                fmt::format("expected {} landmarks, found {}", kLandmarkCount, points_.size()));
  }
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!std::isfinite(points_[i].x) || !std::isfinite(points_[i].y)) {
      throw Error(ErrorCode::InvalidArgument, fmt::format("landmark {} is not finite", i));
    }
  }
}

bool LandmarkSet::any_off_image(int width, int height) const {
  return std::any_of(points_.begin(), points_.end(), [&](const Point& p) {
    return p.x < 0.0 || p.y < 0.0 || p.x >= width || p.y >= height;
  });
}

void SegmentIndices::validate() const {
  for (std::size_t idx : {a_start, a_end, b_start, b_end}) {
    if (idx >= kLandmarkCount) {
      throw Error(ErrorCode::InvalidArgument, fmt::format("segment landmark index {} out of range 0..67", idx));
    }
  }
}

void SamplingOptions::validate() const {
  if (samples_per_segment < 2) {
    throw Error(ErrorCode::InvalidCount, fmt::format("samples per segment must be >= 2, got {}", samples_per_segment));
  }
  if (patch < 1 || patch % 2 == 0) {
    throw Error(ErrorCode::InvalidArgument, fmt::format("patch must be a positive odd integer, got {}", patch));
  }
  indices.validate();
}

CheekSegments cheek_segments(const LandmarkSet& landmarks, const SegmentIndices& indices) {
  return {{landmarks[indices.a_start], landmarks[indices.a_end]},
          {landmarks[indices.b_start], landmarks[indices.b_end]}};
}

std::vector<SamplePoint> sample_segment(const Segment& segment, int n, int segment_index) {
  if (n < 2) throw Error(ErrorCode::InvalidCount, fmt::format("segment sampling needs n >= 2, got {}", n));
  std::vector<SamplePoint> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(n - 1);
    out.push_back({segment.start.x + t * (segment.end.x - segment.start.x),
                   segment.start.y + t * (segment.end.y - segment.start.y), segment_index, i});
  }
  return out;
}

RgbColor sample_patch(const PixelGrid& image, double x, double y, int patch) {
  const int cx = std::clamp(static_cast<int>(std::floor(std::clamp(x, -1e9, 1e9) + 0.5)), 0, image.width() - 1);
  const int cy = std::clamp(static_cast<int>(std::floor(std::clamp(y, -1e9, 1e9) + 0.5)), 0, image.height() - 1);
  const int radius = patch / 2;
  const int x0 = std::max(cx - radius, 0);
  const int x1 = std::min(cx + radius, image.width() - 1);
  const int y0 = std::max(cy - radius, 0);
  const int y1 = std::min(cy + radius, image.height() - 1);

  unsigned sum_r = 0, sum_g = 0, sum_b = 0, count = 0;
  for (int yy = y0; yy <= y1; ++yy) {
    for (int xx = x0; xx <= x1; ++xx) {
      const RgbColor& p = image.at(xx, yy);
      sum_r += p.r;
      sum_g += p.g;
      sum_b += p.b;
      ++count;
    }
  }
  auto mean = [count](unsigned sum) { return static_cast<std::uint8_t>((2u * sum + count) / (2u * count)); };
  return {mean(sum_r), mean(sum_g), mean(sum_b)};
}

std::vector<RgbColor> sample_cheek_colors(const PixelGrid& image, const LandmarkSet& landmarks,
                                          const SamplingOptions& options) {
  options.validate();
  const CheekSegments segments = cheek_segments(landmarks, options.indices);
  std::vector<RgbColor> colors;
  colors.reserve(2u * static_cast<std::size_t>(options.samples_per_segment));
  int segment_index = 0;
  for (const Segment& seg : {segments.segment_a, segments.segment_b}) {
    for (const SamplePoint& p : sample_segment(seg, options.samples_per_segment, segment_index)) {
      colors.push_back(sample_patch(image, p.x, p.y, options.patch));
    }
    ++segment_index;
  }
  return colors;
}

}  // namespace skinpal
