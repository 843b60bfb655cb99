#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "skinpal/color.hpp"
#include "skinpal/image.hpp"

namespace skinpal {

inline constexpr std::size_t kLandmarkCount = 68;

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

/// 68 facial landmarks in iBUG 300-W order, image pixel coordinates.
class LandmarkSet {
 public:
  /// Throws WrongPointCount unless exactly 68 points, InvalidArgument on non-finite values.
  explicit LandmarkSet(std::vector<Point> points);

  const Point& operator[](std::size_t i) const { return points_.at(i); }
  const std::vector<Point>& points() const noexcept { return points_; }

  /// True when any point lies outside [0,w) x [0,h); sampling clamps such points.
  bool any_off_image(int width, int height) const;

 private:
  std::vector<Point> points_;
};

struct Segment {
  Point start;
  Point end;
};

struct CheekSegments {
  Segment segment_a;
  Segment segment_b;
};

/// Landmark indices of the two cheek segments (0-based iBUG indexing).
struct SegmentIndices {
  std::size_t a_start = 36;  // left-eye outer corner
  std::size_t a_end = 31;    // left nasal wing
  std::size_t b_start = 39;  // left-eye inner corner
  std::size_t b_end = 48;    // left mouth corner

  void validate() const;
};

struct SamplePoint {
  double x = 0.0;
  double y = 0.0;
  int segment_index = 0;
  int ordinal = 0;
};

struct SamplingOptions {
  int samples_per_segment = 10;
  int patch = 3;  // odd window side; 1 reads single pixels
  SegmentIndices indices;

  void validate() const;
};

CheekSegments cheek_segments(const LandmarkSet& landmarks, const SegmentIndices& indices = {});

/// n evenly spaced points, endpoints inclusive. Throws InvalidCount when n < 2.
std::vector<SamplePoint> sample_segment(const Segment& segment, int n = 10, int segment_index = 0);

/// Mean color of the patch centred on the rounded, clamped coordinate.
RgbColor sample_patch(const PixelGrid& image, double x, double y, int patch);

/// Segment A ordinals 0..n-1 followed by segment B ordinals 0..n-1.
std::vector<RgbColor> sample_cheek_colors(const PixelGrid& image, const LandmarkSet& landmarks,
                                          const SamplingOptions& options = {});

}  // namespace skinpal
