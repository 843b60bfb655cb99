#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace skinpal {

using Vec3 = std::array<double, 3>;

struct RgbColor {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const RgbColor&, const RgbColor&) = default;
};

/// Hue in degrees [0,360), saturation and lightness as fractions in [0,1].
/// Canonical form has h == 0 whenever s == 0.
struct HslColor {
  double h = 0.0;
  double s = 0.0;
  double l = 0.0;

  friend bool operator==(const HslColor&, const HslColor&) = default;
};

struct HueArc {
  double lo = 0.0;
  double hi = 0.0;
};

struct SkinGate {
  double min_lightness = 0.60;
  std::vector<HueArc> hue_arcs{{0.0, 50.0}, {300.0, 360.0}};

  /// Throws InvalidArgument when an arc leaves [0,360] or lo > hi.
  void validate() const;
};

HslColor rgb_to_hsl(RgbColor c);
/// Continuous variant on channels in [0,1]; used for RGB-space centroids.
HslColor rgb_to_hsl(double r, double g, double b);
RgbColor hsl_to_rgb(HslColor c);

/// Returns the 8-bit triple as "#rrggbb".
std::string to_hex(RgbColor c);

/// BT.601 luma, rounded half-up.
std::uint8_t luma(RgbColor c);

/// Lightness is compared strictly, hue arcs are closed.
bool passes_skin_gate(HslColor c, const SkinGate& gate);

/// Circular hue difference normalized to [0, 0.5].
double hue_diff(double h1, double h2);

/// Cylinder embedding (s cos h, s sin h, l).
Vec3 embed(HslColor c);
/// Inverse of embed; radius is clamped into [0,1] and the result canonicalized.
HslColor unembed(const Vec3& v);

HslColor canonicalize(HslColor c);

double distance(const Vec3& a, const Vec3& b);
double squared_distance(const Vec3& a, const Vec3& b);

}  // namespace skinpal
