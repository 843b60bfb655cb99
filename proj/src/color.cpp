#include "skinpal/color.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "skinpal/error.hpp"

namespace skinpal {
namespace {

std::uint8_t to_channel(double v) {
  const double scaled = std::floor(v * 255.0 + 0.5);
  return static_cast<std::uint8_t>(std::clamp(scaled, 0.0, 255.0));
}

}  // namespace

void SkinGate::validate() const {
  if (!(min_lightness >= 0.0 && min_lightness <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("gate min_lightness {} outside [0,1]", min_lightness));
  }
  for (const auto& arc : hue_arcs) {
    if (!(arc.lo >= 0.0 && arc.hi <= 360.0 && arc.lo <= arc.hi)) {
      throw Error(ErrorCode::InvalidArgument,
                  fmt::format("hue arc [{},{}] must satisfy 0 <= lo <= hi <= 360", arc.lo, arc.hi));
    }
  }
}

HslColor canonicalize(HslColor c) {
  c.s = std::clamp(c.s, 0.0, 1.0);
  c.l = std::clamp(c.l, 0.0, 1.0);
  if (c.s == 0.0) {
    c.h = 0.0;
    return c;
  }
  c.h = std::fmod(c.h, 360.0);
  if (c.h < 0.0) c.h += 360.0;
  if (c.h >= 360.0) c.h = 0.0;
  return c;
}

HslColor rgb_to_hsl(double r, double g, double b) {
  const double hi = std::max({r, g, b});
  const double lo = std::min({r, g, b});
  const double l = (hi + lo) / 2.0;
  const double chroma = hi - lo;
  if (chroma == 0.0) return {0.0, 0.0, l};

  const double s = chroma / (1.0 - std::abs(2.0 * l - 1.0));
  double h;
  if (hi == r) {
    h = 60.0 * std::fmod((g - b) / chroma, 6.0);
  } else if (hi == g) {
    h = 60.0 * ((b - r) / chroma + 2.0);
  } else {
    h = 60.0 * ((r - g) / chroma + 4.0);
  }
  return canonicalize({h, s, l});
}

HslColor rgb_to_hsl(RgbColor c) {
  return rgb_to_hsl(c.r / 255.0, c.g / 255.0, c.b / 255.0);
}

RgbColor hsl_to_rgb(HslColor c) {
  const double chroma = (1.0 - std::abs(2.0 * c.l - 1.0)) * c.s;
  const double sector = c.h / 60.0;
  const double x = chroma * (1.0 - std::abs(std::fmod(sector, 2.0) - 1.0));
  const double m = c.l - chroma / 2.0;

  double r = 0.0, g = 0.0, b = 0.0;
  switch (static_cast<int>(std::floor(sector)) % 6) {
    case 0: r = chroma; g = x; break;
    case 1: r = x; g = chroma; break;
    case 2: g = chroma; b = x; break;
    case 3: g = x; b = chroma; break;
    case 4: r = x; b = chroma; break;
    default: r = chroma; b = x; break;
  }
  return {to_channel(r + m), to_channel(g + m), to_channel(b + m)};
}

std::string to_hex(RgbColor c) {
  return fmt::format("#{:02x}{:02x}{:02x}", c.r, c.g, c.b);
}

std::uint8_t luma(RgbColor c) {
  // Integer weights keep the result exact: 0.299/0.587/0.114 scaled by 1000.
  const unsigned weighted = 299u * c.r + 587u * c.g + 114u * c.b;
  return static_cast<std::uint8_t>((weighted + 500u) / 1000u);
}

bool passes_skin_gate(HslColor c, const SkinGate& gate) {
  if (!(c.l > gate.min_lightness)) return false;
  return std::any_of(gate.hue_arcs.begin(), gate.hue_arcs.end(),
                     [&](const HueArc& arc) { return c.h >= arc.lo && c.h <= arc.hi; });
}

double hue_diff(double h1, double h2) {
  const double d = std::abs(h1 - h2);
  return std::min(d, 360.0 - d) / 360.0;
}

Vec3 embed(HslColor c) {
  const double rad = c.h * std::numbers::pi / 180.0;
  return {c.s * std::cos(rad), c.s * std::sin(rad), c.l};
}

HslColor unembed(const Vec3& v) {
  const double radius = std::hypot(v[0], v[1]);
  double h = std::atan2(v[1], v[0]) * 180.0 / std::numbers::pi;
  if (h < 0.0) h += 360.0;
  return canonicalize({h, std::min(radius, 1.0), v[2]});
}

double squared_distance(const Vec3& a, const Vec3& b) {
  const double dx = a[0] - b[0];
  const double dy = a[1] - b[1];
  const double dz = a[2] - b[2];
  return dx * dx + dy * dy + dz * dz;
}

double distance(const Vec3& a, const Vec3& b) { return std::sqrt(squared_distance(a, b)); }

}  // namespace skinpal
