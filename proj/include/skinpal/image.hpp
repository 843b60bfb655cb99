#pragma once

#include <cstddef>
#include <filesystem>
#include <vector>

#include "skinpal/color.hpp"

namespace skinpal {

/// Row-major 8-bit RGB raster.
class PixelGrid {
 public:
  PixelGrid(int width, int height, RgbColor fill = {});
  PixelGrid(int width, int height, std::vector<RgbColor> pixels);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }

  const RgbColor& at(int x, int y) const { return pixels_[index(x, y)]; }
  RgbColor& at(int x, int y) { return pixels_[index(x, y)]; }

  const std::vector<RgbColor>& pixels() const noexcept { return pixels_; }

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
  }

  int width_;
  int height_;
  std::vector<RgbColor> pixels_;
};

/// Decodes PNG or JPEG by signature. Alpha is composited over opaque white.
/// Throws DecodeError on malformed or truncated data, MissingFile if absent.
PixelGrid load_image_file(const std::filesystem::path& path);

void write_png(const std::filesystem::path& path, const PixelGrid& grid);
void write_jpeg(const std::filesystem::path& path, const PixelGrid& grid, int quality = 95);

/// Composites one RGBA pixel over white, rounding half-up.
RgbColor composite_over_white(std::uint8_t r, std::uint8_t g, std::uint8_t b, std::uint8_t a);

}  // namespace skinpal
