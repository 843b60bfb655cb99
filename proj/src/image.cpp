#include "skinpal/image.hpp"

#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <memory>
#include <string>

#include <jpeglib.h>
#include <png.h>

#include <fmt/format.h>

#include "skinpal/error.hpp"

namespace skinpal {

PixelGrid::PixelGrid(int width, int height, RgbColor fill) : width_(width), height_(height) {
  if (width < 1 || height < 1) {
    throw Error(ErrorCode::InvalidArgument, fmt::format("pixel grid {}x{} must be at least 1x1", width, height));
  }
  pixels_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

PixelGrid::PixelGrid(int width, int height, std::vector<RgbColor> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (width < 1 || height < 1 ||
      pixels_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("pixel grid {}x{} does not match {} pixels", width, height, pixels_.size()));
  }
}

RgbColor composite_over_white(std::uint8_t r, std::uint8_t g, std::uint8_t b, std::uint8_t a) {
  auto blend = [a](unsigned c) {
    // (c*a + 255*(255-a)) / 255, half-up
    const unsigned num = c * a + 255u * (255u - a);
    return static_cast<std::uint8_t>((2u * num + 255u) / 510u);
  };
  return {blend(r), blend(g), blend(b)};
}

namespace {

std::vector<unsigned char> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::MissingFile, path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

PixelGrid decode_png(const std::vector<unsigned char>& bytes, const std::filesystem::path& path) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
    const std::string msg = image.message;
    png_image_free(&image);
    throw Error(ErrorCode::DecodeError, fmt::format("{}: {}", path.string(), msg));
  }
  image.format = PNG_FORMAT_RGBA;
  std::vector<unsigned char> rgba(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, rgba.data(), 0, nullptr)) {
    const std::string msg = image.message;
    png_image_free(&image);
    throw Error(ErrorCode::DecodeError, fmt::format("{}: {}", path.string(), msg));
  }
  const int w = static_cast<int>(image.width);
  const int h = static_cast<int>(image.height);
  std::vector<RgbColor> pixels(static_cast<std::size_t>(w) * static_cast<std::size_t>(h));
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    const unsigned char* p = &rgba[4 * i];
    pixels[i] = composite_over_white(p[0], p[1], p[2], p[3]);
  }
  return PixelGrid(w, h, std::move(pixels));
}

struct JpegErrorManager {
  jpeg_error_mgr base;
  std::jmp_buf jump;
  char message[JMSG_LENGTH_MAX];
};

void jpeg_on_error(j_common_ptr cinfo) {
  auto* mgr = reinterpret_cast<JpegErrorManager*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, mgr->message);
  std::longjmp(mgr->jump, 1);
}

// Warnings (msg_level -1) include premature end of data; those are fatal here.
void jpeg_on_message(j_common_ptr cinfo, int msg_level) {
  if (msg_level < 0) jpeg_on_error(cinfo);
}

struct JpegDecodeState {
  jpeg_decompress_struct cinfo;
  JpegErrorManager err;
  std::vector<unsigned char> rgb;
  int width = 0;
  int height = 0;
};

// Only memory reached through `state` is touched after setjmp, so the
// longjmp path never observes a clobbered automatic variable.
bool run_jpeg_decode(JpegDecodeState* state, const std::vector<unsigned char>& bytes) {
  jpeg_decompress_struct& cinfo = state->cinfo;
  cinfo.err = jpeg_std_error(&state->err.base);
  state->err.base.error_exit = jpeg_on_error;
  state->err.base.emit_message = jpeg_on_message;
  state->err.message[0] = '\0';
  jpeg_create_decompress(&cinfo);
  if (setjmp(state->err.jump)) {
    jpeg_destroy_decompress(&cinfo);
    return false;
  }
  jpeg_mem_src(&cinfo, bytes.data(), static_cast<unsigned long>(bytes.size()));
  jpeg_read_header(&cinfo, TRUE);
  cinfo.out_color_space = JCS_RGB;
  jpeg_start_decompress(&cinfo);
  state->width = static_cast<int>(cinfo.output_width);
  state->height = static_cast<int>(cinfo.output_height);
  const std::size_t stride = static_cast<std::size_t>(state->width) * 3u;
  state->rgb.resize(stride * static_cast<std::size_t>(state->height));
  while (cinfo.output_scanline < cinfo.output_height) {
    JSAMPROW row = state->rgb.data() + static_cast<std::size_t>(cinfo.output_scanline) * stride;
    jpeg_read_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  return true;
}

PixelGrid decode_jpeg(const std::vector<unsigned char>& bytes, const std::filesystem::path& path) {
  auto state = std::make_unique<JpegDecodeState>();
  if (!run_jpeg_decode(state.get(), bytes)) {
    throw Error(ErrorCode::DecodeError, fmt::format("{}: {}", path.string(), state->err.message));
  }
  std::vector<RgbColor> pixels(static_cast<std::size_t>(state->width) * static_cast<std::size_t>(state->height));
  const auto& rgb = state->rgb;
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    pixels[i] = {rgb[3 * i], rgb[3 * i + 1], rgb[3 * i + 2]};
  }
  return PixelGrid(state->width, state->height, std::move(pixels));
}

}  // namespace

PixelGrid load_image_file(const std::filesystem::path& path) {
  const auto bytes = read_bytes(path);
  static constexpr unsigned char kPngSig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  if (bytes.size() >= 8 && std::memcmp(bytes.data(), kPngSig, 8) == 0) return decode_png(bytes, path);
  if (bytes.size() >= 3 && bytes[0] == 0xFF && bytes[1] == 0xD8 && bytes[2] == 0xFF) return decode_jpeg(bytes, path);
  throw Error(ErrorCode::DecodeError, fmt::format("{}: not a PNG or JPEG stream", path.string()));
}

void write_png(const std::filesystem::path& path, const PixelGrid& grid) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(grid.width());
  image.height = static_cast<png_uint_32>(grid.height());
  image.format = PNG_FORMAT_RGB;
  std::vector<unsigned char> rgb;
  rgb.reserve(grid.pixels().size() * 3u);
  for (const auto& p : grid.pixels()) {
    rgb.push_back(p.r);
    rgb.push_back(p.g);
    rgb.push_back(p.b);
  }
  if (!png_image_write_to_file(&image, path.c_str(), 0, rgb.data(), 0, nullptr)) {
    const std::string msg = image.message;
    png_image_free(&image);
    throw Error(ErrorCode::IoError, fmt::format("{}: {}", path.string(), msg));
  }
}

namespace {

bool run_jpeg_encode(jpeg_compress_struct* cinfo, JpegErrorManager* err, std::FILE* file, const unsigned char* rgb,
                     int width, int height, int quality) {
  cinfo->err = jpeg_std_error(&err->base);
  err->base.error_exit = jpeg_on_error;
  jpeg_create_compress(cinfo);
  if (setjmp(err->jump)) {
    jpeg_destroy_compress(cinfo);
    return false;
  }
  jpeg_stdio_dest(cinfo, file);
  cinfo->image_width = static_cast<JDIMENSION>(width);
  cinfo->image_height = static_cast<JDIMENSION>(height);
  cinfo->input_components = 3;
  cinfo->in_color_space = JCS_RGB;
  jpeg_set_defaults(cinfo);
  jpeg_set_quality(cinfo, quality, TRUE);
  jpeg_start_compress(cinfo, TRUE);
  while (cinfo->next_scanline < cinfo->image_height) {
    JSAMPROW row = const_cast<unsigned char*>(rgb) + static_cast<std::size_t>(cinfo->next_scanline) * width * 3u;
    jpeg_write_scanlines(cinfo, &row, 1);
  }
  jpeg_finish_compress(cinfo);
  jpeg_destroy_compress(cinfo);
  return true;
}

}  // namespace

void write_jpeg(const std::filesystem::path& path, const PixelGrid& grid, int quality) {
  std::vector<unsigned char> rgb;
  rgb.reserve(grid.pixels().size() * 3u);
  for (const auto& p : grid.pixels()) {
    rgb.push_back(p.r);
    rgb.push_back(p.g);
    rgb.push_back(p.b);
  }
  std::unique_ptr<std::FILE, int (*)(std::FILE*)> file(std::fopen(path.c_str(), "wb"), &std::fclose);
  if (!file) throw Error(ErrorCode::IoError, fmt::format("cannot open {} for writing", path.string()));
  auto cinfo = std::make_unique<jpeg_compress_struct>();
  auto err = std::make_unique<JpegErrorManager>();
  if (!run_jpeg_encode(cinfo.get(), err.get(), file.get(), rgb.data(), grid.width(), grid.height(), quality)) {
    throw Error(ErrorCode::IoError, fmt::format("{}: {}", path.string(), err->message));
  }
}

}  // namespace skinpal
