#include "skinpal/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "skinpal/corpus.hpp"
#include "skinpal/error.hpp"
#include "skinpal/kmeans.hpp"

namespace skinpal::synth {

std::vector<CohortSpec> mini_corpus_cohorts() {
  return {
      {"kr", "South Korea", {29.0, 0.48, 0.68}, 0.008, 0.006, 3.0},
      {"cn", "China", {30.0, 0.56, 0.67}, 0.008, 0.006, 4.0},
      {"th", "Thailand", {28.0, 0.35, 0.66}, 0.008, 0.005, 4.5},
      {"jp", "Japan", {342.0, 0.31, 0.77}, 0.008, 0.012, 2.5},
  };
}

std::vector<Point> landmark_template() {
  std::vector<Point> p;
  p.reserve(kLandmarkCount);
  // 0-16 jaw line, image-left ear to image-right ear
  for (int i = 0; i <= 16; ++i) {
    const double t = 3.14159265358979323846 * i / 16.0;
    p.push_back({0.5 - 0.45 * std::cos(t), 0.35 + 0.60 * std::sin(t)});
  }
  // 17-26 brows
  for (int i = 0; i < 5; ++i) p.push_back({0.15 + 0.0675 * i, 0.24 - 0.02 * std::sin(3.14159265358979 * i / 4.0)});
  for (int i = 0; i < 5; ++i) p.push_back({0.58 + 0.0675 * i, 0.24 - 0.02 * std::sin(3.14159265358979 * i / 4.0)});
  // 27-30 nose bridge, 31-35 lower nose
  for (int i = 0; i < 4; ++i) p.push_back({0.5, 0.36 + 0.07 * i});
  for (int i = 0; i < 5; ++i) p.push_back({0.40 + 0.05 * i, 0.62 + (i == 2 ? 0.02 : 0.0)});
  // 36-41 image-left eye, 42-47 image-right eye
  const Point eye_l[6] = {{0.20, 0.37}, {0.26, 0.34}, {0.33, 0.34}, {0.39, 0.37}, {0.33, 0.39}, {0.26, 0.39}};
  for (const auto& e : eye_l) p.push_back(e);
  const Point eye_r[6] = {{0.61, 0.37}, {0.67, 0.34}, {0.74, 0.34}, {0.80, 0.37}, {0.74, 0.39}, {0.67, 0.39}};
  for (const auto& e : eye_r) p.push_back(e);
  // 48-59 outer lip, 60-67 inner lip
  const Point outer[12] = {{0.34, 0.78}, {0.39, 0.75}, {0.45, 0.73}, {0.50, 0.74}, {0.55, 0.73}, {0.61, 0.75},
                           {0.66, 0.78}, {0.61, 0.82}, {0.55, 0.84}, {0.50, 0.845}, {0.45, 0.84}, {0.39, 0.82}};
  for (const auto& e : outer) p.push_back(e);
  const Point inner[8] = {{0.37, 0.78}, {0.45, 0.77}, {0.50, 0.775}, {0.55, 0.77},
                          {0.63, 0.78}, {0.55, 0.79}, {0.50, 0.795}, {0.45, 0.79}};
  for (const auto& e : inner) p.push_back(e);
  return p;
}

namespace {

HslColor jitter(const HslColor& base, double sigma, Xoshiro256& rng) {
  Vec3 v = embed(base);
  for (double& c : v) c += sigma * rng.normal();
  return unembed(v);
}

}  // namespace

Face render_face(const CohortSpec& cohort, int image_size, std::uint64_t seed) {
  Xoshiro256 rng(seed);
  const double scale = image_size * 0.8;
  const double ox = image_size * 0.1 + (rng.uniform() - 0.5) * 4.0;
  const double oy = image_size * 0.06 + (rng.uniform() - 0.5) * 4.0;
  auto to_px = [&](const Point& q) { return Point{ox + q.x * scale, oy + q.y * scale}; };

  const HslColor face_color = jitter(cohort.base, cohort.face_jitter, rng);
  PixelGrid image(image_size, image_size, RgbColor{38, 52, 96});

  const Point centre = to_px({0.5, 0.56});
  const double rx = 0.47 * scale;
  const double ry = 0.50 * scale;
  const Point highlight = to_px({0.5, 0.20 + 0.04 * rng.uniform()});
  const double hr = cohort.highlight_radius * (0.75 + 0.5 * rng.uniform());

  for (int y = 0; y < image_size; ++y) {
    for (int x = 0; x < image_size; ++x) {
      const double dx = (x - centre.x) / rx;
      const double dy = (y - centre.y) / ry;
      if (dx * dx + dy * dy > 1.0) continue;
      const double hx = x - highlight.x;
      const double hy = y - highlight.y;
      if (hx * hx + hy * hy <= hr * hr) {
        image.at(x, y) = RgbColor{246, 242, 238};
        continue;
      }
      image.at(x, y) = hsl_to_rgb(jitter(face_color, cohort.pixel_noise, rng));
    }
  }

  std::vector<Point> points;
  for (const Point& q : landmark_template()) {
    const Point px = to_px(q);
    points.push_back({std::round(px.x * 1000.0) / 1000.0, std::round(px.y * 1000.0) / 1000.0});
  }
  return {std::move(image), LandmarkSet(std::move(points))};
}

void write_corpus(const std::filesystem::path& root, const std::vector<CohortSpec>& cohorts, int faces_per_cohort,
                  int image_size, std::uint64_t seed) {
  namespace fs = std::filesystem;
  fs::create_directories(root);
  std::string manifest = "{\n  \"version\": 1,\n  \"cohorts\": [\n";
  for (std::size_t c = 0; c < cohorts.size(); ++c) {
    const CohortSpec& cohort = cohorts[c];
    const fs::path dir = root / cohort.id;
    fs::create_directories(dir);
    for (int i = 0; i < faces_per_cohort; ++i) {
      const std::uint64_t face_seed = seed * 1000003ULL + c * 1000ULL + static_cast<std::uint64_t>(i);
      const Face face = render_face(cohort, image_size, face_seed);
      const std::string stem = fmt::format("face_{:03}", i);
      write_png(dir / (stem + ".png"), face.image);
      write_landmarks_json(dir / (stem + ".landmarks.json"), face.landmarks);
    }
    manifest += fmt::format("    {{\"id\": \"{}\", \"root\": \"{}\", \"name\": \"{}\"}}{}\n", cohort.id, cohort.id,
                            cohort.name, c + 1 < cohorts.size() ? "," : "");
  }
  manifest += "  ]\n}\n";
  std::ofstream out(root / "manifest.json", std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, (root / "manifest.json").string());
  out << manifest;
}

}  // namespace skinpal::synth
