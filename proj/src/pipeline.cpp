#include "skinpal/pipeline.hpp"

#include <atomic>
#include <optional>
#include <thread>

#include <fmt/format.h>

#include "skinpal/error.hpp"

namespace skinpal {

FaceAnalysis analyze_face(const PixelGrid& image, const LandmarkSet& landmarks, const std::string& image_id,
                          const std::string& cohort_id, const RunConfig& config) {
  FaceAnalysis face;
  face.image_id = image_id;
  const SamplingOptions sampling = config.sampling();
  const std::vector<RgbColor> rgb = sample_cheek_colors(image, landmarks, sampling);

  const auto n = static_cast<std::size_t>(sampling.samples_per_segment);
  std::vector<std::vector<HslColor>> segments(2);
  face.sampled.reserve(rgb.size());
  for (std::size_t i = 0; i < rgb.size(); ++i) {
    const HslColor hsl = rgb_to_hsl(rgb[i]);
    const int segment = static_cast<int>(i / n);
    const int ordinal = static_cast<int>(i % n);
    face.sampled.push_back(hsl);
    segments[static_cast<std::size_t>(segment)].push_back(hsl);
    if (passes_skin_gate(hsl, config.gate)) {
      face.gated.push_back(make_sample(hsl, image_id, cohort_id, segment, ordinal));
      face.metrics.gated_saturations.push_back(hsl.s);
    }
  }

  face.metrics.image_id = image_id;
  face.metrics.texture = texture_delta(segments, config.hue_mode, image_id);
  face.metrics.brightness = brightness_ratio(image, landmarks, config.bright_threshold, config.face_region, image_id);
  return face;
}

CohortAnalysis analyze_cohort(const CohortManifest& manifest, const std::string& cohort_id, const RunConfig& config,
                              unsigned jobs) {
  const ScanResult scan = scan_cohort(manifest, cohort_id);
  CohortAnalysis analysis;
  analysis.cohort_id = cohort_id;
  analysis.display_name = manifest.cohort(cohort_id).display_name;
  analysis.orphan_images = scan.orphan_images;

  const std::size_t n = scan.records.size();
  std::vector<std::optional<FaceAnalysis>> results(n);
  std::vector<std::string> failures(n);

  auto work = [&](std::size_t i) {
    const ImageRecord& record = scan.records[i];
    try {
      const PixelGrid image = load_image(record);
      const LandmarkSet landmarks = load_landmarks(record);
      results[i] = analyze_face(image, landmarks, record.stable_id, cohort_id, config);
    } catch (const std::exception& e) {
      failures[i] = e.what();
    }
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) work(i);
      });
    }
  }

  // Results are collected by record index, so the outcome is independent of scheduling.
  for (std::size_t i = 0; i < n; ++i) {
    if (!results[i]) {
      analysis.skipped.push_back({scan.records[i].stable_id, failures[i]});
      continue;
    }
    analysis.total_samples += results[i]->sampled.size();
    analysis.gated_samples += results[i]->gated.size();
    analysis.faces.push_back(std::move(*results[i]));
  }
  return analysis;
}

Palette build_palette(const CohortAnalysis& analysis, const RunConfig& config) {
  if (analysis.faces.empty()) {
    throw Error(ErrorCode::EmptyCohort, fmt::format("cohort {} has no usable images", analysis.cohort_id));
  }
  std::vector<ColorSample> pooled;
  pooled.reserve(analysis.gated_samples);
  for (const FaceAnalysis& face : analysis.faces) pooled.insert(pooled.end(), face.gated.begin(), face.gated.end());
  if (pooled.empty()) {
    throw Error(ErrorCode::AllSamplesGated,
                fmt::format("cohort {}: all {} samples from {} faces failed the skin gate (l > {:.2f}, hue in {})",
                            analysis.cohort_id, analysis.total_samples, analysis.faces.size(),
                            config.gate.min_lightness, format_hue_arcs(config.gate.hue_arcs)));
  }
  return palette_from_samples(analysis.cohort_id, pooled, config.palette());
}

Palette build_palette(const CohortManifest& manifest, const std::string& cohort_id, const RunConfig& config,
                      unsigned jobs) {
  return build_palette(analyze_cohort(manifest, cohort_id, config, jobs), config);
}

CohortMetrics cohort_metrics(const CohortAnalysis& analysis) {
  std::vector<FaceMetrics> faces;
  faces.reserve(analysis.faces.size());
  for (const FaceAnalysis& face : analysis.faces) faces.push_back(face.metrics);
  return reduce_cohort_metrics(analysis.cohort_id, faces);
}

CohortMetrics cohort_metrics(const CohortManifest& manifest, const std::string& cohort_id, const RunConfig& config,
                             unsigned jobs) {
  return cohort_metrics(analyze_cohort(manifest, cohort_id, config, jobs));
}

}  // namespace skinpal
