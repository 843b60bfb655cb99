#include "skinpal/cli.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <map>
#include <ostream>
#include <set>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "skinpal/error.hpp"
#include "skinpal/pipeline.hpp"
#include "skinpal/refsys.hpp"
#include "skinpal/report.hpp"

namespace skinpal {
namespace fs = std::filesystem;

namespace {

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  return fmt::format("{:04}-{:02}-{:02}T{:02}:{:02}:{:02}Z", tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday, tm.tm_hour,
                     tm.tm_min, tm.tm_sec);
}

DistanceMatrix matrix_for(const std::vector<Palette>& palettes) {
  if (palettes.size() >= 2) return distance_matrix(palettes);
  DistanceMatrix m;
  for (const auto& p : palettes) m.cohort_ids.push_back(p.cohort_id);
  m.values.assign(palettes.size(), std::vector<double>(palettes.size(), 0.0));
  return m;
}

}  // namespace

int cmd_analyze(const RunConfig& config, unsigned jobs, std::ostream& out, std::ostream& err) {
  try {
    config.validate();
    if (jobs < 1) throw Error(ErrorCode::InvalidArgument, "jobs must be >= 1");
  } catch (const Error& e) {
    err << "error: invalid configuration: " << e.what() << "\n";
    return kExitFatal;
  }

  try {
    const CohortManifest manifest = load_manifest(config.manifest_path);
    std::optional<ReferenceSystem> reference;
    if (!config.reference_path.empty()) reference = load_reference(config.reference_path);

    const auto config_echo = config.to_json();
    const std::string config_hash = config.analysis_hash();

    std::vector<CohortReport> reports;
    std::vector<Palette> palettes;
    nlohmann::ordered_json inputs;
    inputs["manifest"] = config.manifest_path.generic_string();
    inputs["reference"] = reference ? nlohmann::ordered_json(reference->name) : nlohmann::ordered_json(nullptr);
    inputs["cohorts"] = nlohmann::ordered_json::array();
    std::size_t skipped_total = 0;
    std::size_t orphan_total = 0;

    for (const CohortEntry& cohort : manifest.cohorts) {
      const CohortAnalysis analysis = analyze_cohort(manifest, cohort.id, config, jobs);
      skipped_total += analysis.skipped.size();
      orphan_total += analysis.orphan_images;

      nlohmann::ordered_json entry;
      entry["id"] = cohort.id;
      entry["name"] = cohort.display_name;
      entry["faces"] = analysis.faces.size();
      entry["skipped"] = analysis.skipped.size();
      entry["orphan_images"] = analysis.orphan_images;
      entry["samples"] = analysis.total_samples;
      entry["gated_samples"] = analysis.gated_samples;
      auto& skipped = entry["skipped_images"] = nlohmann::ordered_json::array();
      for (const auto& s : analysis.skipped) skipped.push_back({{"image", s.image_id}, {"reason", s.reason}});
      inputs["cohorts"].push_back(entry);

      for (const auto& s : analysis.skipped) err << "warning: skipped " << s.image_id << ": " << s.reason << "\n";
      if (analysis.orphan_images) {
        err << fmt::format("warning: cohort {}: {} image(s) without landmark sidecar\n", cohort.id, analysis.orphan_images);
      }

      CohortReport report;
      report.cohort_id = cohort.id;
      report.display_name = cohort.display_name;
      report.palette = build_palette(analysis, config);
      report.palette.config_hash = config_hash;
      if (report.palette.limited_by_distinct) {
        err << fmt::format("warning: cohort {}: only {} distinct colors, palette has fewer than k={} entries\n",
                           cohort.id, report.palette.entries.size(), config.k);
      }
      report.metrics = cohort_metrics(analysis);
      if (reference) report.gamut = gamut_report(report.palette, *reference, config.epsilon);
      palettes.push_back(report.palette);
      reports.push_back(std::move(report));
    }

    const DistanceMatrix matrix = matrix_for(palettes);
    EmitOptions options;
    options.config_echo = config_echo;
    options.config_hash = config_hash;
    options.inputs = inputs;
    options.reference = reference ? &*reference : nullptr;
    options.generated_at = utc_timestamp();
    const auto files = emit_report(reports, matrix, config.out_dir, options);

    out << fmt::format("wrote {} files to {}\n", files.size(), config.out_dir.string());
    for (const auto& r : reports) {
      out << fmt::format("{}: faces={} entries={} texture={:.6f} brightness={:.6f} saturation={:.6f}\n", r.cohort_id,
                         r.metrics.n_faces, r.palette.entries.size(), r.metrics.texture_mean, r.metrics.brightness_mean,
                         r.metrics.saturation_mean);
    }
    if (skipped_total > 0) {
      out << fmt::format("partial: {} image(s) skipped, {} orphan image(s)\n", skipped_total, orphan_total);
      return kExitPartial;
    }
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFatal;
  }
}

int cmd_compare(const std::vector<fs::path>& palette_paths, const fs::path& out_csv, std::ostream& out,
                std::ostream& err) {
  if (palette_paths.size() < 2) {
    err << "error: compare needs at least two palette files\n";
    return kExitFatal;
  }
  std::vector<Palette> palettes;
  for (const fs::path& path : palette_paths) {
    try {
      palettes.push_back(load_palette(path));
    } catch (const std::exception& e) {
      err << "error: " << path.string() << ": " << e.what() << "\n";
      return kExitFatal;
    }
  }
  std::set<std::string> hashes;
  std::set<std::size_t> ks;
  for (const auto& p : palettes) {
    hashes.insert(p.config_hash);
    ks.insert(p.k);
  }
  if (hashes.size() > 1) err << "warning: palettes were produced with different configurations\n";
  if (ks.size() > 1) err << "note: palettes use different k; distances are still computed\n";

  try {
    const std::string csv = distance_csv(distance_matrix(palettes));
    out << csv;
    if (!out_csv.empty()) {
      std::ofstream f(out_csv, std::ios::binary);
      f << csv;
      f.close();
      if (!f) throw Error(ErrorCode::IoError, out_csv.string());
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFatal;
  }
  return kExitOk;
}

int cmd_gamut(const fs::path& palette_path, const fs::path& refsys_path, double epsilon, std::ostream& out,
              std::ostream& err) {
  if (!(epsilon > 0.0)) {
    err << fmt::format("error: epsilon must be > 0, got {}\n", epsilon);
    return kExitFatal;
  }
  try {
    const Palette palette = load_palette(palette_path);
    const ReferenceSystem ref = load_reference(refsys_path);
    out << gamut_report_json(gamut_report(palette, ref, epsilon));
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFatal;
  }
  return kExitOk;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"skinpal: cheek skin-tone palettes, texture and brightness metrics for landmarked face corpora"};
  app.require_subcommand(1);
  app.set_version_flag("--version", SKINPAL_VERSION);

  RunConfig config;
  unsigned jobs = 1;
  std::string hue_arcs = format_hue_arcs(config.gate.hue_arcs);
  std::string segment_a = "36:31";
  std::string segment_b = "39:48";
  int k = static_cast<int>(config.k);
  long long max_iter = static_cast<long long>(config.max_iter);
  long long n_init = static_cast<long long>(config.n_init);

  auto* analyze = app.add_subcommand("analyze", "Run the full pipeline over every cohort in a manifest");
  analyze->add_option("--manifest", config.manifest_path, "Cohort manifest JSON")->required();
  analyze->add_option("--out", config.out_dir, "Output directory")->capture_default_str();
  analyze->add_option("--reference", config.reference_path, "Reference color CSV for gamut reports (default: none)");
  analyze->add_option("--k", k, "Palette size per cohort (published-method default)")->capture_default_str();
  analyze->add_option("--seed", config.seed, "Seed for k-means++ initialisation")->capture_default_str();
  analyze->add_option("--tol", config.tol, "Stop when no centroid moves farther than this")->capture_default_str();
  analyze->add_option("--max-iter", max_iter, "Maximum Lloyd iterations")->capture_default_str();
  analyze->add_option("--n-init", n_init, "Independent k-means++ starts; the lowest objective wins")
      ->capture_default_str();
  analyze->add_option("--min-lightness", config.gate.min_lightness,
                      "Skin gate: lightness must exceed this fraction (published-method default)")
      ->capture_default_str();
  analyze->add_option("--hue-arcs", hue_arcs, "Skin gate: closed hue intervals lo:hi,... (published-method default)")
      ->capture_default_str();
  analyze->add_option("--samples-per-segment", config.samples_per_segment,
                      "Points sampled along each cheek segment (published-method default)")
      ->capture_default_str();
  analyze->add_option("--patch", config.patch, "Odd side of the averaging window; 1 reads single pixels")
      ->capture_default_str();
  analyze->add_option("--segment-a", segment_a, "Landmark pair for the first cheek segment")->capture_default_str();
  analyze->add_option("--segment-b", segment_b, "Landmark pair for the second cheek segment")->capture_default_str();
  analyze->add_option("--bright-threshold", config.bright_threshold,
                      "Pixels with luma above this count as bright (published-method default)")
      ->capture_default_str();
  std::string face_region = "bbox";
  std::string hue_mode = "circular";
  std::string cluster_space = "cylinder";
  analyze->add_option("--face-region", face_region, "Face region for brightness: bbox or hull")
      ->check(CLI::IsMember({"bbox", "hull"}))
      ->capture_default_str();
  analyze->add_option("--hue-mode", hue_mode, "Texture hue term: circular or legacy_raw")
      ->check(CLI::IsMember({"circular", "legacy_raw"}))
      ->capture_default_str();
  analyze->add_option("--cluster-space", cluster_space, "Clustering space: cylinder or rgb")
      ->check(CLI::IsMember({"cylinder", "rgb"}))
      ->capture_default_str();
  analyze->add_option("--epsilon", config.epsilon, "Gamut tolerance in the cylinder embedding")->capture_default_str();
  analyze->add_option("--jobs", jobs, "Image-level worker threads; results do not depend on it")->capture_default_str();

  std::vector<fs::path> compare_paths;
  fs::path compare_out;
  auto* compare = app.add_subcommand("compare", "Distance matrix between previously written palette files");
  compare->add_option("palettes", compare_paths, "Palette JSON files")->required()->expected(2, -1);
  compare->add_option("--out", compare_out, "Also write the CSV here");

  fs::path gamut_palette;
  fs::path gamut_ref;
  double gamut_epsilon = 0.05;
  auto* gamut = app.add_subcommand("gamut", "Compare one palette against a reference color system");
  gamut->add_option("palette", gamut_palette, "Palette JSON file")->required();
  gamut->add_option("reference", gamut_ref, "Reference CSV file")->required();
  gamut->add_option("--epsilon", gamut_epsilon, "Gamut tolerance in the cylinder embedding")->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitFatal;
  }

  if (analyze->parsed()) {
    try {
      if (k < 1) throw Error(ErrorCode::InvalidArgument, fmt::format("k must be >= 1, got {}", k));
      if (max_iter < 1) throw Error(ErrorCode::InvalidArgument, fmt::format("max_iter must be >= 1, got {}", max_iter));
      config.k = static_cast<std::size_t>(k);
      if (n_init < 1) throw Error(ErrorCode::InvalidArgument, fmt::format("n_init must be >= 1, got {}", n_init));
      config.max_iter = static_cast<std::size_t>(max_iter);
      config.n_init = static_cast<std::size_t>(n_init);
      config.gate.hue_arcs = parse_hue_arcs(hue_arcs);
      config.face_region = face_region == "hull" ? FaceRegion::ConvexHull : FaceRegion::BoundingBox;
      config.hue_mode = hue_mode == "legacy_raw" ? HueMode::LegacyRaw : HueMode::Circular;
      config.cluster_space = cluster_space == "rgb" ? ClusterSpace::Rgb : ClusterSpace::Cylinder;
      std::tie(config.segments.a_start, config.segments.a_end) = parse_index_pair(segment_a);
      std::tie(config.segments.b_start, config.segments.b_end) = parse_index_pair(segment_b);
    } catch (const Error& e) {
      err << "error: invalid configuration: " << e.what() << "\n";
      return kExitFatal;
    }
    return cmd_analyze(config, jobs, out, err);
  }
  if (compare->parsed()) return cmd_compare(compare_paths, compare_out, out, err);
  return cmd_gamut(gamut_palette, gamut_ref, gamut_epsilon, out, err);
}

}  // namespace skinpal
