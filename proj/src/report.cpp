#include "skinpal/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <system_error>

#include <fmt/format.h>

#include "skinpal/error.hpp"

namespace skinpal {
namespace fs = std::filesystem;

namespace {

constexpr const char* kSvgHeader = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";

// Greenish family for extracted palettes, one shade per cohort.
constexpr const char* kCohortColors[] = {"#1b9e77", "#66a61e", "#2ca02c", "#17becf",
                                         "#006d2c", "#74c476", "#238b45", "#41ab5d"};
constexpr const char* kReferenceColor = "#d62728";

const char* cohort_color(std::size_t i) { return kCohortColors[i % std::size(kCohortColors)]; }

std::string num(double v) {
  if (v == 0.0) v = 0.0;  // drop negative zero
  return fmt::format("{:.3f}", v);
}

std::string svg_open(int width, int height) {
  return fmt::format(
      "{}<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n",
      kSvgHeader, width, height, width, height);
}

std::string entry_title(const PaletteEntry& e) {
  return fmt::format("h={:.6f} s={:.6f} l={:.6f} proportion={:.6f}", e.centroid_hsl.h, e.centroid_hsl.s,
                     e.centroid_hsl.l, e.proportion);
}

}  // namespace

void RenderSpec::validate() const {
  if (width < 1 || height < 1 || swatch_gap < 0) {
    throw Error(ErrorCode::InvalidArgument, fmt::format("render spec {}x{} gap {} invalid", width, height, swatch_gap));
  }
}

std::string xml_escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fnv1a64_hex(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return fmt::format("{:016x}", hash);
}

std::string render_palette_strip(const Palette& p, const RenderSpec& spec) {
  spec.validate();
  if (p.entries.empty()) throw Error(ErrorCode::EmptyPalette, p.cohort_id);
  const Palette sorted = spec.sort_mode == SortMode::Proportion ? sort_by_proportion(p) : sort_by_lightness(p);
  const std::size_t n = sorted.entries.size();
  const double usable = std::max(0.0, static_cast<double>(spec.width) - static_cast<double>(spec.swatch_gap) * (n - 1));

  double total = 0.0;
  for (const auto& e : sorted.entries) total += e.proportion;

  std::string svg = svg_open(spec.width, spec.height);
  svg += fmt::format("<title>{} palette, sorted by {}</title>\n", xml_escape(p.cohort_id),
                     spec.sort_mode == SortMode::Proportion ? "cluster size" : "lightness");
  svg += fmt::format("<g class=\"palette\" data-cohort=\"{}\" data-sort=\"{}\">\n", xml_escape(p.cohort_id),
                     spec.sort_mode == SortMode::Proportion ? "proportion" : "lightness");

  double x = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const PaletteEntry& e = sorted.entries[i];
    double w;
    if (i + 1 == n) {
      w = static_cast<double>(spec.width) - x;  // absorb rounding so the strip ends flush
    } else if (spec.proportional_widths && total > 0.0) {
      w = usable * e.proportion / total;
    } else {
      w = usable / static_cast<double>(n);
    }
    svg += fmt::format(
        "<rect class=\"swatch\" x=\"{}\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"{}\" data-index=\"{}\" "
        "data-proportion=\"{:.6f}\" data-lightness=\"{:.6f}\"><title>{}</title></rect>\n",
        num(x), num(std::max(w, 0.0)), spec.height, to_hex(hsl_to_rgb(e.centroid_hsl)), i, e.proportion,
        e.centroid_hsl.l, entry_title(e));
    x += w + spec.swatch_gap;
  }
  svg += "</g>\n</svg>\n";
  return svg;
}

std::string render_scatter(std::span<const Palette> palettes, const ReferenceSystem* ref,
                           std::span<const std::string> display_names, const ScatterSpec& spec) {
  const double left = spec.margin;
  const double right = spec.width - spec.margin;
  const double top = spec.margin;
  const double bottom = spec.height - spec.margin;
  auto px = [&](double hue) { return left + (right - left) * hue / 360.0; };
  auto py = [&](double lightness) { return bottom - (bottom - top) * lightness; };

  std::string svg = svg_open(spec.width, spec.height);
  svg += "<title>Hue and lightness of extracted palettes and reference colors</title>\n";
  svg += "<g class=\"axes\" stroke=\"#000000\" fill=\"none\">\n";
  svg += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>\n", num(left), num(bottom), num(right), num(bottom));
  svg += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>\n", num(left), num(bottom), num(left), num(top));
  svg += "</g>\n<g class=\"ticks\" font-family=\"sans-serif\" font-size=\"10\" fill=\"#000000\">\n";
  for (int hue = 0; hue <= 360; hue += 60) {
    svg += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", num(px(hue)), num(bottom + 14), hue);
  }
  for (int tenth = 0; tenth <= 10; tenth += 2) {
    svg += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{:.1f}</text>\n", num(left - 6), num(py(tenth / 10.0) + 3),
                       tenth / 10.0);
  }
  svg += "</g>\n";
  svg += fmt::format(
      "<text class=\"axis-label\" x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      "font-size=\"12\">Hue (degrees, 0-360)</text>\n",
      num((left + right) / 2), num(bottom + 34));
  svg += fmt::format(
      "<text class=\"axis-label\" x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      "font-size=\"12\" transform=\"rotate(-90 {} {})\">Lightness (0-1)</text>\n",
      num(left - 40), num((top + bottom) / 2), num(left - 40), num((top + bottom) / 2));

  if (ref) {
    std::vector<const ReferenceColor*> colors;
    for (const auto& c : ref->colors) colors.push_back(&c);
    std::sort(colors.begin(), colors.end(), [](auto* a, auto* b) { return a->label < b->label; });
    svg += fmt::format("<g class=\"reference\" data-name=\"{}\">\n", xml_escape(ref->name));
    for (const auto* c : colors) {
      svg += fmt::format(
          "<circle class=\"reference-marker\" cx=\"{}\" cy=\"{}\" r=\"3.5\" fill=\"{}\" fill-opacity=\"0.8\" "
          "data-label=\"{}\"/>\n",
          num(px(c->hsl.h)), num(py(c->hsl.l)), kReferenceColor, xml_escape(c->label));
    }
    svg += "</g>\n";
  }

  for (std::size_t i = 0; i < palettes.size(); ++i) {
    const Palette sorted = sort_by_proportion(palettes[i]);
    svg += fmt::format("<g class=\"cohort\" data-cohort=\"{}\">\n", xml_escape(sorted.cohort_id));
    for (const auto& e : sorted.entries) {
      svg += fmt::format(
          "<circle class=\"cohort-marker\" cx=\"{}\" cy=\"{}\" r=\"4\" fill=\"{}\" fill-opacity=\"0.8\" "
          "stroke=\"#ffffff\" stroke-width=\"0.5\"/>\n",
          num(px(e.centroid_hsl.h)), num(py(e.centroid_hsl.l)), cohort_color(i));
    }
    svg += "</g>\n";
  }

  svg += "<g class=\"legend\" font-family=\"sans-serif\" font-size=\"11\">\n";
  double ly = top;
  for (std::size_t i = 0; i < palettes.size(); ++i) {
    const std::string& name = i < display_names.size() ? display_names[i] : palettes[i].cohort_id;
    svg += fmt::format("<rect class=\"legend-key\" x=\"{}\" y=\"{}\" width=\"10\" height=\"10\" fill=\"{}\"/>\n",
                       num(right - 110), num(ly), cohort_color(i));
    svg += fmt::format("<text x=\"{}\" y=\"{}\">{}</text>\n", num(right - 95), num(ly + 9), xml_escape(name));
    ly += 16;
  }
  if (ref) {
    svg += fmt::format("<rect class=\"legend-key\" x=\"{}\" y=\"{}\" width=\"10\" height=\"10\" fill=\"{}\"/>\n",
                       num(right - 110), num(ly), kReferenceColor);
    svg += fmt::format("<text x=\"{}\" y=\"{}\">{}</text>\n", num(right - 95), num(ly + 9), xml_escape(ref->name));
  }
  svg += "</g>\n</svg>\n";
  return svg;
}

std::string render_polar(std::span<const Palette> palettes, const ReferenceSystem* ref, const ScatterSpec& spec) {
  const double cx = spec.width / 2.0;
  const double cy = spec.height / 2.0;
  const double radius = std::min(spec.width, spec.height) / 2.0 - spec.margin / 2.0;
  auto point = [&](const HslColor& c) {
    const double a = c.h * std::numbers::pi / 180.0;
    return std::pair{cx + radius * c.s * std::cos(a), cy - radius * c.s * std::sin(a)};
  };

  std::string svg = svg_open(spec.width, spec.height);
  svg += "<title>HSL cylinder seen from above: angle is hue, radius is saturation, size is lightness</title>\n";
  svg += fmt::format("<g class=\"axes\" stroke=\"#999999\" fill=\"none\">\n<circle cx=\"{}\" cy=\"{}\" r=\"{}\"/>\n",
                     num(cx), num(cy), num(radius));
  svg += fmt::format("<circle cx=\"{}\" cy=\"{}\" r=\"{}\"/>\n", num(cx), num(cy), num(radius / 2));
  for (int hue = 0; hue < 360; hue += 30) {
    const auto [x, y] = point({static_cast<double>(hue), 1.0, 0.5});
    svg += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>\n", num(cx), num(cy), num(x), num(y));
  }
  svg += "</g>\n";

  auto marker = [&](const char* cls, const HslColor& c, const char* fill) {
    const auto [x, y] = point(c);
    return fmt::format("<circle class=\"{}\" cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{}\" fill-opacity=\"0.8\"/>\n", cls,
                       num(x), num(y), num(1.5 + 6.0 * c.l), fill);
  };
  if (ref) {
    std::vector<const ReferenceColor*> colors;
    for (const auto& c : ref->colors) colors.push_back(&c);
    std::sort(colors.begin(), colors.end(), [](auto* a, auto* b) { return a->label < b->label; });
    svg += fmt::format("<g class=\"reference\" data-name=\"{}\">\n", xml_escape(ref->name));
    for (const auto* c : colors) svg += marker("reference-marker", c->hsl, kReferenceColor);
    svg += "</g>\n";
  }
  for (std::size_t i = 0; i < palettes.size(); ++i) {
    const Palette sorted = sort_by_proportion(palettes[i]);
    svg += fmt::format("<g class=\"cohort\" data-cohort=\"{}\">\n", xml_escape(sorted.cohort_id));
    for (const auto& e : sorted.entries) svg += marker("cohort-marker", e.centroid_hsl, cohort_color(i));
    svg += "</g>\n";
  }
  svg += "</svg>\n";
  return svg;
}

namespace {

class OutputTransaction {
 public:
  explicit OutputTransaction(fs::path root) : root_(std::move(root)) {}
  OutputTransaction(const OutputTransaction&) = delete;
  OutputTransaction& operator=(const OutputTransaction&) = delete;

  ~OutputTransaction() {
    if (committed_) return;
    std::error_code ec;
    for (auto it = written_.rbegin(); it != written_.rend(); ++it) fs::remove(root_ / *it, ec);
    for (auto it = created_dirs_.rbegin(); it != created_dirs_.rend(); ++it) fs::remove(*it, ec);
  }

  void make_dir(const fs::path& dir) {
    std::vector<fs::path> missing;
    for (fs::path p = dir; !p.empty() && !fs::exists(p); p = p.parent_path()) {
      missing.push_back(p);
      if (p == p.parent_path()) break;
    }
    for (auto it = missing.rbegin(); it != missing.rend(); ++it) {
      std::error_code ec;
      if (!fs::create_directory(*it, ec) && ec) {
        throw Error(ErrorCode::IoError, fmt::format("cannot create {}: {}", it->string(), ec.message()));
      }
      created_dirs_.push_back(*it);
    }
    if (!fs::is_directory(dir)) throw Error(ErrorCode::IoError, fmt::format("{} is not a directory", dir.string()));
  }

  void write(const fs::path& relative, const std::string& bytes) {
    const fs::path full = root_ / relative;
    make_dir(full.parent_path());
    {
      std::ofstream out(full, std::ios::binary | std::ios::trunc);
      if (!out) throw Error(ErrorCode::IoError, fmt::format("cannot open {} for writing", full.string()));
      written_.push_back(relative);
      out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
      out.close();
      if (!out) throw Error(ErrorCode::IoError, fmt::format("failed writing {}", full.string()));
    }
  }

  void commit() { committed_ = true; }
  const std::vector<fs::path>& written() const { return written_; }

 private:
  fs::path root_;
  std::vector<fs::path> written_;
  std::vector<fs::path> created_dirs_;
  bool committed_ = false;
};

}  // namespace

std::vector<fs::path> emit_report(std::span<const CohortReport> reports, const DistanceMatrix& matrix,
                                  const fs::path& out_dir, const EmitOptions& options) {
  if (reports.empty()) throw Error(ErrorCode::InvalidArgument, "no cohort reports to emit");

  // Render everything before touching the filesystem.
  std::vector<std::pair<fs::path, std::string>> files;
  std::vector<Palette> palettes;
  std::vector<std::string> names;
  std::vector<CohortMetrics> metrics;
  for (const CohortReport& r : reports) {
    const fs::path dir = r.cohort_id;
    files.emplace_back(dir / "palette.json", palette_to_json(sort_by_proportion(r.palette)));
    RenderSpec by_size = options.strip;
    by_size.sort_mode = SortMode::Proportion;
    RenderSpec by_light = options.strip;
    by_light.sort_mode = SortMode::Lightness;
    files.emplace_back(dir / "strip_by_size.svg", render_palette_strip(r.palette, by_size));
    files.emplace_back(dir / "strip_by_lightness.svg", render_palette_strip(r.palette, by_light));
    if (r.gamut) files.emplace_back(dir / "gamut.json", gamut_report_json(*r.gamut));
    palettes.push_back(r.palette);
    names.push_back(r.display_name.empty() ? r.cohort_id : r.display_name);
    metrics.push_back(r.metrics);
  }
  files.emplace_back("metrics.csv", metrics_csv(metrics));
  files.emplace_back("distances.csv", distance_csv(matrix));
  files.emplace_back("scatter.svg", render_scatter(palettes, options.reference, names, options.scatter));
  files.emplace_back("polar.svg", render_polar(palettes, options.reference, options.scatter));

  nlohmann::ordered_json manifest;
  manifest["tool"] = "skinpal";
  manifest["version"] = SKINPAL_VERSION;
  manifest["generated_at"] = options.generated_at;
  manifest["config"] = options.config_echo;
  manifest["config_hash"] =
      options.config_hash.empty() ? fnv1a64_hex(options.config_echo.dump()) : options.config_hash;
  manifest["inputs"] = options.inputs;
  nlohmann::ordered_json listed = nlohmann::ordered_json::array();
  for (const auto& [path, bytes] : files) {
    listed.push_back({{"path", path.generic_string()}, {"fnv1a64", fnv1a64_hex(bytes)}});
  }
  manifest["files"] = listed;
  files.emplace_back("manifest.json", manifest.dump(2) + "\n");

  OutputTransaction tx(out_dir);
  try {
    tx.make_dir(out_dir);
    for (const auto& [path, bytes] : files) tx.write(path, bytes);
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(ErrorCode::IoError, e.what());
  }
  tx.commit();
  return tx.written();
}

}  // namespace skinpal
