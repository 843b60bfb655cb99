// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>

#include <fmt/core.h>
#include <json.hpp>

#include "kmeans_oracle.hpp"
#include "skinpal/cli.hpp"
#include "skinpal/color.hpp"
#include "skinpal/kmeans.hpp"
#include "skinpal/metrics.hpp"
#include "skinpal/palette.hpp"
#include "skinpal/refsys.hpp"
#include "skinpal/report.hpp"
#include "skinpal/synth.hpp"
#include "svg_check.hpp"
#include "test_support.hpp"

using namespace skinpal;
using namespace skinpal::testing;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Outcome color_round_trip() {
  const auto t0 = Clock::now();
  std::size_t checked = 0, failures = 0;
  auto check = [&](RgbColor c) {
    ++checked;
    if (hsl_to_rgb(rgb_to_hsl(c)) != c) ++failures;
  };
  for (int r = 0; r < 17; ++r)
    for (int g = 0; g < 17; ++g)
      for (int b = 0; b < 17; ++b) {
        auto level = [](int i) { return static_cast<std::uint8_t>(std::min(255, i * 16)); };
        check({level(r), level(g), level(b)});
      }
  Xoshiro256 rng(1);
  for (int i = 0; i < 100000; ++i) {
    check({static_cast<std::uint8_t>(rng.below(256)), static_cast<std::uint8_t>(rng.below(256)),
           static_cast<std::uint8_t>(rng.below(256))});
  }
  const double t = seconds_since(t0);
  return {failures == 0 && t < 1.0, fmt::format("{} triples, {} failures, {:.3f} s", checked, failures, t)};
}

Outcome kmeans_oracle() {
  const auto t0 = Clock::now();
  Xoshiro256 rng(2024);
  int optimal = 0;
  double worst_ratio = 0.0;
  for (int inst = 0; inst < 50; ++inst) {
    const std::size_t n = 4 + rng.below(9);  // 4..12
    const std::size_t k = 2 + rng.below(2);  // 2..3
    std::vector<Vec3> pts(n);
    for (auto& p : pts) p = {rng.uniform(), rng.uniform(), rng.uniform()};
    KMeansOptions opts;
    opts.k = k;
    opts.seed = 100 + inst;
    const KMeansResult res = kmeans(pts, opts);
    const double got = wcss(pts, res.centroids, res.assignments);
    const double best = brute_force_wcss(pts, k);
    if (got <= best * (1.0 + 1e-9) + 1e-12) ++optimal;
    worst_ratio = std::max(worst_ratio, best > 0 ? got / best : 1.0);
  }
  const double t = seconds_since(t0);
  return {optimal >= 45 && worst_ratio <= 1.05 && t < 10.0,
          fmt::format("{}/50 optimal, worst ratio {:.4f}, {:.2f} s", optimal, worst_ratio, t)};
}

Outcome palette_recovery() {
  const std::vector<HslColor> generators = {
      {20, 0.45, 0.70}, {35, 0.60, 0.80}, {355, 0.30, 0.75}, {10, 0.70, 0.62}, {45, 0.25, 0.90}};
  const std::vector<double> weights = {0.30, 0.25, 0.20, 0.15, 0.10};
  const double sigma = 0.02;
  Xoshiro256 rng(7);
  std::vector<ColorSample> samples;
  int ordinal = 0;
  for (std::size_t g = 0; g < generators.size(); ++g) {
    const int count = static_cast<int>(std::lround(2000 * weights[g]));
    const Vec3 centre = embed(generators[g]);
    for (int i = 0; i < count; ++i) {
      Vec3 v = centre;
      for (double& x : v) x += sigma * rng.normal();
      samples.push_back(make_sample(unembed(v), "synthetic", "rec", 0, ordinal++));
    }
  }
  PaletteOptions opts;
  opts.k = 5;
  opts.seed = 20;
  const Palette p = palette_from_samples("rec", samples, opts);
  if (p.entries.size() != 5) return {false, fmt::format("{} entries", p.entries.size())};

  // best one-to-one matching over all 5! assignments
  std::vector<std::size_t> perm(5);
  std::iota(perm.begin(), perm.end(), 0);
  double best_dist = 1e9, best_prop = 1e9;
  do {
    double d = 0.0, w = 0.0;
    for (std::size_t i = 0; i < 5; ++i) {
      d = std::max(d, distance(embed(p.entries[i].centroid_hsl), embed(generators[perm[i]])));
      w = std::max(w, std::abs(p.entries[i].proportion - weights[perm[i]]));
    }
    if (d < best_dist) {
      best_dist = d;
      best_prop = w;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return {best_dist <= 0.02 && best_prop <= 0.05,
          fmt::format("max centroid error {:.5f}, max proportion error {:.4f}", best_dist, best_prop)};
}

Outcome texture_oracle() {
  const std::vector<std::vector<HslColor>> constant(2, std::vector<HslColor>(10, HslColor{25, 0.4, 0.7}));
  const double flat = texture_delta(constant).delta_mean;

  std::vector<std::vector<HslColor>> alt(2);
  for (auto& seg : alt)
    for (int i = 0; i < 10; ++i) seg.push_back({i % 2 ? 5.0 : 355.0, 0.4, 0.7});
  const FaceTexture t = texture_delta(alt);
  const double expected = 10.0 / 360.0;
  double worst = std::abs(t.delta_mean - expected);
  for (const auto& seg : alt)
    for (std::size_t i = 1; i < seg.size(); ++i) {
      const std::vector<std::vector<HslColor>> pair{{seg[i - 1], seg[i]}};
      worst = std::max(worst, std::abs(texture_delta(pair).delta_mean - expected));
    }

  Xoshiro256 rng(11);
  int reversal_failures = 0;
  for (int s = 0; s < 100; ++s) {
    std::vector<std::vector<HslColor>> segs(2), rev(2);
    for (std::size_t j = 0; j < 2; ++j) {
      const std::size_t n = 2 + rng.below(15);
      for (std::size_t i = 0; i < n; ++i) segs[j].push_back({rng.uniform() * 360.0, rng.uniform(), rng.uniform()});
      rev[j].assign(segs[j].rbegin(), segs[j].rend());
    }
    if (std::abs(texture_delta(segs).delta_mean - texture_delta(rev).delta_mean) > 1e-12) ++reversal_failures;
  }
  return {flat == 0.0 && worst <= 1e-12 && reversal_failures == 0,
          fmt::format("constant {}, alternating error {:.2e}, reversal failures {}/100", flat, worst,
                      reversal_failures)};
}

Outcome brightness_exactness() {
  // Landmarks span [10, 19.5] on both axes, so the box is 10..19 inclusive: 100 pixels.
  std::vector<Point> pts;
  for (int i = 0; i < kLandmarkCount; ++i) {
    const double t = static_cast<double>(i) / (kLandmarkCount - 1);
    pts.push_back({10.0 + 9.5 * t, 19.5 - 9.5 * t});
  }
  const LandmarkSet lm(pts);
  std::string detail;
  bool ok = true;
  for (const double f : {0.0, 0.25, 0.37, 1.0}) {
    // outside the box stays bright to prove clamping to the box
    PixelGrid img(32, 32, RgbColor{255, 255, 255});
    const int bright = static_cast<int>(std::lround(f * 100));
    int idx = 0;
    for (int y = 10; y <= 19; ++y)
      for (int x = 10; x <= 19; ++x, ++idx) img.at(x, y) = idx < bright ? RgbColor{201, 201, 201} : RgbColor{200, 200, 200};
    const double ratio = brightness_ratio(img, lm).ratio;
    ok = ok && ratio == f;
    detail += fmt::format("{}{}->{}", detail.empty() ? "" : ", ", f, ratio);
  }
  return {ok, detail};
}

Outcome gate_boundaries() {
  const SkinGate gate;
  const bool a = passes_skin_gate({50.0, 0.5, 0.61}, gate);
  const bool b = passes_skin_gate({50.1, 0.5, 0.61}, gate);
  const bool c = passes_skin_gate({10.0, 0.5, 0.60}, gate);
  return {a && !b && !c, fmt::format("(50,0.61)={} (50.1,0.61)={} (10,0.60)={}", a, b, c)};
}

std::map<std::string, std::string> read_tree(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (!e.is_regular_file()) continue;
    std::string bytes = read_file(e.path());
    const std::string rel = fs::relative(e.path(), root).generic_string();
    if (rel == "manifest.json") {
      auto j = nlohmann::ordered_json::parse(bytes);
      j.erase("generated_at");
      bytes = j.dump();
    }
    files[rel] = std::move(bytes);
  }
  return files;
}

struct AnalyzeRun {
  int code;
  double seconds;
  std::string err;
};

AnalyzeRun analyze(const fs::path& out, unsigned jobs) {
  RunConfig cfg;
  cfg.manifest_path = source_dir() / "data/minicorpus/manifest.json";
  cfg.out_dir = out;
  std::ostringstream o, e;
  const auto t0 = Clock::now();
  const int code = cmd_analyze(cfg, jobs, o, e);
  return {code, seconds_since(t0), e.str()};
}

Outcome determinism(const TempDir& tmp) {
  // three runs into the same directory; each tree is captured before the next run
  const fs::path out = tmp / "a";
  const AnalyzeRun a = analyze(out, 1);
  const auto ta = read_tree(out);
  const AnalyzeRun b = analyze(out, 1);
  const auto tb = read_tree(out);
  const AnalyzeRun c = analyze(out, 8);
  const auto tc = read_tree(out);
  if (a.code || b.code || c.code) return {false, fmt::format("exit codes {} {} {}: {}", a.code, b.code, c.code, a.err)};
  const bool same = ta == tb && ta == tc;
  const double slowest = std::max({a.seconds, b.seconds, c.seconds});
  return {same && slowest < 30.0, fmt::format("{} files, identical={}, slowest run {:.2f} s", ta.size(), same, slowest)};
}

Outcome end_to_end_ordering(const TempDir& tmp) {
  // distances.csv from the determinism run
  const std::string csv = read_file(tmp / "a/distances.csv");
  if (csv.empty()) return {false, "no distances.csv"};
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  std::vector<std::string> ids;
  {
    std::istringstream h(line);
    std::string cell;
    std::getline(h, cell, ',');
    while (std::getline(h, cell, ',')) ids.push_back(cell);
  }
  std::map<std::pair<std::string, std::string>, double> matrix;
  for (std::size_t row = 0; std::getline(in, line); ++row) {
    std::istringstream r(line);
    std::string cell;
    std::getline(r, cell, ',');
    for (std::size_t col = 0; std::getline(r, cell, ','); ++col) matrix[{ids[row], ids[col]}] = std::stod(cell);
  }

  const auto cohorts = synth::mini_corpus_cohorts();
  struct Pair {
    std::string label;
    double generator;
    double measured;
  };
  std::vector<Pair> pairs;
  for (std::size_t i = 0; i < cohorts.size(); ++i)
    for (std::size_t j = i + 1; j < cohorts.size(); ++j) {
      pairs.push_back({cohorts[i].id + "-" + cohorts[j].id, distance(embed(cohorts[i].base), embed(cohorts[j].base)),
                       matrix[{cohorts[i].id, cohorts[j].id}]});
    }
  auto order_by = [&](auto key) {
    std::vector<std::string> out;
    auto sorted = pairs;
    std::sort(sorted.begin(), sorted.end(), [&](const Pair& a, const Pair& b) { return key(a) < key(b); });
    for (const auto& p : sorted) out.push_back(p.label);
    return out;
  };
  const auto expected = order_by([](const Pair& p) { return p.generator; });
  const auto got = order_by([](const Pair& p) { return p.measured; });
  std::string detail;
  for (const auto& l : got) detail += (detail.empty() ? "" : " < ") + l;
  return {expected == got && pairs.size() == 6, detail};
}

Outcome gamut_monotonic() {
  const ReferenceSystem ref = load_reference(source_dir() / "data/reference/demo_reference.csv");
  const Palette demo = load_palette(source_dir() / "data/reference/demo_palette.json");
  Palette inside;
  inside.cohort_id = "inside";
  Xoshiro256 rng(5);
  for (const auto& c : ref.colors) {
    // nudge each reference color by far less than the smallest epsilon
    HslColor h = c.hsl;
    h.l = std::clamp(h.l + 0.002 * (rng.uniform() - 0.5), 0.0, 1.0);
    inside.entries.push_back({h, 1.0 / static_cast<double>(ref.colors.size()), 1});
  }
  double prev = 2.0;
  bool monotone = true, zero = true;
  std::string detail;
  for (const double eps : {0.01, 0.05, 0.1, 0.5}) {
    const double f = gamut_report(demo, ref, eps).out_fraction_weighted;
    monotone = monotone && f <= prev;
    prev = f;
    zero = zero && gamut_report(inside, ref, eps).out_fraction_weighted == 0.0;
    detail += fmt::format("{}eps {} -> {:.3f}", detail.empty() ? "" : ", ", eps, f);
  }
  return {monotone && zero, detail + fmt::format(", inside palette zero={}", zero)};
}

Outcome figure_contracts(const TempDir& tmp) {
  std::vector<Palette> palettes;
  for (const char* id : {"kr", "cn", "th", "jp"}) palettes.push_back(load_palette(tmp / "a" / id / "palette.json"));
  const ReferenceSystem ref = load_reference(source_dir() / "data/reference/demo_reference.csv");

  bool ok = true;
  std::string detail;
  const Palette& p = palettes.front();
  if (p.entries.size() != 20) return {false, fmt::format("palette has {} entries", p.entries.size())};
  for (const SortMode mode : {SortMode::Proportion, SortMode::Lightness}) {
    RenderSpec spec;
    spec.sort_mode = mode;
    const std::string svg = render_palette_strip(p, spec);
    const std::size_t swatches = count_occurrences(svg, "<rect class=\"swatch\"");
    std::vector<double> keys;
    for (const auto& v : attribute_values(svg, "swatch", mode == SortMode::Proportion ? "data-proportion" : "data-lightness"))
      keys.push_back(std::stod(v));
    const bool sorted = std::is_sorted(keys.begin(), keys.end(), std::greater<>());
    ok = ok && swatches == 20 && sorted && well_formed_svg(svg);
    detail += fmt::format("{}: {} swatches sorted={}; ", mode == SortMode::Proportion ? "size" : "lightness", swatches, sorted);
  }
  const std::string scatter = render_scatter(palettes, &ref);
  const std::size_t cohort = count_occurrences(scatter, "class=\"cohort-marker\"");
  const std::size_t refs = count_occurrences(scatter, "class=\"reference-marker\"");
  ok = ok && cohort == 80 && refs == ref.colors.size() && well_formed_svg(scatter);
  detail += fmt::format("scatter {}+{} markers; ", cohort, refs);

  Palette snap;
  snap.cohort_id = "demo";
  snap.entries = {{{18.0, 0.95, 0.88}, 0.0281, 28}, {{25.0, 0.45, 0.72}, 0.5, 500}, {{350.0, 0.3, 0.8}, 0.4719, 472}};
  const bool stable = render_palette_strip(snap, RenderSpec{}) == read_file(source_dir() / "tests/golden/strip_demo.svg");
  ok = ok && stable;
  detail += fmt::format("snapshot match={}", stable);
  return {ok, detail};
}

}  // namespace

int main() {
  TempDir tmp;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"color round-trip", color_round_trip},
      {"k-means oracle equivalence", kmeans_oracle},
      {"palette recovery", palette_recovery},
      {"texture analytic oracle", texture_oracle},
      {"brightness exactness", brightness_exactness},
      {"skin gate boundaries", gate_boundaries},
      {"determinism", [&] { return determinism(tmp); }},
      {"end-to-end ordering", [&] { return end_to_end_ordering(tmp); }},
      {"gamut monotonicity", gamut_monotonic},
      {"figure contracts", [&] { return figure_contracts(tmp); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::cout << fmt::format("{} [{}] {}: {}\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail);
  }
  std::cout << fmt::format("{}/{} criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
