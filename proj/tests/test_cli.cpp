#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <sstream>

#include "skinpal/cli.hpp"
#include "skinpal/palette.hpp"
#include "test_support.hpp"

using namespace skinpal;
using namespace skinpal::testing;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string minicorpus() { return (source_dir() / "data/minicorpus/manifest.json").string(); }
std::string demo(const char* name) { return (source_dir() / "data/reference" / name).string(); }

// Copy of the mini corpus with one cohort truncated to a few faces, which
// keeps the test quick and leaves the shipped data untouched.
fs::path copy_corpus(const TempDir& tmp, std::size_t faces_per_cohort) {
  const fs::path src = source_dir() / "data/minicorpus";
  const fs::path dst = tmp / "corpus";
  fs::create_directories(dst);
  fs::copy_file(src / "manifest.json", dst / "manifest.json");
  for (const char* id : {"kr", "cn", "th", "jp"}) {
    fs::create_directories(dst / id);
    for (std::size_t i = 0; i < faces_per_cohort; ++i) {
      const std::string stem = "face_" + std::string(i < 10 ? "00" : "0") + std::to_string(i);
      fs::copy_file(src / id / (stem + ".png"), dst / id / (stem + ".png"));
      fs::copy_file(src / id / (stem + ".landmarks.json"), dst / id / (stem + ".landmarks.json"));
    }
  }
  return dst;
}

}  // namespace

TEST_CASE("analyze on the mini corpus") {
  TempDir tmp;
  const Run r = cli({"analyze", "--manifest", minicorpus(), "--out", (tmp / "out").string(), "--jobs", "4"});
  INFO(r.err);
  CHECK(r.code == kExitOk);
  for (const char* rel : {"kr/palette.json", "jp/strip_by_lightness.svg", "metrics.csv", "distances.csv", "scatter.svg",
                          "manifest.json"}) {
    CHECK(fs::exists(tmp / "out" / rel));
  }
  const Palette kr = load_palette(tmp / "out/kr/palette.json");
  CHECK(kr.entries.size() == 20);
  CHECK(kr.k == 20);
}

TEST_CASE("analyze with a reference writes gamut reports") {
  TempDir tmp;
  const fs::path corpus = copy_corpus(tmp, 3);
  const Run r = cli({"analyze", "--manifest", (corpus / "manifest.json").string(), "--out", (tmp / "out").string(),
                     "--reference", demo("demo_reference.csv"), "--k", "4"});
  INFO(r.err);
  CHECK(r.code == kExitOk);
  CHECK(fs::exists(tmp / "out/th/gamut.json"));
}

TEST_CASE("a corrupt image gives a partial result") {
  TempDir tmp;
  const fs::path corpus = copy_corpus(tmp, 3);
  const std::string bytes = read_file(corpus / "cn/face_001.png");
  write_file(corpus / "cn/face_001.png", bytes.substr(0, bytes.size() / 3));
  const Run r = cli({"analyze", "--manifest", (corpus / "manifest.json").string(), "--out", (tmp / "out").string(),
                     "--k", "4"});
  CHECK(r.code == kExitPartial);
  CHECK(r.err.find("cn/face_001.png") != std::string::npos);
  CHECK(fs::exists(tmp / "out/cn/palette.json"));
}

TEST_CASE("orphan images only warn") {
  TempDir tmp;
  const fs::path corpus = copy_corpus(tmp, 2);
  fs::copy_file(corpus / "kr/face_000.png", corpus / "kr/lonely.png");
  const Run r = cli({"analyze", "--manifest", (corpus / "manifest.json").string(), "--out", (tmp / "out").string(),
                     "--k", "3"});
  CHECK(r.code == kExitOk);
  CHECK(r.err.find("without landmark sidecar") != std::string::npos);
}

TEST_CASE("invalid configuration fails before any IO") {
  TempDir tmp;
  for (const std::vector<std::string>& extra :
       {std::vector<std::string>{"--k", "0"}, {"--samples-per-segment", "1"}, {"--min-lightness", "1.5"},
        {"--hue-arcs", "60:10"}, {"--patch", "4"}, {"--face-region", "circle"}}) {
    std::vector<std::string> args{"analyze", "--manifest", (tmp / "missing.json").string(), "--out",
                                  (tmp / "out").string()};
    args.insert(args.end(), extra.begin(), extra.end());
    const Run r = cli(args);
    CAPTURE(extra.front());
    CHECK(r.code == kExitFatal);
    CHECK(r.err.find("missing.json") == std::string::npos);
    CHECK_FALSE(fs::exists(tmp / "out"));
  }
}

TEST_CASE("missing manifest is fatal") {
  TempDir tmp;
  const Run r = cli({"analyze", "--manifest", (tmp / "nope.json").string(), "--out", (tmp / "out").string()});
  CHECK(r.code == kExitFatal);
  CHECK(r.err.find("nope.json") != std::string::npos);
}

TEST_CASE("compare") {
  TempDir tmp;
  const std::string p = demo("demo_palette.json");

  SUBCASE("identical palettes") {
    std::string twin = read_file(p);
    twin.replace(twin.find("\"demo\""), 6, "\"twin\"");
    write_file(tmp / "twin.json", twin);
    const Run r = cli({"compare", p, (tmp / "twin.json").string()});
    CHECK(r.code == kExitOk);
    CHECK(r.out == "cohort,demo,twin\ndemo,0.000000,0.000000\ntwin,0.000000,0.000000\n");
  }
  SUBCASE("repeated cohort ids are rejected") {
    const Run r = cli({"compare", p, p});
    CHECK(r.code == kExitFatal);
  }
  SUBCASE("four palettes give a 4x4 matrix") {
    const Run a = cli({"analyze", "--manifest", minicorpus(), "--out", (tmp / "out").string()});
    REQUIRE(a.code == kExitOk);
    std::vector<std::string> args{"compare"};
    for (const char* id : {"kr", "cn", "th", "jp"}) args.push_back((tmp / "out" / id / "palette.json").string());
    args.push_back("--out");
    args.push_back((tmp / "d.csv").string());
    const Run r = cli(args);
    CHECK(r.code == kExitOk);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 5);
    CHECK(r.out.rfind("cohort,kr,cn,th,jp\n", 0) == 0);
    CHECK(read_file(tmp / "d.csv") == r.out);
    // recomputed from 6-decimal palette files, so the last digit may move
    std::istringstream from_files(r.out), from_run(read_file(tmp / "out/distances.csv"));
    std::string x, y;
    std::getline(from_files, x);
    std::getline(from_run, y);
    while (std::getline(from_files, x, ',') && std::getline(from_run, y, ',')) {
      if (x.find_first_of("0123456789") != 0) continue;
      CHECK(std::stod(x) == doctest::Approx(std::stod(y)).epsilon(1e-5));
    }
  }
  SUBCASE("malformed palette names the file") {
    write_file(tmp / "broken.json", "{\"cohort\": \"x\", \"entries\": [");
    const Run r = cli({"compare", p, (tmp / "broken.json").string()});
    CHECK(r.code == kExitFatal);
    CHECK(r.err.find("broken.json") != std::string::npos);
  }
  SUBCASE("differing configurations warn") {
    write_file(tmp / "a.json", read_file(p));
    std::string other = read_file(p);
    other.replace(other.find("\"k\":5"), 5, "\"k\":6");
    other.replace(other.find("\"demo\""), 6, "\"wide\"");
    write_file(tmp / "b.json", other);
    const Run r = cli({"compare", (tmp / "a.json").string(), (tmp / "b.json").string()});
    CHECK(r.code == kExitOk);
    CHECK(r.err.find("different k") != std::string::npos);
  }
}

TEST_CASE("gamut") {
  TempDir tmp;
  SUBCASE("palette inside the reference") {
    write_file(tmp / "inside.json",
               "{\"cohort\":\"in\",\"k\":2,\"seed\":20,\"n_samples\":2,\"entries\":["
               "{\"h\":25,\"s\":0.45,\"l\":0.70,\"proportion\":0.5,\"count\":1},"
               "{\"h\":8,\"s\":0.40,\"l\":0.72,\"proportion\":0.5,\"count\":1}]}");
    const Run r = cli({"gamut", (tmp / "inside.json").string(), demo("demo_reference.csv")});
    CHECK(r.code == kExitOk);
    CHECK(r.out.find("\"out_fraction_weighted\":0.000000") != std::string::npos);
  }
  SUBCASE("epsilon must be positive") {
    const Run r = cli({"gamut", demo("demo_palette.json"), demo("demo_reference.csv"), "--epsilon", "0"});
    CHECK(r.code == kExitFatal);
  }
  SUBCASE("demo output matches the frozen snapshot") {
    const Run r = cli({"gamut", demo("demo_palette.json"), demo("demo_reference.csv"), "--epsilon", "0.05"});
    CHECK(r.code == kExitOk);
    const fs::path golden = source_dir() / "tests/golden/gamut_demo.json";
    if (std::getenv("SKINPAL_UPDATE_GOLDEN")) write_file(golden, r.out);
    CHECK(r.out == read_file(golden));
  }
}

TEST_CASE("usage errors") {
  CHECK(cli({}).code == kExitFatal);
  CHECK(cli({"frobnicate"}).code == kExitFatal);
  CHECK(cli({"compare", demo("demo_palette.json")}).code == kExitFatal);
}
