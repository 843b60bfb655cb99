#include <iostream>

#include <CLI11.hpp>

#include "skinpal/synth.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Writes the synthetic landmarked mini-corpus used by the tests"};
  std::string out = "data/minicorpus";
  int faces = 25;
  int size = 96;
  std::uint64_t seed = 20;
  app.add_option("--out", out, "Output directory")->capture_default_str();
  app.add_option("--faces", faces, "Faces per cohort")->capture_default_str();
  app.add_option("--size", size, "Image side in pixels")->capture_default_str();
  app.add_option("--seed", seed, "Generator seed")->capture_default_str();
  CLI11_PARSE(app, argc, argv);
  try {
    skinpal::synth::write_corpus(out, skinpal::synth::mini_corpus_cohorts(), faces, size, seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
