#include <iostream>
#include <string>
#include <vector>

#include "skinpal/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return skinpal::run_cli(args, std::cout, std::cerr);
}
