// Regenerates the committed reference files for the fixed-seed scenario.
// Usage: make_golden <output-dir>
#include <cstdio>
#include <filesystem>

#include "golden_scenario.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: %s <output-dir>\n", argv[0]);
    return 2;
  }
  std::filesystem::path dir(argv[1]);
  if (std::filesystem::exists(dir / "params")) {
    std::fprintf(stderr, "refusing to overwrite existing ledger at %s\n", argv[1]);
    return 2;
  }
  umsp::test::run_golden_scenario(dir);
  std::printf("golden files written to %s\n", argv[1]);
  return 0;
}
