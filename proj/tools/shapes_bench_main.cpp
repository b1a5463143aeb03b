#include <cstdlib>
#include <iostream>
#include <string>

#include "shapes/bench.hpp"

int main(int argc, char** argv) {
  size_t n = 100000;
  for (int i = 1; i < argc; ++i) {
    std::string arg = argv[i];
    if (arg == "--n" && i + 1 < argc) {
      n = std::strtoull(argv[++i], nullptr, 10);
    } else if (arg == "--help" || arg == "-h") {
      std::cout << "usage: shapes-bench [--n COUNT]\n"
                   "Builds and walks a COUNT-node list, pooled and unpooled,\n"
                   "and prints one timing line per variant.\n";
      return 0;
    } else {
      std::cerr << "error: unknown argument '" << arg << "'\n";
      return 3;
    }
  }
  if (n == 0) {
    std::cerr << "error: --n must be positive\n";
    return 3;
  }
  try {
    shapes::TraversalReport report = shapes::bench_traversal(n);
    std::cout << shapes::report_line(report, /*pooled=*/true) << "\n"
              << shapes::report_line(report, /*pooled=*/false) << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
