// Recomputes every derived reference value with the brute-force oracles and
// writes the golden CSV used by the tests.
#include <cstdio>
#include <exception>

#include "ilslab/oracles.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: ilslab-golden <out.csv>\n");
    return 2;
  }
  try {
    const auto rows = ilslab::oracle::derived_values();
    ilslab::oracle::write_golden(rows, argv[1]);
    std::printf("%zu rows written to %s\n", rows.size(), argv[1]);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
