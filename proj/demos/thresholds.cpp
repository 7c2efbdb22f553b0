// SPDX-License-Identifier: Apache-2.0
// Prints gamma(C) for a few protocols and the entanglement threshold of each.
#include <cstdio>

#include "bellcert/guessing.hpp"

int main() {
  using namespace bellcert;
  const Strategy protocols[] = {make_named("XY"), make_named("XYZ"), make_named("Isotropic"),
                                make_named("Equator"), make_named(Family::Polygon, {.m = 3})};
  std::printf("%-14s", "C");
  for (const auto& mu : protocols) std::printf("%15s", mu.name().c_str());
  std::printf("\n");
  for (int i = 0; i <= 10; ++i) {
    const double C = i / 10.0;
    std::printf("%-14.2f", C);
    for (const auto& mu : protocols) std::printf("%15.6f", gamma2(mu, C));
    std::printf("\n");
  }
}
