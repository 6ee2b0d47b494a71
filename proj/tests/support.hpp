// Shared helpers for the unit tests.
#pragma once

#include "nlac/grid.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace nlac::test {

inline Field random_field(int n, std::uint64_t seed, double amplitude = 1.0) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> dist(-amplitude, amplitude);
  Field u(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) u(i, j) = dist(gen);
  return u;
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

inline std::string data_path(const std::string& name) { return std::string(NLAC_TEST_DATA) + "/" + name; }

}  // namespace nlac::test
