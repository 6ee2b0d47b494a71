// Field dumps and atomic file output.
//
// Dump format: "nlac-field v1 N=<int> X=<real> t=<real>" followed by N lines of
// N space-separated 17-significant-digit values; line i holds u(i, 0..N-1).
#pragma once

#include "nlac/grid.hpp"

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>

namespace nlac {

struct FieldDump {
  Grid grid;
  double t;
  Field values;
};

void write_field(std::ostream& os, const Grid& grid, const Field& u, double t);
FieldDump read_field(std::istream& is);

/// Writes via a temporary sibling file and rename, so readers never see a
/// partial file.
void write_file_atomic(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body);

}  // namespace nlac
