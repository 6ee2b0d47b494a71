#include "nlac/field_io.hpp"

#include "nlac/diagnostics.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace nlac {

void write_field(std::ostream& os, const Grid& grid, const Field& u, double t) {
  require_shape(grid, u);
  os << "nlac-field v1 N=" << grid.n() << " X=" << format_real(grid.extent()) << " t=" << format_real(t)
     << '\n';
  for (int i = 0; i < grid.n(); ++i) {
    for (int j = 0; j < grid.n(); ++j) os << (j ? " " : "") << format_real(u(i, j));
    os << '\n';
  }
}

FieldDump read_field(std::istream& is) {
  std::string header;
  if (!std::getline(is, header)) throw std::runtime_error("field dump: empty input");
  int n = 0;
  double x = 0, t = 0;
  if (std::sscanf(header.c_str(), "nlac-field v1 N=%d X=%lf t=%lf", &n, &x, &t) != 3)
    throw std::runtime_error("field dump: malformed header '" + header + "'");
  Grid grid(n, x);
  Field u(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!(is >> u(i, j))) throw std::runtime_error("field dump: truncated at row " + std::to_string(i));
  return {grid, t, std::move(u)};
}

void write_file_atomic(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    body(os);
    os.flush();
    if (!os) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace nlac
