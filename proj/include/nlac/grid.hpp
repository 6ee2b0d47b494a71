// Uniform periodic mesh over (0, X)^2 and nodal fields on it.
#pragma once

#include <Eigen/Dense>

#include <functional>
#include <stdexcept>
#include <string>

namespace nlac {

/// Nodal array, row i <-> x_i = i h, column j <-> y_j = j h. Row-major so the
/// memory layout matches the FFT's [i][j] convention.
template <typename Scalar>
using FieldArray = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using Field = FieldArray<double>;

class Grid {
public:
  Grid(int n, double extent) : n_(n), extent_(extent) {
    if (n < 4) throw std::invalid_argument("grid needs at least 4 nodes per side, got " + std::to_string(n));
    if (!(extent > 0.0)) throw std::invalid_argument("grid extent must be positive");
  }

  int n() const { return n_; }
  double extent() const { return extent_; }
  double h() const { return extent_ / n_; }

  /// Periodic index reduction into [0, n).
  int wrap(long i) const {
    const long m = i % n_;
    return static_cast<int>(m < 0 ? m + n_ : m);
  }

  bool matches(const Field& u) const { return u.rows() == n_ && u.cols() == n_; }

  friend bool operator==(const Grid&, const Grid&) = default;

private:
  int n_;
  double extent_;
};

inline void require_shape(const Grid& grid, const Field& u) {
  if (!grid.matches(u))
    throw std::invalid_argument("field shape " + std::to_string(u.rows()) + "x" +
                                std::to_string(u.cols()) + " does not match grid n=" +
                                std::to_string(grid.n()));
}

/// values(i, j) = f(i h, j h).
template <typename F>
Field sample_function(const Grid& grid, F&& f) {
  const int n = grid.n();
  const double h = grid.h();
  Field u(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) u(i, j) = f(i * h, j * h);
  return u;
}

}  // namespace nlac
