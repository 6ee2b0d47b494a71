// Quadrature-based finite-difference stencil of the 2D nonlocal operator.
//
// On a uniform periodic mesh the discrete operator reads
//
//   (L_h u)_{i,j} = sum_{p,q=0..r} c_{p,q} (u_{i+p,j+q} + u_{i-p,j+q} + u_{i+p,j-q}
//                                           + u_{i-p,j-q} - 4 u_{i,j})
//
// with c_{0,0} = 0 and
//
//   c_{p,q} = (p+q) / ((p^2+q^2) h) * int_{B+} psi_{p,q}(x,y) rho(|s|) (x^2+y^2)/(x+y) dx dy,
//
// psi_{p,q} the bilinear hat function at (p h, q h) and B+ the quarter disc of
// radius delta in the first quadrant.
#pragma once

#include "nlac/grid.hpp"
#include "nlac/kernel.hpp"

#include <Eigen/Dense>

#include <iosfwd>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace nlac {

/// Thrown when the built coefficients fail the discrete second-moment identity
/// sum c_{p,q} (p^2 + q^2) h^2 = 1 by more than the tolerance.
class QuadratureError : public std::runtime_error {
public:
  QuadratureError(double achieved, double tolerance);
  double achieved() const { return achieved_; }
  double tolerance() const { return tolerance_; }

private:
  double achieved_;
  double tolerance_;
};

struct StencilOptions {
  int quadrature_order = 16;
  /// Permit delta > X/2. The coefficient table is still exact; only the
  /// spectral path can apply such a stencil (periodic images alias).
  bool allow_wrap = false;
  double moment_tolerance = 1e-10;
};

class Stencil {
public:
  Stencil(KernelSpec kernel, double h, Eigen::ArrayXXd coeffs);

  const KernelSpec& kernel() const { return kernel_; }
  double h() const { return h_; }
  int radius() const { return static_cast<int>(coeffs_.rows()) - 1; }
  const Eigen::ArrayXXd& coeffs() const { return coeffs_; }
  double operator()(int p, int q) const { return coeffs_(p, q); }

  /// sum c_{p,q} (p^2 + q^2) h^2; equals 1 for an exact build.
  double second_moment() const;

private:
  KernelSpec kernel_;
  double h_;
  Eigen::ArrayXXd coeffs_;
};

/// r = floor(delta / h) + 1.
int stencil_radius(double delta, double h);

Stencil build_stencil(const KernelSpec& kernel, const Grid& grid, const StencilOptions& options = {});

/// Memoized build_stencil keyed by (alpha, delta, h, quadrature order, allow_wrap).
std::shared_ptr<const Stencil> cached_stencil(const KernelSpec& kernel, const Grid& grid,
                                              const StencilOptions& options = {});

/// Direct O(N^2 r^2) application of the stencil with periodic wrap. Reference
/// path for the FFT implementation; requires 2r < n.
Field apply_direct(const Stencil& stencil, const Field& u);

template <typename Derived>
Field apply_direct(const Stencil& stencil, const Eigen::DenseBase<Derived>& u) {
  return apply_direct(stencil, Field(u));
}

/// Golden-file format: header "r=<int> alpha=<real> delta=<real> h=<real>",
/// then r+1 rows of r+1 coefficients, 17 significant digits.
void write_stencil(std::ostream& os, const Stencil& stencil);
Stencil read_stencil(std::istream& is);

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussRule& gauss_legendre(int order);

}  // namespace nlac
