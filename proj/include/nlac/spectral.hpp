// Fourier symbols of the stabilized operator L_h = kappa I - eps^2 D_h and
// FFT-based application of L_h, D_h and the phi-functions phi_gamma(L_h tau).
#pragma once

#include "nlac/grid.hpp"
#include "nlac/stencil.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <memory>
#include <stdexcept>

namespace nlac {

/// Interfacial parameter eps and stabilizer kappa. kappa >= 2 is what makes
/// the ETD schemes maximum-principle preserving; smaller values are accepted
/// only with the explicit override, and then no guarantee is claimed.
class ModelParams {
public:
  ModelParams(double eps, double kappa, bool allow_small_kappa = false)
      : eps_(eps), kappa_(kappa) {
    if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
    if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be positive");
    if (kappa < 2.0 && !allow_small_kappa)
      throw std::invalid_argument("kappa must be >= 2 for the maximum principle (override to experiment)");
  }

  double eps() const { return eps_; }
  double kappa() const { return kappa_; }
  bool max_principle_guaranteed() const { return kappa_ >= 2.0; }

private:
  double eps_;
  double kappa_;
};

/// phi_0(a) = e^-a, phi_1(a) = (1 - e^-a)/a, phi_2(a) = (e^-a - 1 + a)/a^2,
/// with their limits 1, 1, 1/2 at a = 0. Below a = 1 phi_1 and phi_2 use the
/// alternating Taylor series (the closed forms cancel catastrophically).
template <typename Scalar>
Scalar phi(int gamma, Scalar a) {
  using std::exp;
  using std::expm1;
  if (!(a >= Scalar(0))) throw std::domain_error("phi evaluated at negative argument");
  if (gamma == 0) return exp(-a);
  if (gamma != 1 && gamma != 2) throw std::invalid_argument("phi index must be 0, 1 or 2");
  if (a < Scalar(1)) {
    // phi_gamma(a) = sum_k (-a)^k / (k + gamma)!, Horner from the tail.
    constexpr int terms = 22;
    Scalar sum(0);
    for (int k = terms; k >= 0; --k) sum = Scalar(1) - a * sum / Scalar(k + gamma + 1);
    // sum now holds sum_k (-a)^k gamma!/(k+gamma)!
    return gamma == 1 ? sum : sum / Scalar(2);
  }
  if (gamma == 1) return -expm1(-a) / a;
  return (expm1(-a) + a) / (a * a);
}

/// Half-spectrum (r2c layout) of a real n x n field: n x (n/2 + 1).
using Spectrum = Eigen::Array<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using HalfTable = Eigen::Array<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// 2D real FFT of fixed size backed by FFTW. Plans are immutable and shared;
/// scratch buffers are per thread.
class Fft2d {
public:
  explicit Fft2d(int n);
  ~Fft2d();
  Fft2d(const Fft2d&) = delete;
  Fft2d& operator=(const Fft2d&) = delete;

  int n() const { return n_; }
  Spectrum forward(const Field& u) const;
  /// Normalized inverse (includes the 1/n^2 factor).
  Field inverse(const Spectrum& s) const;
  /// Same transforms into caller-owned storage (resized if needed).
  void forward(const Field& u, Spectrum& out) const;
  void inverse(const Spectrum& s, Field& out) const;

  /// Shared instance per size.
  static std::shared_ptr<const Fft2d> get(int n);

private:
  int n_;
  void* forward_plan_;
  void* inverse_plan_;
};

enum class SymbolKind { L, D, Phi0, Phi1, Phi2 };

/// lambda_{k,l} = kappa + 4 eps^2 sum_{p,q} c_{p,q} (1 - cos(2 pi k p / N) cos(2 pi l q / N)),
/// k, l = 0..N-1 (0-based mode index; the zero mode holds kappa).
Eigen::ArrayXXd build_symbol(const Stencil& stencil, const Grid& grid, const ModelParams& params);

/// Eigenvalue symbol of L_h together with phi-tables for one step size tau.
/// Immutable; with_tau() produces a new operator sharing the symbol.
class SpectralOperator {
public:
  SpectralOperator(Grid grid, ModelParams params, Eigen::ArrayXXd lambda, double tau);

  const Grid& grid() const { return grid_; }
  const ModelParams& params() const { return params_; }
  double tau() const { return tau_; }
  const Eigen::ArrayXXd& lambda() const { return *lambda_; }
  /// Full n x n table phi_gamma(lambda tau).
  Eigen::ArrayXXd phi_table(int gamma) const;

  SpectralOperator with_tau(double tau) const;

  /// Multiplier restricted to the r2c half spectrum.
  const HalfTable& half(SymbolKind kind) const;
  const Fft2d& fft() const { return *fft_; }

  /// F^-1 (m . F(u)) for the requested symbol m.
  Field apply(SymbolKind kind, const Field& u) const;

private:
  Grid grid_;
  ModelParams params_;
  std::shared_ptr<const Eigen::ArrayXXd> lambda_;
  double tau_;
  std::shared_ptr<const Fft2d> fft_;
  std::shared_ptr<const HalfTable> half_lambda_;
  std::shared_ptr<const HalfTable> half_d_;
  HalfTable phi0_, phi1_, phi2_;
};

inline Field apply_fft(const SpectralOperator& op, SymbolKind kind, const Field& u) {
  return op.apply(kind, u);
}

}  // namespace nlac
