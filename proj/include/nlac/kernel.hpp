// Fractional-power interaction kernels for the nonlocal diffusion operator.
//
//   rho_delta(r) = 2 (4 - alpha) / (pi delta^(4 - alpha) r^alpha),  0 < r <= delta
//
// normalized so that the second moment over the disc B_delta equals 4 (= 2d, d = 2).
#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <variant>

namespace nlac {

/// Kernel family member, described only by (alpha, delta). Everything else is
/// recomputed from closed forms on demand.
class KernelSpec {
public:
  KernelSpec(double alpha, double delta) : alpha_(alpha), delta_(delta) {
    if (!(alpha >= 0.0 && alpha < 4.0))
      throw std::invalid_argument("kernel exponent alpha must lie in [0, 4), got " +
                                  std::to_string(alpha));
    if (!(delta > 0.0) || !std::isfinite(delta))
      throw std::invalid_argument("kernel horizon delta must be positive, got " +
                                  std::to_string(delta));
  }

  double alpha() const { return alpha_; }
  double delta() const { return delta_; }

  /// rho_delta(r) = prefactor() * r^(-alpha) inside the horizon.
  double prefactor() const {
    return 2.0 * (4.0 - alpha_) / (std::numbers::pi * std::pow(delta_, 4.0 - alpha_));
  }

  bool integrable() const { return alpha_ < 2.0; }

  friend bool operator==(const KernelSpec&, const KernelSpec&) = default;

private:
  double alpha_;
  double delta_;
};

/// Evaluates rho_delta(r). The origin is singular for alpha > 0 and is never a
/// valid argument, so r <= 0 throws.
template <typename Scalar>
Scalar evaluate_kernel(const KernelSpec& spec, Scalar r) {
  using std::pow;
  if (!(r > Scalar(0)))
    throw std::domain_error("kernel evaluated at r <= 0");
  if (r > Scalar(spec.delta())) return Scalar(0);
  return Scalar(spec.prefactor()) / pow(r, Scalar(spec.alpha()));
}

/// Marker returned by kernel_mass for alpha >= 2.
struct NonIntegrable {
  friend bool operator==(NonIntegrable, NonIntegrable) = default;
};

using KernelMass = std::variant<double, NonIntegrable>;

/// Total mass C_delta = 4 (4 - alpha) / ((2 - alpha) delta^2), or NonIntegrable.
KernelMass kernel_mass(const KernelSpec& spec);

/// Horizon delta_0 at which eps^2 C_delta = 1 for the given alpha < 2.
double critical_delta(double alpha, double eps);

/// Steady-state interface jump 2 sqrt(1 - eps^2 C_delta), or 0 when
/// eps^2 C_delta >= 1 (continuous steady state). Requires alpha < 2.
double predicted_jump(const KernelSpec& spec, double eps);

}  // namespace nlac
