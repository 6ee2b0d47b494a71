#include "nlac/kernel.hpp"

namespace nlac {

KernelMass kernel_mass(const KernelSpec& spec) {
  if (!spec.integrable()) return NonIntegrable{};
  const double a = spec.alpha();
  const double d = spec.delta();
  return 4.0 * (4.0 - a) / ((2.0 - a) * d * d);
}

double critical_delta(double alpha, double eps) {
  if (!(alpha >= 0.0 && alpha < 2.0))
    throw std::invalid_argument("critical_delta requires 0 <= alpha < 2");
  if (!(eps > 0.0)) throw std::invalid_argument("critical_delta requires eps > 0");
  return 2.0 * eps * std::sqrt((4.0 - alpha) / (2.0 - alpha));
}

double predicted_jump(const KernelSpec& spec, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("predicted_jump requires eps > 0");
  const auto mass = kernel_mass(spec);
  if (std::holds_alternative<NonIntegrable>(mass))
    throw std::invalid_argument("predicted_jump requires an integrable kernel (alpha < 2)");
  const double s = eps * eps * std::get<double>(mass);
  return s < 1.0 ? 2.0 * std::sqrt(1.0 - s) : 0.0;
}

}  // namespace nlac
