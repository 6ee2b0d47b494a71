// Exponential time differencing for u_t + L_h u = f(u), L_h = kappa I - eps^2 D_h,
// f(u) = (kappa + 1) u - u^3:
//
//   ETD1:    U^{n+1} = phi0(L tau) U^n + tau phi1(L tau) f(U^n)
//   ETDRK2:  U~      = phi0(L tau) U^n + tau phi1(L tau) f(U^n)
//            U^{n+1} = U~ + tau phi2(L tau) (f(U~) - f(U^n))
//
// The same steppers drive the local Allen-Cahn reference when the operator
// carries the 5-point Laplacian symbol instead of the nonlocal one.
#pragma once

#include "nlac/diagnostics.hpp"
#include "nlac/grid.hpp"
#include "nlac/kernel.hpp"
#include "nlac/spectral.hpp"
#include "nlac/stencil.hpp"

#include <functional>
#include <stdexcept>
#include <string>

namespace nlac {

enum class Scheme { ETD1, ETDRK2 };
enum class Model { NAC, LAC };

std::string to_string(Scheme s);
std::string to_string(Model m);

/// Raised on NaN/Inf in the state or a maximum-principle violation.
class NumericError : public std::runtime_error {
public:
  NumericError(const std::string& what, long step) : std::runtime_error(what), step_(step) {}
  long step() const { return step_; }

private:
  long step_;
};

/// Uniform steps tau = T / K_t. T must be an integer multiple of tau to
/// relative 1e-12; T = 0 gives an empty plan.
class TimePlan {
public:
  TimePlan(double tau, double t_end);
  double tau() const { return tau_; }
  double t_end() const { return t_end_; }
  long steps() const { return steps_; }

private:
  double tau_;
  double t_end_;
  long steps_;
};

struct SolverState {
  Field u;
  double t = 0.0;
  long step_index = 0;
};

Field nonlinear_term(const Field& u, double kappa);

using Nonlinearity = std::function<Field(const Field&)>;

Field etd1_step(const SpectralOperator& op, const Field& u);
Field etdrk2_step(const SpectralOperator& op, const Field& u);
/// ETDRK2 with a caller-supplied nonlinearity in place of f.
Field etdrk2_step(const SpectralOperator& op, const Field& u, const Nonlinearity& f);

/// lambda_loc_{k,l} = kappa + eps^2 (4 - 2 cos(2 pi k/N) - 2 cos(2 pi l/N)) / h^2.
Eigen::ArrayXXd lac_symbol(const Grid& grid, const ModelParams& params);

SpectralOperator nonlocal_operator(const KernelSpec& kernel, const Grid& grid, const ModelParams& params,
                                   double tau, const StencilOptions& options = {});
SpectralOperator local_operator(const Grid& grid, const ModelParams& params, double tau);

struct RunOptions {
  Scheme scheme = Scheme::ETDRK2;
  /// Abort when ||u||_inf exceeds 1 + max_principle_tol. Only active when
  /// kappa >= 2 and ||U^0||_inf <= 1.
  bool enforce_max_principle = true;
  double max_principle_tol = 1e-12;
  /// Stop once ||u^{n+1} - u^n||_inf / tau falls below this; 0 disables.
  double steady_tol = 0.0;
  /// Record every log_stride steps (0: every step for N <= 256, else every 10).
  int log_stride = 0;
  /// Skip energy evaluation in the log (saves two FFTs per record).
  bool log_energy = true;
  /// Called after every step with the new state.
  std::function<void(const SolverState&)> observer;
};

struct RunResult {
  SolverState state;
  RunLog log;
  bool reached_steady = false;
};

RunResult run(const SpectralOperator& op, const Field& initial, const TimePlan& plan,
              const RunOptions& options = {});

}  // namespace nlac
