#include "nlac/etd.hpp"

#include <cmath>
#include <numbers>

namespace nlac {

std::string to_string(Scheme s) { return s == Scheme::ETD1 ? "ETD1" : "ETDRK2"; }
std::string to_string(Model m) { return m == Model::NAC ? "NAC" : "LAC"; }

TimePlan::TimePlan(double tau, double t_end) : tau_(tau), t_end_(t_end) {
  if (!(tau > 0.0)) throw std::invalid_argument("time step tau must be positive");
  if (!(t_end >= 0.0)) throw std::invalid_argument("final time must be non-negative");
  steps_ = std::lround(t_end / tau);
  if (std::abs(steps_ * tau - t_end) > 1e-12 * std::max(t_end, tau))
    throw std::invalid_argument("final time " + format_real(t_end) + " is not a multiple of tau " +
                                format_real(tau));
}

Field nonlinear_term(const Field& u, double kappa) { return (kappa + 1.0) * u - u.cube(); }

namespace {

using Complex = std::complex<double>;

// Buffers reused across steps; at N = 512 per-step allocation of these dominated
// the step cost through page faults.
struct Workspace {
  Spectrum u_hat, f_hat, value, ft_hat;
  Field fu, tilde, ftilde;
};

// value = F(phi0 U + tau phi1 f), f_hat = F(f), for f already in ws.fu.
void predict(const SpectralOperator& op, const Field& u, Workspace& ws) {
  const auto& fft = op.fft();
  fft.forward(u, ws.u_hat);
  fft.forward(ws.fu, ws.f_hat);
  ws.value = op.half(SymbolKind::Phi0).cast<Complex>() * ws.u_hat +
             (op.tau() * op.half(SymbolKind::Phi1)).cast<Complex>() * ws.f_hat;
}

void etd1_into(const SpectralOperator& op, const Field& u, Field& out, Workspace& ws) {
  const double kappa = op.params().kappa();
  ws.fu = (kappa + 1.0) * u - u.cube();
  predict(op, u, ws);
  op.fft().inverse(ws.value, out);
}

void etdrk2_into(const SpectralOperator& op, const Field& u, Field& out, Workspace& ws,
                 const Nonlinearity* f) {
  const double kappa = op.params().kappa();
  const auto& fft = op.fft();
  if (f)
    ws.fu = (*f)(u);
  else
    ws.fu = (kappa + 1.0) * u - u.cube();
  predict(op, u, ws);
  fft.inverse(ws.value, ws.tilde);
  if (f)
    ws.ftilde = (*f)(ws.tilde);
  else
    ws.ftilde = (kappa + 1.0) * ws.tilde - ws.tilde.cube();
  fft.forward(ws.ftilde, ws.ft_hat);
  ws.value += (op.tau() * op.half(SymbolKind::Phi2)).cast<Complex>() * (ws.ft_hat - ws.f_hat);
  fft.inverse(ws.value, out);
}

}  // namespace

Field etd1_step(const SpectralOperator& op, const Field& u) {
  require_shape(op.grid(), u);
  Workspace ws;
  Field out;
  etd1_into(op, u, out, ws);
  return out;
}

Field etdrk2_step(const SpectralOperator& op, const Field& u, const Nonlinearity& f) {
  require_shape(op.grid(), u);
  Workspace ws;
  Field out;
  etdrk2_into(op, u, out, ws, &f);
  return out;
}

Field etdrk2_step(const SpectralOperator& op, const Field& u) {
  require_shape(op.grid(), u);
  Workspace ws;
  Field out;
  etdrk2_into(op, u, out, ws, nullptr);
  return out;
}

Eigen::ArrayXXd lac_symbol(const Grid& grid, const ModelParams& params) {
  const int n = grid.n();
  const double h = grid.h();
  const double eps2 = params.eps() * params.eps();
  Eigen::ArrayXd ver(n);
  for (int k = 0; k < n; ++k) {
    const double s = std::sin(std::numbers::pi * k / n);
    ver(k) = 4.0 * s * s;  // 2 - 2 cos(2 pi k / n)
  }
  Eigen::ArrayXXd lambda(n, n);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) lambda(k, l) = params.kappa() + eps2 * (ver(k) + ver(l)) / (h * h);
  return lambda;
}

SpectralOperator nonlocal_operator(const KernelSpec& kernel, const Grid& grid, const ModelParams& params,
                                   double tau, const StencilOptions& options) {
  const auto stencil = cached_stencil(kernel, grid, options);
  return SpectralOperator(grid, params, build_symbol(*stencil, grid, params), tau);
}

SpectralOperator local_operator(const Grid& grid, const ModelParams& params, double tau) {
  return SpectralOperator(grid, params, lac_symbol(grid, params), tau);
}

RunResult run(const SpectralOperator& op, const Field& initial, const TimePlan& plan,
              const RunOptions& options) {
  require_shape(op.grid(), initial);
  if (std::abs(op.tau() - plan.tau()) > 1e-14 * plan.tau())
    throw std::invalid_argument("operator phi-tables were built for a different tau");
  if (!initial.allFinite()) throw NumericError("initial state is not finite", 0);

  const int n = op.grid().n();
  const int stride = options.log_stride > 0 ? options.log_stride : (n <= 256 ? 1 : 10);
  const bool guard = options.enforce_max_principle && op.params().max_principle_guaranteed() &&
                     max_norm(initial) <= 1.0;
  const double tau = plan.tau();

  RunResult result;
  result.state.u = initial;
  auto& st = result.state;
  Workspace ws;
  Field next(n, n);
  for (long k = 0; k < plan.steps(); ++k) {
    if (options.scheme == Scheme::ETD1)
      etd1_into(op, st.u, next, ws);
    else
      etdrk2_into(op, st.u, next, ws, nullptr);
    const long index = k + 1;
    if (!next.allFinite())
      throw NumericError("non-finite value in state at step " + std::to_string(index), index);
    const double norm = next.abs().maxCoeff();
    if (guard && norm > 1.0 + options.max_principle_tol)
      throw NumericError("maximum principle violated at step " + std::to_string(index) +
                             ": ||u||_inf = " + format_real(norm),
                         index);
    const double rate = (next - st.u).abs().maxCoeff() / tau;
    st.u.swap(next);
    st.step_index = index;
    // t_n = n tau avoids drift from repeated addition.
    st.t = index * tau;

    const bool steady = options.steady_tol > 0.0 && rate < options.steady_tol;
    const bool last = index == plan.steps() || steady;
    if (index % stride == 0 || last) {
      const double energy = options.log_energy ? discrete_energy(st.u, op) : 0.0;
      result.log.append({st.t, norm, energy, rate});
    }
    if (options.observer) options.observer(st);
    if (steady) {
      result.reached_steady = true;
      break;
    }
  }
  return result;
}

}  // namespace nlac
