#include "nlac/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

namespace nlac {

namespace {

// FFTW's planner is not thread-safe; execution on distinct buffers is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct AlignedBuffers {
  double* real = nullptr;
  fftw_complex* complex = nullptr;
  int n = 0;
  ~AlignedBuffers() {
    fftw_free(real);
    fftw_free(complex);
  }
  void ensure(int size) {
    if (n == size) return;
    fftw_free(real);
    fftw_free(complex);
    real = fftw_alloc_real(std::size_t(size) * size);
    complex = fftw_alloc_complex(std::size_t(size) * (size / 2 + 1));
    n = size;
  }
};

AlignedBuffers& scratch(int n) {
  thread_local std::map<int, AlignedBuffers> buffers;
  auto& b = buffers[n];
  b.ensure(n);
  return b;
}

}  // namespace

Fft2d::Fft2d(int n) : n_(n) {
  if (n < 2) throw std::invalid_argument("FFT size must be at least 2");
  std::lock_guard lock(planner_mutex());
  double* in = fftw_alloc_real(std::size_t(n) * n);
  fftw_complex* out = fftw_alloc_complex(std::size_t(n) * (n / 2 + 1));
  // FFTW_ESTIMATE keeps plan selection deterministic, so repeated runs are bitwise identical.
  forward_plan_ = fftw_plan_dft_r2c_2d(n, n, in, out, FFTW_ESTIMATE);
  inverse_plan_ = fftw_plan_dft_c2r_2d(n, n, out, in, FFTW_ESTIMATE);
  fftw_free(in);
  fftw_free(out);
  if (!forward_plan_ || !inverse_plan_) throw std::runtime_error("FFTW planning failed");
}

Fft2d::~Fft2d() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
}

void Fft2d::forward(const Field& u, Spectrum& out) const {
  if (u.rows() != n_ || u.cols() != n_)
    throw std::invalid_argument("FFT input has wrong shape");
  auto& buf = scratch(n_);
  std::copy(u.data(), u.data() + u.size(), buf.real);
  fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_plan_), buf.real, buf.complex);
  out.resize(n_, n_ / 2 + 1);
  const auto* src = reinterpret_cast<const std::complex<double>*>(buf.complex);
  std::copy(src, src + out.size(), out.data());
}

void Fft2d::inverse(const Spectrum& s, Field& out) const {
  if (s.rows() != n_ || s.cols() != n_ / 2 + 1)
    throw std::invalid_argument("inverse FFT input has wrong shape");
  auto& buf = scratch(n_);
  std::copy(s.data(), s.data() + s.size(), reinterpret_cast<std::complex<double>*>(buf.complex));
  fftw_execute_dft_c2r(static_cast<fftw_plan>(inverse_plan_), buf.complex, buf.real);
  out.resize(n_, n_);
  const double scale = 1.0 / (double(n_) * n_);
  for (Eigen::Index i = 0; i < out.size(); ++i) out.data()[i] = buf.real[i] * scale;
}

Spectrum Fft2d::forward(const Field& u) const {
  Spectrum s;
  forward(u, s);
  return s;
}

Field Fft2d::inverse(const Spectrum& s) const {
  Field u;
  inverse(s, u);
  return u;
}

std::shared_ptr<const Fft2d> Fft2d::get(int n) {
  static std::mutex mutex;
  static std::map<int, std::shared_ptr<const Fft2d>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_shared<const Fft2d>(n);
  return slot;
}

namespace {

// cos(2 pi k p / n) and 1 - cos(2 pi k p / n) = 2 sin^2(pi k p / n), with the
// integer product reduced mod n first.
Eigen::MatrixXd cosine_table(int n, int r) {
  Eigen::MatrixXd t(n, r + 1);
  for (int k = 0; k < n; ++k)
    for (int p = 0; p <= r; ++p)
      t(k, p) = std::cos(2.0 * std::numbers::pi * double((long(k) * p) % n) / n);
  return t;
}

Eigen::MatrixXd versine_table(int n, int r) {
  Eigen::MatrixXd t(n, r + 1);
  for (int k = 0; k < n; ++k)
    for (int p = 0; p <= r; ++p) {
      const double s = std::sin(std::numbers::pi * double((long(k) * p) % n) / n);
      t(k, p) = 2.0 * s * s;
    }
  return t;
}

HalfTable restrict_to_half(const Eigen::ArrayXXd& full) {
  const auto n = full.rows();
  HalfTable h(n, n / 2 + 1);
  for (Eigen::Index k = 0; k < n; ++k)
    for (Eigen::Index l = 0; l <= n / 2; ++l) h(k, l) = full(k, l);
  return h;
}

}  // namespace

Eigen::ArrayXXd build_symbol(const Stencil& stencil, const Grid& grid, const ModelParams& params) {
  if (std::abs(stencil.h() - grid.h()) > 1e-12 * grid.h())
    throw std::invalid_argument("stencil spacing does not match grid spacing");
  const int n = grid.n();
  const int r = stencil.radius();
  const Eigen::MatrixXd cos_t = cosine_table(n, r);
  const Eigen::MatrixXd ver_t = versine_table(n, r);
  const Eigen::MatrixXd c = stencil.coeffs().matrix();
  // 1 - cos(a) cos(b) = (1 - cos a) + cos(a) (1 - cos b); this split avoids the
  // cancellation of sum c - sum c cos cos on the low modes.
  const Eigen::VectorXd along_x = ver_t * c.rowwise().sum();
  const Eigen::MatrixXd mixed = cos_t * c * ver_t.transpose();
  const double eps2 = params.eps() * params.eps();
  Eigen::ArrayXXd lambda = mixed.array().colwise() + along_x.array();
  return params.kappa() + 4.0 * eps2 * lambda;
}

SpectralOperator::SpectralOperator(Grid grid, ModelParams params, Eigen::ArrayXXd lambda, double tau)
    : grid_(grid), params_(params), tau_(tau) {
  const int n = grid.n();
  if (lambda.rows() != n || lambda.cols() != n)
    throw std::invalid_argument("symbol table shape does not match grid");
  if (!(tau > 0.0)) throw std::invalid_argument("time step tau must be positive");
  // The half-spectrum transform is only exact for even multipliers
  // m(k,l) = m(-k,-l); anything else would leave an imaginary residue.
  const double scale = lambda.abs().maxCoeff();
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l)
      if (std::abs(lambda(k, l) - lambda((n - k) % n, (n - l) % n)) > 1e-12 * scale)
        throw std::logic_error("symbol is not even: FFT application would not be real");
  if (lambda.minCoeff() < params.kappa() * (1.0 - 1e-12))
    throw std::logic_error("symbol falls below kappa; stencil has negative weights");
  lambda_ = std::make_shared<const Eigen::ArrayXXd>(std::move(lambda));
  fft_ = Fft2d::get(n);
  half_lambda_ = std::make_shared<const HalfTable>(restrict_to_half(*lambda_));
  const double eps2 = params.eps() * params.eps();
  half_d_ = std::make_shared<const HalfTable>((params.kappa() - *half_lambda_) / eps2);
  auto table = [&](int gamma) {
    return HalfTable(half_lambda_->unaryExpr([&](double l) { return phi(gamma, l * tau); }));
  };
  phi0_ = table(0);
  phi1_ = table(1);
  phi2_ = table(2);
}

Eigen::ArrayXXd SpectralOperator::phi_table(int gamma) const {
  return lambda_->unaryExpr([&](double l) { return phi(gamma, l * tau_); });
}

SpectralOperator SpectralOperator::with_tau(double tau) const {
  SpectralOperator copy = *this;
  if (!(tau > 0.0)) throw std::invalid_argument("time step tau must be positive");
  copy.tau_ = tau;
  auto table = [&](int gamma) {
    return HalfTable(half_lambda_->unaryExpr([&](double l) { return phi(gamma, l * tau); }));
  };
  copy.phi0_ = table(0);
  copy.phi1_ = table(1);
  copy.phi2_ = table(2);
  return copy;
}

const HalfTable& SpectralOperator::half(SymbolKind kind) const {
  switch (kind) {
    case SymbolKind::L: return *half_lambda_;
    case SymbolKind::D: return *half_d_;
    case SymbolKind::Phi0: return phi0_;
    case SymbolKind::Phi1: return phi1_;
    case SymbolKind::Phi2: return phi2_;
  }
  throw std::invalid_argument("unknown symbol kind");
}

Field SpectralOperator::apply(SymbolKind kind, const Field& u) const {
  require_shape(grid_, u);
  Spectrum s = fft_->forward(u);
  s *= half(kind).cast<std::complex<double>>();
  return fft_->inverse(s);
}

}  // namespace nlac
