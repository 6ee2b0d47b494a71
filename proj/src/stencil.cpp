#include "nlac/stencil.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <ostream>
#include <sstream>
#include <tuple>

namespace nlac {

QuadratureError::QuadratureError(double achieved, double tolerance)
    : std::runtime_error("stencil quadrature did not converge: second-moment defect " +
                         std::to_string(achieved) + " exceeds tolerance " + std::to_string(tolerance)),
      achieved_(achieved),
      tolerance_(tolerance) {}

Stencil::Stencil(KernelSpec kernel, double h, Eigen::ArrayXXd coeffs)
    : kernel_(kernel), h_(h), coeffs_(std::move(coeffs)) {
  if (!(h > 0.0)) throw std::invalid_argument("stencil spacing must be positive");
  if (coeffs_.rows() < 2 || coeffs_.rows() != coeffs_.cols())
    throw std::invalid_argument("stencil coefficient table must be square with r >= 1");
}

double Stencil::second_moment() const {
  double sum = 0.0;
  for (int p = 0; p <= radius(); ++p)
    for (int q = 0; q <= radius(); ++q) sum += coeffs_(p, q) * double(p * p + q * q);
  return sum * h_ * h_;
}

int stencil_radius(double delta, double h) {
  return static_cast<int>(std::floor(delta / h)) + 1;
}

const GaussRule& gauss_legendre(int order) {
  static std::mutex mutex;
  static std::map<int, GaussRule> rules;
  if (order < 1) throw std::invalid_argument("quadrature order must be positive");
  std::lock_guard lock(mutex);
  if (auto it = rules.find(order); it != rules.end()) return it->second;

  // Golub-Welsch for the starting nodes, then Newton on P_n for full accuracy.
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(order, order);
  for (int k = 1; k < order; ++k) {
    const double b = k / std::sqrt(4.0 * k * k - 1.0);
    jacobi(k, k - 1) = jacobi(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi, Eigen::EigenvaluesOnly);

  GaussRule rule;
  for (int i = 0; i < order; ++i) {
    double x = solver.eigenvalues()(i);
    double dp = 1.0;
    for (int iter = 0; iter < 4; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      x -= p1 / dp;
    }
    rule.nodes.push_back(x);
    rule.weights.push_back(2.0 / ((1.0 - x * x) * dp * dp));
  }
  return rules.emplace(order, std::move(rule)).first->second;
}

namespace {

// All integrals are carried out in mesh units (xi, eta) = (x, y) / h, where the
// reduced integrand is R^(2 - alpha) / (xi + eta) over the quarter disc of
// radius D = delta / h. Returned values are weights for the four corners
// (a,b), (a+1,b), (a,b+1), (a+1,b+1) of cell [a, a+1] x [b, b+1].
using CornerWeights = std::array<double, 4>;

class CellIntegrator {
public:
  CellIntegrator(double alpha, double radius, const GaussRule& rule)
      : alpha_(alpha), radius_(radius), rule_(rule) {}

  CornerWeights integrate(int a, int b) const {
    const double far2 = double(a + 1) * (a + 1) + double(b + 1) * (b + 1);
    if ((a == 0 && b == 0) || far2 > radius_ * radius_) return polar(a, b);
    return cartesian(a, b);
  }

private:
  CornerWeights cartesian(int a, int b) const {
    CornerWeights w{};
    const auto& x = rule_.nodes;
    const auto& wt = rule_.weights;
    const int m = static_cast<int>(x.size());
    for (int i = 0; i < m; ++i) {
      const double u = 0.5 * (x[i] + 1.0);
      const double xi = a + u;
      for (int j = 0; j < m; ++j) {
        const double v = 0.5 * (x[j] + 1.0);
        const double eta = b + v;
        const double r = std::hypot(xi, eta);
        const double g = 0.25 * wt[i] * wt[j] * std::pow(r, 2.0 - alpha_) / (xi + eta);
        w[0] += g * (1 - u) * (1 - v);
        w[1] += g * u * (1 - v);
        w[2] += g * (1 - u) * v;
        w[3] += g * u * v;
      }
    }
    return w;
  }

  // Angular breakpoints: the four corner directions and every point where the
  // arc R = D crosses a cell edge. Between consecutive breakpoints the entry
  // radius, exit radius and arc cut-off are each given by a single formula.
  std::vector<double> breakpoints(int a, int b) const {
    std::vector<double> t;
    const double d2 = radius_ * radius_;
    auto add = [&](double xi, double eta) {
      if (xi > 0.0 || eta > 0.0) t.push_back(std::atan2(eta, xi));
    };
    add(a, b);
    add(a + 1, b);
    add(a, b + 1);
    add(a + 1, b + 1);
    for (int e : {a, a + 1}) {
      const double s = d2 - double(e) * e;
      if (s > 0.0) {
        const double eta = std::sqrt(s);
        if (eta > b && eta < b + 1) add(e, eta);
      }
    }
    for (int e : {b, b + 1}) {
      const double s = d2 - double(e) * e;
      if (s > 0.0) {
        const double xi = std::sqrt(s);
        if (xi > a && xi < a + 1) add(xi, e);
      }
    }
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    return t;
  }

  // Radial extent of cell (a,b) along direction (c, s).
  static std::pair<double, double> ray_span(int a, int b, double c, double s) {
    double lo = 0.0, hi = std::numeric_limits<double>::infinity();
    if (c > 0.0) {
      lo = std::max(lo, a / c);
      hi = std::min(hi, (a + 1) / c);
    } else if (a > 0) {
      return {1.0, 0.0};
    }
    if (s > 0.0) {
      lo = std::max(lo, b / s);
      hi = std::min(hi, (b + 1) / s);
    } else if (b > 0) {
      return {1.0, 0.0};
    }
    return {lo, hi};
  }

  CornerWeights polar(int a, int b) const {
    CornerWeights w{};
    const auto& x = rule_.nodes;
    const auto& wt = rule_.weights;
    const int m = static_cast<int>(x.size());
    const bool origin = (a == 0 && b == 0);
    const auto angles = breakpoints(a, b);
    for (std::size_t k = 0; k + 1 < angles.size(); ++k) {
      const double t0 = angles[k], t1 = angles[k + 1];
      const double half = 0.5 * (t1 - t0);
      if (half <= 0.0) continue;
      for (int i = 0; i < m; ++i) {
        const double theta = t0 + half * (x[i] + 1.0);
        const double c = std::cos(theta), s = std::sin(theta);
        auto [r_in, r_out] = ray_span(a, b, c, s);
        r_out = std::min(r_out, radius_);
        if (!(r_out > r_in)) continue;
        const double wtheta = half * wt[i] / (c + s);
        if (origin) {
          accumulate_origin(w, r_out, c, s, wtheta);
          continue;
        }
        const double rhalf = 0.5 * (r_out - r_in);
        for (int j = 0; j < m; ++j) {
          const double r = r_in + rhalf * (x[j] + 1.0);
          const double u = r * c - a, v = r * s - b;
          const double g = wtheta * rhalf * wt[j] * std::pow(r, 2.0 - alpha_);
          w[0] += g * (1 - u) * (1 - v);
          w[1] += g * u * (1 - v);
          w[2] += g * (1 - u) * v;
          w[3] += g * u * v;
        }
      }
    }
    return w;
  }

  // On the origin cell the hat functions are polynomials in R along a ray, so
  // int_0^R r^(2-alpha) r^k dr is done in closed form. The (0,0) corner needs
  // k = 0, which diverges for alpha >= 3; its coefficient is identically zero
  // and is skipped.
  void accumulate_origin(CornerWeights& w, double rmax, double c, double s, double wtheta) const {
    auto moment = [&](int k) {
      const double e = 3.0 - alpha_ + k;
      return std::pow(rmax, e) / e;
    };
    const double m1 = moment(1), m2 = moment(2);
    w[1] += wtheta * (c * m1 - c * s * m2);
    w[2] += wtheta * (s * m1 - c * s * m2);
    w[3] += wtheta * (c * s * m2);
  }

  double alpha_;
  double radius_;
  const GaussRule& rule_;
};

}  // namespace

Stencil build_stencil(const KernelSpec& kernel, const Grid& grid, const StencilOptions& options) {
  const double h = grid.h();
  const double delta = kernel.delta();
  if (!options.allow_wrap && delta > 0.5 * grid.extent())
    throw std::invalid_argument("stencil horizon delta=" + std::to_string(delta) +
                                " exceeds half the domain X/2=" + std::to_string(0.5 * grid.extent()));
  const double D = delta / h;
  const int r = stencil_radius(delta, h);
  const double alpha = kernel.alpha();

  Eigen::ArrayXXd moments = Eigen::ArrayXXd::Zero(r + 2, r + 2);
  const CellIntegrator cell(alpha, D, gauss_legendre(options.quadrature_order));
  for (int a = 0; double(a) * a < D * D; ++a) {
    for (int b = 0; double(a) * a + double(b) * b < D * D; ++b) {
      const CornerWeights w = cell.integrate(a, b);
      moments(a, b) += w[0];
      moments(a + 1, b) += w[1];
      moments(a, b + 1) += w[2];
      moments(a + 1, b + 1) += w[3];
    }
  }

  const double scale = kernel.prefactor() * std::pow(h, 2.0 - alpha);
  Eigen::ArrayXXd c = Eigen::ArrayXXd::Zero(r + 1, r + 1);
  for (int p = 0; p <= r; ++p)
    for (int q = 0; q <= r; ++q)
      if (p + q > 0) c(p, q) = scale * (p + q) / double(p * p + q * q) * moments(p, q);
  c = 0.5 * (c + c.transpose()).eval();

  Stencil stencil(kernel, h, std::move(c));
  const double defect = std::abs(stencil.second_moment() - 1.0);
  if (!(defect <= options.moment_tolerance)) throw QuadratureError(defect, options.moment_tolerance);
  return stencil;
}

std::shared_ptr<const Stencil> cached_stencil(const KernelSpec& kernel, const Grid& grid,
                                              const StencilOptions& options) {
  using Key = std::tuple<double, double, double, int, bool>;
  static std::mutex mutex;
  static std::map<Key, std::shared_ptr<const Stencil>> cache;
  const Key key{kernel.alpha(), kernel.delta(), grid.h(), options.quadrature_order, options.allow_wrap};
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto built = std::make_shared<const Stencil>(build_stencil(kernel, grid, options));
  std::lock_guard lock(mutex);
  return cache.emplace(key, std::move(built)).first->second;
}

Field apply_direct(const Stencil& stencil, const Field& u) {
  const auto n = u.rows();
  if (u.cols() != n) throw std::invalid_argument("apply_direct expects a square field");
  const int r = stencil.radius();
  if (2 * r >= n)
    throw std::invalid_argument("stencil radius r=" + std::to_string(r) + " wraps onto itself on n=" +
                                std::to_string(n) + " (need 2r < n)");
  const auto& c = stencil.coeffs();
  auto wrap = [n](long i) { return static_cast<Eigen::Index>(((i % n) + n) % n); };

  Field v = Field::Zero(n, n);
  std::vector<Eigen::Index> jp(n), jm(n);
  for (int q = 0; q <= r; ++q) {
    for (Eigen::Index j = 0; j < n; ++j) {
      jp[j] = wrap(j + q);
      jm[j] = wrap(j - q);
    }
    for (int p = 0; p <= r; ++p) {
      const double w = c(p, q);
      if (w == 0.0) continue;
      for (Eigen::Index i = 0; i < n; ++i) {
        const auto ip = wrap(i + p), im = wrap(i - p);
        for (Eigen::Index j = 0; j < n; ++j)
          v(i, j) += w * (u(ip, jp[j]) + u(im, jp[j]) + u(ip, jm[j]) + u(im, jm[j]) - 4.0 * u(i, j));
      }
    }
  }
  return v;
}

namespace {
std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}
}  // namespace

void write_stencil(std::ostream& os, const Stencil& stencil) {
  const int r = stencil.radius();
  os << "r=" << r << " alpha=" << fmt17(stencil.kernel().alpha())
     << " delta=" << fmt17(stencil.kernel().delta()) << " h=" << fmt17(stencil.h()) << '\n';
  for (int p = 0; p <= r; ++p) {
    for (int q = 0; q <= r; ++q) os << (q ? " " : "") << fmt17(stencil(p, q));
    os << '\n';
  }
}

Stencil read_stencil(std::istream& is) {
  std::string header;
  if (!std::getline(is, header)) throw std::runtime_error("stencil file: missing header");
  int r = -1;
  double alpha = 0, delta = 0, h = 0;
  if (std::sscanf(header.c_str(), "r=%d alpha=%lf delta=%lf h=%lf", &r, &alpha, &delta, &h) != 4 || r < 1)
    throw std::runtime_error("stencil file: malformed header '" + header + "'");
  Eigen::ArrayXXd c(r + 1, r + 1);
  for (int p = 0; p <= r; ++p)
    for (int q = 0; q <= r; ++q)
      if (!(is >> c(p, q)))
        throw std::runtime_error("stencil file: truncated at row " + std::to_string(p));
  return Stencil(KernelSpec(alpha, delta), h, std::move(c));
}

}  // namespace nlac
