#include "nlac/kernel.hpp"

#include "support.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace nlac;
using nlac::test::rel_diff;

namespace {

// Integral of g(|s|) over the disc of radius delta, done in Cartesian
// coordinates: 8 copies of the octant 0 <= y <= x, with the Duffy substitution
// y = x t on the part of the octant that touches the origin.
template <typename G>
double disc_integral(G g, double delta) {
  using boost::math::quadrature::gauss_kronrod;
  using boost::math::quadrature::tanh_sinh;
  const double a = delta / std::sqrt(2.0);
  auto inner_near = [&](double x) {
    // Below 1e-100 the integrand overflows; the dropped piece is under 1e-50
    // for the exponents used here (alpha <= 3).
    if (x < 1e-100) return 0.0;
    return gauss_kronrod<double, 31>::integrate(
        [&](double t) { return x * g(x * std::sqrt(1.0 + t * t)); }, 0.0, 1.0, 5, 1e-12);
  };
  auto inner_far = [&](double x) {
    const double top = std::sqrt(std::max(0.0, delta * delta - x * x));
    return gauss_kronrod<double, 31>::integrate(
        [&](double y) { return g(std::hypot(x, y)); }, 0.0, top, 5, 1e-12);
  };
  // tanh-sinh copes with the x^(1-alpha) endpoint behaviour at 0 and the
  // square-root edge at x = delta.
  tanh_sinh<double> outer;
  const double near = outer.integrate(inner_near, 0.0, a, 1e-11);
  const double far = outer.integrate(inner_far, a, delta, 1e-11);
  return 8.0 * (near + far);
}

}  // namespace

TEST_SUITE("kernel") {

TEST_CASE("kernel values") {
  CHECK(evaluate_kernel(KernelSpec(1.0, 0.2), 0.3) == 0.0);
  CHECK(evaluate_kernel(KernelSpec(0.0, 1.0), 0.5) == doctest::Approx(8.0 / std::numbers::pi).epsilon(1e-15));
  CHECK(evaluate_kernel(KernelSpec(1.0, 0.2), 0.1) == doctest::Approx(2387.324146).epsilon(1e-9));
  CHECK(evaluate_kernel(KernelSpec(1.0, 0.2), 0.2) > 0.0);
  CHECK_THROWS_AS(evaluate_kernel(KernelSpec(1.0, 0.2), 0.0), std::domain_error);
  CHECK_THROWS_AS(evaluate_kernel(KernelSpec(1.0, 0.2), -0.1), std::domain_error);
}

TEST_CASE("kernel spec validation") {
  CHECK_THROWS_AS(KernelSpec(-0.1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(KernelSpec(4.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(KernelSpec(1.0, 0.0), std::invalid_argument);
  CHECK_NOTHROW(KernelSpec(3.99, 1.0));
}

TEST_CASE("kernel mass") {
  CHECK(std::get<double>(kernel_mass(KernelSpec(0.0, 2.0))) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(std::holds_alternative<NonIntegrable>(kernel_mass(KernelSpec(3.0, 1.0))));
  CHECK(std::holds_alternative<NonIntegrable>(kernel_mass(KernelSpec(2.0, 1.0))));
  // eps^2 C_delta = 1 exactly at delta = 2 sqrt(3) eps for alpha = 1.
  const double d = 2.0 * std::sqrt(3.0) * 0.1;
  CHECK(0.01 * std::get<double>(kernel_mass(KernelSpec(1.0, d))) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("second moment equals 4 by independent 2D quadrature") {
  for (double alpha : {0.0, 1.0, 1.5, 3.0}) {
    for (double delta : {0.2, 2.0}) {
      const KernelSpec k(alpha, delta);
      const double m2 = disc_integral([&](double r) { return r * r * evaluate_kernel(k, r); }, delta);
      INFO("alpha=" << alpha << " delta=" << delta << " m2=" << m2);
      CHECK(rel_diff(m2, 4.0) < 1e-6);
    }
  }
}

TEST_CASE("kernel mass matches independent 2D quadrature") {
  for (double alpha : {0.0, 0.5, 1.0, 1.5}) {
    for (double delta : {0.2, 0.5, 2.0}) {
      const KernelSpec k(alpha, delta);
      const double mass = disc_integral([&](double r) { return evaluate_kernel(k, r); }, delta);
      INFO("alpha=" << alpha << " delta=" << delta);
      CHECK(rel_diff(std::get<double>(kernel_mass(k)), mass) < 1e-6);
    }
  }
}

TEST_CASE("critical horizon") {
  CHECK(critical_delta(1.0, 0.1) == doctest::Approx(0.3464101615).epsilon(1e-9));
  CHECK(critical_delta(0.0, 0.5) == doctest::Approx(1.414213562).epsilon(1e-9));
  CHECK_THROWS_AS(critical_delta(1.0, 0.0), std::invalid_argument);
  CHECK_THROWS(critical_delta(2.5, 0.1));
  for (double alpha : {0.0, 0.7, 1.0, 1.9}) {
    const double d0 = critical_delta(alpha, 0.1);
    CHECK(0.01 * std::get<double>(kernel_mass(KernelSpec(alpha, d0))) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("predicted jump") {
  CHECK(predicted_jump(KernelSpec(1.0, 0.8), 0.1) == doctest::Approx(1.802776).epsilon(1e-6));
  CHECK(predicted_jump(KernelSpec(1.0, 1.6), 0.1) == doctest::Approx(1.952562).epsilon(1e-6));
  CHECK(predicted_jump(KernelSpec(1.0, 3.2), 0.1) == doctest::Approx(1.988247).epsilon(1e-6));
  CHECK(predicted_jump(KernelSpec(1.0, 0.2), 0.1) == 0.0);
  CHECK_THROWS(predicted_jump(KernelSpec(3.0, 1.0), 0.1));
}

TEST_CASE("jump vanishes at the critical horizon and grows beyond it") {
  for (double alpha : {0.0, 1.0, 1.5}) {
    const double eps = 0.1;
    const double d0 = critical_delta(alpha, eps);
    CHECK(predicted_jump(KernelSpec(alpha, d0), eps) == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(predicted_jump(KernelSpec(alpha, 0.5 * d0), eps) == 0.0);
    double prev = 0.0;
    for (int k = 1; k <= 40; ++k) {
      const double d = d0 * std::pow(1.2, k);
      const double j = predicted_jump(KernelSpec(alpha, d), eps);
      CHECK(j > prev);
      CHECK(j < 2.0);
      prev = j;
    }
  }
}

}  // TEST_SUITE
