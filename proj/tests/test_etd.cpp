#include "nlac/etd.hpp"

#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

using namespace nlac;
using nlac::test::random_field;

namespace {

const double kTwoPi = 2.0 * std::numbers::pi;

SpectralOperator make_op(int n, double tau, double kappa = 2.0, bool allow_small = false) {
  return nonlocal_operator(KernelSpec(1.0, 1.0), Grid(n, kTwoPi), ModelParams(0.1, kappa, allow_small), tau);
}

}  // namespace

TEST_SUITE("etd") {

TEST_CASE("nonlinear term") {
  const Field u = (Field(1, 3) << 1.0, 0.0, -1.0).finished();
  const Field f = nonlinear_term(u, 2.0);
  CHECK(f(0) == 2.0);
  CHECK(f(1) == 0.0);
  CHECK(f(2) == -2.0);
  CHECK(nonlinear_term(Field::Constant(1, 1, 0.5), 3.0)(0) == doctest::Approx(1.875));
}

TEST_CASE("uniform states -1, 0, 1 are fixed points") {
  const auto op = make_op(16, 0.3);
  for (double c : {-1.0, 0.0, 1.0}) {
    const Field u = Field::Constant(16, 16, c);
    CHECK((etd1_step(op, u) - c).abs().maxCoeff() < 1e-15);
    CHECK((etdrk2_step(op, u) - c).abs().maxCoeff() < 1e-15);
  }
}

TEST_CASE("uniform state follows the scalar recurrence") {
  const double tau = 0.25, kappa = 3.0;
  const auto op = make_op(16, tau, kappa);
  const double a = kappa * tau;
  double c = 0.3;
  Field u = Field::Constant(16, 16, c);
  for (int k = 0; k < 10; ++k) {
    c = std::exp(-a) * c + tau * phi(1, a) * ((kappa + 1) * c - c * c * c);
    u = etd1_step(op, u);
    CHECK((u - c).abs().maxCoeff() < 1e-14);
  }
  // ETDRK2 on a constant: corrector with the scalar phi2.
  double d = 0.3;
  Field v = Field::Constant(16, 16, d);
  for (int k = 0; k < 10; ++k) {
    const double fd = (kappa + 1) * d - d * d * d;
    const double t = std::exp(-a) * d + tau * phi(1, a) * fd;
    d = t + tau * phi(2, a) * (((kappa + 1) * t - t * t * t) - fd);
    v = etdrk2_step(op, v);
    CHECK((v - d).abs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("ETDRK2 with a frozen nonlinearity reduces to ETD1") {
  const auto op = make_op(32, 0.2);
  const Field u = random_field(32, 3, 0.9);
  const Field fu = nonlinear_term(u, 2.0);
  const Field rk2 = etdrk2_step(op, u, [&](const Field&) { return fu; });
  const Field e1 = etd1_step(op, u);
  CHECK((rk2 - e1).abs().maxCoeff() <= 1e-14 * e1.abs().maxCoeff());
}

TEST_CASE("fused step equals composed multiplier applications") {
  const double tau = 0.2;
  const auto op = make_op(32, tau);
  const Field u = random_field(32, 4, 0.9);
  const Field composed =
      apply_fft(op, SymbolKind::Phi0, u) + tau * apply_fft(op, SymbolKind::Phi1, nonlinear_term(u, 2.0));
  CHECK((etd1_step(op, u) - composed).abs().maxCoeff() < 1e-14);
}

TEST_CASE("local symbol") {
  const Grid grid(16, kTwoPi);
  const ModelParams params(0.1, 2.0);
  const auto lam = lac_symbol(grid, params);
  const double h = grid.h();
  CHECK(lam(0, 0) == 2.0);
  CHECK(lam(8, 0) == doctest::Approx(2.0 + 0.01 * 4.0 / (h * h)).epsilon(1e-14));
  CHECK(lam(3, 5) == lam(5, 3));
  CHECK(lam(8, 8) == doctest::Approx(2.0 + 0.01 * 8.0 / (h * h)).epsilon(1e-14));
  CHECK(lam(1, 0) == doctest::Approx(2.0 + 0.01 * (2.0 - 2.0 * std::cos(kTwoPi / 16)) / (h * h)).epsilon(1e-14));
  const auto op = local_operator(grid, params, 0.1);
  const Field u = sample_function(grid, [](double x, double y) { return std::sin(x) * std::sin(y); });
  const double ev = -2.0 * 4.0 * std::pow(std::sin(h / 2), 2) / (h * h);
  CHECK((apply_fft(op, SymbolKind::D, u) - ev * u).abs().maxCoeff() < 1e-12);
}

TEST_CASE("time plan") {
  CHECK(TimePlan(0.1, 1.0).steps() == 10);
  CHECK(TimePlan(0.01, 500.0).steps() == 50000);
  CHECK(TimePlan(0.1, 0.0).steps() == 0);
  CHECK_THROWS_AS(TimePlan(0.03, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(TimePlan(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(TimePlan(0.1, -1.0), std::invalid_argument);
}

TEST_CASE("empty plan returns the initial state") {
  const auto op = make_op(16, 0.1);
  const Field u0 = random_field(16, 9, 0.5);
  const auto r = run(op, u0, TimePlan(0.1, 0.0));
  CHECK((r.state.u == u0).all());
  CHECK(r.state.t == 0.0);
  CHECK(r.state.step_index == 0);
  CHECK(r.log.empty());
}

TEST_CASE("run bookkeeping") {
  const auto op = make_op(32, 0.1);
  const Field u0 = random_field(32, 10, 0.9);
  int calls = 0;
  RunOptions opts;
  opts.observer = [&](const SolverState& s) {
    ++calls;
    CHECK(s.t == s.step_index * 0.1);
  };
  const auto r = run(op, u0, TimePlan(0.1, 1.0), opts);
  CHECK(calls == 10);
  CHECK(r.state.step_index == 10);
  CHECK(r.state.t == 10 * 0.1);
  REQUIRE(r.log.records().size() == 10);
  CHECK(r.log.records().front().t == 0.1);

  opts.observer = nullptr;
  opts.log_stride = 3;
  const auto s = run(op, u0, TimePlan(0.1, 1.0), opts);
  REQUIRE(s.log.records().size() == 4);
  CHECK(s.log.records()[2].t == doctest::Approx(0.9));
  CHECK(s.log.records()[3].t == doctest::Approx(1.0));
  CHECK((s.state.u == r.state.u).all());

  CHECK_THROWS_AS(run(op, u0, TimePlan(0.2, 1.0)), std::invalid_argument);
  CHECK_THROWS_AS(run(op, Field::Zero(16, 16), TimePlan(0.1, 1.0)), std::invalid_argument);
}

TEST_CASE("steady-state stop") {
  const auto op = make_op(16, 0.1);
  RunOptions opts;
  opts.steady_tol = 1e-8;
  const auto r = run(op, Field::Constant(16, 16, 1.0), TimePlan(0.1, 100.0), opts);
  CHECK(r.reached_steady);
  CHECK(r.state.step_index == 1);
  CHECK(r.log.records().size() == 1);
}

TEST_CASE("non-finite states raise NumericError") {
  const auto op = make_op(16, 0.1);
  Field bad = Field::Zero(16, 16);
  bad(3, 3) = std::numeric_limits<double>::quiet_NaN();
  try {
    run(op, bad, TimePlan(0.1, 1.0));
    FAIL("expected NumericError");
  } catch (const NumericError& e) {
    CHECK(e.step() == 0);
  }
  Field huge = Field::Constant(16, 16, 1e200);
  try {
    run(op, huge, TimePlan(0.1, 1.0));
    FAIL("expected NumericError");
  } catch (const NumericError& e) {
    CHECK(e.step() >= 1);
  }
}

TEST_CASE("maximum-principle guard") {
  const auto op = make_op(16, 0.1);
  RunOptions opts;
  opts.max_principle_tol = -0.5;  // forces a trip to exercise the guard
  try {
    run(op, Field::Constant(16, 16, 0.9), TimePlan(0.1, 1.0), opts);
    FAIL("expected NumericError");
  } catch (const NumericError& e) {
    CHECK(e.step() == 1);
  }
  // Inactive when kappa < 2 or the initial state is already outside [-1, 1].
  CHECK_NOTHROW(run(make_op(16, 0.1, 1.0, true), Field::Constant(16, 16, 0.9), TimePlan(0.1, 1.0), opts));
  CHECK_NOTHROW(run(op, Field::Constant(16, 16, 1.5), TimePlan(0.1, 1.0), RunOptions{}));
}

TEST_CASE("maximum principle and energy decay on random data") {
  for (double kappa : {2.0, 10.0}) {
    for (double tau : {0.01, 100.0}) {
      for (auto scheme : {Scheme::ETD1, Scheme::ETDRK2}) {
        const auto op = make_op(32, tau, kappa);
        RunOptions opts;
        opts.scheme = scheme;
        const auto r = run(op, random_field(32, 77, 1.0), TimePlan(tau, 30 * tau), opts);
        double prev = discrete_energy(random_field(32, 77, 1.0), op);
        for (const auto& rec : r.log.records()) {
          CHECK(rec.max_norm <= 1.0 + 1e-12);
          if (scheme == Scheme::ETD1) CHECK(rec.energy <= prev + 1e-10 * (1.0 + std::abs(prev)));
          prev = rec.energy;
        }
      }
    }
  }
}

TEST_CASE("ETDRK2 energy stays bounded on random data") {
  // Coarsening runs from random data; the bound E <= E(0) + 1 is deliberately loose.
  const int n = 64;
  const Grid grid(n, kTwoPi);
  for (double delta : {0.3, 0.4}) {
    const auto op = nonlocal_operator(KernelSpec(1.0, delta), grid, ModelParams(0.1, 2.0), 0.01);
    const Field u0 = random_field(n, 42, 0.9);
    const double e0 = discrete_energy(u0, op);
    const auto r = run(op, u0, TimePlan(0.01, 20.0));
    double peak = -1.0;
    for (const auto& rec : r.log.records()) peak = std::max(peak, rec.energy);
    INFO("delta=" << delta << " E0=" << e0 << " peak=" << peak);
    CHECK(peak <= e0 + 1.0);
    CHECK(r.log.records().back().energy < e0);
  }
}

TEST_CASE("temporal order on a small grid") {
  const int n = 32;
  const double t_end = 0.5;
  const Grid grid(n, kTwoPi);
  const Field u0 = sample_function(grid, [](double x, double y) { return 0.5 * std::sin(x) * std::sin(y); });
  const auto base = make_op(n, 0.05);
  for (auto scheme : {Scheme::ETD1, Scheme::ETDRK2}) {
    RunOptions opts;
    opts.scheme = scheme;
    opts.log_energy = false;
    const double tau_ref = 0.05 / 1024;
    const Field ref = run(base.with_tau(tau_ref), u0, TimePlan(tau_ref, t_end), opts).state.u;
    std::vector<std::pair<double, double>> errs;
    for (int k = 0; k < 5; ++k) {
      const double tau = 0.05 / (1 << k);
      const Field u = run(base.with_tau(tau), u0, TimePlan(tau, t_end), opts).state.u;
      errs.emplace_back(tau, (u - ref).abs().maxCoeff());
    }
    const auto table = rate_table(errs);
    const double expected = scheme == Scheme::ETD1 ? 1.0 : 2.0;
    for (std::size_t k = 2; k < table.rows.size(); ++k) {
      INFO(to_string(scheme) << " rate " << *table.rows[k].rate);
      CHECK(std::abs(*table.rows[k].rate - expected) < 0.1);
    }
  }
}

}  // TEST_SUITE
