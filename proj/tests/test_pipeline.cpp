#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "jqnn/pipeline.hpp"

using namespace jqnn;

namespace {

// Parameter total of one compiled monomial branch: depth 2|n| circuit.
long long monomial_params(int n) { return 4LL * std::abs(n) + 3; }

}  // namespace

TEST_CASE("univariate model reproduces the smoothed cosine") {
  const PeriodicFn f = builtin_function("cos");
  const UniQnnModel m = approximate_univariate(f, 0, 2);
  CHECK(m.N == 2);
  CHECK(m.K == 0);
  CHECK(m.L == 2);
  CHECK(m.param_count() == 11);  // depth 4
  CHECK(m.compile_residual <= 1e-6);
  // K=0 scale: sup|cos| = 1 times (2^1 - 1), plus the preconditioning margin.
  CHECK(m.c == doctest::Approx(1.0).epsilon(1e-4));
  for (double x : {0.0, 0.5, -1.2, 2.9}) {
    CHECK(m.predict(x) == doctest::Approx((2.0 / 3.0) * std::cos(x)).epsilon(1e-6));
  }
  const double err = sup_error(m, f);
  CHECK(err == doctest::Approx(1.0 / 3.0).epsilon(1e-5));
}

TEST_CASE("identically zero targets short-circuit") {
  const UniQnnModel m = approximate_univariate(builtin_function("zero"), 1, 4);
  CHECK(m.method == "zero");
  CHECK(m.c == 0.0);
  CHECK(m.predict(0.3) == 0.0);
  CHECK(sup_error(m, builtin_function("zero")) == 0.0);
}

TEST_CASE("aperiodic targets are rejected") {
  const PeriodicFn ramp = PeriodicFn::univariate([](double x) { return x; });
  CHECK_THROWS_AS(approximate_univariate(ramp, 0, 2), std::invalid_argument);
  CHECK_THROWS_AS(approximate_univariate(builtin_function("cos"), -1, 2),
                  std::invalid_argument);
  CHECK_THROWS_AS(approximate_univariate(builtin_function("cos"), 0, 0),
                  std::invalid_argument);
}

TEST_CASE("product-cosine model matches its polynomial") {
  const PeriodicFn f = builtin_function("prodcos", 2);
  Eigen::VectorXi N(2), K(2);
  N << 2, 2;
  K << 0, 0;
  const MultiQnnModel m = approximate_multivariate(f, K, N);
  CHECK(m.d == 2);
  CHECK(m.nblocks == 25);
  CHECK(m.q == 5);
  CHECK(m.max_block_residual <= 1e-6);

  // One branch per box index; each branch spends one circuit per axis.
  long long expect = 0;
  for (int n1 = -2; n1 <= 2; ++n1)
    for (int n2 = -2; n2 <= 2; ++n2)
      expect += monomial_params(n1) + monomial_params(n2);
  CHECK(m.param_count() == expect);
  CHECK(m.param_count() == 390);

  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(2);
  CHECK(m.predict(x0) == doctest::Approx(4.0 / 9.0).epsilon(1e-5));

  // Grid prediction agrees with pointwise prediction.
  std::vector<Eigen::VectorXd> axes(2);
  axes[0].resize(5);
  axes[1].resize(4);
  for (int i = 0; i < 5; ++i) axes[0][i] = -kPi + kTwoPi * i / 5;
  for (int i = 0; i < 4; ++i) axes[1][i] = -kPi + kTwoPi * i / 4;
  const Eigen::VectorXd g = m.predict_grid(axes);
  REQUIRE(g.size() == 20);
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 4; ++j) {
      Eigen::VectorXd x(2);
      x << axes[0][i], axes[1][j];
      CHECK(g[i * 4 + j] == doctest::Approx(m.predict(x)).epsilon(1e-12));
    }
  }

  // The circuit tracks the polynomial itself much tighter than the target.
  const TrigPolyND t = jackson_approx_nd(f, N, K);
  const Eigen::VectorXcd tv = eval_poly_grid(t, axes);
  for (int i = 0; i < 20; ++i) CHECK(std::abs(g[i] - tv[i].real()) <= 1e-5);
}

TEST_CASE("model error equals polynomial error up to the compile residual") {
  const PeriodicFn f = builtin_function("abssin");
  const UniQnnModel m = approximate_univariate(f, 2, 6);
  const TrigPoly1D t = jackson_approx_1d(f, 6, 2);
  const double poly_err = sup_error(t, f);
  const double qnn_err = sup_error(m, f);
  CHECK(std::abs(poly_err - qnn_err) <= m.c * m.compile_residual + 1e-9);
}

TEST_CASE("rescale_period and to_period are inverse wrappers") {
  const double period = 7.0;
  auto g = [period](double u) { return std::cos(kTwoPi * u / period); };
  const PeriodicFn f = rescale_period(g, period);
  CHECK(f.dims() == 1);
  for (double x : {-2.0, 0.0, 0.4, 3.0})
    CHECK(f(x) == doctest::Approx(std::cos(x)).epsilon(1e-12));
  CHECK(f.periodicity_defect() <= 1e-9);

  auto back = to_period([](double x) { return std::cos(x); }, period);
  for (double u : {-3.0, 0.0, 1.5, 6.9})
    CHECK(back(u) == doctest::Approx(g(u)).epsilon(1e-12));

  CHECK_THROWS_AS(rescale_period(g, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(to_period([](double x) { return x; }, -1.0),
                  std::invalid_argument);
}

TEST_CASE("heat series cutoff obeys its tail bound") {
  const double t = 0.5, tail = 1e-10;
  const int m = heat_truncation(t, tail);
  CHECK(m % 2 == 1);
  CHECK((4.0 / kPi) * std::exp(-double(m + 2) * (m + 2) * t) < tail);
  CHECK((4.0 / kPi) * std::exp(-double(m) * m * t) >= tail);
  CHECK_THROWS_AS(heat_truncation(0.0), std::invalid_argument);
}

TEST_CASE("heat series agrees with the quadrature cross-check") {
  for (double t : {0.25, 0.5, 1.0}) {
    for (double s : {0.3, 1.0, kPi / 2, 2.8}) {
      const double a = heat_series_1d(t, s, heat_truncation(t));
      const double b = heat_convolution_1d(t, s);
      CHECK(a == doctest::Approx(b).epsilon(1e-9));
    }
  }
}

TEST_CASE("two-variable heat snapshot has the known center value") {
  // Hand-evaluated partial sum at s = pi/2 (odd harmonics alternate in sign).
  const double u1 =
      (4.0 / kPi) * (std::exp(-0.5) - std::exp(-4.5) / 3 + std::exp(-12.5) / 5);
  const PeriodicFn u = heat_reference(0.5, 2);
  Eigen::VectorXd x(2);
  x << kPi / 2, kPi / 2;
  CHECK(std::abs(u(x) - u1 * u1) <= 1e-5);
  CHECK(u.separable());
  // The one-variable profile at the same point.
  CHECK(std::abs(u.factor(0)(kPi / 2) - u1) <= 1e-5);
  CHECK_THROWS_AS(heat_reference(-1.0, 2), std::invalid_argument);
}

TEST_CASE("sweep rows are ordered and internally consistent") {
  ExperimentSpec spec = ExperimentSpec::defaults(ExperimentName::fig1_abssin);
  spec.n_min = 2;
  spec.n_max = 4;
  spec.k_min = 0;
  spec.k_max = 1;
  const ErrorCurve curve = run_experiment(spec);
  REQUIRE(curve.rows.size() == 6);
  int i = 0;
  for (int N = 2; N <= 4; ++N) {
    for (int K = 0; K <= 1; ++K, ++i) {
      const ErrorRow& row = curve.rows[i];
      CHECK(row.N == N);
      CHECK(row.K == K);
      const int r = (K + 4) / 2;
      CHECK(row.L == r * (N / 2));
      CHECK(row.param_count == 4LL * row.L + 3);
      CHECK(row.compile_residual <= 1e-6);
      CHECK(row.poly_sup_error > 0.0);
      // Scale (2^{K+1}-1) bounds how far the circuit can drift from the poly.
      const double slack = (std::pow(2.0, K + 1) - 1.0) * 2e-6;
      CHECK(std::abs(row.qnn_sup_error - row.poly_sup_error) <= slack);
    }
  }
}

TEST_CASE("smoothing more aggressively does not hurt the smooth-kernel heat run") {
  const PeriodicFn f = heat_reference(0.5, 2);
  auto run = [&](int K) {
    Eigen::VectorXi Nv = Eigen::VectorXi::Constant(2, 6);
    Eigen::VectorXi Kv = Eigen::VectorXi::Constant(2, K);
    const MultiQnnModel m = approximate_multivariate(f, Kv, Nv);
    return sup_error(m, f);
  };
  const double e0 = run(0), e1 = run(1), e2 = run(2);
  CHECK(e2 <= 1.1 * e0);
  CHECK(e2 <= 1.1 * e1);
}

TEST_CASE("fit_loglog_slope recovers exact power laws") {
  ErrorCurve c;
  for (int N : {4, 6, 8, 12, 16}) {
    ErrorRow r;
    r.N = N;
    r.K = 0;
    r.qnn_sup_error = 2.5 / N;
    c.rows.push_back(r);
    r.K = 1;
    r.qnn_sup_error = 7.0 / (double(N) * N);
    c.rows.push_back(r);
  }
  CHECK(fit_loglog_slope(c, 0) == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(fit_loglog_slope(c, 1) == doctest::Approx(-2.0).epsilon(1e-9));
  // min_N filters rows.
  CHECK(fit_loglog_slope(c, 0, 8) == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK_THROWS_AS(fit_loglog_slope(c, 2), std::invalid_argument);
  CHECK_THROWS_AS(fit_loglog_slope(c, 0, 16), std::invalid_argument);
  c.rows[0].qnn_sup_error = 0.0;
  CHECK_THROWS_AS(fit_loglog_slope(c, 0), std::invalid_argument);
}

TEST_CASE("builtin_function registry") {
  CHECK(builtin_function("abssin")(0.5) == doctest::Approx(std::sin(0.5)));
  CHECK(builtin_function("abssin25")(0.5) ==
        doctest::Approx(std::pow(std::sin(0.5), 2.5)));
  CHECK(builtin_function("zero", 3).dims() == 3);
  CHECK(builtin_function("cos")(1.0) == doctest::Approx(std::cos(1.0)));
  Eigen::VectorXd x(2);
  x << 0.3, 0.8;
  CHECK(builtin_function("prodcos", 2)(x) ==
        doctest::Approx(std::cos(0.3) * std::cos(0.8)));
  CHECK(builtin_function("heat", 2, 0.5)(x) ==
        doctest::Approx(heat_reference(0.5, 2)(x)));
  CHECK_THROWS_AS(builtin_function("nosuch"), std::invalid_argument);
  CHECK_THROWS_AS(builtin_function("abssin", 2), std::invalid_argument);
}

TEST_CASE("sup_error guards") {
  const PeriodicFn f = builtin_function("cos");
  CHECK_THROWS_AS(sup_error([](double) { return 0.0; }, f, 1),
                  std::invalid_argument);
  const PeriodicFn f2 = builtin_function("prodcos", 2);
  CHECK_THROWS_AS(sup_error([](double) { return 0.0; }, f2, 64),
                  std::invalid_argument);
  // Zero predictor against cos: sup error is exactly 1 on the default grid.
  CHECK(sup_error([](double) { return 0.0; }, f) == doctest::Approx(1.0));
}
