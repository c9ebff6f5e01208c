#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "jqnn/trig.hpp"

using namespace jqnn;

namespace {

// Direct ladder sum, the identity's left-hand side.
cplx ladder_sum(double a, double t) {
  cplx acc(0, 0);
  for (double n = -a; n <= a + 0.25; n += 1.0)
    acc += std::polar(1.0, n * t);
  return acc;
}

// Self-convolution counts by explicit tuple enumeration (odometer loop).
std::vector<long long> enumerate_counts(int h, int r) {
  const int folds = 2 * r;
  std::vector<long long> counts(folds * h + 1, 0);
  std::vector<int> a(folds, 0);
  for (;;) {
    int s = 0;
    for (int i = 0; i < folds; ++i) s += a[i];
    ++counts[s];
    int j = folds - 1;
    while (j >= 0 && a[j] == h) a[j--] = 0;
    if (j < 0) break;
    ++a[j];
  }
  return counts;
}

}  // namespace

TEST_CASE("dirichlet_sum matches the explicit exponential ladder") {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> ts(-kPi, kPi);
  for (int two_a = 0; two_a <= 16; ++two_a) {
    const double a = two_a / 2.0;
    for (int p = 0; p < 50; ++p) {
      const double t = ts(rng);
      const cplx lhs = ladder_sum(a, t);
      const cplx rhs = dirichlet_sum(a, t);
      CHECK(std::abs(lhs - rhs) <= 1e-11);
    }
    CHECK(dirichlet_sum(a, 0.0).real() == doctest::Approx(two_a + 1.0));
  }
}

TEST_CASE("dirichlet_sum rejects bad arguments") {
  CHECK_THROWS_AS(dirichlet_sum(0.3, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(dirichlet_sum(-0.5, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(dirichlet_sum(1.0, 4.0), std::invalid_argument);
}

TEST_CASE("jackson_weights small instances") {
  SUBCASE("N=2 K=0") {
    const JacksonWeights w = jackson_weights(2, 0);
    CHECK(w.r == 2);
    CHECK(w.half_degree() == 2);
    const long long expect[] = {1, 4, 6, 4, 1};
    for (int l = -2; l <= 2; ++l)
      CHECK(static_cast<long long>(w.mtilde_at(l)) == expect[l + 2]);
    CHECK(w.lambda == doctest::Approx(12.0 * kPi).epsilon(1e-14));
  }
  SUBCASE("N=4 K=1") {
    const JacksonWeights w = jackson_weights(4, 1);
    CHECK(w.r == 2);
    CHECK(w.half_degree() == 4);
    const long long expect[] = {1, 4, 10, 16, 19, 16, 10, 4, 1};
    for (int l = -4; l <= 4; ++l)
      CHECK(static_cast<long long>(w.mtilde_at(l)) == expect[l + 4]);
    CHECK(w.lambda == doctest::Approx(38.0 * kPi).epsilon(1e-14));
  }
  SUBCASE("N=2 K=1 alternating-binomial weights") {
    const JacksonWeights w = jackson_weights(2, 1);
    CHECK(static_cast<long long>(w.m_at(0)) == 6);
    CHECK(static_cast<long long>(w.m_at(1)) == 7);
    CHECK(static_cast<long long>(w.m_at(-1)) == 7);
    CHECK(static_cast<long long>(w.m_at(2)) == 2);
    CHECK(static_cast<long long>(w.m_at(-2)) == 2);
  }
  SUBCASE("N=1 degenerates to the constant") {
    const JacksonWeights w = jackson_weights(1, 0);
    CHECK(w.half_degree() == 0);
    CHECK(static_cast<long long>(w.mtilde_at(0)) == 1);
    CHECK(w.lambda == doctest::Approx(kTwoPi));
  }
}

TEST_CASE("jackson_weights counts match tuple enumeration") {
  for (int N = 1; N <= 6; ++N) {
    for (int K = 0; K <= 2; ++K) {
      const JacksonWeights w = jackson_weights(N, K);
      const int h = N / 2;
      const std::vector<long long> counts = enumerate_counts(h, w.r);
      const int rh = w.half_degree();
      for (int l = -rh; l <= rh; ++l)
        CHECK(static_cast<long long>(w.mtilde_at(l)) == counts[l + rh]);
    }
  }
}

TEST_CASE("jackson_weights argument and overflow guards") {
  CHECK_THROWS_AS(jackson_weights(0, 0), std::invalid_argument);
  CHECK_THROWS_AS(jackson_weights(2, -1), std::invalid_argument);
  // Tuple counts for this size exceed 128 bits.
  CHECK_THROWS_AS(jackson_weights(400000, 8), std::overflow_error);
  // The documented always-supported corner works.
  CHECK_NOTHROW(jackson_weights(64, 8));
}

TEST_CASE("fourier_coeff_1d quadrature on known targets") {
  const PeriodicFn abssin =
      PeriodicFn::univariate([](double x) { return std::abs(std::sin(x)); });
  CHECK(fourier_coeff_1d(abssin, 0, 4096).real() ==
        doctest::Approx(2.0 / kPi).epsilon(1e-6));
  CHECK(std::abs(fourier_coeff_1d(abssin, 1, 4096)) <= 1e-9);
  CHECK(fourier_coeff_1d(abssin, 2, 4096).real() ==
        doctest::Approx(-2.0 / (3.0 * kPi)).epsilon(1e-6));

  const PeriodicFn cosfn = PeriodicFn::univariate([](double x) { return std::cos(x); });
  CHECK(fourier_coeff_1d(cosfn, 1, 64).real() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(fourier_coeff_1d(cosfn, -1, 64).real() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(fourier_coeff_1d(cosfn, 0, 64)) <= 1e-14);

  CHECK_THROWS_AS(fourier_coeff_1d(cosfn, 3, 8), std::invalid_argument);
}

TEST_CASE("fourier_coeff_nd separable fast path equals dense quadrature") {
  auto f2 = [](const Eigen::VectorXd& x) {
    return std::cos(x[0]) * std::abs(std::sin(x[1]));
  };
  const PeriodicFn dense(2, f2);
  const PeriodicFn sep = PeriodicFn::separable(
      {[](double x) { return std::cos(x); },
       [](double x) { return std::abs(std::sin(x)); }});
  Eigen::VectorXi M(2);
  M << 256, 256;
  for (int n1 : {-2, 0, 1}) {
    for (int n2 : {-1, 0, 2}) {
      Eigen::VectorXi n(2);
      n << n1, n2;
      CHECK(std::abs(fourier_coeff_nd(sep, n, M) - fourier_coeff_nd(dense, n, M)) <=
            1e-12);
    }
  }
}

TEST_CASE("degree-2 smoothing of cos has the known closed form") {
  const PeriodicFn cosfn = PeriodicFn::univariate([](double x) { return std::cos(x); });

  const TrigPoly1D t20 = jackson_approx_1d(cosfn, 2, 0);
  CHECK(t20.degree == 2);
  CHECK(t20.hermitian);
  CHECK(std::abs(t20.c(1) - cplx(1.0 / 3.0, 0)) <= 1e-10);
  CHECK(std::abs(t20.c(-1) - cplx(1.0 / 3.0, 0)) <= 1e-10);
  CHECK(std::abs(t20.c(0)) <= 1e-10);
  CHECK(std::abs(t20.c(2)) <= 1e-10);
  CHECK(eval_poly(t20, 0.0).real() == doctest::Approx(2.0 / 3.0).epsilon(1e-10));

  const TrigPoly1D t21 = jackson_approx_1d(cosfn, 2, 1);
  CHECK(t21.degree == 2);
  CHECK(std::abs(t21.c(1) - cplx(7.0 / 12.0, 0)) <= 1e-10);
  CHECK(std::abs(t21.c(-1) - cplx(7.0 / 12.0, 0)) <= 1e-10);
  CHECK(std::abs(t21.c(2)) <= 1e-10);
  CHECK(eval_poly(t21, 0.0).real() == doctest::Approx(7.0 / 6.0).epsilon(1e-10));
}

TEST_CASE("smoothing operator is linear and respects hermitian symmetry") {
  const PeriodicFn f = PeriodicFn::univariate(
      [](double x) { return 0.7 * std::cos(2 * x) - 0.2 * std::sin(x) + 0.1; });
  const TrigPoly1D t = jackson_approx_1d(f, 6, 2);
  CHECK(t.hermitian);
  CHECK(t.hermitian_defect() <= 1e-12);
  // Grid-quadrature M below the floor is rejected.
  CHECK_THROWS_AS(jackson_approx_1d(f, 6, 2, 8), std::invalid_argument);
}

TEST_CASE("tensor smoothing of a product target is the coefficient product") {
  const PeriodicFn prod = PeriodicFn::separable(
      {[](double x) { return std::cos(x); }, [](double x) { return std::cos(x); }});
  Eigen::VectorXi N(2), K(2);
  N << 2, 2;
  K << 0, 0;
  const TrigPolyND t = jackson_approx_nd(prod, N, K);
  CHECK(t.dims() == 2);
  CHECK(t.degrees[0] == 2);
  CHECK(t.box_size() == 25);
  Eigen::VectorXi n(2);
  n << 1, 1;
  CHECK(std::abs(t.c(n) - cplx(1.0 / 9.0, 0)) <= 1e-10);
  n << 1, -1;
  CHECK(std::abs(t.c(n) - cplx(1.0 / 9.0, 0)) <= 1e-10);
  n << 1, 0;
  CHECK(std::abs(t.c(n)) <= 1e-10);

  Eigen::VectorXd x0(2);
  x0 << 0.0, 0.0;
  CHECK(eval_poly(t, x0).real() == doctest::Approx(4.0 / 9.0).epsilon(1e-9));
}

TEST_CASE("eval_poly_grid agrees with pointwise evaluation") {
  std::mt19937 rng(99);
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::VectorXi L(2);
  L << 2, 1;
  Eigen::VectorXcd c(5 * 3);
  for (int i = 0; i < c.size(); ++i) c[i] = cplx(g(rng), g(rng));
  const TrigPolyND p(L, c);

  std::vector<Eigen::VectorXd> axes(2);
  axes[0].resize(7);
  axes[1].resize(5);
  for (int i = 0; i < 7; ++i) axes[0][i] = -kPi + kTwoPi * i / 7;
  for (int i = 0; i < 5; ++i) axes[1][i] = -kPi + kTwoPi * i / 5;

  const Eigen::VectorXcd vals = eval_poly_grid(p, axes);
  REQUIRE(vals.size() == 35);
  for (int i = 0; i < 7; ++i) {
    for (int j = 0; j < 5; ++j) {
      Eigen::VectorXd x(2);
      x << axes[0][i], axes[1][j];
      CHECK(std::abs(vals[i * 5 + j] - eval_poly(p, x)) <= 1e-12);
    }
  }
}

TEST_CASE("sup_norm_estimate and modulus_of_continuity sanity") {
  const PeriodicFn cosfn = PeriodicFn::univariate([](double x) { return std::cos(x); });
  const double s = sup_norm_estimate(cosfn);
  CHECK(s == doctest::Approx(1.0).epsilon(1e-12));

  const PeriodicFn abssin =
      PeriodicFn::univariate([](double x) { return std::abs(std::sin(x)); });
  CHECK(sup_norm_estimate(abssin) <= 1.0);
  CHECK(sup_norm_estimate(abssin) >= 1.0 - 1e-4);

  // Lipschitz-1 target: omega(delta) <= delta, and monotone in delta.
  const double w1 = modulus_of_continuity(abssin, 0.1);
  const double w2 = modulus_of_continuity(abssin, 0.2);
  CHECK(w1 > 0.0);
  CHECK(w1 <= 0.1 + 1e-12);
  CHECK(w2 <= 0.2 + 1e-12);
  CHECK(w1 <= w2 + 1e-12);
}

TEST_CASE("kernel values are nonnegative and integrate to one") {
  for (int N : {2, 5, 10}) {
    for (int K : {0, 3}) {
      const JacksonWeights w = jackson_weights(N, K);
      const int M = 4096;
      double integral = 0;
      for (int m = 0; m < M; ++m) {
        const double t = -kPi + kTwoPi * m / M;
        const double v = jackson_kernel(w, t);
        CHECK(v >= -1e-12);
        integral += v * (kTwoPi / M);
      }
      CHECK(integral == doctest::Approx(1.0).epsilon(1e-8));
    }
  }
}

TEST_CASE("periodicity_defect separates periodic from aperiodic targets") {
  const PeriodicFn good = PeriodicFn::univariate([](double x) { return std::sin(x); });
  CHECK(good.periodicity_defect() <= 1e-9);
  const PeriodicFn bad = PeriodicFn::univariate([](double x) { return x; });
  CHECK(bad.periodicity_defect() > 1.0);
}
