#include "jqnn/trig.hpp"

#include <cmath>
#include <random>

namespace jqnn {

namespace {

double to_double(count_t v) { return static_cast<double>(v); }

count_t checked_mul(count_t a, count_t b) {
  count_t out;
  if (__builtin_mul_overflow(a, b, &out))
    throw std::overflow_error(
        "jackson_weights: tuple counts exceed the 128-bit range (N, K outside "
        "the supported range)");
  return out;
}

count_t binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  count_t num = 1;
  for (int i = 1; i <= k; ++i) num = checked_mul(num, n - k + i) / i;
  return num;
}

// Single accumulation order shared by every grid quadrature so cached and
// uncached paths agree bit for bit.
cplx grid_coeff(const std::vector<double>& values, int n) {
  const int M = static_cast<int>(values.size());
  cplx acc(0, 0);
  for (int m = 0; m < M; ++m) {
    double x = -kPi + kTwoPi * m / M;
    acc += values[m] * std::polar(1.0, -static_cast<double>(n) * x);
  }
  return acc / static_cast<double>(M);
}

double ipow(double b, int e) {
  double out = 1;
  for (int i = 0; i < e; ++i) out *= b;
  return out;
}

}  // namespace

cplx dirichlet_sum(double a, double t) {
  double two_a = 2.0 * a;
  if (a < 0 || std::abs(two_a - std::llround(two_a)) > 1e-9)
    throw std::invalid_argument("dirichlet_sum: a must be a nonnegative half-integer");
  if (std::abs(t) > kPi + 1e-12)
    throw std::invalid_argument("dirichlet_sum: |t| must be <= pi");
  if (t == 0.0) return cplx(two_a + 1.0, 0.0);
  return cplx(std::sin((two_a + 1.0) * t / 2.0) / std::sin(t / 2.0), 0.0);
}

cplx fourier_coeff_1d(const PeriodicFn& f, int n, int M) {
  if (f.dims() != 1)
    throw std::invalid_argument("fourier_coeff_1d: needs a 1-D function");
  if (M < 4 * (std::abs(n) + 1))
    throw std::invalid_argument("fourier_coeff_1d: grid must have M >= 4(|n|+1)");
  std::vector<double> values(M);
  for (int m = 0; m < M; ++m) values[m] = f(-kPi + kTwoPi * m / M);
  return grid_coeff(values, n);
}

cplx fourier_coeff_nd(const PeriodicFn& f, const Eigen::VectorXi& n,
                      const Eigen::VectorXi& M) {
  const int d = f.dims();
  if (n.size() != d || M.size() != d)
    throw std::invalid_argument("fourier_coeff_nd: dimension mismatch");
  for (int j = 0; j < d; ++j)
    if (M[j] < 4 * (std::abs(n[j]) + 1))
      throw std::invalid_argument("fourier_coeff_nd: grid must have M_j >= 4(|n_j|+1)");

  if (f.separable()) {
    cplx prod(1, 0);
    for (int j = 0; j < d; ++j) {
      PeriodicFn fj = PeriodicFn::univariate(f.factor(j));
      prod *= fourier_coeff_1d(fj, n[j], M[j]);
    }
    return prod;
  }

  if (d > 3)
    throw std::invalid_argument(
        "fourier_coeff_nd: dense tensor quadrature capped at d <= 3 "
        "(declare the function separable for higher d)");

  long long total = 1;
  for (int j = 0; j < d; ++j) total *= M[j];
  cplx acc(0, 0);
  Eigen::VectorXd x(d);
  for (long long flat = 0; flat < total; ++flat) {
    long long rem = flat;
    double phase = 0;
    for (int j = d - 1; j >= 0; --j) {
      long long mj = rem % M[j];
      rem /= M[j];
      x[j] = -kPi + kTwoPi * mj / M[j];
      phase -= n[j] * x[j];
    }
    acc += f(x) * std::polar(1.0, phase);
  }
  return acc / static_cast<double>(total);
}

JacksonWeights jackson_weights(int N, int K) {
  if (N < 1 || K < 0)
    throw std::invalid_argument("jackson_weights: need N >= 1, K >= 0");
  JacksonWeights w;
  w.N = N;
  w.K = K;
  w.r = (K + 4) / 2;  // ceil((K+3)/2)
  const int h = N / 2;
  const int folds = 2 * w.r;

  // Overflow guard: the total tuple count is (h+1)^{2r}.
  count_t bound = 1;
  for (int i = 0; i < folds; ++i) bound = checked_mul(bound, h + 1);

  // 2r-fold self-convolution of ones(h+1); index s = l + rh.
  std::vector<count_t> cur(h + 1, 1);
  for (int step = 1; step < folds; ++step) {
    std::vector<count_t> next(cur.size() + h, 0);
    for (size_t i = 0; i < cur.size(); ++i)
      for (int j = 0; j <= h; ++j) next[i + j] += cur[i];
    cur.swap(next);
  }
  w.mtilde = std::move(cur);

  const int rh = w.half_degree();
  w.m.assign(2 * rh + 1, 0);
  for (int n = -rh; n <= rh; ++n) {
    count_t acc = 0;
    for (int k = 1; k <= K + 1; ++k) {
      long long kn = static_cast<long long>(k) * std::abs(n);
      if (kn > rh) continue;
      count_t term = checked_mul(binom(K + 1, k), w.mtilde_at(static_cast<int>(kn)));
      acc += (k % 2 == 1) ? term : -term;
    }
    w.m[n + rh] = acc;
  }
  w.lambda = kTwoPi * to_double(w.mtilde_at(0));
  return w;
}

double jackson_kernel(const JacksonWeights& w, double t) {
  const int h = w.N / 2;
  double d = dirichlet_sum(h / 2.0, t).real();
  return ipow(d, 2 * w.r) / w.lambda;
}

TrigPoly1D jackson_approx_1d(const PeriodicFn& f, int N, int K, int M) {
  if (f.dims() != 1)
    throw std::invalid_argument("jackson_approx_1d: needs a 1-D function");
  JacksonWeights w = jackson_weights(N, K);
  const int L = w.half_degree();
  if (M == 0) M = std::max(4096, 16 * (L + 1));
  if (M < 8 * (L + 1))
    throw std::invalid_argument("jackson_approx_1d: grid must have M >= 8(L+1)");

  std::vector<double> values(M);
  for (int m = 0; m < M; ++m) values[m] = f(-kPi + kTwoPi * m / M);

  const double m0 = to_double(w.mtilde_at(0));
  Eigen::VectorXcd c(2 * L + 1);
  for (int n = -L; n <= L; ++n)
    c[n + L] = grid_coeff(values, n) * (to_double(w.m_at(n)) / m0);
  return TrigPoly1D(L, std::move(c), true);
}

TrigPolyND jackson_approx_nd(const PeriodicFn& f, const Eigen::VectorXi& N,
                             const Eigen::VectorXi& K, Eigen::VectorXi M) {
  const int d = f.dims();
  if (N.size() != d || K.size() != d)
    throw std::invalid_argument("jackson_approx_nd: dimension mismatch");

  std::vector<JacksonWeights> w(d);
  Eigen::VectorXi L(d);
  for (int j = 0; j < d; ++j) {
    w[j] = jackson_weights(N[j], K[j]);
    L[j] = w[j].half_degree();
  }
  if (M.size() == 0) {
    M.resize(d);
    for (int j = 0; j < d; ++j) M[j] = std::max(512, 16 * (L[j] + 1));
  }
  if (M.size() != d)
    throw std::invalid_argument("jackson_approx_nd: grid dimension mismatch");
  for (int j = 0; j < d; ++j)
    if (M[j] < 8 * (L[j] + 1))
      throw std::invalid_argument("jackson_approx_nd: grid must have M_j >= 8(L_j+1)");

  long long box = 1;
  for (int j = 0; j < d; ++j) box *= 2LL * L[j] + 1;

  if (f.separable()) {
    // Product of 1-D quadratures per axis, then per-axis weights.
    std::vector<Eigen::VectorXcd> axis(d);
    for (int j = 0; j < d; ++j) {
      std::vector<double> values(M[j]);
      for (int m = 0; m < M[j]; ++m)
        values[m] = f.factor(j)(-kPi + kTwoPi * m / M[j]);
      axis[j].resize(2 * L[j] + 1);
      const double m0 = to_double(w[j].mtilde_at(0));
      for (int n = -L[j]; n <= L[j]; ++n)
        axis[j][n + L[j]] = grid_coeff(values, n) * (to_double(w[j].m_at(n)) / m0);
    }
    TrigPolyND out(L, Eigen::VectorXcd::Zero(box), true);
    for (long long flat = 0; flat < box; ++flat) {
      Eigen::VectorXi idx = out.multi_index(flat);
      cplx prod(1, 0);
      for (int j = 0; j < d; ++j) prod *= axis[j][idx[j] + L[j]];
      out.coeffs[flat] = prod;
    }
    return out;
  }

  if (d > 3)
    throw std::invalid_argument(
        "jackson_approx_nd: dense tensor quadrature capped at d <= 3");

  // Dense tensor grid, then one axis of the transform at a time.
  long long total = 1;
  for (int j = 0; j < d; ++j) total *= M[j];
  std::vector<cplx> cur(total);
  {
    Eigen::VectorXd x(d);
    for (long long flat = 0; flat < total; ++flat) {
      long long rem = flat;
      for (int j = d - 1; j >= 0; --j) {
        x[j] = -kPi + kTwoPi * (rem % M[j]) / M[j];
        rem /= M[j];
      }
      cur[flat] = f(x);
    }
  }
  std::vector<long long> sz(d);
  for (int j = 0; j < d; ++j) sz[j] = M[j];
  for (int j = d - 1; j >= 0; --j) {
    long long inner = 1, outer = 1;
    for (int k = j + 1; k < d; ++k) inner *= sz[k];
    for (int k = 0; k < j; ++k) outer *= sz[k];
    const long long mj = sz[j], nj = 2LL * L[j] + 1;
    std::vector<cplx> next(outer * nj * inner, cplx(0, 0));
    for (long long o = 0; o < outer; ++o)
      for (long long nf = 0; nf < nj; ++nf) {
        const int n = static_cast<int>(nf) - L[j];
        for (long long m = 0; m < mj; ++m) {
          const double x = -kPi + kTwoPi * m / mj;
          const cplx ph = std::polar(1.0 / mj, -static_cast<double>(n) * x);
          const cplx* src = cur.data() + (o * mj + m) * inner;
          cplx* dst = next.data() + (o * nj + nf) * inner;
          for (long long i = 0; i < inner; ++i) dst[i] += src[i] * ph;
        }
      }
    cur.swap(next);
    sz[j] = nj;
  }

  TrigPolyND out(L, Eigen::VectorXcd::Zero(box), true);
  for (long long flat = 0; flat < box; ++flat) {
    Eigen::VectorXi idx = out.multi_index(flat);
    double wprod = 1;
    for (int j = 0; j < d; ++j)
      wprod *= to_double(w[j].m_at(idx[j])) / to_double(w[j].mtilde_at(0));
    out.coeffs[flat] = cur[flat] * wprod;
  }
  return out;
}

cplx eval_poly(const TrigPoly1D& p, double x) {
  cplx acc(0, 0);
  for (int n = -p.degree; n <= p.degree; ++n)
    acc += p.c(n) * std::polar(1.0, n * x);
  return acc;
}

cplx eval_poly(const TrigPolyND& p, const Eigen::VectorXd& x) {
  const int d = p.dims();
  if (x.size() != d)
    throw std::invalid_argument("eval_poly: point dimension mismatch");
  // Per-axis phase tables, then one pass over the box.
  std::vector<Eigen::VectorXcd> table(d);
  for (int j = 0; j < d; ++j) {
    table[j].resize(2 * p.degrees[j] + 1);
    for (int n = -p.degrees[j]; n <= p.degrees[j]; ++n)
      table[j][n + p.degrees[j]] = std::polar(1.0, n * x[j]);
  }
  cplx acc(0, 0);
  const long long box = p.box_size();
  for (long long flat = 0; flat < box; ++flat) {
    long long rem = flat;
    cplx ph(1, 0);
    for (int j = d - 1; j >= 0; --j) {
      long long wdt = 2LL * p.degrees[j] + 1;
      ph *= table[j][rem % wdt];
      rem /= wdt;
    }
    acc += p.coeffs[flat] * ph;
  }
  return acc;
}

Eigen::VectorXcd eval_poly_grid(const TrigPolyND& p,
                                const std::vector<Eigen::VectorXd>& axes) {
  const int d = p.dims();
  if (static_cast<int>(axes.size()) != d)
    throw std::invalid_argument("eval_poly_grid: axis count mismatch");
  // Contract axis j: (front, w_j, back) x phases(G_j, w_j) -> (front, G_j, back).
  Eigen::VectorXcd cur = p.coeffs;
  std::vector<long long> dims(d);
  for (int j = 0; j < d; ++j) dims[j] = 2LL * p.degrees[j] + 1;
  for (int j = 0; j < d; ++j) {
    const long long w = dims[j];
    const long long g = axes[j].size();
    if (g < 1) throw std::invalid_argument("eval_poly_grid: empty axis");
    Eigen::MatrixXcd phases(g, w);
    for (long long a = 0; a < g; ++a)
      for (int n = -p.degrees[j]; n <= p.degrees[j]; ++n)
        phases(a, n + p.degrees[j]) = std::polar(1.0, n * axes[j][a]);
    long long front = 1, back = 1;
    for (int k = 0; k < j; ++k) front *= dims[k];
    for (int k = j + 1; k < d; ++k) back *= dims[k];
    Eigen::VectorXcd next(front * g * back);
    for (long long a = 0; a < front; ++a)
      for (long long b = 0; b < back; ++b) {
        for (long long gg = 0; gg < g; ++gg) {
          cplx acc(0, 0);
          for (long long m = 0; m < w; ++m)
            acc += cur[(a * w + m) * back + b] * phases(gg, m);
          next[(a * g + gg) * back + b] = acc;
        }
      }
    cur.swap(next);
    dims[j] = g;
  }
  return cur;
}

double sup_norm_estimate(const PeriodicFn& f, int G) {
  const int d = f.dims();
  if (d > 3)
    throw std::invalid_argument("sup_norm_estimate: dense grid capped at d <= 3");
  if (G == 0) G = (d == 1) ? 8192 : (d == 2 ? 512 : 128);
  long long total = 1;
  for (int j = 0; j < d; ++j) total *= G;
  if (total < 1024)
    throw std::invalid_argument("sup_norm_estimate: grid must have >= 1024 points");
  double best = 0;
  Eigen::VectorXd x(d);
  for (long long flat = 0; flat < total; ++flat) {
    long long rem = flat;
    for (int j = d - 1; j >= 0; --j) {
      x[j] = -kPi + kTwoPi * (rem % G) / G;
      rem /= G;
    }
    best = std::max(best, std::abs(f(x)));
  }
  return best;
}

double modulus_of_continuity(const PeriodicFn& f, double delta, int G) {
  if (f.dims() != 1)
    throw std::invalid_argument("modulus_of_continuity: needs a 1-D function");
  if (delta < 0)
    throw std::invalid_argument("modulus_of_continuity: delta must be >= 0");
  if (G < 64)
    throw std::invalid_argument("modulus_of_continuity: grid too small");
  if (delta == 0) return 0;

  std::vector<double> shifts;
  for (int k = 1; k < 256; ++k) shifts.push_back(delta * k / 256.0);
  for (int j = 1; j <= 45; ++j) shifts.push_back(delta * (1.0 - std::ldexp(1.0, -j)));
  shifts.push_back(std::nextafter(delta, 0.0));

  std::vector<double> values(G);
  for (int m = 0; m < G; ++m) values[m] = f(-kPi + kTwoPi * m / G);

  double best = 0;
  for (double t : shifts)
    for (int m = 0; m < G; ++m) {
      double x = -kPi + kTwoPi * m / G;
      best = std::max(best, std::abs(f(x + t) - values[m]));
      best = std::max(best, std::abs(f(x - t) - values[m]));
    }
  return best;
}

double PeriodicFn::periodicity_defect(int probes, unsigned seed) const {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-kPi, kPi);
  double worst = 0;
  for (int p = 0; p < probes; ++p) {
    Eigen::VectorXd x(dims_);
    for (int j = 0; j < dims_; ++j) x[j] = uni(rng);
    const double base = eval_(x);
    for (int j = 0; j < dims_; ++j) {
      Eigen::VectorXd y = x;
      y[j] += kTwoPi;
      worst = std::max(worst, std::abs(eval_(y) - base));
    }
  }
  return worst;
}

}  // namespace jqnn
