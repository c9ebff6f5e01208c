// Trigonometric approximation core: Dirichlet sums, Fourier coefficients by
// uniform-grid quadrature, smoothing-kernel weights, and the derived
// polynomial approximants, plus grid norms.
#pragma once

#include "jqnn/types.hpp"

namespace jqnn {

using count_t = __int128;  // exact tuple counts for the kernel weights

// Kernel weights for parameters (N, K):
//   r = ceil((K+3)/2), h = floor(N/2)
//   mtilde[l] = #{(j_1..j_{2r}) in {-h/2..h/2}^{2r} : sum j_i = l},
//               computed as the 2r-fold self-convolution of an all-ones
//               vector of length h+1 (integer shift of the half-integer box)
//   m[n]      = sum_{k=1..K+1, k|n| <= r h} (-1)^{k+1} binom(K+1, k) mtilde[k|n|]
//   lambda    = 2 pi mtilde[0]   (normalizes the kernel to unit integral)
struct JacksonWeights {
  int N = 0, K = 0, r = 0;
  std::vector<count_t> mtilde;  // index l in [-rh, rh], stored with offset rh
  std::vector<count_t> m;       // index n in [-rh, rh], same offset
  double lambda = 0;

  int half_degree() const { return r * (N / 2); }  // rh = max frequency
  count_t mtilde_at(int l) const { return mtilde.at(static_cast<size_t>(l + half_degree())); }
  count_t m_at(int n) const { return m.at(static_cast<size_t>(n + half_degree())); }
};

// sum_{n=-a}^{a} e^{int} over the half-integer ladder n in {-a, -a+1, ..., a};
// equals sin((2a+1)t/2)/sin(t/2), and 2a+1 at t = 0. Requires 2a to be a
// nonnegative integer and |t| <= pi.
cplx dirichlet_sum(double a, double t);

// (1/M) sum_{m=0}^{M-1} f(x_m) e^{-i n x_m}, x_m = -pi + 2 pi m / M.
// Requires M >= 4(|n|+1).
cplx fourier_coeff_1d(const PeriodicFn& f, int n, int M);

// Tensor-product analogue on a uniform grid with M_j points per axis.
// Separably declared f uses the product of 1-D coefficients; otherwise a
// dense tensor quadrature (capped at d <= 3) is used.
cplx fourier_coeff_nd(const PeriodicFn& f, const Eigen::VectorXi& n,
                      const Eigen::VectorXi& M);

// Requires 1 <= N <= some overflow-bounded range (N <= 64, K <= 8 always
// supported; larger values work until the 128-bit counts would overflow,
// which throws std::overflow_error).
JacksonWeights jackson_weights(int N, int K);

// Degree r*floor(N/2) polynomial with coefficients m[n] fhat(n) / mtilde[0],
// where fhat is the grid quadrature above. M = 0 picks the default grid
// max(4096, 16(L+1)); otherwise M must be >= 8(L+1).
TrigPoly1D jackson_approx_1d(const PeriodicFn& f, int N, int K, int M = 0);

// Per-axis weights applied to the tensor Fourier coefficients. M = empty
// picks max(512, 16(L_j+1)) per axis; otherwise M_j >= 8(L_j+1).
TrigPolyND jackson_approx_nd(const PeriodicFn& f, const Eigen::VectorXi& N,
                             const Eigen::VectorXi& K,
                             Eigen::VectorXi M = Eigen::VectorXi());

cplx eval_poly(const TrigPoly1D& p, double x);
cplx eval_poly(const TrigPolyND& p, const Eigen::VectorXd& x);

// Evaluate on a tensor grid (axes[j] holds coordinate-j samples) by
// contracting one axis at a time; row-major output, last axis fastest.
Eigen::VectorXcd eval_poly_grid(const TrigPolyND& p,
                                const std::vector<Eigen::VectorXd>& axes);

// max |f| over a uniform grid (a lower bound on the sup norm). G = 0 picks
// 8192 (d=1), 512 per axis (d=2), 128 per axis (d=3). Total point count must
// be >= 1024; the dense grid is capped at d <= 3.
double sup_norm_estimate(const PeriodicFn& f, int G = 0);

// Grid estimate of sup_{|t| < delta} sup_x |f(x+t) - f(x)| (1-D). The shift
// set is dyadic: t = +-delta k/2^8 plus boundary refinements
// +-delta(1 - 2^-j). Reporting aid only.
double modulus_of_continuity(const PeriodicFn& f, double delta, int G = 4096);

// Kernel value J_{N,K}(t) = sin((h+1)t/2)^{2r} / (lambda sin(t/2)^{2r}) with
// h = floor(N/2); exposed for validity checks and the quadrature oracle.
double jackson_kernel(const JacksonWeights& w, double t);

}  // namespace jqnn
