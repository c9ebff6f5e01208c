// End-to-end flow: smooth a periodic target into a bounded trigonometric
// polynomial, synthesize circuit parameters for it, and measure sup errors
// over N/K sweeps.
#pragma once

#include <string>
#include <vector>

#include "jqnn/compile.hpp"
#include "jqnn/lcu.hpp"
#include "jqnn/trig.hpp"
#include "jqnn/types.hpp"

namespace jqnn {

// Univariate model: predict(x) = c * Re <0|U(x)|0>.
struct UniQnnModel {
  int N = 1;
  int K = 0;
  int L = 0;  // half-degree, depth is 2L
  double c = 0.0;
  QnnParams params;
  double compile_residual = 0.0;
  std::string method;  // "analytic", "least-squares", "closed-form", "zero"

  double predict(double x) const;
  long long param_count() const { return params.param_count(); }
};

// Multivariate model: predict(x) = c * 2^q * Re(lcu_amplitude_fast).
struct MultiQnnModel {
  Eigen::VectorXi N, K, L;
  int d = 0;
  int q = 0;
  long long nblocks = 0;  // prod_j (2 L_j + 1)
  double c = 0.0;
  BlockSpec spec;
  double max_block_residual = 0.0;

  double predict(const Eigen::VectorXd& x) const;
  // Tensor-grid prediction, row-major (last axis fastest); much faster than
  // per-point predict because per-axis block amplitudes are cached.
  Eigen::VectorXd predict_grid(const std::vector<Eigen::VectorXd>& axes) const;
  long long param_count() const;
};

struct ErrorRow {
  int N = 0;
  int K = 0;
  int L = 0;
  long long param_count = 0;
  double poly_sup_error = 0.0;
  double qnn_sup_error = 0.0;
  double compile_residual = 0.0;
};

struct ErrorCurve {
  std::vector<ErrorRow> rows;
};

// Builds the degree-L smoothing of f (L = ceil((K+3)/2) * floor(N/2)), scales
// it by c = (2^{K+1}-1) * sup|f| * (1+1e-6) so the compiler precondition
// holds, and synthesizes the circuit. f must be 2pi-periodic (probed) and
// real. A target that vanishes on the grid short-circuits to the zero model.
UniQnnModel approximate_univariate(const PeriodicFn& f, int K, int N,
                                   const CompileOptions& opts = CompileOptions());

// Multivariate analogue: one selected branch per coefficient of the smoothed
// polynomial, in lexicographic multi-index order. Branch i compiles
// (c_n / c) e^{i n_1 x_1} on the first coordinate and unit monomials
// e^{i n_j x_j} on the rest; c = sup|f| * prod_j (2^{K_j+1}-1) * (1+1e-6).
MultiQnnModel approximate_multivariate(const PeriodicFn& f,
                                       const Eigen::VectorXi& K,
                                       const Eigen::VectorXi& N,
                                       const CompileOptions& opts = CompileOptions());

// max |f - predict| over the uniform grid (G points on [-pi, pi) for d = 1,
// per_axis points per coordinate otherwise).
double sup_error(const std::function<double(double)>& predict,
                 const PeriodicFn& f, int G = 4096);
double sup_error(const std::function<double(const Eigen::VectorXd&)>& predict,
                 const PeriodicFn& f, int per_axis = 256);
double sup_error(const UniQnnModel& m, const PeriodicFn& f, int G = 4096);
double sup_error(const MultiQnnModel& m, const PeriodicFn& f, int per_axis = 256);
// max |f - Re T| on the same grids
double sup_error(const TrigPoly1D& T, const PeriodicFn& f, int G = 4096);
double sup_error(const TrigPolyND& T, const PeriodicFn& f, int per_axis = 256);

// Wraps an M-periodic callable as a 2pi-periodic one: f(x) = g(M x / 2pi).
PeriodicFn rescale_period(const PeriodicFn::Eval1D& g, double period);
// Inverse wrapper: maps a 2pi-axis predictor back to the M-periodic axis.
std::function<double(double)> to_period(std::function<double(double)> predict,
                                        double period);

// Smallest odd cutoff whose spectral tail bound (4/pi) e^{-(m+2)^2 t} drops
// below `tail`.
int heat_truncation(double t, double tail = 1e-10);
// sum_{odd m <= trunc} (4/(pi m)) e^{-m^2 t} sin(m s)
double heat_series_1d(double t, double s, int trunc);
// Same value by adaptive Simpson quadrature of the periodized Gaussian
// against the square-wave initial data; independent cross-check.
double heat_convolution_1d(double t, double s);
// Product over axes of the 1-d series; trunc = 0 picks heat_truncation(t).
PeriodicFn heat_reference(double t, int d, int trunc = 0);

enum class ExperimentName { fig1_abssin, fig2_abssin25, heat };

struct ExperimentSpec {
  ExperimentName name = ExperimentName::fig1_abssin;
  int n_min = 1, n_max = 20;
  int k_min = 0, k_max = 5;
  double t = 0.5;  // heat only
  CompileOptions compile;

  static ExperimentSpec defaults(ExperimentName name, double t = 0.5);
};

// Sweeps the (N, K) grid for the named target (|sin|, |sin|^2.5, or the
// two-variable heat solution at time t) and records one row per cell, ordered
// by (N, K). The heat run first cross-checks the series solution against the
// quadrature oracle at one probe point.
ErrorCurve run_experiment(const ExperimentSpec& spec);

// Least-squares slope of log(qnn_sup_error) vs log(N) over rows with the
// given K and N >= min_N. Throws if fewer than two distinct N remain or any
// selected error is not positive.
double fit_loglog_slope(const ErrorCurve& curve, int K, int min_N = 1);

// Shared target registry: abssin, abssin25, zero, cos, prodcos, heat.
// d is the dimension (zero/prodcos/heat accept any d >= 1, the rest d = 1);
// t is the heat time.
PeriodicFn builtin_function(const std::string& name, int d = 1, double t = 0.5);

}  // namespace jqnn
