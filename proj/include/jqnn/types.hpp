// Core value types: periodic target functions, trigonometric polynomials,
// and the error taxonomy shared by the approximation pipeline.
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace jqnn {

using cplx = std::complex<double>;

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kTwoPi = 2.0 * kPi;

// Target function is not bounded as required (e.g. |T| > 1 fed to the
// circuit compiler, or |c| > 1 for a monomial).
class NotBounded : public std::runtime_error {
 public:
  explicit NotBounded(const std::string& what) : std::runtime_error(what) {}
};

// Neither the analytic decomposition nor the numerical fallback reached an
// acceptable residual; carries the best residual seen.
class CompileFailed : public std::runtime_error {
 public:
  CompileFailed(const std::string& what, double best)
      : std::runtime_error(what), best_residual(best) {}
  double best_residual;
};

// Resource guard tripped (dense matrix size, dimension cap, ...).
class TooLarge : public std::runtime_error {
 public:
  explicit TooLarge(const std::string& what) : std::runtime_error(what) {}
};

// Real-valued 2pi-periodic function on R^d. Separable products can declare
// their per-axis factors, which unlocks the product fast path in the
// Fourier quadratures.
class PeriodicFn {
 public:
  using Eval = std::function<double(const Eigen::VectorXd&)>;
  using Eval1D = std::function<double(double)>;

  PeriodicFn(int dims, Eval eval) : dims_(dims), eval_(std::move(eval)) {
    if (dims_ < 1) throw std::invalid_argument("PeriodicFn: dims must be >= 1");
    if (!eval_) throw std::invalid_argument("PeriodicFn: empty evaluator");
  }

  static PeriodicFn univariate(Eval1D f) {
    PeriodicFn fn(1, [f](const Eigen::VectorXd& x) { return f(x[0]); });
    fn.factors_ = {std::move(f)};
    return fn;
  }

  // f(x) = prod_j factors[j](x_j)
  static PeriodicFn separable(std::vector<Eval1D> factors) {
    if (factors.empty())
      throw std::invalid_argument("PeriodicFn: no factors");
    auto fs = factors;
    PeriodicFn fn(static_cast<int>(factors.size()),
                  [fs](const Eigen::VectorXd& x) {
                    double p = 1.0;
                    for (int j = 0; j < x.size(); ++j) p *= fs[j](x[j]);
                    return p;
                  });
    fn.factors_ = std::move(factors);
    return fn;
  }

  int dims() const { return dims_; }
  bool separable() const { return !factors_.empty(); }
  const Eval1D& factor(int j) const { return factors_.at(j); }

  double operator()(const Eigen::VectorXd& x) const {
    if (x.size() != dims_)
      throw std::invalid_argument("PeriodicFn: argument dimension mismatch");
    return eval_(x);
  }
  double operator()(double x) const {
    if (dims_ != 1)
      throw std::invalid_argument("PeriodicFn: scalar call on d > 1 function");
    Eigen::VectorXd v(1);
    v[0] = x;
    return eval_(v);
  }

  // Max |f(x + 2pi e_j) - f(x)| over random probes; periodic inputs should
  // stay below 1e-9.
  double periodicity_defect(int probes = 16, unsigned seed = 12345) const;

  std::optional<int> smoothness;  // declared modulus-of-continuity order hint

 private:
  int dims_;
  Eval eval_;
  std::vector<Eval1D> factors_;
};

// sum_{n=-L}^{L} c_n e^{inx}; coeffs stored as c_{-L}..c_{L}.
struct TrigPoly1D {
  int degree = 0;
  Eigen::VectorXcd coeffs;  // size 2*degree + 1
  bool hermitian = false;   // c_{-n} = conj(c_n), i.e. real-valued on R

  TrigPoly1D() : coeffs(Eigen::VectorXcd::Zero(1)) {}
  TrigPoly1D(int L, Eigen::VectorXcd c, bool herm = false)
      : degree(L), coeffs(std::move(c)), hermitian(herm) {
    if (degree < 0 || coeffs.size() != 2 * degree + 1)
      throw std::invalid_argument("TrigPoly1D: coeffs size != 2L+1");
  }

  cplx c(int n) const { return coeffs[n + degree]; }
  cplx& c(int n) { return coeffs[n + degree]; }

  // max |c_{-n} - conj(c_n)|
  double hermitian_defect() const {
    double d = 0;
    for (int n = 0; n <= degree; ++n)
      d = std::max(d, std::abs(c(-n) - std::conj(c(n))));
    return d;
  }
};

// sum over the box n in prod_j [-L_j, L_j] of c_n e^{i n.x}; coefficients
// stored flat in row-major lexicographic order (n_1 slowest, n_d fastest).
struct TrigPolyND {
  Eigen::VectorXi degrees;  // L_j per axis
  Eigen::VectorXcd coeffs;  // size prod (2L_j + 1)
  bool hermitian = false;

  TrigPolyND() : degrees(Eigen::VectorXi::Zero(1)), coeffs(Eigen::VectorXcd::Zero(1)) {}
  TrigPolyND(Eigen::VectorXi L, Eigen::VectorXcd c, bool herm = false)
      : degrees(std::move(L)), coeffs(std::move(c)), hermitian(herm) {
    if (degrees.size() < 1) throw std::invalid_argument("TrigPolyND: no axes");
    long long total = 1;
    for (int j = 0; j < degrees.size(); ++j) {
      if (degrees[j] < 0) throw std::invalid_argument("TrigPolyND: negative degree");
      total *= 2LL * degrees[j] + 1;
    }
    if (coeffs.size() != total)
      throw std::invalid_argument("TrigPolyND: coeffs size != prod(2L_j+1)");
  }

  int dims() const { return static_cast<int>(degrees.size()); }
  long long box_size() const { return coeffs.size(); }

  long long flat_index(const Eigen::VectorXi& n) const {
    long long idx = 0;
    for (int j = 0; j < dims(); ++j) {
      if (std::abs(n[j]) > degrees[j])
        throw std::out_of_range("TrigPolyND: index outside box");
      idx = idx * (2LL * degrees[j] + 1) + (n[j] + degrees[j]);
    }
    return idx;
  }
  // inverse of flat_index
  Eigen::VectorXi multi_index(long long idx) const {
    Eigen::VectorXi n(dims());
    for (int j = dims() - 1; j >= 0; --j) {
      long long w = 2LL * degrees[j] + 1;
      n[j] = static_cast<int>(idx % w) - degrees[j];
      idx /= w;
    }
    return n;
  }

  cplx c(const Eigen::VectorXi& n) const { return coeffs[flat_index(n)]; }
  cplx& c(const Eigen::VectorXi& n) { return coeffs[flat_index(n)]; }
};

}  // namespace jqnn
