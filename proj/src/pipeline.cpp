#include "jqnn/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "jqnn/parallel.hpp"

namespace jqnn {

namespace {

// Multi-indices of the coefficient box in row-major lexicographic order
// (last axis fastest), matching the flat coefficient layout.
std::vector<Eigen::VectorXi> lex_ordering(const Eigen::VectorXi& L) {
  const int d = static_cast<int>(L.size());
  long long box = 1;
  for (int j = 0; j < d; ++j) box *= 2LL * L[j] + 1;
  std::vector<Eigen::VectorXi> order(box);
  Eigen::VectorXi n = -L;
  for (long long i = 0; i < box; ++i) {
    order[i] = n;
    for (int j = d - 1; j >= 0; --j) {
      if (n[j] < L[j]) {
        ++n[j];
        break;
      }
      n[j] = -L[j];
    }
  }
  return order;
}

std::string index_string(const Eigen::VectorXi& n) {
  std::string s = "(";
  for (int j = 0; j < n.size(); ++j) {
    if (j) s += ",";
    s += std::to_string(n[j]);
  }
  return s + ")";
}

double scale_factor(int K) { return std::ldexp(1.0, K + 1) - 1.0; }

void check_periodic(const PeriodicFn& f, const char* who) {
  if (f.periodicity_defect() > 1e-9)
    throw std::invalid_argument(std::string(who) + ": target is not 2pi-periodic");
}

}  // namespace

double UniQnnModel::predict(double x) const {
  return c * circuit_amplitude(params, x).real();
}

double MultiQnnModel::predict(const Eigen::VectorXd& x) const {
  return c * std::ldexp(1.0, q) * lcu_amplitude_fast(spec, x).real();
}

Eigen::VectorXd MultiQnnModel::predict_grid(
    const std::vector<Eigen::VectorXd>& axes) const {
  const Eigen::VectorXcd amps = lcu_amplitude_grid(spec, axes);
  return c * std::ldexp(1.0, q) * amps.real();
}

long long MultiQnnModel::param_count() const {
  long long total = 0;
  for (const auto& blk : spec.blocks)
    for (const auto& p : blk) total += p.param_count();
  return total;
}

UniQnnModel approximate_univariate(const PeriodicFn& f, int K, int N,
                                   const CompileOptions& opts) {
  if (f.dims() != 1)
    throw std::invalid_argument("approximate_univariate: need a 1-d target");
  if (N < 1 || K < 0)
    throw std::invalid_argument("approximate_univariate: need N >= 1, K >= 0");
  check_periodic(f, "approximate_univariate");

  UniQnnModel model;
  model.N = N;
  model.K = K;
  model.L = jackson_weights(N, K).half_degree();
  model.c = scale_factor(K) * sup_norm_estimate(f) * (1 + 1e-6);
  if (model.c == 0.0) {
    model.params = QnnParams::zero(2 * model.L);
    model.method = "zero";
    return model;
  }
  TrigPoly1D T = jackson_approx_1d(f, N, K);
  T.coeffs /= model.c;
  auto [params, report] = compile_trig_poly(T, opts);
  model.params = std::move(params);
  model.compile_residual = report.residual;
  model.method = report.method;
  return model;
}

MultiQnnModel approximate_multivariate(const PeriodicFn& f,
                                       const Eigen::VectorXi& K,
                                       const Eigen::VectorXi& N,
                                       const CompileOptions& opts) {
  const int d = f.dims();
  if (K.size() != d || N.size() != d)
    throw std::invalid_argument(
        "approximate_multivariate: K/N length must match the target dimension");
  for (int j = 0; j < d; ++j)
    if (N[j] < 1 || K[j] < 0)
      throw std::invalid_argument(
          "approximate_multivariate: need N_j >= 1, K_j >= 0");
  check_periodic(f, "approximate_multivariate");

  MultiQnnModel model;
  model.N = N;
  model.K = K;
  model.d = d;
  model.L.resize(d);
  double fac = 1.0;
  for (int j = 0; j < d; ++j) {
    model.L[j] = jackson_weights(N[j], K[j]).half_degree();
    fac *= scale_factor(K[j]);
  }
  model.c = sup_norm_estimate(f) * fac * (1 + 1e-6);

  BlockSpec spec;
  spec.d = d;
  spec.degrees = model.L;
  spec.ordering = lex_ordering(model.L);
  const long long nb = spec.nblocks();
  spec.q = ceil_log2(nb);
  model.nblocks = nb;
  model.q = spec.q;
  spec.blocks.assign(nb, std::vector<QnnParams>(d));

  if (model.c == 0.0) {
    for (long long i = 0; i < nb; ++i)
      for (int j = 0; j < d; ++j)
        spec.blocks[i][j] = QnnParams::zero(2 * std::abs(spec.ordering[i][j]));
    spec.validate();
    model.spec = std::move(spec);
    return model;
  }

  const TrigPolyND T = jackson_approx_nd(f, N, K);

  // Axes beyond the first carry coefficient-free unit monomials; compile each
  // frequency once and reuse it across blocks.
  std::vector<std::vector<QnnParams>> unit(d);
  std::vector<std::vector<double>> unit_res(d);
  for (int j = 1; j < d; ++j) {
    const int w = 2 * model.L[j] + 1;
    unit[j].resize(w);
    unit_res[j].assign(w, 0.0);
    parallel_for(w, [&](long long idx) {
      const int n = static_cast<int>(idx) - model.L[j];
      auto [p, rep] = compile_monomial(1.0, n, opts);
      unit[j][idx] = std::move(p);
      unit_res[j][idx] = rep.residual;
    });
  }

  std::vector<double> residual(nb, 0.0);
  parallel_for(nb, [&](long long i) {
    const Eigen::VectorXi& n = spec.ordering[i];
    try {
      auto [p, rep] = compile_monomial(T.coeffs[i] / model.c, n[0], opts);
      spec.blocks[i][0] = std::move(p);
      residual[i] = rep.residual;
    } catch (const CompileFailed& e) {
      throw CompileFailed("block " + index_string(n) + ": " + e.what(),
                          e.best_residual);
    }
    for (int j = 1; j < d; ++j) {
      spec.blocks[i][j] = unit[j][n[j] + model.L[j]];
      residual[i] = std::max(residual[i], unit_res[j][n[j] + model.L[j]]);
    }
  });
  model.max_block_residual = *std::max_element(residual.begin(), residual.end());
  spec.validate();
  model.spec = std::move(spec);
  return model;
}

double sup_error(const std::function<double(double)>& predict,
                 const PeriodicFn& f, int G) {
  if (f.dims() != 1)
    throw std::invalid_argument("sup_error: 1-d overload on a d > 1 target");
  if (G < 2) throw std::invalid_argument("sup_error: grid too small");
  double worst = 0;
  for (int g = 0; g < G; ++g) {
    const double x = -kPi + kTwoPi * g / G;
    worst = std::max(worst, std::abs(f(x) - predict(x)));
  }
  return worst;
}

namespace {

// Shared d-dimensional sweep: |f - approx| maximized over the tensor grid,
// approx supplied either pointwise or as precomputed row-major grid values.
double sup_error_grid(const PeriodicFn& f, int per_axis,
                      const Eigen::VectorXd* grid_values,
                      const std::function<double(const Eigen::VectorXd&)>* fn) {
  const int d = f.dims();
  if (per_axis < 2) throw std::invalid_argument("sup_error: grid too small");
  long long total = 1;
  for (int j = 0; j < d; ++j) total *= per_axis;
  if (grid_values && grid_values->size() != total)
    throw std::invalid_argument("sup_error: grid size mismatch");
  double worst = 0;
  Eigen::VectorXd x(d);
  std::vector<int> idx(d, 0);
  for (long long flat = 0; flat < total; ++flat) {
    for (int j = 0; j < d; ++j) x[j] = -kPi + kTwoPi * idx[j] / per_axis;
    const double approx = grid_values ? (*grid_values)[flat] : (*fn)(x);
    worst = std::max(worst, std::abs(f(x) - approx));
    for (int j = d - 1; j >= 0; --j) {
      if (++idx[j] < per_axis) break;
      idx[j] = 0;
    }
  }
  return worst;
}

std::vector<Eigen::VectorXd> uniform_axes(int d, int per_axis) {
  Eigen::VectorXd ax(per_axis);
  for (int g = 0; g < per_axis; ++g) ax[g] = -kPi + kTwoPi * g / per_axis;
  return std::vector<Eigen::VectorXd>(d, ax);
}

}  // namespace

double sup_error(const std::function<double(const Eigen::VectorXd&)>& predict,
                 const PeriodicFn& f, int per_axis) {
  return sup_error_grid(f, per_axis, nullptr, &predict);
}

double sup_error(const UniQnnModel& m, const PeriodicFn& f, int G) {
  return sup_error([&](double x) { return m.predict(x); }, f, G);
}

double sup_error(const MultiQnnModel& m, const PeriodicFn& f, int per_axis) {
  if (f.dims() != m.d)
    throw std::invalid_argument("sup_error: model/target dimension mismatch");
  const Eigen::VectorXd pred = m.predict_grid(uniform_axes(m.d, per_axis));
  return sup_error_grid(f, per_axis, &pred, nullptr);
}

double sup_error(const TrigPoly1D& T, const PeriodicFn& f, int G) {
  return sup_error([&](double x) { return eval_poly(T, x).real(); }, f, G);
}

double sup_error(const TrigPolyND& T, const PeriodicFn& f, int per_axis) {
  if (f.dims() != T.dims())
    throw std::invalid_argument("sup_error: polynomial/target dimension mismatch");
  const Eigen::VectorXd vals =
      eval_poly_grid(T, uniform_axes(T.dims(), per_axis)).real();
  return sup_error_grid(f, per_axis, &vals, nullptr);
}

PeriodicFn rescale_period(const PeriodicFn::Eval1D& g, double period) {
  if (!(period > 0))
    throw std::invalid_argument("rescale_period: period must be positive");
  if (!g) throw std::invalid_argument("rescale_period: empty callable");
  const double scale = period / kTwoPi;
  return PeriodicFn::univariate([g, scale](double x) { return g(scale * x); });
}

std::function<double(double)> to_period(std::function<double(double)> predict,
                                        double period) {
  if (!(period > 0))
    throw std::invalid_argument("to_period: period must be positive");
  if (!predict) throw std::invalid_argument("to_period: empty callable");
  const double scale = kTwoPi / period;
  return [predict = std::move(predict), scale](double s) {
    return predict(scale * s);
  };
}

int heat_truncation(double t, double tail) {
  if (!(t > 0)) throw std::invalid_argument("heat_truncation: t must be positive");
  if (!(tail > 0)) throw std::invalid_argument("heat_truncation: tail must be positive");
  int m = 1;
  while (4.0 / kPi * std::exp(-static_cast<double>(m + 2) * (m + 2) * t) >= tail) {
    m += 2;
    if (m > 200001)
      throw std::invalid_argument("heat_truncation: t too small for a usable cutoff");
  }
  return m;
}

double heat_series_1d(double t, double s, int trunc) {
  if (!(t > 0) || trunc < 1)
    throw std::invalid_argument("heat_series_1d: need t > 0 and trunc >= 1");
  double u = 0;
  for (int m = 1; m <= trunc; m += 2)
    u += 4.0 / (kPi * m) * std::exp(-static_cast<double>(m) * m * t) * std::sin(m * s);
  return u;
}

double heat_convolution_1d(double t, double s) {
  if (!(t > 0))
    throw std::invalid_argument("heat_convolution_1d: t must be positive");
  int mk = 1;
  while (std::exp(-static_cast<double>(mk) * mk * t) >= 1e-18) ++mk;
  // Periodized Gaussian: (1/2pi)(1 + 2 sum_m e^{-m^2 t} cos(m v)).
  auto kernel = [&](double v) {
    double acc = 0.5;
    for (int m = 1; m <= mk; ++m)
      acc += std::exp(-static_cast<double>(m) * m * t) * std::cos(m * v);
    return acc / kPi;
  };
  auto simpson = [&](double a, double b, int n) {
    const double h = (b - a) / n;
    double acc = kernel(s - a) + kernel(s - b);
    for (int i = 1; i < n; ++i)
      acc += kernel(s - (a + i * h)) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
  };
  // Square-wave data: +1 on (0, pi), -1 on (-pi, 0); refine until stable.
  auto value = [&](int n) { return simpson(0.0, kPi, n) - simpson(-kPi, 0.0, n); };
  double prev = value(512);
  for (int n = 1024; n <= (1 << 18); n *= 2) {
    const double cur = value(n);
    if (std::abs(cur - prev) <= 1e-11) return cur;
    prev = cur;
  }
  return prev;
}

PeriodicFn heat_reference(double t, int d, int trunc) {
  if (!(t > 0)) throw std::invalid_argument("heat_reference: t must be positive");
  if (d < 1) throw std::invalid_argument("heat_reference: d must be >= 1");
  if (trunc == 0) trunc = heat_truncation(t);
  if (trunc < 1) throw std::invalid_argument("heat_reference: trunc must be >= 1");
  std::vector<double> amp;
  for (int m = 1; m <= trunc; m += 2)
    amp.push_back(4.0 / (kPi * m) * std::exp(-static_cast<double>(m) * m * t));
  PeriodicFn::Eval1D u1 = [amp](double s) {
    double acc = 0;
    int m = 1;
    for (double a : amp) {
      acc += a * std::sin(m * s);
      m += 2;
    }
    return acc;
  };
  return PeriodicFn::separable(std::vector<PeriodicFn::Eval1D>(d, u1));
}

ExperimentSpec ExperimentSpec::defaults(ExperimentName name, double t) {
  ExperimentSpec s;
  s.name = name;
  s.t = t;
  if (name == ExperimentName::heat) {
    s.n_min = 2;
    s.n_max = 7;
    s.k_min = 0;
    s.k_max = 2;
  }
  return s;
}

namespace {

PeriodicFn experiment_target(const ExperimentSpec& spec) {
  switch (spec.name) {
    case ExperimentName::fig1_abssin:
      return builtin_function("abssin");
    case ExperimentName::fig2_abssin25:
      return builtin_function("abssin25");
    case ExperimentName::heat:
      return heat_reference(spec.t, 2);
  }
  throw std::invalid_argument("run_experiment: unknown experiment");
}

}  // namespace

ErrorCurve run_experiment(const ExperimentSpec& spec) {
  if (spec.n_min < 1 || spec.n_max < spec.n_min || spec.k_min < 0 ||
      spec.k_max < spec.k_min)
    throw std::invalid_argument("run_experiment: empty or invalid N/K range");
  const bool is_heat = spec.name == ExperimentName::heat;
  const PeriodicFn f = experiment_target(spec);
  if (is_heat) {
    // One-point consistency check of the series solution against direct
    // quadrature of kernel * initial data.
    const double s0 = 1.0;
    const double series = heat_series_1d(spec.t, s0, heat_truncation(spec.t));
    const double quad = heat_convolution_1d(spec.t, s0);
    if (std::abs(series - quad) > 1e-8)
      throw std::logic_error("run_experiment: heat series and quadrature disagree");
  }

  const int n_count = spec.n_max - spec.n_min + 1;
  const int k_count = spec.k_max - spec.k_min + 1;
  ErrorCurve curve;
  curve.rows.resize(static_cast<size_t>(n_count) * k_count);
  parallel_for(static_cast<long long>(n_count) * k_count, [&](long long cell) {
    const int N = spec.n_min + static_cast<int>(cell / k_count);
    const int K = spec.k_min + static_cast<int>(cell % k_count);
    try {
      ErrorRow row;
      row.N = N;
      row.K = K;
      if (is_heat) {
        const Eigen::VectorXi Nv = Eigen::VectorXi::Constant(2, N);
        const Eigen::VectorXi Kv = Eigen::VectorXi::Constant(2, K);
        const MultiQnnModel m = approximate_multivariate(f, Kv, Nv, spec.compile);
        const TrigPolyND T = jackson_approx_nd(f, Nv, Kv);
        row.L = m.L[0];
        row.param_count = m.param_count();
        row.compile_residual = m.max_block_residual;
        row.poly_sup_error = sup_error(T, f);
        row.qnn_sup_error = sup_error(m, f);
      } else {
        const UniQnnModel m = approximate_univariate(f, K, N, spec.compile);
        const TrigPoly1D T = jackson_approx_1d(f, N, K);
        row.L = m.L;
        row.param_count = m.param_count();
        row.compile_residual = m.compile_residual;
        row.poly_sup_error = sup_error(T, f);
        row.qnn_sup_error = sup_error(m, f);
      }
      curve.rows[cell] = row;
    } catch (const CompileFailed& e) {
      throw CompileFailed("cell N=" + std::to_string(N) + " K=" +
                              std::to_string(K) + ": " + e.what(),
                          e.best_residual);
    }
  });
  return curve;
}

double fit_loglog_slope(const ErrorCurve& curve, int K, int min_N) {
  std::vector<double> xs, ys;
  std::set<int> distinct;
  for (const ErrorRow& r : curve.rows) {
    if (r.K != K || r.N < min_N) continue;
    if (!(r.qnn_sup_error > 0))
      throw std::invalid_argument("fit_loglog_slope: nonpositive error at N=" +
                                  std::to_string(r.N));
    xs.push_back(std::log(static_cast<double>(r.N)));
    ys.push_back(std::log(r.qnn_sup_error));
    distinct.insert(r.N);
  }
  if (distinct.size() < 2)
    throw std::invalid_argument("fit_loglog_slope: need >= 2 distinct N");
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  return sxy / sxx;
}

PeriodicFn builtin_function(const std::string& name, int d, double t) {
  if (d < 1) throw std::invalid_argument("builtin_function: d must be >= 1");
  auto need_1d = [&] {
    if (d != 1)
      throw std::invalid_argument("builtin_function: " + name + " is univariate");
  };
  if (name == "abssin") {
    need_1d();
    return PeriodicFn::univariate([](double x) { return std::abs(std::sin(x)); });
  }
  if (name == "abssin25") {
    need_1d();
    return PeriodicFn::univariate(
        [](double x) { return std::pow(std::abs(std::sin(x)), 2.5); });
  }
  if (name == "cos") {
    need_1d();
    return PeriodicFn::univariate([](double x) { return std::cos(x); });
  }
  if (name == "zero")
    return PeriodicFn::separable(
        std::vector<PeriodicFn::Eval1D>(d, [](double) { return 0.0; }));
  if (name == "prodcos")
    return PeriodicFn::separable(
        std::vector<PeriodicFn::Eval1D>(d, [](double x) { return std::cos(x); }));
  if (name == "heat") return heat_reference(t, d);
  throw std::invalid_argument("builtin_function: unknown name '" + name + "'");
}

}  // namespace jqnn
