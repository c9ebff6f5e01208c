// Command-line front end: fit builtin or file-defined periodic targets,
// sweep error curves, and verify saved dumps.
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "jqnn/io.hpp"
#include "json.hpp"

namespace {

using namespace jqnn;

std::pair<int, int> parse_range(const std::string& s) {
  auto bad = [&] {
    throw std::invalid_argument("range must be 'a' or 'a..b', got '" + s + "'");
  };
  try {
    const auto pos = s.find("..");
    size_t used = 0;
    if (pos == std::string::npos) {
      const int v = std::stoi(s, &used);
      if (used != s.size()) bad();
      return std::make_pair(v, v);
    }
    const std::string lo = s.substr(0, pos), hi = s.substr(pos + 2);
    const int a = std::stoi(lo, &used);
    if (used != lo.size()) bad();
    const int b = std::stoi(hi, &used);
    if (used != hi.size()) bad();
    return std::make_pair(a, b);
  } catch (const std::invalid_argument&) {
    bad();
  } catch (const std::out_of_range&) {
    bad();
  }
  return {0, 0};  // unreachable
}

TargetSpec make_target(const std::string& func, const std::string& coeff_file,
                       double t) {
  if (func.empty() == coeff_file.empty())
    throw std::invalid_argument("give exactly one of --func or --coeffs");
  if (!coeff_file.empty()) return TargetSpec::coefficients(load_poly(coeff_file));
  return TargetSpec::builtin(func, t);
}

std::vector<Eigen::VectorXd> uniform_axes(int d, int per_axis) {
  Eigen::VectorXd ax(per_axis);
  for (int g = 0; g < per_axis; ++g) ax[g] = -kPi + kTwoPi * g / per_axis;
  return std::vector<Eigen::VectorXd>(d, ax);
}

Eigen::VectorXd grid_values(const PeriodicFn& f,
                            const std::vector<Eigen::VectorXd>& axes) {
  const int d = static_cast<int>(axes.size());
  long long total = 1;
  for (const auto& ax : axes) total *= ax.size();
  Eigen::VectorXd vals(total);
  Eigen::VectorXd x(d);
  std::vector<long long> idx(d, 0);
  for (long long flat = 0; flat < total; ++flat) {
    for (int j = 0; j < d; ++j) x[j] = axes[j][idx[j]];
    vals[flat] = f(x);
    for (int j = d - 1; j >= 0; --j) {
      if (++idx[j] < axes[j].size()) break;
      idx[j] = 0;
    }
  }
  return vals;
}

struct CommonOpts {
  std::string out = ".";
  double tol = 1e-6;
  unsigned long long seed = 0x5eed;
  int grid = 0;  // 0 -> default (4096 for d = 1, 256 per axis otherwise)

  CompileOptions compile() const {
    CompileOptions o;
    o.tolerance = tol;
    o.seed = static_cast<unsigned>(seed);
    return o;
  }
  void attach(CLI::App* cmd) {
    cmd->add_option("--out", out, "output directory (created if missing)");
    cmd->add_option("--tol", tol, "compile residual tolerance");
    cmd->add_option("--seed", seed, "seed for the least-squares fallback");
    cmd->add_option("--grid", grid, "error-measurement grid size");
  }
  void prepare() const { std::filesystem::create_directories(out); }
};

int run_approx1d(const CommonOpts& common, const std::string& func,
                 const std::string& coeff_file, double t, int K, int N) {
  common.prepare();
  const TargetSpec target = make_target(func, coeff_file, t);
  const PeriodicFn f = target.function(1);
  const UniQnnModel model = approximate_univariate(f, K, N, common.compile());

  const int G = common.grid > 0 ? common.grid : 4096;
  Report rep;
  rep.compile_residual = model.compile_residual;
  rep.param_count = model.param_count();
  rep.error_grid = G;
  rep.poly_sup_error = sup_error(jackson_approx_1d(f, N, K), f, G);
  rep.qnn_sup_error = sup_error(model, f, G);

  save_model(common.out + "/model.json", model, target);
  save_report(common.out + "/report.json", rep);
  std::cout << "approx1d: N=" << N << " K=" << K << " L=" << model.L
            << " c=" << model.c << " method=" << model.method
            << " residual=" << rep.compile_residual
            << " poly_err=" << rep.poly_sup_error
            << " qnn_err=" << rep.qnn_sup_error << "\n";
  return 0;
}

int run_approxnd(const CommonOpts& common, const std::string& func,
                 const std::string& coeff_file, double t,
                 const std::vector<int>& Ks, const std::vector<int>& Ns) {
  common.prepare();
  if (Ks.size() != Ns.size() || Ks.empty())
    throw std::invalid_argument(
        "approxnd: --K and --N need one entry per coordinate");
  const int d = static_cast<int>(Ks.size());
  if (d < 2)
    throw std::invalid_argument("approxnd: need d >= 2; use approx1d instead");
  if (d > 2)
    throw TooLarge("approxnd: the end-to-end guard allows d <= 2");
  Eigen::VectorXi Kv(d), Nv(d);
  for (int j = 0; j < d; ++j) {
    Kv[j] = Ks[j];
    Nv[j] = Ns[j];
  }
  const TargetSpec target = make_target(func, coeff_file, t);
  const PeriodicFn f = target.function(d);
  const MultiQnnModel model = approximate_multivariate(f, Kv, Nv, common.compile());

  const int G = common.grid > 0 ? common.grid : 256;
  Report rep;
  rep.compile_residual = model.max_block_residual;
  rep.param_count = model.param_count();
  rep.error_grid = G;
  rep.poly_sup_error = sup_error(jackson_approx_nd(f, Nv, Kv), f, G);
  rep.qnn_sup_error = sup_error(model, f, G);

  save_model(common.out + "/model.json", model, target);
  save_report(common.out + "/report.json", rep);
  std::cout << "approxnd: d=" << d << " nblocks=" << model.nblocks
            << " q=" << model.q << " c=" << model.c
            << " residual=" << rep.compile_residual
            << " poly_err=" << rep.poly_sup_error
            << " qnn_err=" << rep.qnn_sup_error << "\n";
  return 0;
}

int run_exp(const CommonOpts& common, const std::string& name, double t,
            const std::string& n_range, const std::string& k_range, int n_min,
            int n_max, int k_min, int k_max) {
  common.prepare();
  ExperimentName en;
  if (name == "fig1")
    en = ExperimentName::fig1_abssin;
  else if (name == "fig2")
    en = ExperimentName::fig2_abssin25;
  else if (name == "heat")
    en = ExperimentName::heat;
  else
    throw std::invalid_argument("experiment: name must be fig1, fig2, or heat");

  ExperimentSpec spec = ExperimentSpec::defaults(en, t);
  spec.compile = common.compile();
  if (!n_range.empty()) std::tie(spec.n_min, spec.n_max) = parse_range(n_range);
  if (!k_range.empty()) std::tie(spec.k_min, spec.k_max) = parse_range(k_range);
  if (n_min >= 0) spec.n_min = n_min;
  if (n_max >= 0) spec.n_max = n_max;
  if (k_min >= 0) spec.k_min = k_min;
  if (k_max >= 0) spec.k_max = k_max;

  const ErrorCurve curve = run_experiment(spec);
  save_curve_csv(common.out + "/errors.csv", curve);

  // Plot-ready samples for the largest cell.
  const bool is_heat = en == ExperimentName::heat;
  const int d = is_heat ? 2 : 1;
  const int G = common.grid > 0 ? common.grid : (is_heat ? 256 : 4096);
  const PeriodicFn f = is_heat
                           ? heat_reference(spec.t, 2)
                           : builtin_function(en == ExperimentName::fig1_abssin
                                                  ? "abssin"
                                                  : "abssin25");
  const auto axes = uniform_axes(d, G);
  Eigen::VectorXd pred;
  if (is_heat) {
    const Eigen::VectorXi Nv = Eigen::VectorXi::Constant(2, spec.n_max);
    const Eigen::VectorXi Kv = Eigen::VectorXi::Constant(2, spec.k_max);
    pred = approximate_multivariate(f, Kv, Nv, spec.compile).predict_grid(axes);
  } else {
    const UniQnnModel m =
        approximate_univariate(f, spec.k_max, spec.n_max, spec.compile);
    pred.resize(G);
    for (int g = 0; g < G; ++g) pred[g] = m.predict(axes[0][g]);
  }
  save_points_csv(common.out + "/points.csv", axes, grid_values(f, axes), pred);

  // Summary with empirical decay rates where they are well defined.
  nlohmann::json j;
  j["experiment"] = name;
  if (is_heat) j["t"] = spec.t;
  j["n_min"] = spec.n_min;
  j["n_max"] = spec.n_max;
  j["k_min"] = spec.k_min;
  j["k_max"] = spec.k_max;
  j["rows"] = curve.rows.size();
  nlohmann::json slopes = nlohmann::json::object();
  for (int K = spec.k_min; K <= spec.k_max; ++K) {
    try {
      slopes[std::to_string(K)] =
          fit_loglog_slope(curve, K, std::max(4, spec.n_min));
    } catch (const std::invalid_argument&) {
      // degenerate column (too few N or zero error); omit
    }
  }
  j["slopes"] = std::move(slopes);
  atomic_write(common.out + "/report.json", j.dump(2) + "\n");

  std::cout << "experiment " << name << ": " << curve.rows.size()
            << " rows -> " << common.out << "/errors.csv\n";
  return 0;
}

int run_verify(const CommonOpts& common, std::string model_path,
               std::string report_path, const std::string& func_override,
               double t_override, bool has_t) {
  if (model_path.empty()) model_path = common.out + "/model.json";
  if (report_path.empty()) report_path = common.out + "/report.json";
  LoadedModel lm = load_model(model_path);
  const Report stored = load_report(report_path);
  if (!func_override.empty())
    lm.target = TargetSpec::builtin(func_override,
                                    has_t ? t_override : lm.target.t);

  const int d = lm.dims();
  const PeriodicFn f = lm.target.function(d);
  Report fresh;
  fresh.error_grid = stored.error_grid;
  if (!lm.multivariate) {
    fresh.param_count = lm.uni.param_count();
    fresh.poly_sup_error =
        sup_error(jackson_approx_1d(f, lm.uni.N, lm.uni.K), f, stored.error_grid);
    fresh.qnn_sup_error = sup_error(lm.uni, f, stored.error_grid);
  } else {
    fresh.param_count = lm.multi.param_count();
    fresh.poly_sup_error = sup_error(jackson_approx_nd(f, lm.multi.N, lm.multi.K),
                                     f, stored.error_grid);
    fresh.qnn_sup_error = sup_error(lm.multi, f, stored.error_grid);
  }
  fresh.compile_residual = recompute_residual(lm);

  const double dev =
      std::max({std::abs(fresh.poly_sup_error - stored.poly_sup_error),
                std::abs(fresh.qnn_sup_error - stored.qnn_sup_error),
                std::abs(fresh.compile_residual - stored.compile_residual)});
  const bool counts_ok = fresh.param_count == stored.param_count;
  std::cout << "verify: max deviation " << dev << " (tolerance 1e-9), "
            << "param_count " << (counts_ok ? "matches" : "differs") << "\n";
  if (dev <= 1e-9 && counts_ok) {
    std::cout << "verify: ok\n";
    return 0;
  }
  std::cerr << "verify: stored report does not match the re-simulation\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Periodic-function approximation by quantum-circuit synthesis"};
  app.require_subcommand(1);

  CommonOpts common1, commonN, commonE, commonV;
  std::string func1, coeffs1, funcN, coeffsN, funcV;
  double t1 = 0.5, tN = 0.5, tE = 0.5, tV = 0.5;
  int K1 = 0, N1 = 1;
  std::vector<int> Kn, Nn;
  std::string exp_name, exp_nrange, exp_krange;
  int exp_nmin = -1, exp_nmax = -1, exp_kmin = -1, exp_kmax = -1;
  std::string model_path, report_path;

  CLI::App* c1 = app.add_subcommand("approx1d", "Fit a univariate target");
  c1->add_option("--func", func1, "builtin: abssin|abssin25|zero|cos|heat");
  c1->add_option("--coeffs", coeffs1, "JSON coefficient file for the target");
  c1->add_option("--t", t1, "heat time (with --func heat)");
  c1->add_option("--K", K1, "smoothness order")->required();
  c1->add_option("--N", N1, "kernel size parameter")->required();
  common1.attach(c1);

  CLI::App* cn = app.add_subcommand("approxnd", "Fit a multivariate target");
  cn->add_option("--func", funcN, "builtin: zero|prodcos|heat");
  cn->add_option("--coeffs", coeffsN, "JSON coefficient file for the target");
  cn->add_option("--t", tN, "heat time (with --func heat)");
  cn->add_option("--K", Kn, "per-coordinate smoothness, e.g. 2,2")
      ->required()
      ->delimiter(',');
  cn->add_option("--N", Nn, "per-coordinate kernel size, e.g. 6,6")
      ->required()
      ->delimiter(',');
  commonN.attach(cn);

  CLI::App* ce = app.add_subcommand("experiment", "Sweep an error curve");
  ce->add_option("name", exp_name, "fig1 | fig2 | heat")->required();
  ce->add_option("--t", tE, "heat time");
  ce->add_option("--N", exp_nrange, "N range, e.g. 2..7");
  ce->add_option("--K", exp_krange, "K range, e.g. 0..2");
  ce->add_option("--Nmin", exp_nmin, "lowest N");
  ce->add_option("--Nmax", exp_nmax, "highest N");
  ce->add_option("--Kmin", exp_kmin, "lowest K");
  ce->add_option("--Kmax", exp_kmax, "highest K");
  commonE.attach(ce);

  CLI::App* cv = app.add_subcommand("verify", "Re-simulate a saved model");
  cv->add_option("--model", model_path, "model dump (default OUT/model.json)");
  cv->add_option("--report", report_path, "report (default OUT/report.json)");
  cv->add_option("--func", funcV, "check against this target instead");
  CLI::Option* tv_opt = cv->add_option("--t", tV, "heat time for --func heat");
  commonV.attach(cv);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (app.got_subcommand(c1))
      return run_approx1d(common1, func1, coeffs1, t1, K1, N1);
    if (app.got_subcommand(cn))
      return run_approxnd(commonN, funcN, coeffsN, tN, Kn, Nn);
    if (app.got_subcommand(ce))
      return run_exp(commonE, exp_name, tE, exp_nrange, exp_krange, exp_nmin,
                     exp_nmax, exp_kmin, exp_kmax);
    if (app.got_subcommand(cv))
      return run_verify(commonV, model_path, report_path, funcV, tV,
                        tv_opt->count() > 0);
    std::cerr << "error: no command selected\n";
    return 1;
  } catch (const TooLarge& e) {
    std::cerr << "error (resource guard): " << e.what() << "\n";
    return 3;
  } catch (const CompileFailed& e) {
    std::cerr << "error (compile): " << e.what() << "\n";
    return 2;
  } catch (const NotBounded& e) {
    std::cerr << "error (compile): " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
