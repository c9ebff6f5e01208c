#include "jqnn/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace jqnn {

using nlohmann::json;

namespace {

json vec_to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

json ivec_to_json(const Eigen::VectorXi& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Eigen::VectorXd vec_from_json(const json& a, const std::string& what) {
  if (!a.is_array()) throw std::runtime_error(what + ": expected an array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(a.size()));
  for (size_t i = 0; i < a.size(); ++i) {
    if (!a[i].is_number()) throw std::runtime_error(what + ": expected numbers");
    v[static_cast<Eigen::Index>(i)] = a[i].get<double>();
  }
  return v;
}

Eigen::VectorXi ivec_from_json(const json& a, const std::string& what) {
  if (!a.is_array()) throw std::runtime_error(what + ": expected an array");
  Eigen::VectorXi v(static_cast<Eigen::Index>(a.size()));
  for (size_t i = 0; i < a.size(); ++i) {
    if (!a[i].is_number_integer())
      throw std::runtime_error(what + ": expected integers");
    v[static_cast<Eigen::Index>(i)] = a[i].get<int>();
  }
  return v;
}

json params_to_json(const QnnParams& p) {
  json j;
  j["theta"] = vec_to_json(p.theta);
  j["phi"] = vec_to_json(p.phi);
  return j;
}

QnnParams params_from_json(const json& j, const std::string& what) {
  try {
    return QnnParams(vec_from_json(j.at("theta"), what + ".theta"),
                     vec_from_json(j.at("phi"), what + ".phi"));
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(what + ": " + e.what());
  }
}

json poly_to_json(const TrigPolyND& p) {
  json j;
  j["dims"] = p.dims();
  j["degrees"] = ivec_to_json(p.degrees);
  json c = json::array();
  for (Eigen::Index i = 0; i < p.coeffs.size(); ++i)
    c.push_back(json::array({p.coeffs[i].real(), p.coeffs[i].imag()}));
  j["coeffs"] = c;
  return j;
}

TrigPolyND poly_from_json(const json& j, const std::string& what) {
  const int d = j.at("dims").get<int>();
  Eigen::VectorXi deg = ivec_from_json(j.at("degrees"), what + ".degrees");
  if (deg.size() != d)
    throw std::runtime_error(what + ": degrees length does not match dims");
  const json& c = j.at("coeffs");
  if (!c.is_array()) throw std::runtime_error(what + ".coeffs: expected an array");
  Eigen::VectorXcd coeffs(static_cast<Eigen::Index>(c.size()));
  for (size_t i = 0; i < c.size(); ++i) {
    if (!c[i].is_array() || c[i].size() != 2)
      throw std::runtime_error(what + ".coeffs: expected [re, im] pairs");
    coeffs[static_cast<Eigen::Index>(i)] =
        cplx(c[i][0].get<double>(), c[i][1].get<double>());
  }
  try {
    return TrigPolyND(std::move(deg), std::move(coeffs));
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(what + ": " + e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_file(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(path + ": parse error at byte " +
                             std::to_string(e.byte) + ": " + e.what());
  }
}

json target_to_json(const TargetSpec& t) {
  json j;
  j["func"] = t.func;
  if (t.func == "heat") j["t"] = t.t;
  if (t.has_poly) j["poly"] = poly_to_json(t.poly);
  return j;
}

TargetSpec target_from_json(const json& j) {
  TargetSpec t;
  t.func = j.at("func").get<std::string>();
  if (j.contains("t")) t.t = j.at("t").get<double>();
  if (j.contains("poly")) {
    t.poly = poly_from_json(j.at("poly"), "target.poly");
    t.has_poly = true;
  }
  if (t.func == "coeffs" && !t.has_poly)
    throw std::runtime_error("target: func is 'coeffs' but no polynomial given");
  return t;
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void check_degree_law(int L, int N, int K, const std::string& what) {
  if (N < 1 || K < 0) throw std::runtime_error(what + ": need N >= 1, K >= 0");
  const int expect = jackson_weights(N, K).half_degree();
  if (L != expect)
    throw std::runtime_error(what + ": L = " + std::to_string(L) +
                             " does not match N, K (expected " +
                             std::to_string(expect) + ")");
}

constexpr const char* kCurveHeader =
    "N,K,L,param_count,poly_sup_error,qnn_sup_error,compile_residual";

}  // namespace

TargetSpec TargetSpec::builtin(std::string name, double t) {
  TargetSpec s;
  s.func = std::move(name);
  s.t = t;
  return s;
}

TargetSpec TargetSpec::coefficients(TrigPolyND p) {
  TargetSpec s;
  s.func = "coeffs";
  s.has_poly = true;
  s.poly = std::move(p);
  return s;
}

PeriodicFn TargetSpec::function(int d) const {
  if (func == "coeffs") {
    if (!has_poly) throw std::runtime_error("TargetSpec: missing coefficients");
    if (poly.dims() != d)
      throw std::runtime_error("TargetSpec: coefficient dims != model dims");
    const TrigPolyND p = poly;
    return PeriodicFn(
        d, [p](const Eigen::VectorXd& x) { return eval_poly(p, x).real(); });
  }
  return builtin_function(func, d, t);
}

void atomic_write(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("atomic_write: cannot open " + tmp);
    out << content;
    out.flush();
    if (!out) {
      std::remove(tmp.c_str());
      throw std::runtime_error("atomic_write: write failed for " + tmp);
    }
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw std::runtime_error("atomic_write: rename failed for " + path);
  }
}

void save_poly(const std::string& path, const TrigPolyND& p) {
  atomic_write(path, poly_to_json(p).dump(2) + "\n");
}

TrigPolyND load_poly(const std::string& path) {
  return poly_from_json(parse_file(path), path);
}

void save_model(const std::string& path, const UniQnnModel& m,
                const TargetSpec& target) {
  json j;
  j["kind"] = "univariate";
  j["target"] = target_to_json(target);
  j["N"] = m.N;
  j["K"] = m.K;
  j["L"] = m.L;
  j["c"] = m.c;
  j["compile_residual"] = m.compile_residual;
  j["method"] = m.method;
  j["theta"] = vec_to_json(m.params.theta);
  j["phi"] = vec_to_json(m.params.phi);
  atomic_write(path, j.dump(2) + "\n");
}

void save_model(const std::string& path, const MultiQnnModel& m,
                const TargetSpec& target) {
  json j;
  j["kind"] = "multivariate";
  j["target"] = target_to_json(target);
  j["N"] = ivec_to_json(m.N);
  j["K"] = ivec_to_json(m.K);
  j["L"] = ivec_to_json(m.L);
  j["d"] = m.d;
  j["q"] = m.q;
  j["nblocks"] = m.nblocks;
  j["c"] = m.c;
  j["max_block_residual"] = m.max_block_residual;
  json order = json::array();
  for (const auto& n : m.spec.ordering) order.push_back(ivec_to_json(n));
  j["ordering"] = std::move(order);
  json blocks = json::array();
  for (const auto& blk : m.spec.blocks) {
    json row = json::array();
    for (const auto& p : blk) row.push_back(params_to_json(p));
    blocks.push_back(std::move(row));
  }
  j["blocks"] = std::move(blocks);
  atomic_write(path, j.dump(2) + "\n");
}

LoadedModel load_model(const std::string& path) {
  const json j = parse_file(path);
  LoadedModel out;
  try {
    const std::string kind = j.at("kind").get<std::string>();
    out.target = target_from_json(j.at("target"));
    if (kind == "univariate") {
      out.multivariate = false;
      UniQnnModel& m = out.uni;
      m.N = j.at("N").get<int>();
      m.K = j.at("K").get<int>();
      m.L = j.at("L").get<int>();
      check_degree_law(m.L, m.N, m.K, "model");
      m.c = j.at("c").get<double>();
      if (!std::isfinite(m.c) || m.c < 0)
        throw std::runtime_error("model: c must be finite and >= 0");
      m.compile_residual = j.value("compile_residual", 0.0);
      m.method = j.value("method", std::string());
      m.params = params_from_json(j, "model");
      if (m.params.depth() != 2 * m.L)
        throw std::runtime_error("model: circuit depth != 2L");
      return out;
    }
    if (kind != "multivariate")
      throw std::runtime_error("model: unknown kind '" + kind + "'");

    out.multivariate = true;
    MultiQnnModel& m = out.multi;
    m.d = j.at("d").get<int>();
    m.N = ivec_from_json(j.at("N"), "model.N");
    m.K = ivec_from_json(j.at("K"), "model.K");
    m.L = ivec_from_json(j.at("L"), "model.L");
    if (m.N.size() != m.d || m.K.size() != m.d || m.L.size() != m.d)
      throw std::runtime_error("model: N/K/L length != d");
    for (int a = 0; a < m.d; ++a)
      check_degree_law(m.L[a], m.N[a], m.K[a], "model axis " + std::to_string(a));
    m.q = j.at("q").get<int>();
    m.nblocks = j.at("nblocks").get<long long>();
    m.c = j.at("c").get<double>();
    if (!std::isfinite(m.c) || m.c < 0)
      throw std::runtime_error("model: c must be finite and >= 0");
    m.max_block_residual = j.value("max_block_residual", 0.0);

    BlockSpec& spec = m.spec;
    spec.d = m.d;
    spec.q = m.q;
    spec.degrees = m.L;
    const json& order = j.at("ordering");
    if (!order.is_array())
      throw std::runtime_error("model.ordering: expected an array");
    spec.ordering.resize(order.size());
    for (size_t i = 0; i < order.size(); ++i)
      spec.ordering[i] = ivec_from_json(order[i], "model.ordering");
    if (static_cast<long long>(spec.ordering.size()) != m.nblocks)
      throw std::runtime_error("model: nblocks != ordering size");
    const json& blocks = j.at("blocks");
    if (!blocks.is_array() || blocks.size() != order.size())
      throw std::runtime_error("model.blocks: expected one entry per block");
    spec.blocks.resize(blocks.size());
    for (size_t i = 0; i < blocks.size(); ++i) {
      const json& row = blocks[i];
      if (!row.is_array() || static_cast<int>(row.size()) != m.d)
        throw std::runtime_error("model.blocks: expected d circuits per block");
      spec.blocks[i].reserve(m.d);
      for (int a = 0; a < m.d; ++a) {
        QnnParams p = params_from_json(row[a], "model.blocks");
        if (p.depth() != 2 * std::abs(spec.ordering[i][a]))
          throw std::runtime_error("model.blocks: depth != 2|n_j| at block " +
                                   std::to_string(i));
        spec.blocks[i].push_back(std::move(p));
      }
    }
    spec.validate();
    return out;
  } catch (const json::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

void save_report(const std::string& path, const Report& r) {
  json j;
  j["poly_sup_error"] = r.poly_sup_error;
  j["qnn_sup_error"] = r.qnn_sup_error;
  j["compile_residual"] = r.compile_residual;
  j["param_count"] = r.param_count;
  j["error_grid"] = r.error_grid;
  atomic_write(path, j.dump(2) + "\n");
}

Report load_report(const std::string& path) {
  const json j = parse_file(path);
  Report r;
  try {
    r.poly_sup_error = j.at("poly_sup_error").get<double>();
    r.qnn_sup_error = j.at("qnn_sup_error").get<double>();
    r.compile_residual = j.at("compile_residual").get<double>();
    r.param_count = j.at("param_count").get<long long>();
    r.error_grid = j.at("error_grid").get<int>();
  } catch (const json::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  return r;
}

void save_curve_csv(const std::string& path, const ErrorCurve& curve) {
  std::ostringstream out;
  out << kCurveHeader << "\n";
  for (const ErrorRow& r : curve.rows) {
    out << r.N << ',' << r.K << ',' << r.L << ',' << r.param_count << ','
        << fmt17(r.poly_sup_error) << ',' << fmt17(r.qnn_sup_error) << ','
        << fmt17(r.compile_residual) << "\n";
  }
  atomic_write(path, out.str());
}

ErrorCurve load_curve_csv(const std::string& path) {
  std::istringstream in(read_file(path));
  std::string line;
  if (!std::getline(in, line) || line != kCurveHeader)
    throw std::runtime_error(path + ": bad or missing CSV header");
  ErrorCurve curve;
  size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (fields.size() != 7)
      throw std::runtime_error(path + ": line " + std::to_string(lineno) +
                               ": expected 7 fields");
    ErrorRow r;
    try {
      r.N = std::stoi(fields[0]);
      r.K = std::stoi(fields[1]);
      r.L = std::stoi(fields[2]);
      r.param_count = std::stoll(fields[3]);
      r.poly_sup_error = std::stod(fields[4]);
      r.qnn_sup_error = std::stod(fields[5]);
      r.compile_residual = std::stod(fields[6]);
    } catch (const std::exception&) {
      throw std::runtime_error(path + ": line " + std::to_string(lineno) +
                               ": unparsable field");
    }
    curve.rows.push_back(r);
  }
  return curve;
}

void save_points_csv(const std::string& path,
                     const std::vector<Eigen::VectorXd>& axes,
                     const Eigen::VectorXd& f_values,
                     const Eigen::VectorXd& predict_values) {
  const int d = static_cast<int>(axes.size());
  if (d < 1) throw std::invalid_argument("save_points_csv: no axes");
  long long total = 1;
  for (const auto& ax : axes) total *= ax.size();
  if (f_values.size() != total || predict_values.size() != total)
    throw std::invalid_argument("save_points_csv: value count != grid size");
  std::ostringstream out;
  if (d == 1) {
    out << "x,f,predict\n";
  } else {
    for (int j = 0; j < d; ++j) out << "x" << (j + 1) << ',';
    out << "f,predict\n";
  }
  std::vector<long long> idx(d, 0);
  for (long long flat = 0; flat < total; ++flat) {
    for (int j = 0; j < d; ++j) out << fmt17(axes[j][idx[j]]) << ',';
    out << fmt17(f_values[flat]) << ',' << fmt17(predict_values[flat]) << "\n";
    for (int j = d - 1; j >= 0; --j) {
      if (++idx[j] < axes[j].size()) break;
      idx[j] = 0;
    }
  }
  atomic_write(path, out.str());
}

double recompute_residual(const LoadedModel& lm) {
  if (!lm.multivariate) {
    const UniQnnModel& m = lm.uni;
    if (m.c == 0.0) return 0.0;
    const PeriodicFn f = lm.target.function(1);
    TrigPoly1D T = jackson_approx_1d(f, m.N, m.K);
    T.coeffs /= m.c;
    return verify_params(m.params, T, std::max(1024, 16 * (m.L + 1)));
  }
  const MultiQnnModel& m = lm.multi;
  if (m.c == 0.0) return 0.0;
  const PeriodicFn f = lm.target.function(m.d);
  const TrigPolyND T = jackson_approx_nd(f, m.N, m.K);
  double worst = 0;
  for (long long i = 0; i < m.nblocks; ++i) {
    const Eigen::VectorXi& n = m.spec.ordering[i];
    for (int a = 0; a < m.d; ++a) {
      cplx coeff = (a == 0) ? T.coeffs[i] / m.c : cplx(1.0, 0.0);
      const double mag = std::abs(coeff);
      if (mag > 1.0) coeff /= mag;  // the builder clamps the same way
      const int absn = std::abs(n[a]);
      TrigPoly1D mono(absn, Eigen::VectorXcd::Zero(2 * absn + 1));
      mono.c(n[a]) = coeff;
      worst = std::max(worst, verify_params(m.spec.blocks[i][a], mono,
                                            std::max(1024, 16 * (absn + 1))));
    }
  }
  return worst;
}

}  // namespace jqnn
