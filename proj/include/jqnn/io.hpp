// Flat-file interchange: JSON model/report dumps, JSON coefficient files,
// and CSV error curves / sample points. All writes are atomic (temp file in
// the target directory, then rename).
#pragma once

#include <string>
#include <vector>

#include "jqnn/pipeline.hpp"

namespace jqnn {

// What a model was fit to, carried inside the dump so a verifier can rebuild
// the target: either a builtin name (plus the heat time) or an inline
// coefficient polynomial ("coeffs").
struct TargetSpec {
  std::string func;
  double t = 0.5;
  bool has_poly = false;
  TrigPolyND poly;

  static TargetSpec builtin(std::string name, double t = 0.5);
  static TargetSpec coefficients(TrigPolyND p);

  // Reconstructs the target function on d coordinates.
  PeriodicFn function(int d) const;
};

struct Report {
  double poly_sup_error = 0;
  double qnn_sup_error = 0;
  double compile_residual = 0;
  long long param_count = 0;
  int error_grid = 0;  // points (d = 1) or points per axis
};

struct LoadedModel {
  bool multivariate = false;
  UniQnnModel uni;
  MultiQnnModel multi;
  TargetSpec target;

  int dims() const { return multivariate ? multi.d : 1; }
};

void atomic_write(const std::string& path, const std::string& content);

// {"dims", "degrees", "coeffs": [[re, im], ...]} with row-major flat order.
void save_poly(const std::string& path, const TrigPolyND& p);
TrigPolyND load_poly(const std::string& path);

void save_model(const std::string& path, const UniQnnModel& m,
                const TargetSpec& target);
void save_model(const std::string& path, const MultiQnnModel& m,
                const TargetSpec& target);
// Validates lengths, the degree law L = ceil((K+3)/2) floor(N/2), block
// shapes and the ordering bijection; malformed dumps throw (parse errors
// carry the byte offset in the message).
LoadedModel load_model(const std::string& path);

void save_report(const std::string& path, const Report& r);
Report load_report(const std::string& path);

// Header exactly: N,K,L,param_count,poly_sup_error,qnn_sup_error,compile_residual
void save_curve_csv(const std::string& path, const ErrorCurve& curve);
ErrorCurve load_curve_csv(const std::string& path);

// Row-major samples: columns x,f,predict (d = 1) or x1,x2,f,predict (d = 2).
void save_points_csv(const std::string& path,
                     const std::vector<Eigen::VectorXd>& axes,
                     const Eigen::VectorXd& f_values,
                     const Eigen::VectorXd& predict_values);

// Residual of a loaded model measured exactly the way the builder measured
// it, so verification can demand equality to 1e-9.
double recompute_residual(const LoadedModel& m);

}  // namespace jqnn
