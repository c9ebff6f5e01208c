// Synthesis of single-qubit circuit parameters whose <0|U(x)|0> amplitude
// reproduces a given bounded trigonometric polynomial.
//
// Primary strategy: complete the target a(x) to a pointwise-unitary pair by
// constructing b(x) with |a|^2 + |b|^2 = 1 on the circle (spectral
// factorization of 1 - |a|^2 via root finding, roots split inside/outside
// the unit circle), then peel one (R_Z(x), R_Y, R_Z) layer at a time off the
// top degree. Fallback: damped least squares on the grid residual over all
// angles, multi-start.
#pragma once

#include "jqnn/gates.hpp"
#include "jqnn/types.hpp"

namespace jqnn {

struct CompileOptions {
  double tolerance = 1e-6;  // residual the caller wants
  int verify_grid = 0;      // 0 -> max(1024, 16(L+1))
  int max_degree = 64;      // larger inputs are rejected
  bool allow_fallback = true;
  int fallback_starts = 4;
  int fallback_iterations = 200;
  unsigned seed = 0x5eedULL;
};

struct CompileReport {
  double residual = 0;  // sup-grid |amplitude - T|
  std::string method;   // "analytic", "least-squares", or "closed-form"
  int grid = 0;         // grid the residual was measured on
};

// max over the G-point uniform grid of |<0|U(x)|0> - T(x)|.
double verify_params(const QnnParams& p, const TrigPoly1D& T, int G = 1024);

// Requires sup-grid |T| <= 1 (4096 points; NotBounded otherwise) and
// degree <= opts.max_degree. Returns params of depth exactly 2*degree.
// Throws CompileFailed if no strategy reaches a 1e-4 residual.
std::pair<QnnParams, CompileReport> compile_trig_poly(
    const TrigPoly1D& T, const CompileOptions& opts = CompileOptions());

// Single term c e^{inx}, |c| <= 1; depth 2|n|. n <= 0 uses the closed-form
// phase-accumulation construction (interior thetas 0); n > 0 delegates to
// compile_trig_poly on the degree-n polynomial with one nonzero coefficient.
std::pair<QnnParams, CompileReport> compile_monomial(
    cplx c, int n, const CompileOptions& opts = CompileOptions());

// Wraps the global R_Z angle into [0, 2pi), compensating the sign so the
// circuit matrix is unchanged.
void normalize_global_phase(QnnParams& p);

}  // namespace jqnn
