// 2x2 gate matrices, Kronecker products, and the parameterized single-qubit
// circuit
//   U(x) = R_Z(phi[0]) R_Y(theta[0]) R_Z(phi[1])
//          prod_{l=1}^{D} R_Z(x) R_Y(theta[l]) R_Z(phi[l+1])
// whose <0|U(x)|0> entry carries a trigonometric polynomial of degree D/2.
#pragma once

#include "jqnn/types.hpp"

namespace jqnn {

using Eigen::Matrix2cd;
using Eigen::MatrixXcd;
using Eigen::Vector2cd;

// [[cos(t/2), -sin(t/2)], [sin(t/2), cos(t/2)]]
Matrix2cd gate_ry(double theta);
// diag(e^{-i t/2}, e^{i t/2})
Matrix2cd gate_rz(double theta);
// (1/sqrt2) [[1, 1], [1, -1]]
Matrix2cd gate_h();
// [[0, 1], [1, 0]]
Matrix2cd gate_x();

// Row-major Kronecker product: out[(i1*r2+i2),(j1*c2+j2)] = a(i1,j1) b(i2,j2).
MatrixXcd kron(const MatrixXcd& a, const MatrixXcd& b);
// q-fold Kronecker power (q = 0 gives the 1x1 identity).
MatrixXcd kron_pow(const Matrix2cd& a, int q);

// Angles of one single-qubit circuit of even depth D = 2L:
// theta[0..D], phi[0..D+1]; phi[0] is the global R_Z angle.
struct QnnParams {
  Eigen::VectorXd theta;
  Eigen::VectorXd phi;

  QnnParams() : theta(Eigen::VectorXd::Zero(1)), phi(Eigen::VectorXd::Zero(2)) {}
  QnnParams(Eigen::VectorXd th, Eigen::VectorXd ph)
      : theta(std::move(th)), phi(std::move(ph)) {
    validate();
  }
  static QnnParams zero(int depth) {
    return QnnParams(Eigen::VectorXd::Zero(depth + 1),
                     Eigen::VectorXd::Zero(depth + 2));
  }

  int depth() const { return static_cast<int>(theta.size()) - 1; }
  int param_count() const { return static_cast<int>(theta.size() + phi.size()); }

  // Checks the length pairing (|phi| = |theta| + 1), even depth, finiteness.
  void validate() const;
};

// Full 2x2 circuit matrix at data value x.
Matrix2cd single_qubit_unitary(const QnnParams& p, double x);

// <0|U|0> of a 2x2 matrix.
cplx amplitude00(const Matrix2cd& u);

// <0|U(x)|0> evaluated by evolving the first column (O(depth), no full
// matrix products).
cplx circuit_amplitude(const QnnParams& p, double x);

}  // namespace jqnn
