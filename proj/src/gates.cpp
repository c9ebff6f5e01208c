#include "jqnn/gates.hpp"

#include <cmath>

namespace jqnn {

Matrix2cd gate_ry(double theta) {
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  Matrix2cd g;
  g << c, -s, s, c;
  return g;
}

Matrix2cd gate_rz(double theta) {
  Matrix2cd g = Matrix2cd::Zero();
  g(0, 0) = std::polar(1.0, -theta / 2);
  g(1, 1) = std::polar(1.0, theta / 2);
  return g;
}

Matrix2cd gate_h() {
  const double s = 1.0 / std::sqrt(2.0);
  Matrix2cd g;
  g << s, s, s, -s;
  return g;
}

Matrix2cd gate_x() {
  Matrix2cd g;
  g << 0, 1, 1, 0;
  return g;
}

MatrixXcd kron(const MatrixXcd& a, const MatrixXcd& b) {
  MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

MatrixXcd kron_pow(const Matrix2cd& a, int q) {
  MatrixXcd out = MatrixXcd::Identity(1, 1);
  for (int i = 0; i < q; ++i) out = kron(out, a);
  return out;
}

void QnnParams::validate() const {
  if (phi.size() != theta.size() + 1)
    throw std::invalid_argument("QnnParams: need |phi| = |theta| + 1");
  if (theta.size() < 1 || depth() % 2 != 0)
    throw std::invalid_argument("QnnParams: depth must be even and >= 0");
  if (!theta.allFinite() || !phi.allFinite())
    throw std::invalid_argument("QnnParams: angles must be finite");
}

Matrix2cd single_qubit_unitary(const QnnParams& p, double x) {
  p.validate();
  Matrix2cd u = gate_rz(p.phi[0]) * gate_ry(p.theta[0]) * gate_rz(p.phi[1]);
  for (int l = 1; l <= p.depth(); ++l)
    u = u * gate_rz(x) * gate_ry(p.theta[l]) * gate_rz(p.phi[l + 1]);
  return u;
}

cplx amplitude00(const Matrix2cd& u) { return u(0, 0); }

cplx circuit_amplitude(const QnnParams& p, double x) {
  p.validate();
  const int D = p.depth();
  const cplx wz = std::polar(1.0, -x / 2);  // R_Z(x) acting on |0>,|1>
  Vector2cd v(1.0, 0.0);
  // Rightmost factor acts first.
  for (int l = D; l >= 1; --l) {
    const double ph = p.phi[l + 1] / 2, th = p.theta[l] / 2;
    v = Vector2cd(std::polar(1.0, -ph) * v[0], std::polar(1.0, ph) * v[1]);
    v = Vector2cd(std::cos(th) * v[0] - std::sin(th) * v[1],
                  std::sin(th) * v[0] + std::cos(th) * v[1]);
    v = Vector2cd(wz * v[0], std::conj(wz) * v[1]);
  }
  const double ph1 = p.phi[1] / 2, th0 = p.theta[0] / 2, ph0 = p.phi[0] / 2;
  v = Vector2cd(std::polar(1.0, -ph1) * v[0], std::polar(1.0, ph1) * v[1]);
  v = Vector2cd(std::cos(th0) * v[0] - std::sin(th0) * v[1],
                std::sin(th0) * v[0] + std::cos(th0) * v[1]);
  return std::polar(1.0, -ph0) * v[0];
}

}  // namespace jqnn
