#include "jqnn/compile.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <random>

#include "jqnn/trig.hpp"

namespace jqnn {

namespace {

using Eigen::VectorXcd;
using Eigen::VectorXd;

// The layer peel drops the square root of the pair's unitarity defect, so the
// completion refinement and the peel itself run in extended precision; the
// angles are only rounded to double at the very end.
using cplxl = std::complex<long double>;
using Mat2l = Eigen::Matrix<cplxl, 2, 2>;
using VecXl = Eigen::Matrix<cplxl, Eigen::Dynamic, 1>;
using MatRl = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using VecRl = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

Mat2l gate_ry_l(long double t) {
  const long double c = std::cos(t / 2), s = std::sin(t / 2);
  Mat2l g;
  g << c, -s, s, c;
  return g;
}

Mat2l gate_rz_l(long double t) {
  Mat2l g = Mat2l::Zero();
  g(0, 0) = std::polar<long double>(1.0L, -t / 2);
  g(1, 1) = std::polar<long double>(1.0L, t / 2);
  return g;
}

double sup_grid_abs(const TrigPoly1D& T, int G) {
  double s = 0;
  for (int g = 0; g < G; ++g)
    s = std::max(s, std::abs(eval_poly(T, -kPi + kTwoPi * g / G)));
  return s;
}

// Laurent coefficients of 1 - a(z) conj-a(1/z); index m + 2L, m in [-2L, 2L].
VectorXcd one_minus_aa(const VectorXcd& a, int L) {
  VectorXcd F = VectorXcd::Zero(4 * L + 1);
  F[2 * L] = 1.0;
  for (int m = -2 * L; m <= 2 * L; ++m)
    for (int n = -L; n <= L; ++n) {
      int k = n - m;
      if (k < -L || k > L) continue;
      F[m + 2 * L] -= a[n + L] * std::conj(a[k + L]);
    }
  return F;
}

double laurent_max_on_grid(const VectorXcd& F, int off, int G) {
  double mx = -1e300;
  for (int g = 0; g < G; ++g) {
    double x = -kPi + kTwoPi * g / G;
    cplx acc(0, 0);
    for (int m = -off; m <= off; ++m) acc += F[m + off] * std::polar(1.0, m * x);
    mx = std::max(mx, acc.real());
  }
  return mx;
}

// Roots of sum_k g[k] z^k (degree = g.size()-1, top coefficient nonzero).
// Initial estimates come from the Newton polygon of the coefficient moduli
// (one circle of guesses per upper-hull edge), then the whole set is refined
// together with Aberth-Ehrlich in extended precision.  A companion matrix is
// useless here: valid inputs have coefficients spanning twenty orders of
// magnitude, which an unbalanced eigensolver cannot survive.
std::vector<cplxl> poly_roots(const VectorXcd& g) {
  const int deg = static_cast<int>(g.size()) - 1;
  std::vector<cplxl> gl(g.size());
  for (size_t i = 0; i < gl.size(); ++i)
    gl[i] = cplxl(g[i].real(), g[i].imag());

  std::vector<cplxl> z;
  z.reserve(deg);
  int low = 0;
  while (low < deg && std::abs(gl[low]) == 0) {
    z.emplace_back(0, 0);  // explicit zero roots; the hull needs |g_low| > 0
    ++low;
  }

  // Upper convex hull of (k, log|g_k|) over the nonzero coefficients.
  std::vector<int> hull;
  std::vector<long double> logs(deg + 1, 0);
  for (int k = low; k <= deg; ++k) {
    if (std::abs(gl[k]) == 0) continue;
    logs[k] = std::log(std::abs(gl[k]));
    while (hull.size() >= 2) {
      const int a = hull[hull.size() - 2], b = hull[hull.size() - 1];
      if ((logs[b] - logs[a]) * (k - b) <= (logs[k] - logs[b]) * (b - a))
        hull.pop_back();
      else
        break;
    }
    hull.push_back(k);
  }
  for (size_t e = 0; e + 1 < hull.size(); ++e) {
    const int k1 = hull[e], k2 = hull[e + 1];
    const long double rho = std::exp((logs[k1] - logs[k2]) / (k2 - k1));
    const int cnt = k2 - k1;
    for (int i = 0; i < cnt; ++i) {
      const long double ang =
          2.0L * static_cast<long double>(kPi) * (i + 0.5L) / cnt + 0.3L * (e + 1);
      z.push_back(rho * std::polar<long double>(1.0L, ang));
    }
  }

  for (int it = 0; it < 200; ++it) {
    long double worst = 0;
    for (int i = 0; i < deg; ++i) {
      cplxl p(0, 0), dp(0, 0);
      for (int k = deg; k >= 0; --k) {
        dp = dp * z[i] + p;
        p = p * z[i] + gl[k];
      }
      if (std::abs(p) == 0) continue;
      if (std::abs(dp) == 0) continue;
      cplxl w = p / dp;
      cplxl rep(0, 0);
      for (int j = 0; j < deg; ++j) {
        if (j == i) continue;
        cplxl d = z[i] - z[j];
        if (std::abs(d) > 1e-300L) rep += cplxl(1, 0) / d;
      }
      cplxl denom = cplxl(1, 0) - w * rep;
      cplxl step = (std::abs(denom) > 1e-300L) ? w / denom : w;
      if (!std::isfinite(static_cast<double>(std::abs(step)))) continue;
      z[i] -= step;
      worst = std::max(worst,
                       std::abs(step) / std::max<long double>(1.0L, std::abs(z[i])));
    }
    if (worst < 1e-17L) break;
  }
  return z;
}

// Greedy ordering that keeps the incremental products of (z - r_i)
// well-scaled (start at the largest modulus, then maximize the distance
// product to the already-chosen roots).
void leja_order(std::vector<cplxl>& r) {
  const size_t n = r.size();
  for (size_t i = 0; i < n; ++i) {
    size_t best = i;
    long double best_score = -1;
    for (size_t j = i; j < n; ++j) {
      long double score = (i == 0) ? std::abs(r[j]) : 0;
      if (i > 0) {
        score = 0;
        for (size_t k = 0; k < i; ++k)
          score += std::log(std::max<long double>(1e-300L, std::abs(r[j] - r[k])));
      }
      if (score > best_score) {
        best_score = score;
        best = j;
      }
    }
    std::swap(r[i], r[best]);
  }
}

// Newton correction of the completion: restore |a|^2 + |b|^2 = 1 to machine
// precision over the full support.  The root-based construction is accurate
// only to the fringe it trimmed, and the layer peel loses the square root of
// whatever defect remains, so polishing here is what makes the peel clean.
void refine_completion(const VecXl& a, VecXl& b, int L) {
  const int W = 2 * L + 1;
  auto defect_coeffs = [&](const VecXl& bb) {
    VecXl R(2 * L + 1);  // Laurent lags m = 0..2L; negative lags mirror
    for (int m = 0; m <= 2 * L; ++m) {
      cplxl s(0, 0);
      for (int n = -L; n <= L; ++n) {
        int k = n - m;
        if (k < -L || k > L) continue;
        s += a[n + L] * std::conj(a[k + L]) + bb[n + L] * std::conj(bb[k + L]);
      }
      R[m] = ((m == 0) ? cplxl(1, 0) : cplxl(0, 0)) - s;
    }
    return R;
  };
  auto worst = [&](const VecXl& R) {
    long double s = 0;
    for (int m = 0; m <= 2 * L; ++m) s = std::max(s, std::abs(R[m]));
    return s;
  };

  VecXl R = defect_coeffs(b);
  long double d0 = worst(R);
  for (int it = 0; it < 6 && d0 > 1e-18L; ++it) {
    // Realified linearization of delta |-> b * conj(delta) + delta * conj(b).
    MatRl M = MatRl::Zero(2 * (2 * L + 1), 2 * W);
    VecRl rhs(2 * (2 * L + 1));
    for (int m = 0; m <= 2 * L; ++m) {
      rhs[2 * m] = R[m].real();
      rhs[2 * m + 1] = R[m].imag();
      for (int k = -L; k <= L; ++k) {
        cplxl cp(0, 0), cq(0, 0);
        if (k + m <= L) {
          cp += b[k + m + L];
          cq += cplxl(0, -1) * b[k + m + L];
        }
        if (k - m >= -L) {
          cp += std::conj(b[k - m + L]);
          cq += cplxl(0, 1) * std::conj(b[k - m + L]);
        }
        M(2 * m, 2 * (k + L)) = cp.real();
        M(2 * m, 2 * (k + L) + 1) = cq.real();
        M(2 * m + 1, 2 * (k + L)) = cp.imag();
        M(2 * m + 1, 2 * (k + L) + 1) = cq.imag();
      }
    }
    Eigen::ColPivHouseholderQR<MatRl> qr(M);
    VecRl x = qr.solve(rhs);
    if (!x.allFinite()) break;
    VecXl bn = b;
    for (int k = -L; k <= L; ++k)
      bn[k + L] += cplxl(x[2 * (k + L)], x[2 * (k + L) + 1]);
    VecXl Rn = defect_coeffs(bn);
    const long double d1 = worst(Rn);
    if (!(d1 < d0)) break;
    b = bn;
    R.swap(Rn);
    d0 = d1;
  }
}

// b with |a|^2 + |b|^2 = 1 on the circle; support placed inside [-L, L].
// Assumes the caller already rescaled a away from the unimodular boundary.
VecXl complete_pair(const VectorXcd& a, int L) {
  VectorXcd F = one_minus_aa(a, L);
  // Drop only genuinely negligible fringe coefficients.  Anything real must
  // stay: the layer peel leaks every dropped coefficient divided by the local
  // lattice scale, and for smooth targets that ratio can be large.
  double fmax = 0;
  for (int m = -2 * L; m <= 2 * L; ++m)
    fmax = std::max(fmax, std::abs(F[m + 2 * L]));
  const double fringe = 1e-16 * fmax;
  int mu = 0;
  for (int m = 1; m <= 2 * L; ++m)
    if (std::max(std::abs(F[m + 2 * L]), std::abs(F[-m + 2 * L])) > fringe) mu = m;

  VecXl b = VecXl::Zero(2 * L + 1);
  if (mu == 0) {
    double f0 = std::max(0.0, F[2 * L].real());
    b[L] = std::sqrt(static_cast<long double>(f0));
  } else {
    VectorXcd g(2 * mu + 1);
    for (int k = 0; k <= 2 * mu; ++k) g[k] = F[k - mu + 2 * L];

    std::vector<cplxl> roots = poly_roots(g);
    std::sort(roots.begin(), roots.end(), [](const cplxl& p, const cplxl& q) {
      return std::abs(p) < std::abs(q);
    });
    std::vector<cplxl> inside(roots.begin(), roots.begin() + mu);
    leja_order(inside);

    std::vector<cplxl> p{cplxl(1, 0)};
    cplxl kappa(1, 0);
    for (const cplxl& r : inside) {
      kappa *= -std::conj(r);
      std::vector<cplxl> q(p.size() + 1, cplxl(0, 0));
      for (size_t i = 0; i < p.size(); ++i) {
        q[i + 1] += p[i];
        q[i] -= p[i] * r;
      }
      p.swap(q);
    }
    cplxl eta = std::sqrt(cplxl(g[2 * mu].real(), g[2 * mu].imag()) / kappa);

    int m0 = -((mu + 1) / 2);  // roughly centered support [m0, m0 + mu]
    m0 = std::max(m0, -L);
    m0 = std::min(m0, L - mu);
    for (int k = 0; k <= mu; ++k) b[m0 + k + L] = eta * p[k];
  }

  VecXl al(2 * L + 1);
  for (int k = 0; k < 2 * L + 1; ++k) al[k] = cplxl(a[k].real(), a[k].imag());
  refine_completion(al, b, L);
  return b;
}

Eigen::Matrix<cplxl, 2, 1> min_right_singular(const Mat2l& m) {
  Eigen::JacobiSVD<Mat2l> svd(m, Eigen::ComputeFullV);
  return svd.matrixV().col(1);
}

struct LayerAngles {
  long double theta = 0, phi = 0;
};

// Angles with row1(R_Y(theta) R_Z(phi)) proportional to conj(v1).
LayerAngles angles_from_kernel(const Eigen::Matrix<cplxl, 2, 1>& v1) {
  LayerAngles out;
  const cplxl u0 = std::conj(v1[0]), u1 = std::conj(v1[1]);
  const long double s = std::abs(u0), c = std::abs(u1);
  out.theta = 2.0L * std::atan2(s, c);
  out.phi = (s > 0 && c > 0) ? std::arg(u1) - std::arg(u0) : 0.0L;
  return out;
}

struct PeelResult {
  QnnParams params;
  double truncation = 0;  // mass dropped off the lattice ends
};

// Factor U(x) = [[a, b], [-conj_refl(b), conj_refl(a)]] into circuit layers.
PeelResult peel_layers(const VectorXcd& a, const VecXl& b, int L) {
  const int D = 2 * L;
  // w-lattice coefficients at level j: index k in [0, j], exponent 2k - j.
  std::vector<Mat2l> cs(D + 1);
  for (int k = 0; k <= D; ++k) {
    const int n = L - k;  // z-frequency carried by w^{2k - 2L}
    Mat2l m;
    m(0, 0) = cplxl(a[n + L].real(), a[n + L].imag());
    m(0, 1) = b[n + L];
    m(1, 0) = -std::conj(b[-n + L]);
    m(1, 1) = cplxl(a[-n + L].real(), -a[-n + L].imag());
    cs[k] = m;
  }

  PeelResult res;
  res.params = QnnParams::zero(D);
  long double trunc = 0;
  for (int j = D; j >= 1; --j) {
    const Mat2l& top = cs[j];
    const Mat2l& bot = cs[0];
    Eigen::Matrix<cplxl, 2, 1> v1;
    const long double tn = top.norm(), bn = bot.norm();
    if (tn < 1e-300L && bn < 1e-300L) {
      v1 << cplxl(0, 0), cplxl(1, 0);  // any unitary V works; pick identity
    } else if (tn >= bn) {
      v1 = min_right_singular(top);
    } else {
      Eigen::Matrix<cplxl, 2, 1> v0 = min_right_singular(bot);
      v1 << -std::conj(v0[1]), std::conj(v0[0]);
    }
    LayerAngles la = angles_from_kernel(v1);
    res.params.theta[j] = static_cast<double>(la.theta);
    res.params.phi[j + 1] = static_cast<double>(la.phi);

    const Mat2l vdag = (gate_ry_l(la.theta) * gate_rz_l(la.phi)).adjoint();
    std::vector<Mat2l> next(j, Mat2l::Zero());
    for (int k = 0; k <= j; ++k) {
      Mat2l m = cs[k] * vdag;
      if (k >= 1)
        next[k - 1].col(0) += m.col(0);
      else
        trunc = std::max(trunc, static_cast<long double>(m.col(0).norm()));
      if (k <= j - 1)
        next[k].col(1) += m.col(1);
      else
        trunc = std::max(trunc, static_cast<long double>(m.col(1).norm()));
    }
    cs.swap(next);
  }
  res.truncation = static_cast<double>(trunc);

  // Constant block: Euler Z-Y-Z angles.
  const Mat2l a0 = cs[0];
  const long double lo = std::hypot(std::abs(a0(1, 0)), std::abs(a0(0, 1)));
  const long double hi = std::hypot(std::abs(a0(0, 0)), std::abs(a0(1, 1)));
  res.params.theta[0] =
      static_cast<double>(2.0L * std::atan2(lo / std::sqrt(2.0L), hi / std::sqrt(2.0L)));
  long double sum = 0, diff = 0;
  if (hi > 1e-300L) sum = -2.0L * std::arg(a0(0, 0));
  if (lo > 1e-300L) diff = 2.0L * std::arg(a0(1, 0));
  res.params.phi[0] = static_cast<double>(0.5L * (sum + diff));
  res.params.phi[1] = static_cast<double>(0.5L * (sum - diff));
  return res;
}

// ---- numerical fallback ----------------------------------------------------

Matrix2cd d_ry(double theta) {
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  Matrix2cd g;
  g << -s / 2, -c / 2, c / 2, -s / 2;
  return g;
}

Matrix2cd d_rz(double theta) {
  Matrix2cd g = Matrix2cd::Zero();
  g(0, 0) = cplx(0, -0.5) * std::polar(1.0, -theta / 2);
  g(1, 1) = cplx(0, 0.5) * std::polar(1.0, theta / 2);
  return g;
}

// Residuals r (2G) and Jacobian J (2G x P) of the amplitude against the
// target values on the grid; parameter order [theta..., phi...].
void residual_and_jacobian(const QnnParams& p, const std::vector<double>& xs,
                           const std::vector<cplx>& target, VectorXd& r,
                           Eigen::MatrixXd& J) {
  const int D = p.depth();
  const int P = p.param_count();
  const int G = static_cast<int>(xs.size());
  r.resize(2 * G);
  J.resize(2 * G, P);
  std::vector<Matrix2cd> blocks(D + 1), prefix(D + 2), suffix(D + 2);
  for (int g = 0; g < G; ++g) {
    const double x = xs[g];
    blocks[0] = gate_rz(p.phi[0]) * gate_ry(p.theta[0]) * gate_rz(p.phi[1]);
    const Matrix2cd w = gate_rz(x);
    for (int l = 1; l <= D; ++l)
      blocks[l] = w * gate_ry(p.theta[l]) * gate_rz(p.phi[l + 1]);
    prefix[0] = Matrix2cd::Identity();
    for (int l = 0; l <= D; ++l) prefix[l + 1] = prefix[l] * blocks[l];
    suffix[D + 1] = Matrix2cd::Identity();
    for (int l = D; l >= 0; --l) suffix[l] = blocks[l] * suffix[l + 1];

    const cplx amp = prefix[D + 1](0, 0);
    const cplx res = amp - target[g];
    r[2 * g] = res.real();
    r[2 * g + 1] = res.imag();

    auto entry = [&](int l, const Matrix2cd& db) -> cplx {
      // <0| prefix_{l-1} db suffix_{l+1} |0>
      const Eigen::RowVector2cd row = prefix[l].row(0);
      const Eigen::Vector2cd col = suffix[l + 1].col(0);
      return (row * (db * col))(0, 0);
    };
    for (int l = 0; l <= D; ++l) {
      Matrix2cd db;
      if (l == 0)
        db = gate_rz(p.phi[0]) * d_ry(p.theta[0]) * gate_rz(p.phi[1]);
      else
        db = w * d_ry(p.theta[l]) * gate_rz(p.phi[l + 1]);
      const cplx d = entry(l, db);
      J(2 * g, l) = d.real();
      J(2 * g + 1, l) = d.imag();
    }
    for (int l = 0; l <= D + 1; ++l) {
      Matrix2cd db;
      if (l == 0)
        db = d_rz(p.phi[0]) * gate_ry(p.theta[0]) * gate_rz(p.phi[1]);
      else if (l == 1)
        db = gate_rz(p.phi[0]) * gate_ry(p.theta[0]) * d_rz(p.phi[1]);
      else
        db = w * gate_ry(p.theta[l - 1]) * d_rz(p.phi[l]);
      const int block = (l <= 1) ? 0 : l - 1;
      const cplx d = entry(block, db);
      J(2 * g, D + 1 + l) = d.real();
      J(2 * g + 1, D + 1 + l) = d.imag();
    }
  }
}

QnnParams from_vector(const VectorXd& v, int D) {
  QnnParams p = QnnParams::zero(D);
  p.theta = v.head(D + 1);
  p.phi = v.tail(D + 2);
  return p;
}

VectorXd to_vector(const QnnParams& p) {
  VectorXd v(p.param_count());
  v.head(p.theta.size()) = p.theta;
  v.tail(p.phi.size()) = p.phi;
  return v;
}

QnnParams least_squares_fit(const TrigPoly1D& T, const QnnParams* warm,
                            const CompileOptions& opts, double* out_res) {
  const int L = T.degree, D = 2 * L;
  const int G = std::max(256, 8 * (L + 1));
  std::vector<double> xs(G);
  std::vector<cplx> target(G);
  for (int g = 0; g < G; ++g) {
    xs[g] = -kPi + kTwoPi * g / G;
    target[g] = eval_poly(T, xs[g]);
  }

  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> uni(-kPi, kPi);

  QnnParams best = QnnParams::zero(D);
  double best_res = std::numeric_limits<double>::infinity();
  VectorXd r;
  Eigen::MatrixXd J;
  for (int start = 0; start < std::max(1, opts.fallback_starts); ++start) {
    QnnParams p = QnnParams::zero(D);
    if (start == 0 && warm) {
      p = *warm;
    } else {
      for (int i = 0; i <= D; ++i) p.theta[i] = uni(rng);
      for (int i = 0; i <= D + 1; ++i) p.phi[i] = uni(rng);
    }
    double lambda = 1e-3;
    residual_and_jacobian(p, xs, target, r, J);
    double cost = r.squaredNorm();
    for (int it = 0; it < opts.fallback_iterations; ++it) {
      Eigen::MatrixXd h = J.transpose() * J;
      h.diagonal().array() += lambda;
      VectorXd step = h.ldlt().solve(-J.transpose() * r);
      QnnParams trial = from_vector(to_vector(p) + step, D);
      VectorXd r2;
      Eigen::MatrixXd J2;
      residual_and_jacobian(trial, xs, target, r2, J2);
      const double cost2 = r2.squaredNorm();
      if (cost2 < cost) {
        p = trial;
        r = r2;
        J = J2;
        cost = cost2;
        lambda = std::max(1e-12, lambda * 0.3);
      } else {
        lambda *= 8;
        if (lambda > 1e12) break;
      }
      if (cost < 1e-24) break;
    }
    const double sup = verify_params(p, T, std::max(1024, 16 * (L + 1)));
    if (sup < best_res) {
      best_res = sup;
      best = p;
    }
    if (best_res <= opts.tolerance) break;
  }
  if (out_res) *out_res = best_res;
  return best;
}

}  // namespace

void normalize_global_phase(QnnParams& p) {
  double k = std::floor(p.phi[0] / kTwoPi);
  if (k == 0) return;
  p.phi[0] -= kTwoPi * k;
  // Each 2pi shift of an R_Z angle flips the sign of the circuit; an odd
  // total is compensated through the first interior phase.
  if (std::fmod(std::abs(k), 2.0) == 1.0) p.phi[1] += kTwoPi;
}

double verify_params(const QnnParams& p, const TrigPoly1D& T, int G) {
  double worst = 0;
  for (int g = 0; g < G; ++g) {
    const double x = -kPi + kTwoPi * g / G;
    worst = std::max(worst,
                     std::abs(circuit_amplitude(p, x) - eval_poly(T, x)));
  }
  return worst;
}

std::pair<QnnParams, CompileReport> compile_trig_poly(const TrigPoly1D& T,
                                                      const CompileOptions& opts) {
  const int L = T.degree;
  if (L > opts.max_degree)
    throw std::invalid_argument("compile_trig_poly: degree above the supported cap");
  if (!T.coeffs.allFinite())
    throw std::invalid_argument("compile_trig_poly: non-finite coefficients");

  const double sup = sup_grid_abs(T, 4096);
  if (sup > 1.0 + 1e-12)
    throw NotBounded("compile_trig_poly: sup-grid |T| = " + std::to_string(sup) +
                     " exceeds 1");

  VectorXcd a = T.coeffs;
  VectorXcd F = one_minus_aa(a, L);
  const double max_f = laurent_max_on_grid(F, 2 * L, std::max(1024, 8 * L + 8));
  if (max_f > 1e-12 && sup > 1.0 - 1e-9) {
    a *= (1.0 - 1e-9);  // push the factorization roots off the unit circle
  }

  const int Gv = (opts.verify_grid > 0) ? opts.verify_grid
                                        : std::max(1024, 16 * (L + 1));
  QnnParams best;
  double best_res = std::numeric_limits<double>::infinity();
  std::string method = "analytic";
  try {
    VecXl b = complete_pair(a, L);
    PeelResult pr = peel_layers(a, b, L);
    normalize_global_phase(pr.params);
    best = pr.params;
    best_res = verify_params(best, T, Gv);
  } catch (const std::exception&) {
    best_res = std::numeric_limits<double>::infinity();
  }

  if (best_res > opts.tolerance && opts.allow_fallback) {
    double ls_res = 0;
    const QnnParams* warm = std::isfinite(best_res) ? &best : nullptr;
    QnnParams ls = least_squares_fit(T, warm, opts, &ls_res);
    if (ls_res < best_res) {
      best = ls;
      best_res = ls_res;
      method = "least-squares";
      normalize_global_phase(best);
      best_res = verify_params(best, T, Gv);
    }
  }

  if (!(best_res <= 1e-4))
    throw CompileFailed("compile_trig_poly: best residual " +
                            std::to_string(best_res) + " above 1e-4",
                        best_res);
  return {best, CompileReport{best_res, method, Gv}};
}

std::pair<QnnParams, CompileReport> compile_monomial(cplx c, int n,
                                                     const CompileOptions& opts) {
  double mag = std::abs(c);
  if (mag > 1.0 + 1e-12)
    throw NotBounded("compile_monomial: |c| = " + std::to_string(mag) +
                     " exceeds 1");
  if (mag > 1.0) {
    c /= mag;
    mag = 1.0;
  }
  const int absn = std::abs(n);
  if (absn > opts.max_degree)
    throw std::invalid_argument("compile_monomial: |n| above the supported cap");

  TrigPoly1D target(absn, VectorXcd::Zero(2 * absn + 1));
  target.c(n) = c;

  if (n > 0) {
    auto [p, rep] = compile_trig_poly(target, opts);
    return {p, rep};
  }

  // Phase accumulation: amplitude = cos(theta0/2) e^{-i(phi_g+...)/2} e^{-i|n|x}.
  QnnParams p = QnnParams::zero(2 * absn);
  p.theta[0] = 2.0 * std::acos(std::min(1.0, mag));
  p.phi[0] = (mag > 0) ? -2.0 * std::arg(c) : 0.0;
  normalize_global_phase(p);

  const int Gv = (opts.verify_grid > 0) ? opts.verify_grid
                                        : std::max(1024, 16 * (absn + 1));
  const double res = verify_params(p, target, Gv);
  return {p, CompileReport{res, "closed-form", Gv}};
}

}  // namespace jqnn
