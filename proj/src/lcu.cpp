#include "jqnn/lcu.hpp"

#include <set>

#include "jqnn/parallel.hpp"

namespace jqnn {

int ceil_log2(long long n) {
  if (n < 1) throw std::invalid_argument("ceil_log2: n must be >= 1");
  int q = 0;
  while ((1LL << q) < n) ++q;
  return q;
}

void BlockSpec::validate() const {
  if (d < 1 || degrees.size() != d)
    throw std::invalid_argument("BlockSpec: degrees must have one entry per axis");
  if (nblocks() != box_size())
    throw std::invalid_argument("BlockSpec: ordering must cover the whole box");
  if (q != ceil_log2(std::max<long long>(1, nblocks())))
    throw std::invalid_argument("BlockSpec: q != ceil(log2(nblocks))");
  if (static_cast<long long>(blocks.size()) != nblocks())
    throw std::invalid_argument("BlockSpec: one block row per ordering entry");
  std::set<std::vector<int>> seen;
  for (const auto& n : ordering) {
    if (n.size() != d)
      throw std::invalid_argument("BlockSpec: multi-index dimension mismatch");
    for (int j = 0; j < d; ++j)
      if (std::abs(n[j]) > degrees[j])
        throw std::invalid_argument("BlockSpec: multi-index outside the box");
    if (!seen.insert(std::vector<int>(n.data(), n.data() + n.size())).second)
      throw std::invalid_argument("BlockSpec: duplicate multi-index");
  }
  for (const auto& row : blocks) {
    if (static_cast<int>(row.size()) != d)
      throw std::invalid_argument("BlockSpec: one parameter set per axis");
    for (const auto& p : row) p.validate();
  }
}

MatrixXcd lcu_dense_unitary(const BlockSpec& s, const Eigen::VectorXd& x) {
  s.validate();
  if (x.size() != s.d)
    throw std::invalid_argument("lcu_dense_unitary: point dimension mismatch");
  if (s.q + s.d > 14)
    throw TooLarge("lcu_dense_unitary: q + d = " + std::to_string(s.q + s.d) +
                   " exceeds the dense-size guard (14)");

  const long long anc = 1LL << s.q, dat = 1LL << s.d;
  const long long dim = anc * dat;
  MatrixXcd c = MatrixXcd::Zero(dim, dim);
  const MatrixXcd xfill = kron_pow(gate_x(), s.d);
  for (long long i = 0; i < anc; ++i) {
    MatrixXcd block;
    if (i < s.nblocks()) {
      block = MatrixXcd::Identity(1, 1);
      for (int j = 0; j < s.d; ++j)
        block = kron(block, single_qubit_unitary(s.blocks[i][j], x[j]));
    } else {
      block = xfill;
    }
    c.block(i * dat, i * dat, dat, dat) = block;
  }
  const MatrixXcd mix = kron(kron_pow(gate_h(), s.q), MatrixXcd::Identity(dat, dat));
  return mix.adjoint() * (c * mix);
}

cplx lcu_amplitude_fast(const BlockSpec& s, const Eigen::VectorXd& x) {
  if (x.size() != s.d)
    throw std::invalid_argument("lcu_amplitude_fast: point dimension mismatch");
  cplx acc(0, 0);
  for (long long i = 0; i < s.nblocks(); ++i) {
    cplx prod(1, 0);
    for (int j = 0; j < s.d; ++j)
      prod *= circuit_amplitude(s.blocks[i][j], x[j]);
    acc += prod;
  }
  return acc / static_cast<double>(1LL << s.q);
}

Eigen::VectorXcd lcu_amplitude_grid(const BlockSpec& s,
                                    const std::vector<Eigen::VectorXd>& axes) {
  if (static_cast<int>(axes.size()) != s.d)
    throw std::invalid_argument("lcu_amplitude_grid: one axis grid per coordinate");
  const long long nb = s.nblocks();

  // amps[i][j][g] = <0|U_{ij}(axes[j][g])|0>
  std::vector<std::vector<Eigen::VectorXcd>> amps(nb);
  parallel_for(nb, [&](long long i) {
    amps[i].resize(s.d);
    for (int j = 0; j < s.d; ++j) {
      const Eigen::VectorXd& g = axes[j];
      amps[i][j].resize(g.size());
      for (Eigen::Index k = 0; k < g.size(); ++k)
        amps[i][j][k] = circuit_amplitude(s.blocks[i][j], g[k]);
    }
  });

  long long total = 1;
  for (const auto& g : axes) total *= g.size();
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(total);
  const double scale = 1.0 / static_cast<double>(1LL << s.q);
  std::vector<long long> idx(s.d, 0);
  for (long long flat = 0; flat < total; ++flat) {
    long long rem = flat;
    // decode row-major grid index (last axis fastest)
    for (int j = s.d - 1; j >= 0; --j) {
      idx[j] = rem % axes[j].size();
      rem /= axes[j].size();
    }
    cplx acc(0, 0);
    for (long long i = 0; i < nb; ++i) {
      cplx prod(1, 0);
      for (int j = 0; j < s.d; ++j) prod *= amps[i][j][idx[j]];
      acc += prod;
    }
    out[flat] = acc * scale;
  }
  return out;
}

}  // namespace jqnn
