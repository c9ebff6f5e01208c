// Linear-combination-of-unitaries assembly for multivariate amplitudes:
// q ancilla qubits select one of nblocks product circuits; Hadamards on the
// ancillas average the selected <0|.|0> amplitudes.
#pragma once

#include "jqnn/gates.hpp"
#include "jqnn/types.hpp"

namespace jqnn {

// One selected branch per multi-index: blocks[i][j] is the single-qubit
// circuit applied to coordinate j when the ancilla register is |i>.
// Unselected ancilla values (i >= nblocks) apply X on every data qubit,
// which contributes nothing to the <0|.|0> amplitude.
struct BlockSpec {
  int d = 1;                               // data qubits / coordinates
  int q = 0;                               // ancilla qubits
  Eigen::VectorXi degrees;                 // box half-widths L_j
  std::vector<Eigen::VectorXi> ordering;   // multi-index per block, lex order
  std::vector<std::vector<QnnParams>> blocks;  // [nblocks][d]

  long long nblocks() const { return static_cast<long long>(ordering.size()); }
  long long box_size() const {
    long long b = 1;
    for (int j = 0; j < degrees.size(); ++j) b *= 2LL * degrees[j] + 1;
    return b;
  }
  // Checks: ordering is a bijection onto the box, q = ceil(log2 nblocks),
  // block array shapes match.
  void validate() const;
};

int ceil_log2(long long n);

// (H^q x I)^dagger C (H^q x I) with C = sum_i |i><i| x B_i, built densely.
// Guard: q + d <= 14, otherwise TooLarge.
MatrixXcd lcu_dense_unitary(const BlockSpec& s, const Eigen::VectorXd& x);

// 2^{-q} sum_{i < nblocks} prod_j <0|U_{ij}(x_j)|0>; O(nblocks * depth).
cplx lcu_amplitude_fast(const BlockSpec& s, const Eigen::VectorXd& x);

// Fast amplitude on a tensor grid (axes[j] holds the sample points of
// coordinate j); per-axis per-block amplitudes are cached. Output is
// row-major (last axis fastest).
Eigen::VectorXcd lcu_amplitude_grid(const BlockSpec& s,
                                    const std::vector<Eigen::VectorXd>& axes);

}  // namespace jqnn
