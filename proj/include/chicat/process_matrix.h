// Copyright 2026 The chicat Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CHICAT_PROCESS_MATRIX_H_
#define CHICAT_PROCESS_MATRIX_H_

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "chicat/tensor.h"

namespace chicat {

enum class BasisKind {
  kMatrixUnit,  // |i><j| per subsystem
  kPauliLike,   // Paulis for qubits, Weyl clock-shift operators otherwise
};

const char* to_string(BasisKind kind);
BasisKind basis_kind_from_string(const std::string& name);

/// Orthonormal product operator basis B_n = b_{n_1} (x) ... (x) b_{n_N}.
///
/// The local index is n_k = i_k * d_k + j_k for matrix units |i><j|, and
/// n_k = a * d_k + b for the Weyl operator X^a Z^b / sqrt(d_k) (qubits use
/// I, X, Y, Z / sqrt(2) in that order). The global index enumerates
/// (n_1, ..., n_N) lexicographically, so every basis element satisfies
/// Tr(B_m^dagger B_n) = delta_mn.
class OperatorBasis {
 public:
  OperatorBasis() = default;
  OperatorBasis(SubsystemShape shape, BasisKind kind);

  const SubsystemShape& shape() const { return shape_; }
  BasisKind kind() const { return kind_; }
  std::size_t dim() const { return shape_.total(); }
  std::size_t size() const { return dim() * dim(); }

  ComplexMatrix element(std::size_t n) const;

  /// W with W_{m,a} = Tr(B_m^dagger E_a) where E is the matrix-unit basis on
  /// the same shape. Coefficient vectors transform as k_this = W k_unit.
  ComplexMatrix from_matrix_unit() const;

  static ComplexMatrix local_element(std::size_t d, BasisKind kind, std::size_t n);

  friend bool operator==(const OperatorBasis&, const OperatorBasis&) = default;

 private:
  SubsystemShape shape_;
  BasisKind kind_ = BasisKind::kMatrixUnit;
};

using Metadata = std::map<std::string, std::string>;

/// Process matrix normalized so that the channel reads
///   E(rho) = D * sum_mn chi_mn B_m rho B_n^dagger
/// for the orthonormal basis B. In the matrix-unit basis chi is the Choi
/// state (E (x) id)(|Phi><Phi|) with |Phi> = sum_i |i>|i> / sqrt(D), up to
/// the reshuffle that interleaves system and ancilla indices per subsystem.
/// Trace-preserving maps have Tr(chi) = 1.
class ProcessMatrix {
 public:
  ProcessMatrix() = default;
  ProcessMatrix(OperatorBasis basis, ComplexMatrix chi, Metadata metadata = {});

  const OperatorBasis& basis() const { return basis_; }
  const ComplexMatrix& chi() const { return chi_; }
  std::size_t dim() const { return basis_.dim(); }
  bool trace_preserving() const { return trace_preserving_; }
  double trace() const { return chi_.trace().real(); }
  Metadata& metadata() { return metadata_; }
  const Metadata& metadata() const { return metadata_; }

  ProcessMatrix in_basis(BasisKind kind) const;

  /// Smallest eigenvalue of the Hermitian part of chi.
  double min_eigenvalue() const;

 private:
  OperatorBasis basis_;
  ComplexMatrix chi_;
  bool trace_preserving_ = false;
  Metadata metadata_;
};

/// Tolerance on |Tr_out(Choi) - I/D| below which a map counts as trace preserving.
inline constexpr double kTracePreservingTol = 1e-9;

ProcessMatrix chi_from_kraus(std::span<const ComplexMatrix> kraus, const OperatorBasis& basis);
ProcessMatrix chi_from_unitary(const ComplexMatrix& u, const OperatorBasis& basis);
ProcessMatrix identity_chi(const OperatorBasis& basis);

/// Superoperator S acting on row-major vec(rho): S_{(ik),(jl)} = D chi_{(ij),(kl)}.
ComplexMatrix to_superoperator(const ProcessMatrix& p);
ProcessMatrix from_superoperator(const ComplexMatrix& s, const OperatorBasis& basis);

/// `first` then `second`, composed through superoperators.
ProcessMatrix serial_concat(const ProcessMatrix& first, const ProcessMatrix& second);

/// Sparse structure constants: B_p B_m = sum_r c^r_pm B_r.
///
/// The coefficients refer to the orthonormal elements, so for one qubit in
/// the pauli-like basis (X/sqrt2)(Y/sqrt2) = (i/sqrt2)(Z/sqrt2).
class StructureConstants {
 public:
  struct Term {
    std::size_t r;
    Complex coefficient;
  };

  explicit StructureConstants(const OperatorBasis& basis);

  const OperatorBasis& basis() const { return basis_; }
  std::span<const Term> terms(std::size_t p, std::size_t m) const;

 private:
  OperatorBasis basis_;
  std::size_t size_ = 0;
  std::vector<std::size_t> offsets_;
  std::vector<Term> terms_;
};

StructureConstants structure_constants(const OperatorBasis& basis);

/// `first` then `second` via chi12_rs = D sum c^r_pm chi1_mn chi2_pq conj(c^s_qn).
ProcessMatrix serial_concat_structure(const ProcessMatrix& first, const ProcessMatrix& second,
                                      const StructureConstants& constants);

/// Tensor product with `a` on the leading subsystems.
ProcessMatrix parallel_concat(const ProcessMatrix& a, const ProcessMatrix& b);

/// a on register wires `wires_a`, b on `wires_b`; result acts on the union in
/// increasing wire order.
ProcessMatrix parallel_concat(const ProcessMatrix& a, std::span<const std::size_t> wires_a,
                              const ProcessMatrix& b, std::span<const std::size_t> wires_b);

/// `small` acting on register subsystems `positions` (small's subsystem k
/// sits at register position positions[k]), identity elsewhere.
ProcessMatrix embed(const ProcessMatrix& small, const SubsystemShape& reg,
                    std::span<const std::size_t> positions);

/// Reorders the subsystems of a process: subsystem k moves to position perm[k].
ProcessMatrix permute_process(const ProcessMatrix& p, std::span<const std::size_t> perm);

/// Half the trace norm of chi_a - chi_b.
double trace_distance(const ProcessMatrix& a, const ProcessMatrix& b);

/// Normalized Choi matrix on system (x) ancilla (trace 1 for TP maps).
ComplexMatrix to_choi(const ProcessMatrix& p);
ProcessMatrix from_choi(const ComplexMatrix& choi, const OperatorBasis& basis);

struct QubitProjection {
  ProcessMatrix chi;
  double leakage = 0.0;  // 1 - Tr(chi)
};

/// Restricts a process over d-level subsystems to the levels {0, 1} of each
/// subsystem on input and output. Population left outside the qubit levels
/// shows up as trace loss.
QubitProjection project_to_qubit_subspace(const ProcessMatrix& p);

}  // namespace chicat

#endif  // CHICAT_PROCESS_MATRIX_H_
