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

#include "chicat/process_matrix.h"

#include <cmath>
#include <random>

#include "gtest/gtest.h"

#include "chicat/errors.h"
#include "test_util.h"

using namespace chicat;
using chicat::testing::Mat;
using chicat::testing::random_kraus;
using chicat::testing::random_unitary;

namespace {

const Complex kI(0.0, 1.0);

OperatorBasis qubits(std::size_t n, BasisKind kind = BasisKind::kMatrixUnit) {
  return OperatorBasis(SubsystemShape::uniform(n, 2), kind);
}

ComplexMatrix pauli(int k) {
  switch (k) {
    case 1:
      return {{0.0, 1.0}, {1.0, 0.0}};
    case 2:
      return {{0.0, -kI}, {kI, 0.0}};
    case 3:
      return {{1.0, 0.0}, {0.0, -1.0}};
    default:
      return ComplexMatrix::identity(2);
  }
}

ComplexMatrix hadamard() {
  const double s = 1.0 / std::sqrt(2.0);
  return {{s, s}, {s, -s}};
}

ComplexMatrix cnot() {
  ComplexMatrix u(4, 4);
  u(0, 0) = u(1, 1) = u(2, 3) = u(3, 2) = 1.0;
  return u;
}

std::vector<ComplexMatrix> amplitude_damping(double g) {
  return {{{1.0, 0.0}, {0.0, std::sqrt(1.0 - g)}}, {{0.0, std::sqrt(g)}, {0.0, 0.0}}};
}

// chi by linear inversion: build the superoperator column by column from the
// channel's action on matrix units and project onto B_m (x) conj(B_n).
Mat chi_by_inversion(const std::vector<ComplexMatrix>& kraus, const std::vector<Mat>& basis) {
  const Eigen::Index d = static_cast<Eigen::Index>(kraus.front().rows());
  Mat s(d * d, d * d);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index l = 0; l < d; ++l) {
      Mat unit = Mat::Zero(d, d);
      unit(j, l) = 1.0;
      const Mat out = chicat::testing::apply_kraus(kraus, unit);
      for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index k = 0; k < d; ++k) s(i * d + k, j * d + l) = out(i, k);
    }
  }
  const auto n = static_cast<Eigen::Index>(basis.size());
  Mat chi(n, n);
  for (Eigen::Index m = 0; m < n; ++m) {
    for (Eigen::Index k = 0; k < n; ++k) {
      const Mat e = chicat::testing::eigen_kron(basis[m], basis[k].conjugate());
      chi(m, k) = (e.adjoint() * s).trace() / static_cast<double>(d);
    }
  }
  return chi;
}

double chi_distance(const ProcessMatrix& p, const Mat& want) {
  return 0.5 * Eigen::JacobiSVD<Mat>(chicat::testing::to_eigen(p.chi()) - want).singularValues().sum();
}

}  // namespace

TEST(OperatorBasis, orthonormal) {
  for (auto kind : {BasisKind::kMatrixUnit, BasisKind::kPauliLike}) {
    for (const auto& shape : {SubsystemShape{2}, SubsystemShape{3}, SubsystemShape{2, 3}}) {
      const OperatorBasis b(shape, kind);
      for (std::size_t m = 0; m < b.size(); ++m) {
        const ComplexMatrix em = b.element(m).adjoint();
        for (std::size_t n = 0; n < b.size(); ++n) {
          const Complex ip = (em * b.element(n)).trace();
          EXPECT_LT(std::abs(ip - (m == n ? 1.0 : 0.0)), 1e-14) << to_string(kind) << " " << m << " " << n;
        }
      }
    }
  }
}

TEST(OperatorBasis, qubit_pauli_order) {
  const OperatorBasis b = qubits(1, BasisKind::kPauliLike);
  for (int k = 0; k < 4; ++k) {
    EXPECT_LT(max_abs_diff(b.element(k), pauli(k) * (1.0 / std::sqrt(2.0))), 1e-15);
  }
  // Lexicographic product order: index 1 * 4 + 3 is X (x) Z.
  const OperatorBasis two = qubits(2, BasisKind::kPauliLike);
  EXPECT_LT(max_abs_diff(two.element(7), kron(pauli(1), pauli(3)) * 0.5), 1e-15);
}

TEST(OperatorBasis, names) {
  EXPECT_EQ(basis_kind_from_string("pauli-like"), BasisKind::kPauliLike);
  EXPECT_EQ(std::string(to_string(BasisKind::kMatrixUnit)), "matrix-unit");
  EXPECT_THROW(basis_kind_from_string("bogus"), std::invalid_argument);
}

TEST(ChiFromKraus, identity_channel) {
  const ProcessMatrix p = identity_chi(qubits(1));
  EXPECT_NEAR(p.trace(), 1.0, 1e-15);
  EXPECT_TRUE(p.trace_preserving());
  // |phi><phi| with phi = vec(I) / sqrt(2).
  Mat phi = Mat::Zero(4, 1);
  phi(0) = phi(3) = 1.0 / std::sqrt(2.0);
  EXPECT_LT(chi_distance(p, phi * phi.adjoint()), 1e-15);
}

TEST(ChiFromKraus, bit_flip_orthogonal_to_identity) {
  const ProcessMatrix x = chi_from_unitary(pauli(1), qubits(1));
  const ProcessMatrix id = identity_chi(qubits(1));
  EXPECT_NEAR((x.chi() * id.chi()).trace().real(), 0.0, 1e-15);
  EXPECT_NEAR(trace_distance(x, id), 1.0, 1e-12);
}

TEST(ChiFromKraus, depolarizing_in_pauli_basis) {
  const double p = 0.5;
  std::vector<ComplexMatrix> kraus = {ComplexMatrix::identity(2) * std::sqrt(1.0 - 3.0 * p / 4.0)};
  for (int k = 1; k < 4; ++k) kraus.push_back(pauli(k) * std::sqrt(p / 4.0));
  std::vector<Mat> basis;
  for (int k = 0; k < 4; ++k) basis.push_back(chicat::testing::to_eigen(pauli(k)) / std::sqrt(2.0));
  const Mat want = chi_by_inversion(kraus, basis);
  Mat diag = Mat::Zero(4, 4);
  diag.diagonal() << 1.0 - 3.0 * p / 4.0, p / 4.0, p / 4.0, p / 4.0;
  EXPECT_LT((want - diag).cwiseAbs().maxCoeff(), 1e-14);
  const ProcessMatrix got = chi_from_kraus(kraus, qubits(1, BasisKind::kPauliLike));
  EXPECT_LT(chi_distance(got, want), 1e-14);
}

TEST(ChiFromKraus, random_channels_match_inversion) {
  std::mt19937_64 rng(41);
  const OperatorBasis b = OperatorBasis(SubsystemShape{3}, BasisKind::kPauliLike);
  std::vector<Mat> basis;
  for (std::size_t n = 0; n < b.size(); ++n) basis.push_back(chicat::testing::to_eigen(b.element(n)));
  const auto kraus = random_kraus(3, 3, rng);
  const ProcessMatrix got = chi_from_kraus(kraus, b);
  EXPECT_LT(chi_distance(got, chi_by_inversion(kraus, basis)), 1e-12);
  EXPECT_TRUE(is_hermitian(got.chi(), 1e-12));
  EXPECT_GT(got.min_eigenvalue(), -1e-12);
  EXPECT_NEAR(got.trace(), 1.0, 1e-12);
  EXPECT_TRUE(got.trace_preserving());
}

TEST(ChiFromKraus, rank_bound) {
  std::mt19937_64 rng(43);
  const ProcessMatrix p = chi_from_kraus(random_kraus(2, 2, rng), qubits(1));
  const auto eig = hermitian_eigen(p.chi());
  EXPECT_LT(std::abs(eig.values[0]), 1e-12);
  EXPECT_LT(std::abs(eig.values[1]), 1e-12);
}

TEST(ChiFromKraus, rejects_overcomplete) {
  const std::vector<ComplexMatrix> kraus = {ComplexMatrix::identity(2), pauli(1) * 0.1};
  EXPECT_THROW(chi_from_kraus(kraus, qubits(1)), std::invalid_argument);
}

TEST(ChiFromKraus, trace_decreasing_flag) {
  const std::vector<ComplexMatrix> kraus = {ComplexMatrix::identity(2) * 0.9};
  const ProcessMatrix p = chi_from_kraus(kraus, qubits(1));
  EXPECT_FALSE(p.trace_preserving());
  EXPECT_NEAR(p.trace(), 0.81, 1e-15);
}

TEST(SerialConcat, bit_flip_twice) {
  const ProcessMatrix x = chi_from_unitary(pauli(1), qubits(1));
  EXPECT_LT(trace_distance(serial_concat(x, x), identity_chi(qubits(1))), 1e-10);
}

TEST(SerialConcat, unitaries_multiply) {
  std::mt19937_64 rng(47);
  const ComplexMatrix u = random_unitary(4, rng), v = random_unitary(4, rng);
  const ProcessMatrix got = serial_concat(chi_from_unitary(u, qubits(2)), chi_from_unitary(v, qubits(2)));
  EXPECT_LT(trace_distance(got, chi_from_unitary(v * u, qubits(2))), 1e-10);
}

TEST(SerialConcat, amplitude_damping_composes) {
  const double g1 = 0.2, g2 = 0.35;
  const ProcessMatrix got =
      serial_concat(chi_from_kraus(amplitude_damping(g1), qubits(1)), chi_from_kraus(amplitude_damping(g2), qubits(1)));
  const ProcessMatrix want = chi_from_kraus(amplitude_damping(1.0 - (1.0 - g1) * (1.0 - g2)), qubits(1));
  EXPECT_LT(trace_distance(got, want), 1e-12);
}

TEST(SerialConcat, associative) {
  std::mt19937_64 rng(53);
  for (int rep = 0; rep < 10; ++rep) {
    const auto a = chi_from_kraus(random_kraus(4, 2, rng), qubits(2));
    const auto b = chi_from_kraus(random_kraus(4, 3, rng), qubits(2));
    const auto c = chi_from_kraus(random_kraus(4, 1, rng), qubits(2));
    EXPECT_LT(trace_distance(serial_concat(serial_concat(a, b), c), serial_concat(a, serial_concat(b, c))), 1e-10);
  }
}

TEST(SerialConcat, structure_route_agrees) {
  std::mt19937_64 rng(59);
  for (auto kind : {BasisKind::kMatrixUnit, BasisKind::kPauliLike}) {
    for (std::size_t n : {1u, 2u}) {
      const OperatorBasis basis = qubits(n, kind);
      const StructureConstants c = structure_constants(basis);
      for (int rep = 0; rep < 5; ++rep) {
        const std::size_t d = std::size_t{1} << n;
        const auto a = chi_from_kraus(random_kraus(d, 1 + rep % 4, rng), basis);
        const auto b = chi_from_kraus(random_kraus(d, 1 + (rep + 1) % 4, rng), basis);
        EXPECT_LT(max_abs_diff(serial_concat(a, b).chi(), serial_concat_structure(a, b, c).chi()), 1e-12);
      }
    }
  }
}

TEST(SerialConcat, basis_mismatch) {
  EXPECT_THROW(serial_concat(identity_chi(qubits(1)), identity_chi(qubits(2))), std::invalid_argument);
  EXPECT_THROW(serial_concat(identity_chi(qubits(1)), identity_chi(qubits(1, BasisKind::kPauliLike))),
               std::invalid_argument);
}

TEST(ParallelConcat, identities) {
  const ProcessMatrix id = identity_chi(qubits(1));
  EXPECT_LT(trace_distance(parallel_concat(id, id), identity_chi(qubits(2))), 1e-15);
}

TEST(ParallelConcat, hadamard_and_idle) {
  const ProcessMatrix got = parallel_concat(chi_from_unitary(hadamard(), qubits(1)), identity_chi(qubits(1)));
  EXPECT_LT(trace_distance(got, chi_from_unitary(kron(hadamard(), ComplexMatrix::identity(2)), qubits(2))), 1e-12);
}

TEST(ParallelConcat, random_channels_match_tensor_kraus) {
  std::mt19937_64 rng(61);
  for (int rep = 0; rep < 10; ++rep) {
    const auto ka = random_kraus(2, 1 + rep % 3, rng);
    const auto kb = random_kraus(3, 1 + rep % 2, rng);
    const ProcessMatrix got = parallel_concat(chi_from_kraus(ka, OperatorBasis(SubsystemShape{2}, BasisKind::kMatrixUnit)),
                                              chi_from_kraus(kb, OperatorBasis(SubsystemShape{3}, BasisKind::kMatrixUnit)));
    const Mat want = chicat::testing::choi_oracle(chicat::testing::tensor_kraus(ka, kb));
    EXPECT_LT(chicat::testing::choi_distance(chicat::testing::to_eigen(to_choi(got)), want), 1e-12);
  }
}

TEST(ParallelConcat, wire_lists) {
  std::mt19937_64 rng(67);
  const ComplexMatrix u = random_unitary(2, rng), v = random_unitary(2, rng);
  const std::size_t wa[] = {1}, wb[] = {0};
  const ProcessMatrix got = parallel_concat(chi_from_unitary(u, qubits(1)), wa, chi_from_unitary(v, qubits(1)), wb);
  EXPECT_LT(trace_distance(got, chi_from_unitary(kron(v, u), qubits(2))), 1e-12);
  EXPECT_THROW(parallel_concat(chi_from_unitary(u, qubits(1)), wa, chi_from_unitary(v, qubits(1)), wa),
               std::invalid_argument);
}

TEST(ParallelConcat, interchange_law) {
  std::mt19937_64 rng(71);
  for (int rep = 0; rep < 5; ++rep) {
    const auto a1 = chi_from_kraus(random_kraus(2, 2, rng), qubits(1));
    const auto a2 = chi_from_kraus(random_kraus(2, 3, rng), qubits(1));
    const auto b1 = chi_from_kraus(random_kraus(2, 1, rng), qubits(1));
    const auto b2 = chi_from_kraus(random_kraus(2, 2, rng), qubits(1));
    const auto lhs = parallel_concat(serial_concat(a1, a2), serial_concat(b1, b2));
    const auto rhs = serial_concat(parallel_concat(a1, b1), parallel_concat(a2, b2));
    EXPECT_LT(trace_distance(lhs, rhs), 1e-10);
  }
}

TEST(Embed, identity_anywhere) {
  const SubsystemShape reg = SubsystemShape::uniform(3, 2);
  for (std::size_t pos = 0; pos < 3; ++pos) {
    const std::size_t at[] = {pos};
    EXPECT_LT(trace_distance(embed(identity_chi(qubits(1)), reg, at), identity_chi(qubits(3))), 1e-15);
  }
}

TEST(Embed, cnot_on_trailing_pair) {
  const std::size_t at[] = {1, 2};
  const ProcessMatrix got = embed(chi_from_unitary(cnot(), qubits(2)), SubsystemShape::uniform(3, 2), at);
  EXPECT_LT(trace_distance(got, chi_from_unitary(kron(ComplexMatrix::identity(2), cnot()), qubits(3))), 1e-12);
}

TEST(Embed, reversed_positions) {
  // Control on wire 2, target on wire 0, built bit by bit.
  ComplexMatrix want(8, 8);
  for (std::size_t s = 0; s < 8; ++s) want((s & 1U) ? s ^ 4U : s, s) = 1.0;
  const std::size_t at[] = {2, 0};
  const ProcessMatrix got = embed(chi_from_unitary(cnot(), qubits(2)), SubsystemShape::uniform(3, 2), at);
  EXPECT_LT(trace_distance(got, chi_from_unitary(want, qubits(3))), 1e-12);
}

TEST(Embed, errors) {
  const std::size_t clash[] = {1, 1}, outside[] = {0, 3};
  const ProcessMatrix c = chi_from_unitary(cnot(), qubits(2));
  EXPECT_THROW(embed(c, SubsystemShape::uniform(3, 2), clash), std::invalid_argument);
  EXPECT_THROW(embed(c, SubsystemShape::uniform(3, 2), outside), std::invalid_argument);
  const std::size_t ok[] = {0, 1};
  EXPECT_THROW(embed(c, SubsystemShape{3, 3, 3}, ok), std::invalid_argument);
}

TEST(TraceDistance, basics) {
  std::mt19937_64 rng(73);
  const auto a = chi_from_kraus(random_kraus(4, 2, rng), qubits(2));
  const auto b = chi_from_kraus(random_kraus(4, 3, rng), qubits(2));
  EXPECT_NEAR(trace_distance(a, a), 0.0, 1e-15);
  EXPECT_NEAR(trace_distance(a, b), trace_distance(b, a), 1e-14);
  EXPECT_GE(trace_distance(a, b), 0.0);
  EXPECT_LE(trace_distance(a, b), 1.0 + 1e-10);
  EXPECT_THROW(trace_distance(a, a.in_basis(BasisKind::kPauliLike)), std::invalid_argument);
}

TEST(TraceDistance, basis_invariant) {
  std::mt19937_64 rng(79);
  for (int rep = 0; rep < 5; ++rep) {
    const ComplexMatrix u = random_unitary(4, rng), v = random_unitary(4, rng);
    const double unit = trace_distance(chi_from_unitary(u, qubits(2)), chi_from_unitary(v, qubits(2)));
    const double pauli_like = trace_distance(chi_from_unitary(u, qubits(2, BasisKind::kPauliLike)),
                                             chi_from_unitary(v, qubits(2, BasisKind::kPauliLike)));
    EXPECT_NEAR(unit, pauli_like, 1e-10);
  }
}

TEST(Choi, identity_is_bell_projector) {
  Mat phi = Mat::Zero(4, 1);
  phi(0) = phi(3) = 1.0 / std::sqrt(2.0);
  const ComplexMatrix j = to_choi(identity_chi(qubits(1)));
  EXPECT_LT((chicat::testing::to_eigen(j) - phi * phi.adjoint()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Choi, phase_flip_matches_direct_construction) {
  Mat phi = Mat::Zero(4, 1);
  phi(0) = phi(3) = 1.0 / std::sqrt(2.0);
  // Phase flip on the system factor, which leads in the system (x) ancilla order.
  const Mat z = chicat::testing::eigen_kron(chicat::testing::to_eigen(pauli(3)), Mat::Identity(2, 2));
  const Mat want = z * phi * phi.adjoint() * z.adjoint();
  const ComplexMatrix j = to_choi(chi_from_unitary(pauli(3), qubits(1)));
  EXPECT_LT((chicat::testing::to_eigen(j) - want).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Choi, round_trip_and_oracle) {
  std::mt19937_64 rng(83);
  for (auto kind : {BasisKind::kMatrixUnit, BasisKind::kPauliLike}) {
    const OperatorBasis basis(SubsystemShape{2, 3}, kind);
    const auto kraus = random_kraus(6, 2, rng);
    const ProcessMatrix p = chi_from_kraus(kraus, basis);
    const ComplexMatrix j = to_choi(p);
    EXPECT_LT(chicat::testing::choi_distance(chicat::testing::to_eigen(j), chicat::testing::choi_oracle(kraus)), 1e-12);
    EXPECT_LT(max_abs_diff(from_choi(j, basis).chi(), p.chi()), 1e-12);
  }
  EXPECT_THROW(from_choi(ComplexMatrix(4, 2), qubits(1)), std::invalid_argument);
}

TEST(ProjectQubit, identity_on_qutrit) {
  const OperatorBasis qutrit(SubsystemShape{3}, BasisKind::kMatrixUnit);
  const QubitProjection q = project_to_qubit_subspace(identity_chi(qutrit));
  EXPECT_NEAR(q.leakage, 0.0, 1e-15);
  EXPECT_LT(trace_distance(q.chi, identity_chi(qubits(1))), 1e-15);
}

TEST(ProjectQubit, full_leakage) {
  const OperatorBasis qutrit(SubsystemShape{3}, BasisKind::kMatrixUnit);
  std::vector<ComplexMatrix> kraus;
  for (std::size_t i = 0; i < 3; ++i) {
    ComplexMatrix k(3, 3);
    k(2, i) = 1.0;
    kraus.push_back(k);
  }
  const QubitProjection q = project_to_qubit_subspace(chi_from_kraus(kraus, qutrit));
  EXPECT_NEAR(q.leakage, 1.0, 1e-15);
  EXPECT_LT(q.chi.chi().max_abs(), 1e-15);
}

TEST(ProjectQubit, partial_leakage) {
  const double eps = 0.3;
  ComplexMatrix k0 = ComplexMatrix::identity(3), k1(3, 3);
  k0(1, 1) = std::sqrt(1.0 - eps);
  k1(2, 1) = std::sqrt(eps);
  const std::vector<ComplexMatrix> kraus = {k0, k1};
  const QubitProjection q =
      project_to_qubit_subspace(chi_from_kraus(kraus, OperatorBasis(SubsystemShape{3}, BasisKind::kMatrixUnit)));
  // Oracle: Choi matrix restricted to qubit indices, one term per input level.
  const Mat j = chicat::testing::choi_oracle(kraus);
  double trace = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int a = 0; a < 2; ++a) trace += j(i * 3 + a, i * 3 + a).real() * 3.0 / 2.0;
  EXPECT_NEAR(q.chi.trace(), trace, 1e-14);
  EXPECT_NEAR(q.chi.trace(), 1.0 - eps / 2.0, 1e-14);
  EXPECT_NEAR(q.leakage, eps / 2.0, 1e-14);
}

TEST(StructureConstants, matrix_units) {
  const OperatorBasis b = qubits(1);
  const StructureConstants c(b);
  // E_01 has index 1, E_10 index 2, E_00 index 0.
  const auto t = c.terms(1, 2);
  ASSERT_EQ(t.size(), 1u);
  EXPECT_EQ(t[0].r, 0u);
  EXPECT_EQ(t[0].coefficient, Complex(1.0));
  for (std::size_t p = 0; p < b.size(); ++p)
    for (std::size_t m = 0; m < b.size(); ++m) EXPECT_LE(c.terms(p, m).size(), 1u);
}

TEST(StructureConstants, pauli_product) {
  const StructureConstants c(qubits(1, BasisKind::kPauliLike));
  const auto t = c.terms(1, 2);
  ASSERT_EQ(t.size(), 1u);
  EXPECT_EQ(t[0].r, 3u);
  EXPECT_LT(std::abs(t[0].coefficient - kI / std::sqrt(2.0)), 1e-15);
}

TEST(StructureConstants, reconstruction) {
  std::mt19937_64 rng(89);
  for (auto kind : {BasisKind::kMatrixUnit, BasisKind::kPauliLike}) {
    const OperatorBasis b(SubsystemShape{2, 3}, kind);
    const StructureConstants c(b);
    std::uniform_int_distribution<std::size_t> pick(0, b.size() - 1);
    for (int rep = 0; rep < 50; ++rep) {
      const std::size_t p = pick(rng), m = pick(rng);
      ComplexMatrix sum(b.dim(), b.dim());
      for (const auto& term : c.terms(p, m)) sum += b.element(term.r) * term.coefficient;
      EXPECT_LT(max_abs_diff(sum, b.element(p) * b.element(m)), 1e-12);
    }
  }
}

TEST(ProcessMatrix, rejects_bad_size) {
  EXPECT_THROW(ProcessMatrix(qubits(1), ComplexMatrix(3, 3)), std::invalid_argument);
}

TEST(ProcessMatrix, in_basis_round_trip) {
  std::mt19937_64 rng(97);
  const auto p = chi_from_kraus(random_kraus(4, 2, rng), qubits(2));
  const auto back = p.in_basis(BasisKind::kPauliLike).in_basis(BasisKind::kMatrixUnit);
  EXPECT_LT(max_abs_diff(p.chi(), back.chi()), 1e-13);
}
