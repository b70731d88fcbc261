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

#ifndef CHICAT_TENSOR_H_
#define CHICAT_TENSOR_H_

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace chicat {

using Complex = std::complex<double>;

/// Largest row or column count any constructed matrix may have.
inline constexpr std::size_t kMaxDimension = 1 << 13;

/// Dense complex matrix, row-major. Column vectors are n x 1 matrices; a
/// pure state of a system with an idle ancilla is stored as a D x A matrix
/// (system index major, ancilla index minor).
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const Complex> values);
  static ComplexMatrix column(std::vector<Complex> values);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return entries_.size(); }
  bool is_square() const { return rows_ == cols_; }

  Complex& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

  std::span<Complex> entries() { return entries_; }
  std::span<const Complex> entries() const { return entries_; }
  Complex* data() { return entries_.data(); }
  const Complex* data() const { return entries_.data(); }

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  ComplexMatrix conj() const;

  Complex trace() const;
  double frobenius_norm2() const;
  double max_abs() const;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(Complex scale);

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
  friend bool operator==(const ComplexMatrix& a, const ComplexMatrix& b) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> entries_;
};

/// max|a - b| over entries; throws on shape mismatch.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// max|M - M^dagger| < rel_tol * max|M| (or absolute when M is zero).
bool is_hermitian(const ComplexMatrix& m, double rel_tol = 1e-12);

bool is_unitary(const ComplexMatrix& m, double tol = 1e-10);

/// Ordered per-subsystem dimensions of a tensor-product space.
class SubsystemShape {
 public:
  SubsystemShape() = default;
  explicit SubsystemShape(std::vector<std::size_t> local_dims);
  SubsystemShape(std::initializer_list<std::size_t> local_dims)
      : SubsystemShape(std::vector<std::size_t>(local_dims)) {}

  static SubsystemShape uniform(std::size_t count, std::size_t local_dim);

  std::size_t count() const { return dims_.size(); }
  std::size_t total() const;
  std::size_t operator[](std::size_t k) const { return dims_[k]; }
  const std::vector<std::size_t>& dims() const { return dims_; }

  /// Shape after moving factor k to position perm[k].
  SubsystemShape permuted(std::span<const std::size_t> perm) const;
  /// Shape with every local dimension squared (operator-space shape).
  SubsystemShape squared() const;
  SubsystemShape concat(const SubsystemShape& other) const;

  friend bool operator==(const SubsystemShape&, const SubsystemShape&) = default;

 private:
  std::vector<std::size_t> dims_;
};

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// For every flat index of the permuted space, the flat index it came from.
/// Factor k of `shape` is moved to position perm[k].
std::vector<std::size_t> permutation_index_map(const SubsystemShape& shape,
                                               std::span<const std::size_t> perm);

/// P m P^dagger where P reorders tensor factors (factor k moves to position
/// perm[k]). Column vectors are permuted on rows only.
ComplexMatrix permute_subsystems(const ComplexMatrix& m, const SubsystemShape& shape,
                                 std::span<const std::size_t> perm);

std::vector<std::size_t> inverse_permutation(std::span<const std::size_t> perm);

/// Reduced matrix on the kept subsystems (in their original order).
ComplexMatrix partial_trace(const ComplexMatrix& m, const SubsystemShape& shape,
                            std::span<const std::size_t> keep);

struct HermitianEigen {
  std::vector<double> values;  // ascending
  ComplexMatrix vectors;       // columns
};

/// Tridiagonalization + implicit QR on the Hermitian part of m.
HermitianEigen hermitian_eigen(const ComplexMatrix& m);

/// Sum of singular values. Hermitian input takes the eigenvalue path.
double trace_norm(const ComplexMatrix& m);

/// One classical RK4 step of d psi/dt = -i h psi as a matrix:
/// I + x + x^2/2 + x^3/6 + x^4/24 with x = -i h dt.
ComplexMatrix rk4_step_matrix(const ComplexMatrix& h, double dt);

/// One classical RK4 step applied to psi.
ComplexMatrix rk4_step(const ComplexMatrix& h, const ComplexMatrix& psi, double dt);

/// Integrates d psi/dt = -i h psi over `duration` with ceil(duration/max_step)
/// equal RK4 steps. psi may carry ancilla columns.
ComplexMatrix propagate_segment(const ComplexMatrix& h, const ComplexMatrix& psi,
                                double duration, double max_step);

/// exp(-i h t) for Hermitian h via its eigendecomposition.
ComplexMatrix unitary_propagator(const ComplexMatrix& h, double t);

/// m^n by repeated squaring.
ComplexMatrix matrix_power(const ComplexMatrix& m, std::size_t n);

}  // namespace chicat

#endif  // CHICAT_TENSOR_H_
